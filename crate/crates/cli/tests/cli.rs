use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn arcgraph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcgraph"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_then_delta() {
    let dir = tempfile::tempdir().unwrap();
    let o = arcgraph(dir.path(), &["gen", "--kind", "tt", "--n", "3", "--out", "g.json"]);
    assert!(o.status.success());
    let o = arcgraph(dir.path(), &["delta", "--k", "1", "g.json"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        r#"{"arcs":[[0,2]],"labels":[[0,1],[0,2],[1,2]],"n":3}"#
    );
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["complete", "cycle", "tt", "cyclic-triangle", "directed-cycle", "path", "empty"] {
        let o = arcgraph(dir.path(), &["gen", "--kind", kind, "--n", "3", "--out", "a.json"]);
        assert!(o.status.success(), "{kind}");
        // hom to itself reads the file; delta --k 0 writes it back unchanged
        let o = arcgraph(dir.path(), &["delta", "--k", "0", "a.json", "--out", "b.json"]);
        assert!(o.status.success());
        assert_eq!(
            fs::read(dir.path().join("a.json")).unwrap(),
            fs::read(dir.path().join("b.json")).unwrap(),
            "{kind}"
        );
    }
}

#[test]
fn bnk_uses_and_fills_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = arcgraph(dir.path(), &["bnk", "--n", "3", "--k", "2"]);
    assert_eq!(stdout(&o).trim(), "4");
    let table = fs::read_to_string(dir.path().join("btable.json")).unwrap();
    assert_eq!(table, r#"{"entries":[{"b":4,"k":2,"n":3}]}"#);

    // a wrong cached value is caught when recomputing
    fs::write(
        dir.path().join("bad.json"),
        r#"{"entries":[{"b":5,"k":2,"n":3}]}"#,
    )
    .unwrap();
    let o = arcgraph(dir.path(), &["bnk", "--n", "3", "--k", "2", "--table", "bad.json"]);
    assert_eq!(stdout(&o).trim(), "5", "cache is trusted by default");
    let o = arcgraph(
        dir.path(),
        &["bnk", "--n", "3", "--k", "2", "--table", "bad.json", "--no-cache"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dedekind_prints_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = arcgraph(dir.path(), &["dedekind", "--n", "3"]);
    assert_eq!(stdout(&o).trim(), "20");
}

#[test]
fn hasse_diagram_of_free_distributive_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let o = arcgraph(dir.path(), &["export-dot", "--n", "3", "--k", "2"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (20, 32));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(arcgraph(dir.path(), &["nonsense"]).status.code(), Some(2));
    assert_eq!(arcgraph(dir.path(), &["chi", "missing.json"]).status.code(), Some(2));
    let o = arcgraph(dir.path(), &["dedekind", "--n", "4", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());

    arcgraph(dir.path(), &["gen", "--kind", "complete-with-loops", "--n", "2", "--out", "l.json"]);
    assert_eq!(arcgraph(dir.path(), &["chi", "l.json"]).status.code(), Some(2));
}

#[test]
fn verify_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = arcgraph(
        dir.path(),
        &["verify", "--corpus", "small", "--k", "1", "--k", "3", "--out", "r.jsonl"],
    );
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("instance"));
    let lines = fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    // three instances: two iterate counts each plus the arc bounds
    assert_eq!(lines.lines().count(), 9);
    assert!(lines.lines().all(|l| l.contains(r#""agreement":true"#)));
}

#[test]
fn verify_reads_corpus_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"[{"name":"edge","graph":{"arcs":[[0,1],[1,0]],"n":2}}]"#,
    )
    .unwrap();
    let o = arcgraph(dir.path(), &["verify", "--corpus", "c.json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("edge"));
}

#[test]
fn max_tt_values() {
    let dir = tempfile::tempdir().unwrap();
    for (n, k, want) in [("1", "2", "3"), ("2", "1", "4"), ("2", "2", "6")] {
        let o = arcgraph(dir.path(), &["max-tt", "--n", n, "--k", k]);
        assert_eq!(stdout(&o).trim(), want);
    }
    let o = arcgraph(dir.path(), &["max-tt", "--n", "3", "--k", "2", "--cap", "21"]);
    assert_eq!(o.status.code(), Some(2), "needs --extended");
}

#[test]
fn adjoint_commands() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("k0.json"), r#"{"arcs":[],"n":0}"#).unwrap();
    let o = arcgraph(dir.path(), &["deltar", "--k", "2", "k0.json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with(r#"{"arcs":[["#) && text.trim_end().ends_with(r#""n":3}"#));

    fs::write(dir.path().join("k1.json"), r#"{"arcs":[],"n":1}"#).unwrap();
    let o = arcgraph(dir.path(), &["core", "k1.json"]);
    assert_eq!(
        stdout(&o).trim(),
        r#"{"arcs":[[0,1]],"labels":[{"X":[],"Y":[0]},{"X":[0],"Y":[]}],"n":2}"#
    );
}

#[test]
fn hom_prints_null_when_none() {
    let dir = tempfile::tempdir().unwrap();
    arcgraph(dir.path(), &["gen", "--kind", "cycle", "--n", "5", "--out", "c5.json"]);
    arcgraph(dir.path(), &["gen", "--kind", "complete", "--n", "2", "--out", "k2.json"]);
    let o = arcgraph(dir.path(), &["hom", "c5.json", "k2.json"]);
    assert_eq!(stdout(&o).trim(), "null");
}
