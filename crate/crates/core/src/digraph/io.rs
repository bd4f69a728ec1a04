use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Digraph, Label};
use crate::error::{Error, Result};

/// Wire form of a digraph. Field order is alphabetical so the serialized
/// text is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub arcs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Label>>,
    pub n: usize,
}

impl From<&Digraph> for DigraphJson {
    fn from(g: &Digraph) -> Self {
        DigraphJson {
            arcs: g.arcs().map(|(u, v)| [u, v]).collect(),
            labels: g.labels.clone(),
            n: g.n,
        }
    }
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Self> {
        let g = Digraph::from_arcs(j.n, j.arcs.into_iter().map(|[u, v]| (u, v)))?;
        match j.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

impl Digraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DigraphJson::from(self)).expect("digraph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: DigraphJson = serde_json::from_str(text)?;
        Digraph::try_from(j)
    }

    /// `n <count>` header followed by one `u v` line per arc.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// Parses the edge-list format. Blank lines and `#` comments are skipped.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", count] => count
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?,
            _ => return Err(Error::Parse(format!("bad header {header:?}"))),
        };
        let mut arcs = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [u, v] = parts[..] else {
                return Err(Error::Parse(format!("bad arc line {line:?}")));
            };
            let parse = |x: &str| {
                x.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad vertex {x:?}: {e}")))
            };
            arcs.push((parse(u)?, parse(v)?));
        }
        Digraph::from_arcs(n, arcs)
    }

    /// Graphviz source. With `merge_symmetric`, each opposite pair of arcs is
    /// drawn once without arrowheads.
    pub fn to_dot(&self, merge_symmetric: bool) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.n {
            match self.label(v) {
                Some(l) => {
                    let _ = writeln!(s, "  {v} [label={:?}];", l.to_string());
                }
                None => {
                    let _ = writeln!(s, "  {v};");
                }
            }
        }
        for (u, v) in self.arcs() {
            if merge_symmetric && u != v && self.has_arc(v, u) {
                if u < v {
                    let _ = writeln!(s, "  {u} -> {v} [dir=none];");
                }
            } else {
                let _ = writeln!(s, "  {u} -> {v};");
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{arc_graph, generate, GraphKind};

    #[test]
    fn json_shape() {
        let g = generate(GraphKind::TransitiveTournament, 3).unwrap();
        assert_eq!(g.to_json(), r#"{"arcs":[[0,1],[0,2],[1,2]],"n":3}"#);
        let d = arc_graph(&g);
        assert_eq!(
            d.to_json(),
            r#"{"arcs":[[0,2]],"labels":[[0,1],[0,2],[1,2]],"n":3}"#
        );
        assert_eq!(Digraph::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn pair_and_name_labels_parse() {
        let text = r#"{"n":2,"arcs":[[0,1]],"labels":[{"X":[],"Y":[0]},"b"]}"#;
        let g = Digraph::from_json(text).unwrap();
        assert_eq!(
            g.label(0),
            Some(&Label::Pair {
                x: vec![],
                y: vec![0]
            })
        );
        assert_eq!(g.label(1), Some(&Label::Name("b".into())));
        assert_eq!(
            g.to_json(),
            r#"{"arcs":[[0,1]],"labels":[{"X":[],"Y":[0]},"b"],"n":2}"#
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = generate(GraphKind::UndirectedCycle, 4).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("n 4\n"));
        assert_eq!(Digraph::from_edge_list(&text).unwrap(), g);
        assert!(Digraph::from_edge_list("m 3\n").is_err());
        assert!(Digraph::from_edge_list("n 3\n0 1 2\n").is_err());
        assert!(Digraph::from_edge_list("n 2\n0 5\n").is_err());
    }

    #[test]
    fn dot_merges_symmetric_pairs() {
        let g = generate(GraphKind::Path, 3).unwrap();
        let merged = g.to_dot(true);
        assert_eq!(merged.matches("dir=none").count(), 2);
        assert_eq!(g.to_dot(false).matches("->").count(), 4);
    }
}
