//! Direct computation against closed formulas on concrete graphs.
//!
//! Two checks run over a corpus. For a symmetric loop-free graph `G` the
//! chromatic number of `iterated_arc_graph(G, k)` is solved exactly and
//! compared with the smallest `n` such that `χ(G) ≤ b(n, k)`. For any
//! loop-free digraph the arc graph bounds `χ(G) ≤ 2^χ(δ(G))` and
//! `χ(δ(G)) ≤ n` whenever `χ(G) ≤ C(n, ⌊n/2⌋)` are checked.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coloring::{chromatic_number, k_colorable};
use crate::digraph::{arc_graph, generate, iterated_arc_graph, walk_count, Digraph, DigraphJson, GraphKind};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::poset::BTable;
use crate::Budget;

/// A named graph in a corpus.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: Digraph,
}

impl Instance {
    pub fn new(name: impl Into<String>, graph: Digraph) -> Self {
        Instance {
            name: name.into(),
            graph,
        }
    }

    pub fn generated(kind: GraphKind, n: usize) -> Result<Self> {
        Ok(Instance::new(format!("{}-{}", kind.name(), n), generate(kind, n)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    IteratedChromatic,
    ArcBounds,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::IteratedChromatic => "iterated-chromatic",
            CheckKind::ArcBounds => "arc-bounds",
        })
    }
}

/// Outcome of one check on one instance.
///
/// For iterated-chromatic checks `direct` is `χ(δ^k(G))` and `formula` the
/// value predicted from the width table; they agree iff equal. For arc-bounds
/// checks `direct` is `χ(δ(G))`, `formula` the smallest `n` with
/// `χ(G) ≤ C(n, ⌊n/2⌋)`, and agreement means both bounds hold.
///
/// Fields are in alphabetical order so each JSON line is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub agreement: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
    pub check: CheckKind,
    pub chi: Option<usize>,
    pub direct: Option<usize>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub formula: Option<usize>,
    pub instance: String,
    pub k: usize,
}

impl VerificationReport {
    fn failed(instance: &str, check: CheckKind, k: usize, err: &Error, started: Instant) -> Self {
        VerificationReport {
            instance: instance.to_string(),
            check,
            k,
            chi: None,
            direct: None,
            formula: None,
            agreement: false,
            elapsed_ms: started.elapsed().as_millis() as u64,
            error: Some(err.to_string()),
            budget_exceeded: err.is_budget(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Smallest `n` with `chi ≤ b(n, k)`, reading widths from `table`.
pub fn chi_via_formula(chi: usize, k: usize, table: &BTable, budget: &Budget) -> Result<usize> {
    assert!(k >= 1, "the formula needs k >= 1");
    if chi == 0 {
        return Ok(0);
    }
    // b(n, k) >= n for n >= 1, so this stops by n = chi
    for n in 0..=chi {
        let b = table.b(n, k, budget).map_err(|e| {
            if e.is_budget() {
                Error::TableIncomplete { n, k }
            } else {
                e
            }
        })?;
        if chi <= b {
            return Ok(n);
        }
    }
    unreachable!("b(chi, k) >= chi")
}

/// Checks that `b(n, k) <= b(n, k + 1)` across the cached table; returns
/// every `(n, k)` where that fails.
pub fn monotonicity_violations(table: &BTable) -> Vec<(usize, usize)> {
    let entries = table.entries();
    entries
        .iter()
        .filter(|&&(n, k, b)| {
            entries
                .iter()
                .any(|&(n2, k2, b2)| n2 == n && k2 == k + 1 && b2 < b)
        })
        .map(|&(n, k, _)| (n, k))
        .collect()
}

fn check_vertices(count: usize, budget: &Budget) -> Result<()> {
    if count > budget.graph_vertices {
        return Err(Error::SizeBudgetExceeded {
            what: "graph to color",
            reached: count,
            limit: budget.graph_vertices,
        });
    }
    Ok(())
}

/// Exact `χ(δ^k(G))` against the width formula for symmetric loop-free `G`.
pub fn verify_iterated_chromatic(
    inst: &Instance,
    k: usize,
    table: &BTable,
    budget: &Budget,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let g = &inst.graph;
    if let Some(v) = g.first_loop() {
        return Err(Error::LoopPresent(v));
    }
    if let Some((u, v)) = g.asymmetric_arc() {
        return Err(Error::NotSymmetric(u, v));
    }
    check_vertices(walk_count(g, k + 1), budget)?;
    let chi = chromatic_number(g)?;
    let formula = chi_via_formula(chi, k, table, budget)?;
    let direct = chromatic_number(&iterated_arc_graph(g, k))?;
    Ok(VerificationReport {
        instance: inst.name.clone(),
        check: CheckKind::IteratedChromatic,
        k,
        chi: Some(chi),
        direct: Some(direct),
        formula: Some(formula),
        agreement: direct == formula,
        elapsed_ms: started.elapsed().as_millis() as u64,
        error: None,
        budget_exceeded: false,
    })
}

fn central_binomial(n: usize) -> usize {
    let r = n / 2;
    (0..r).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Smallest `n` with `chi ≤ C(n, ⌊n/2⌋)`.
pub fn sperner_bound(chi: usize) -> usize {
    (0..).find(|&n| chi <= central_binomial(n)).expect("binomials grow")
}

/// The two arc graph bounds for a loop-free digraph.
pub fn verify_arc_bounds(inst: &Instance, budget: &Budget) -> Result<VerificationReport> {
    let started = Instant::now();
    let g = &inst.graph;
    if let Some(v) = g.first_loop() {
        return Err(Error::LoopPresent(v));
    }
    check_vertices(g.arc_count(), budget)?;
    let chi = chromatic_number(g)?;
    let chi_arc = chromatic_number(&arc_graph(g))?;
    let bound = sperner_bound(chi);
    let lower_ok = (chi_arc as u32) >= usize::BITS || chi <= 1usize << chi_arc;
    // chi <= C(n, n/2) holds for every n >= bound, so the smallest is enough
    let upper_ok = chi_arc <= bound;
    Ok(VerificationReport {
        instance: inst.name.clone(),
        check: CheckKind::ArcBounds,
        k: 1,
        chi: Some(chi),
        direct: Some(chi_arc),
        formula: Some(bound),
        agreement: lower_ok && upper_ok,
        elapsed_ms: started.elapsed().as_millis() as u64,
        error: None,
        budget_exceeded: false,
    })
}

/// Largest `m ≤ m_cap` such that `δ^k` of the transitive tournament on `m`
/// vertices is `n`-colorable.
pub fn max_tt(n: usize, k: usize, m_cap: usize, budget: &Budget) -> Result<usize> {
    // TT_m sits inside TT_{m+1}, so colorability fails from the first m on
    let mut best = 0;
    for m in 1..=m_cap {
        let tt = generate(GraphKind::TransitiveTournament, m)?;
        check_vertices(walk_count(&tt, k + 1), budget)?;
        if k_colorable(&iterated_arc_graph(&tt, k), n)?.is_none() {
            break;
        }
        best = m;
    }
    Ok(best)
}

/// Runs every applicable check on every instance, in corpus order.
///
/// Symmetric loop-free instances get the iterated check for each `k` (skipped
/// when `χ(G) ≤ 1`); loop-free instances get the arc bounds once. Errors are
/// recorded in the reports.
pub fn run_corpus(
    corpus: &[Instance],
    k_values: &[usize],
    table: &BTable,
    budget: &Budget,
) -> Vec<VerificationReport> {
    run_corpus_with(corpus, k_values, table, budget, Exec::default())
}

pub fn run_corpus_with(
    corpus: &[Instance],
    k_values: &[usize],
    table: &BTable,
    budget: &Budget,
    exec: Exec,
) -> Vec<VerificationReport> {
    let per_instance = par::map(exec, corpus, |inst| {
        let mut out = Vec::new();
        let g = &inst.graph;
        if g.is_symmetric() && !g.has_loops() {
            let skip = chromatic_number(g).map(|c| c <= 1).unwrap_or(false);
            if !skip {
                for &k in k_values {
                    let started = Instant::now();
                    out.push(
                        verify_iterated_chromatic(inst, k, table, budget).unwrap_or_else(|e| {
                            VerificationReport::failed(&inst.name, CheckKind::IteratedChromatic, k, &e, started)
                        }),
                    );
                }
            }
        }
        if !g.has_loops() {
            let started = Instant::now();
            out.push(verify_arc_bounds(inst, budget).unwrap_or_else(|e| {
                VerificationReport::failed(&inst.name, CheckKind::ArcBounds, 1, &e, started)
            }));
        }
        out
    });
    per_instance.into_iter().flatten().collect()
}

/// Complete graphs 2..=6 and odd cycles 5, 7, 9.
pub fn standard_corpus() -> Vec<Instance> {
    let mut corpus: Vec<Instance> = (2..=6)
        .map(|n| Instance::generated(GraphKind::Complete, n).unwrap())
        .collect();
    corpus.extend([5, 7, 9].map(|n| Instance::generated(GraphKind::UndirectedCycle, n).unwrap()));
    corpus
}

/// The instances small enough for `k = 3`.
pub fn small_corpus() -> Vec<Instance> {
    vec![
        Instance::generated(GraphKind::Complete, 2).unwrap(),
        Instance::generated(GraphKind::Complete, 3).unwrap(),
        Instance::generated(GraphKind::UndirectedCycle, 5).unwrap(),
    ]
}

/// The standard corpus plus a few directed graphs for the arc bounds.
pub fn default_corpus() -> Vec<Instance> {
    let mut corpus = standard_corpus();
    corpus.extend(
        [
            (GraphKind::TransitiveTournament, 3),
            (GraphKind::TransitiveTournament, 5),
            (GraphKind::CyclicTriangle, 3),
            (GraphKind::DirectedCycle, 4),
            (GraphKind::DirectedCycle, 5),
            (GraphKind::Path, 4),
        ]
        .map(|(kind, n)| Instance::generated(kind, n).unwrap()),
    );
    corpus
}

/// A corpus by name (`default`, `standard`, `small`).
pub fn named_corpus(name: &str) -> Option<Vec<Instance>> {
    match name {
        "default" => Some(default_corpus()),
        "standard" => Some(standard_corpus()),
        "small" => Some(small_corpus()),
        _ => None,
    }
}

#[derive(Serialize, Deserialize)]
struct CorpusEntry {
    graph: DigraphJson,
    name: String,
}

/// Reads a corpus file: a JSON array of `{"name": ..., "graph": {...}}`.
pub fn corpus_from_json(text: &str) -> Result<Vec<Instance>> {
    let entries: Vec<CorpusEntry> = serde_json::from_str(text)?;
    entries
        .into_iter()
        .map(|e| Ok(Instance::new(e.name, Digraph::try_from(e.graph)?)))
        .collect()
}

pub fn corpus_to_json(corpus: &[Instance]) -> String {
    let entries: Vec<CorpusEntry> = corpus
        .iter()
        .map(|i| CorpusEntry {
            graph: DigraphJson::from(&i.graph),
            name: i.name.clone(),
        })
        .collect();
    serde_json::to_string(&entries).expect("corpus serializes")
}

/// Fixed-width table of reports for terminals.
pub fn render_table(reports: &[VerificationReport]) -> String {
    let show = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
    let mut out = format!(
        "{:<22} {:<19} {:>2} {:>4} {:>7} {:>8} {:>6} {:>9}\n",
        "instance", "check", "k", "chi", "direct", "formula", "agree", "ms"
    );
    for r in reports {
        out.push_str(&format!(
            "{:<22} {:<19} {:>2} {:>4} {:>7} {:>8} {:>6} {:>9}",
            r.instance,
            r.check.to_string(),
            r.k,
            show(r.chi),
            show(r.direct),
            show(r.formula),
            if r.agreement { "yes" } else { "NO" },
            r.elapsed_ms
        ));
        if let Some(e) = &r.error {
            out.push_str("  ");
            out.push_str(e);
        }
        out.push('\n');
    }
    out
}
