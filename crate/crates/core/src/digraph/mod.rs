//! Digraphs, standard generators, the arc-graph construction and its iterates.
//!
//! Loops are allowed. Adjacency is kept as sorted out-neighbor lists; the
//! solvers build bit rows from these when they need fast intersection.

mod hom;
mod io;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

pub use hom::{find_homomorphism, find_homomorphism_with_domains, find_retraction, VertexMap};
pub use io::DigraphJson;

/// Provenance of a vertex in a derived digraph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    /// A walk, an arc `[u, v]`, or the elements of a subset.
    Tuple(Vec<usize>),
    /// A vertex of a right-adjoint digraph.
    Pair {
        #[serde(rename = "X")]
        x: Vec<usize>,
        #[serde(rename = "Y")]
        y: Vec<usize>,
    },
    Name(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(v: &[usize]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            Label::Tuple(t) => write!(f, "({})", list(t)),
            Label::Pair { x, y } => write!(f, "({{{}}},{{{}}})", list(x), list(y)),
            Label::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    labels: Option<Vec<Label>>,
}

impl Digraph {
    /// `n` vertices, no arcs.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Rejects out-of-range endpoints and duplicate arcs.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = vec![Vec::new(); n];
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::InvalidDigraph(format!(
                    "arc ({u},{v}) out of range for {n} vertices"
                )));
            }
            out[u].push(v);
        }
        for (u, row) in out.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidDigraph(format!(
                    "duplicate arc ({u},{})",
                    w[0]
                )));
            }
        }
        Ok(Digraph {
            n,
            out,
            labels: None,
        })
    }

    /// Builds from adjacency lists that are already sorted and duplicate-free.
    pub(crate) fn from_sorted_out(out: Vec<Vec<usize>>) -> Self {
        debug_assert!(out.iter().all(|r| r.windows(2).all(|w| w[0] < w[1])));
        Digraph {
            n: out.len(),
            out,
            labels: None,
        }
    }

    /// Attaches provenance labels; they must be one per vertex and pairwise distinct.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidDigraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidDigraph(format!("duplicate label {l}")));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub(crate) fn with_labels_unchecked(mut self, labels: Vec<Label>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&Label> {
        self.labels.as_ref().map(|l| &l[v])
    }

    #[inline]
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |&v| (u, v)))
    }

    /// In-neighbor lists, each sorted.
    pub fn in_adjacency(&self) -> Vec<Vec<usize>> {
        let mut inn = vec![Vec::new(); self.n];
        for (u, v) in self.arcs() {
            inn[v].push(u);
        }
        inn
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (_, v) in self.arcs() {
            d[v] += 1;
        }
        d
    }

    pub fn first_loop(&self) -> Option<usize> {
        (0..self.n).find(|&u| self.has_arc(u, u))
    }

    pub fn has_loops(&self) -> bool {
        self.first_loop().is_some()
    }

    /// First arc whose reverse is missing.
    pub fn asymmetric_arc(&self) -> Option<(usize, usize)> {
        self.arcs().find(|&(u, v)| !self.has_arc(v, u))
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetric_arc().is_none()
    }

    pub fn out_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::square(self.n);
        for (u, v) in self.arcs() {
            m.set(u, v);
        }
        m
    }

    pub fn in_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::square(self.n);
        for (u, v) in self.arcs() {
            m.set(v, u);
        }
        m
    }

    /// Same vertices, every arc reversed. Labels are kept.
    pub fn reversed(&self) -> Digraph {
        let g = Digraph::from_sorted_out(self.in_adjacency());
        Digraph {
            labels: self.labels.clone(),
            ..g
        }
    }

    /// Adds the reverse of every arc.
    pub fn symmetric_closure(&self) -> Digraph {
        let inn = self.in_adjacency();
        let out = self
            .out
            .iter()
            .zip(inn)
            .map(|(o, i)| {
                let mut r: Vec<usize> = o.iter().chain(&i).copied().collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        Digraph {
            labels: self.labels.clone(),
            ..Digraph::from_sorted_out(out)
        }
    }

    /// Subdigraph induced by `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let out = vertices
            .iter()
            .map(|&v| {
                let mut r: Vec<usize> = self.out[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                r.sort_unstable();
                r
            })
            .collect();
        let g = Digraph::from_sorted_out(out);
        match &self.labels {
            Some(l) => g.with_labels_unchecked(vertices.iter().map(|&v| l[v].clone()).collect()),
            None => g,
        }
    }
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    /// Symmetric complete graph.
    Complete,
    /// All `n^2` arcs including loops; its iterated arc graphs are de Bruijn graphs.
    CompleteWithLoops,
    TransitiveTournament,
    CyclicTriangle,
    DirectedCycle,
    UndirectedCycle,
    /// Symmetric path.
    Path,
    Empty,
}

impl GraphKind {
    pub const ALL: [GraphKind; 8] = [
        GraphKind::Complete,
        GraphKind::CompleteWithLoops,
        GraphKind::TransitiveTournament,
        GraphKind::CyclicTriangle,
        GraphKind::DirectedCycle,
        GraphKind::UndirectedCycle,
        GraphKind::Path,
        GraphKind::Empty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::CompleteWithLoops => "complete-with-loops",
            GraphKind::TransitiveTournament => "tt",
            GraphKind::CyclicTriangle => "cyclic-triangle",
            GraphKind::DirectedCycle => "directed-cycle",
            GraphKind::UndirectedCycle => "cycle",
            GraphKind::Path => "path",
            GraphKind::Empty => "empty",
        }
    }
}

impl std::str::FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('_', "-");
        GraphKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .or(match s.as_str() {
                "transitive-tournament" => Some(GraphKind::TransitiveTournament),
                "undirected-cycle" => Some(GraphKind::UndirectedCycle),
                _ => None,
            })
            .ok_or_else(|| Error::Parse(format!("unknown graph kind {s:?}")))
    }
}

pub fn generate(kind: GraphKind, n: usize) -> Result<Digraph> {
    let min = match kind {
        GraphKind::Empty => 0,
        GraphKind::CyclicTriangle | GraphKind::UndirectedCycle => 3,
        GraphKind::DirectedCycle => 2,
        _ => 1,
    };
    if n < min || (kind == GraphKind::CyclicTriangle && n != 3) {
        return Err(Error::UnsupportedSize {
            kind: kind.name(),
            n,
        });
    }
    let arcs: Vec<(usize, usize)> = match kind {
        GraphKind::Complete => (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect(),
        GraphKind::CompleteWithLoops => (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect(),
        GraphKind::TransitiveTournament => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        GraphKind::CyclicTriangle | GraphKind::DirectedCycle => {
            (0..n).map(|u| (u, (u + 1) % n)).collect()
        }
        GraphKind::UndirectedCycle => (0..n)
            .flat_map(|u| [(u, (u + 1) % n), ((u + 1) % n, u)])
            .collect(),
        GraphKind::Path => (1..n).flat_map(|u| [(u - 1, u), (u, u - 1)]).collect(),
        GraphKind::Empty => Vec::new(),
    };
    Digraph::from_arcs(n, arcs)
}

/// The arc graph: one vertex per arc `(u,v)` of `g` (labelled `[u,v]`, in
/// lexicographic order), and an arc from `(u,v)` to `(v,w)` for every pair of
/// consecutive arcs.
pub fn arc_graph(g: &Digraph) -> Digraph {
    let mut offset = Vec::with_capacity(g.n + 1);
    let mut acc = 0;
    for u in 0..g.n {
        offset.push(acc);
        acc += g.out[u].len();
    }
    offset.push(acc);

    let mut out = Vec::with_capacity(acc);
    let mut labels = Vec::with_capacity(acc);
    for (u, v) in g.arcs() {
        out.push((offset[v]..offset[v + 1]).collect());
        labels.push(Label::Tuple(vec![u, v]));
    }
    Digraph::from_sorted_out(out).with_labels_unchecked(labels)
}

/// Number of walks through `len` vertices, saturating.
pub fn walk_count(g: &Digraph, len: usize) -> usize {
    if len == 0 {
        return 1;
    }
    let mut ends = vec![1usize; g.n];
    for _ in 1..len {
        let mut next = vec![0usize; g.n];
        for (u, v) in g.arcs() {
            next[v] = next[v].saturating_add(ends[u]);
        }
        ends = next;
    }
    ends.iter().fold(0usize, |a, &b| a.saturating_add(b))
}

/// `k`-fold arc graph, built directly on walks: vertices are the walks
/// `(u_0, …, u_k)` of `g` in lexicographic order, with an arc from each walk
/// to every walk extending its last `k` vertices. `k = 0` returns `g`.
pub fn iterated_arc_graph(g: &Digraph, k: usize) -> Digraph {
    if k == 0 {
        return g.clone();
    }
    let len = k + 1;
    let mut walks: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(len);
    fn extend(g: &Digraph, len: usize, stack: &mut Vec<usize>, walks: &mut Vec<usize>) {
        if stack.len() == len {
            walks.extend_from_slice(stack);
            return;
        }
        let last = *stack.last().unwrap();
        for &v in &g.out[last] {
            stack.push(v);
            extend(g, len, stack, walks);
            stack.pop();
        }
    }
    for u in 0..g.n {
        stack.push(u);
        extend(g, len, &mut stack, &mut walks);
        stack.pop();
    }

    let count = walks.len() / len;
    // walks sharing a length-k prefix are contiguous
    let mut first_with_prefix: HashMap<&[usize], usize> = HashMap::new();
    for i in (0..count).rev() {
        first_with_prefix.insert(&walks[i * len..i * len + k], i);
    }
    let out = (0..count)
        .map(|i| {
            let w = &walks[i * len..(i + 1) * len];
            let last = w[k];
            match first_with_prefix.get(&w[1..]) {
                Some(&start) => (start..start + g.out[last].len()).collect(),
                None => Vec::new(),
            }
        })
        .collect();
    let labels = walks.chunks_exact(len).map(|w| Label::Tuple(w.to_vec())).collect();
    Digraph::from_sorted_out(out).with_labels_unchecked(labels)
}

/// Checks that `arc_graph(iterated_arc_graph(g, k-1))` is isomorphic to
/// `iterated_arc_graph(g, k)` under the natural map gluing two overlapping
/// walks into one. `budget` bounds the vertex count of the `k`-fold graph.
pub fn check_delta_iso(g: &Digraph, k: usize, budget: usize) -> Result<bool> {
    assert!(k >= 1, "check_delta_iso needs k >= 1");
    let size = walk_count(g, k + 1);
    if size > budget {
        return Err(Error::SizeBudgetExceeded {
            what: "iterated arc graph",
            reached: size,
            limit: budget,
        });
    }
    let prev = iterated_arc_graph(g, k - 1);
    let recursive = arc_graph(&prev);
    let direct = iterated_arc_graph(g, k);
    if recursive.n() != direct.n() {
        return Ok(false);
    }
    let walk_of = |v: usize| -> Vec<usize> {
        if k == 1 {
            vec![v]
        } else {
            match prev.label(v) {
                Some(Label::Tuple(t)) => t.clone(),
                _ => unreachable!("iterated arc graphs carry walk labels"),
            }
        }
    };
    let index: HashMap<&Label, usize> = direct
        .labels()
        .unwrap_or(&[])
        .iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();

    let mut image = vec![usize::MAX; recursive.n()];
    let mut hit = vec![false; direct.n()];
    for (x, slot) in image.iter_mut().enumerate() {
        let Some(Label::Tuple(pair)) = recursive.label(x) else {
            return Ok(false);
        };
        let (a, b) = (walk_of(pair[0]), walk_of(pair[1]));
        if a[1..] != b[..b.len() - 1] {
            return Ok(false);
        }
        let mut glued = a.clone();
        glued.push(*b.last().unwrap());
        let Some(&y) = index.get(&Label::Tuple(glued)) else {
            return Ok(false);
        };
        if std::mem::replace(&mut hit[y], true) {
            return Ok(false);
        }
        *slot = y;
    }
    for x in 0..recursive.n() {
        let mut mapped: Vec<usize> = recursive.out[x].iter().map(|&z| image[z]).collect();
        mapped.sort_unstable();
        if mapped != direct.out[image[x]] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Keeps the arcs whose reverse is also present; loops are kept.
pub fn symmetric_restriction(g: &Digraph) -> Digraph {
    let out = (0..g.n)
        .map(|u| {
            g.out[u]
                .iter()
                .copied()
                .filter(|&v| g.has_arc(v, u))
                .collect()
        })
        .collect();
    Digraph {
        labels: g.labels.clone(),
        ..Digraph::from_sorted_out(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcs(g: &Digraph) -> Vec<(usize, usize)> {
        g.arcs().collect()
    }

    #[test]
    fn generators() {
        let tt = generate(GraphKind::TransitiveTournament, 3).unwrap();
        assert_eq!(arcs(&tt), vec![(0, 1), (0, 2), (1, 2)]);
        let k3 = generate(GraphKind::Complete, 3).unwrap();
        assert_eq!(k3.arc_count(), 6);
        assert!(k3.is_symmetric() && !k3.has_loops());
        assert!(generate(GraphKind::CyclicTriangle, 4).is_err());
        assert!(generate(GraphKind::UndirectedCycle, 2).is_err());
        assert!(generate(GraphKind::Complete, 0).is_err());
        assert_eq!(generate(GraphKind::Empty, 0).unwrap().n(), 0);
        let p = generate(GraphKind::Path, 3).unwrap();
        assert_eq!(arcs(&p), vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
    }

    #[test]
    fn binary_de_bruijn() {
        let g = generate(GraphKind::CompleteWithLoops, 2).unwrap();
        assert_eq!(g.arc_count(), 4);
        let d = arc_graph(&g);
        assert_eq!((d.n(), d.arc_count()), (4, 8));
        // brute force over consecutive arc pairs
        let a: Vec<_> = arcs(&g);
        let expected: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i].1 == a[j].0)
            .collect();
        assert_eq!(arcs(&d), expected);
    }

    #[test]
    fn arc_graph_small_cases() {
        let tt = generate(GraphKind::TransitiveTournament, 3).unwrap();
        let d = arc_graph(&tt);
        assert_eq!(d.n(), 3);
        assert_eq!(arcs(&d), vec![(0, 2)]);
        assert_eq!(d.label(0), Some(&Label::Tuple(vec![0, 1])));
        assert_eq!(d.label(2), Some(&Label::Tuple(vec![1, 2])));

        let c = generate(GraphKind::CyclicTriangle, 3).unwrap();
        let d = arc_graph(&c);
        let labels: Vec<_> = d.labels().unwrap().to_vec();
        assert_eq!(
            labels,
            vec![
                Label::Tuple(vec![0, 1]),
                Label::Tuple(vec![1, 2]),
                Label::Tuple(vec![2, 0])
            ]
        );
        assert_eq!(arcs(&d), vec![(0, 1), (1, 2), (2, 0)]);

        assert_eq!(arc_graph(&Digraph::empty(3)).n(), 0);
    }

    #[test]
    fn iterated_small_cases() {
        let k3 = generate(GraphKind::Complete, 3).unwrap();
        assert_eq!(iterated_arc_graph(&k3, 2).n(), 12);
        assert_eq!(walk_count(&k3, 3), 12);

        let tt = generate(GraphKind::TransitiveTournament, 3).unwrap();
        let d2 = iterated_arc_graph(&tt, 2);
        assert_eq!(d2.n(), 1);
        assert_eq!(d2.arc_count(), 0);
        assert_eq!(d2.label(0), Some(&Label::Tuple(vec![0, 1, 2])));

        let c5 = generate(GraphKind::UndirectedCycle, 5).unwrap();
        assert_eq!(iterated_arc_graph(&c5, 1), arc_graph(&c5));
        assert_eq!(iterated_arc_graph(&c5, 0), c5);
    }

    #[test]
    fn delta_iso_examples() {
        let k3 = generate(GraphKind::Complete, 3).unwrap();
        assert!(check_delta_iso(&k3, 2, 1 << 20).unwrap());
        let tt4 = generate(GraphKind::TransitiveTournament, 4).unwrap();
        assert!(check_delta_iso(&tt4, 3, 1 << 20).unwrap());
        for k in 1..4 {
            assert!(check_delta_iso(&Digraph::empty(0), k, 10).unwrap());
        }
        assert!(matches!(
            check_delta_iso(&k3, 5, 10),
            Err(Error::SizeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn symmetric_restriction_examples() {
        let tt = generate(GraphKind::TransitiveTournament, 3).unwrap();
        let r = symmetric_restriction(&tt);
        assert_eq!((r.n(), r.arc_count()), (3, 0));

        let k3 = generate(GraphKind::Complete, 3).unwrap();
        assert_eq!(symmetric_restriction(&k3), k3);

        let d = arc_graph(&generate(GraphKind::Complete, 2).unwrap());
        let r = symmetric_restriction(&d);
        assert_eq!(arcs(&r), vec![(0, 1), (1, 0)]);

        let loops = generate(GraphKind::CompleteWithLoops, 1).unwrap();
        assert_eq!(symmetric_restriction(&loops).arc_count(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Digraph::from_arcs(2, [(0, 2)]).is_err());
        assert!(Digraph::from_arcs(2, [(0, 1), (0, 1)]).is_err());
        let g = Digraph::empty(2);
        assert!(g.clone().with_labels(vec![Label::Name("a".into())]).is_err());
        assert!(g
            .with_labels(vec![Label::Name("a".into()), Label::Name("a".into())])
            .is_err());
    }
}
