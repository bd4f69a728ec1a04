//! The right adjoint of the arc-graph construction.
//!
//! `delta_right(K)` has a vertex for every pair `(X, Y)` of vertex sets of `K`
//! with all arcs `X -> Y` present (either set may be empty), and an arc
//! `(X, Y) -> (Z, W)` whenever `Y` meets `Z`. A homomorphism
//! `arc_graph(G) -> K` exists exactly when one `G -> delta_right(K)` does.

use std::collections::HashMap;

use crate::digraph::{arc_graph, find_homomorphism, iterated_arc_graph, Digraph, Label, VertexMap};
use crate::error::{Error, Result};
use crate::poset::{ideal_lattice, nondomination, Poset};
use crate::Budget;

/// Largest base digraph whose subsets fit a `u64` mask.
const MAX_BASE: usize = 64;

/// A vertex of `delta_right(K)`: every `x in X` has an arc to every `y in Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetPair {
    pub x: u64,
    pub y: u64,
}

impl SubsetPair {
    pub fn x_elements(&self) -> Vec<usize> {
        elements(self.x)
    }

    pub fn y_elements(&self) -> Vec<usize> {
        elements(self.y)
    }

    pub fn label(&self) -> Label {
        Label::Pair {
            x: self.x_elements(),
            y: self.y_elements(),
        }
    }

    /// The complete-bipartite condition against `k`.
    pub fn is_valid_for(&self, k: &Digraph) -> bool {
        elements(self.x)
            .into_iter()
            .all(|a| elements(self.y).into_iter().all(|b| k.has_arc(a, b)))
    }
}

fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Out- and in-neighbourhoods of `k` as masks.
struct Neighbourhoods {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl Neighbourhoods {
    fn new(k: &Digraph) -> Self {
        let n = k.n();
        let mut out = vec![0u64; n];
        let mut inn = vec![0u64; n];
        for (u, v) in k.arcs() {
            out[u] |= 1 << v;
            inn[v] |= 1 << u;
        }
        Neighbourhoods { n, out, inn }
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Vertices with an arc from every member of `x`.
    fn common_out(&self, x: u64) -> u64 {
        let mut acc = self.all();
        let mut rest = x;
        while rest != 0 {
            acc &= self.out[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        acc
    }

    /// Vertices with an arc to every member of `y`.
    fn common_in(&self, y: u64) -> u64 {
        let mut acc = self.all();
        let mut rest = y;
        while rest != 0 {
            acc &= self.inn[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        acc
    }
}

fn pair_order(a: &SubsetPair, b: &SubsetPair) -> std::cmp::Ordering {
    let size = |p: &SubsetPair| p.x.count_ones() + p.y.count_ones();
    size(a)
        .cmp(&size(b))
        .then_with(|| a.x_elements().cmp(&b.x_elements()))
        .then_with(|| a.y_elements().cmp(&b.y_elements()))
}

fn check_pair_budget(n: usize, budget: &Budget) -> Result<()> {
    let candidates = if 2 * n >= usize::BITS as usize {
        usize::MAX
    } else {
        1usize << (2 * n)
    };
    if n > MAX_BASE || candidates > budget.pairs {
        return Err(Error::SizeBudgetExceeded {
            what: "right adjoint candidate pairs",
            reached: candidates,
            limit: budget.pairs,
        });
    }
    Ok(())
}

/// Every valid subset pair of `k`, in canonical order.
pub fn subset_pairs(k: &Digraph, budget: &Budget) -> Result<Vec<SubsetPair>> {
    check_pair_budget(k.n(), budget)?;
    let nb = Neighbourhoods::new(k);
    let mut pairs = Vec::new();
    for x in 0..(1u64 << k.n()) {
        let allowed = nb.common_out(x);
        // every subset of the common out-neighbourhood
        let mut y = allowed;
        loop {
            pairs.push(SubsetPair { x, y });
            if y == 0 {
                break;
            }
            y = (y - 1) & allowed;
        }
    }
    pairs.sort_by(pair_order);
    Ok(pairs)
}

/// Digraph on `pairs` with an arc `(X,Y) -> (Z,W)` iff `Y ∩ Z ≠ ∅`.
fn pair_digraph(pairs: &[SubsetPair]) -> Digraph {
    // group targets by their first coordinate
    let mut by_x: HashMap<u64, Vec<usize>> = HashMap::new();
    for (j, p) in pairs.iter().enumerate() {
        by_x.entry(p.x).or_default().push(j);
    }
    let groups: Vec<(u64, Vec<usize>)> = by_x.into_iter().collect();
    let out = pairs
        .iter()
        .map(|p| {
            let mut row: Vec<usize> = groups
                .iter()
                .filter(|(z, _)| z & p.y != 0)
                .flat_map(|(_, js)| js.iter().copied())
                .collect();
            row.sort_unstable();
            row
        })
        .collect();
    let labels = pairs.iter().map(SubsetPair::label).collect();
    Digraph::from_sorted_out(out).with_labels_unchecked(labels)
}

pub fn delta_right(k: &Digraph, budget: &Budget) -> Result<Digraph> {
    Ok(pair_digraph(&subset_pairs(k, budget)?))
}

/// Applies `delta_right` `times` times.
pub fn iterated_delta_right(k: &Digraph, times: usize, budget: &Budget) -> Result<Digraph> {
    let mut g = k.clone();
    for _ in 0..times {
        g = delta_right(&g, budget)?;
    }
    Ok(g)
}

/// The tight part of `delta_right(K)` and a retraction onto it.
#[derive(Clone, Debug)]
pub struct TightCore {
    /// `delta_right(K)` itself.
    pub full: Digraph,
    pub pairs: Vec<SubsetPair>,
    /// Subdigraph induced by the tight pairs, labelled like `full`.
    pub core: Digraph,
    /// Core vertex `i` is vertex `embedding[i]` of `full`.
    pub embedding: Vec<usize>,
    /// `full -> core`, validated as a homomorphism fixing the core.
    pub retraction: VertexMap,
}

/// Restricts `delta_right(K)` to pairs with `Y` the common out-neighbourhood
/// of `X` and `X` the common in-neighbourhood of `Y`, and retracts onto them
/// by Galois closure: `X' = in(Y)`, then `Y' = out(X')`.
pub fn tight_core(k: &Digraph, budget: &Budget) -> Result<TightCore> {
    let pairs = subset_pairs(k, budget)?;
    let full = pair_digraph(&pairs);
    let nb = Neighbourhoods::new(k);

    let embedding: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.y == nb.common_out(p.x) && p.x == nb.common_in(p.y))
        .map(|(i, _)| i)
        .collect();
    let core = full.induced(&embedding);
    let core_index: HashMap<SubsetPair, usize> = embedding
        .iter()
        .enumerate()
        .map(|(ci, &fi)| (pairs[fi], ci))
        .collect();

    let mut assignment = Vec::with_capacity(pairs.len());
    for p in &pairs {
        let x = nb.common_in(p.y);
        let y = nb.common_out(x);
        let closed = SubsetPair { x, y };
        let &ci = core_index.get(&closed).ok_or_else(|| {
            Error::RetractionInvalid(format!("closure {:?} of {:?} is not tight", closed, p))
        })?;
        assignment.push(ci);
    }
    let retraction = VertexMap::new(assignment);
    if !retraction.is_homomorphism(&full, &core) {
        return Err(Error::RetractionInvalid("not a homomorphism".into()));
    }
    if let Some((ci, _)) = embedding
        .iter()
        .enumerate()
        .find(|&(ci, &fi)| retraction.image(fi) != ci)
    {
        return Err(Error::RetractionInvalid(format!("core vertex {ci} moved")));
    }
    Ok(TightCore {
        full,
        pairs,
        core,
        embedding,
        retraction,
    })
}

/// The two canonical maps around the adjoint pair, each validated.
#[derive(Clone, Debug)]
pub struct CanonicalHoms {
    /// `delta_right(arc_graph(g))`.
    pub right_of_arc: Digraph,
    /// `g -> delta_right(arc_graph(g))`, `u ↦ (arcs into u, arcs out of u)`.
    pub unit: VertexMap,
    /// `arc_graph(delta_right(g))`.
    pub arc_of_right: Digraph,
    /// `arc_graph(delta_right(g)) -> g`, `((X,Y),(Z,W)) ↦ min(Y ∩ Z)`.
    pub counit: VertexMap,
}

pub fn canonical_homs(g: &Digraph, budget: &Budget) -> Result<CanonicalHoms> {
    let dg = arc_graph(g);
    let pairs = subset_pairs(&dg, budget)?;
    let right_of_arc = pair_digraph(&pairs);
    let index: HashMap<SubsetPair, usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    // arc graph vertices are the arcs of g in lexicographic order
    let arc_ids: Vec<(usize, usize)> = g.arcs().collect();
    let mut into = vec![0u64; g.n()];
    let mut out_of = vec![0u64; g.n()];
    for (a, &(u, v)) in arc_ids.iter().enumerate() {
        out_of[u] |= 1 << a;
        into[v] |= 1 << a;
    }
    let unit = (0..g.n())
        .map(|u| {
            index
                .get(&SubsetPair {
                    x: into[u],
                    y: out_of[u],
                })
                .copied()
                .ok_or_else(|| Error::RetractionInvalid(format!("unit image of {u} is not a vertex")))
        })
        .collect::<Result<Vec<_>>>()
        .map(VertexMap::new)?;
    if !unit.is_homomorphism(g, &right_of_arc) {
        return Err(Error::RetractionInvalid("unit is not a homomorphism".into()));
    }

    let rg_pairs = subset_pairs(g, budget)?;
    let rg = pair_digraph(&rg_pairs);
    let arc_of_right = arc_graph(&rg);
    let counit = rg
        .arcs()
        .map(|(a, b)| {
            let meet = rg_pairs[a].y & rg_pairs[b].x;
            debug_assert!(meet != 0);
            meet.trailing_zeros() as usize
        })
        .collect::<Vec<_>>();
    let counit = VertexMap::new(counit);
    if !counit.is_homomorphism(&arc_of_right, g) {
        return Err(Error::RetractionInvalid("counit is not a homomorphism".into()));
    }
    Ok(CanonicalHoms {
        right_of_arc,
        unit,
        arc_of_right,
        counit,
    })
}

/// Both sides of the adjunction, decided independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjunctionCheck {
    /// A homomorphism `arc_graph^i(g) -> k` exists.
    pub from_arc_graph: bool,
    /// A homomorphism `g -> delta_right^i(k)` exists.
    pub into_right_adjoint: bool,
}

impl AdjunctionCheck {
    pub fn holds(&self) -> bool {
        self.from_arc_graph == self.into_right_adjoint
    }
}

pub fn check_adjunction(g: &Digraph, k: &Digraph, budget: &Budget) -> Result<AdjunctionCheck> {
    check_iterated_adjunction(g, k, 1, budget)
}

/// `times`-fold version: `arc_graph^times(g) -> k` against `g -> delta_right^times(k)`.
pub fn check_iterated_adjunction(
    g: &Digraph,
    k: &Digraph,
    times: usize,
    budget: &Budget,
) -> Result<AdjunctionCheck> {
    let left = iterated_arc_graph(g, times);
    let right = iterated_delta_right(k, times, budget)?;
    Ok(AdjunctionCheck {
        from_arc_graph: find_homomorphism(&left, k).is_some(),
        into_right_adjoint: find_homomorphism(g, &right).is_some(),
    })
}

/// Whether the tight core of `delta_right(N(p))` is `N(I(p))` under
/// `(X, complement of X) ↔ X`.
pub fn core_equals_nondomination(p: &Poset, budget: &Budget) -> Result<bool> {
    let n = nondomination(p)?;
    let tc = tight_core(&n, budget)?;
    let lattice = ideal_lattice(p, budget.elements)?;
    let target = nondomination(&lattice)?;
    if tc.core.n() != target.n() {
        return Ok(false);
    }
    let all = if p.m() == 64 {
        u64::MAX
    } else {
        (1u64 << p.m()) - 1
    };
    let labels = lattice.labels().expect("ideal lattices carry labels");
    let ideal_index: HashMap<u64, usize> = (0..labels.len())
        .map(|i| (labels.get(i).first().copied().unwrap_or(0), i))
        .collect();

    let mut image = Vec::with_capacity(tc.core.n());
    for &fi in &tc.embedding {
        let pair = tc.pairs[fi];
        if pair.y != all & !pair.x {
            return Ok(false);
        }
        match ideal_index.get(&pair.x) {
            Some(&i) => image.push(i),
            None => return Ok(false),
        }
    }
    let phi = VertexMap::new(image);
    let mut hit = vec![false; target.n()];
    for &i in &phi.assignment {
        if std::mem::replace(&mut hit[i], true) {
            return Ok(false);
        }
    }
    // a bijection that preserves arcs between graphs of equal size is an isomorphism
    Ok(tc.core.arc_count() == target.arc_count() && phi.is_homomorphism(&tc.core, &target))
}
