//! Homomorphism and retraction search.
//!
//! Backtracking over a static vertex order (descending total degree, then
//! index) with arc consistency maintained after every assignment. Domains are
//! bit rows over the target's vertices.

use serde::{Deserialize, Serialize};

use super::Digraph;
use crate::bits::{self, BitMatrix, BitSet, Ones};

/// A total map from the vertices of one digraph to those of another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMap {
    pub assignment: Vec<usize>,
}

impl VertexMap {
    pub fn new(assignment: Vec<usize>) -> Self {
        VertexMap { assignment }
    }

    pub fn identity(n: usize) -> Self {
        VertexMap::new((0..n).collect())
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Total on `source`, into `target`, and arc-preserving.
    pub fn is_homomorphism(&self, source: &Digraph, target: &Digraph) -> bool {
        self.assignment.len() == source.n()
            && self.assignment.iter().all(|&t| t < target.n())
            && source
                .arcs()
                .all(|(u, v)| target.has_arc(self.image(u), self.image(v)))
    }

    pub fn compose(&self, then: &VertexMap) -> VertexMap {
        VertexMap::new(self.assignment.iter().map(|&v| then.image(v)).collect())
    }
}

struct Search<'a> {
    g: &'a Digraph,
    g_in: Vec<Vec<usize>>,
    h_out: BitMatrix,
    h_in: BitMatrix,
    order: Vec<usize>,
}

impl Search<'_> {
    /// Shrinks `doms[x]` to values with a compatible neighbour in `doms[y]`.
    /// `x_is_tail` says whether the constraint is the arc `x -> y` or `y -> x`.
    fn revise(&self, doms: &mut BitMatrix, x: usize, y: usize, x_is_tail: bool) -> bool {
        let rows = if x_is_tail { &self.h_out } else { &self.h_in };
        let support: Vec<u64> = doms.row(y).to_vec();
        let mut changed = false;
        for (w, word) in doms.row_mut(x).iter_mut().enumerate() {
            let mut rest = *word;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let t = w * 64 + bit.trailing_zeros() as usize;
                if !bits::intersects(rows.row(t), &support) {
                    *word &= !bit;
                    changed = true;
                }
            }
        }
        changed
    }

    /// Propagates to a fixpoint starting from `changed`. False on a wipe-out.
    fn propagate(&self, doms: &mut BitMatrix, changed: Vec<usize>) -> bool {
        let n = self.g.n();
        let mut queued = vec![false; n];
        let mut queue = changed;
        for &v in &queue {
            queued[v] = true;
        }
        while let Some(y) = queue.pop() {
            queued[y] = false;
            // arcs y -> x: x is the head
            for &x in self.g.out_neighbors(y) {
                if x != y && self.revise(doms, x, y, false) {
                    if bits::popcount(doms.row(x)) == 0 {
                        return false;
                    }
                    if !queued[x] {
                        queued[x] = true;
                        queue.push(x);
                    }
                }
            }
            for &x in &self.g_in[y] {
                if x != y && self.revise(doms, x, y, true) {
                    if bits::popcount(doms.row(x)) == 0 {
                        return false;
                    }
                    if !queued[x] {
                        queued[x] = true;
                        queue.push(x);
                    }
                }
            }
        }
        true
    }

    fn solve(&self, doms: &BitMatrix, depth: usize) -> Option<BitMatrix> {
        if depth == self.order.len() {
            return Some(doms.clone());
        }
        let v = self.order[depth];
        let values: Vec<usize> = Ones::new(doms.row(v)).collect();
        if values.len() == 1 {
            return self.solve(doms, depth + 1);
        }
        for t in values {
            let mut next = doms.clone();
            let row = next.row_mut(v);
            row.iter_mut().for_each(|w| *w = 0);
            bits::set_bit(row, t);
            if self.propagate(&mut next, vec![v]) {
                if let Some(done) = self.solve(&next, depth + 1) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Searches for a homomorphism `g -> h` where each vertex `v` of `g` may only
/// map into `domains[v]`.
pub fn find_homomorphism_with_domains(
    g: &Digraph,
    h: &Digraph,
    domains: Vec<BitSet>,
) -> Option<VertexMap> {
    assert_eq!(domains.len(), g.n());
    let mut doms = BitMatrix::new(g.n(), h.n());
    for (v, d) in domains.iter().enumerate() {
        assert_eq!(d.len(), h.n());
        doms.row_mut(v).copy_from_slice(d.words());
    }
    // a loop at v forces a loop at its image
    let h_loops = BitSet::from_iter_with_len(h.n(), (0..h.n()).filter(|&t| h.has_arc(t, t)));
    for v in 0..g.n() {
        if g.has_arc(v, v) {
            let row = doms.row_mut(v);
            for (a, b) in row.iter_mut().zip(h_loops.words()) {
                *a &= b;
            }
        }
    }
    if (0..g.n()).any(|v| bits::popcount(doms.row(v)) == 0) {
        return None;
    }

    let g_in = g.in_adjacency();
    let mut order: Vec<usize> = (0..g.n()).collect();
    let deg: Vec<usize> = (0..g.n())
        .map(|v| g.out_degree(v) + g_in[v].len())
        .collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));

    let search = Search {
        g,
        g_in,
        h_out: h.out_matrix(),
        h_in: h.in_matrix(),
        order,
    };
    if !search.propagate(&mut doms, (0..g.n()).collect()) {
        return None;
    }
    let solved = search.solve(&doms, 0)?;
    let assignment = (0..g.n())
        .map(|v| bits::first_set(solved.row(v)).expect("nonempty domain"))
        .collect();
    let map = VertexMap::new(assignment);
    debug_assert!(map.is_homomorphism(g, h));
    Some(map)
}

/// Some homomorphism `g -> h`, or `None` if there is none.
pub fn find_homomorphism(g: &Digraph, h: &Digraph) -> Option<VertexMap> {
    let all = BitSet::full(h.n());
    find_homomorphism_with_domains(g, h, vec![all; g.n()])
}

/// A retraction of `g` onto the subdigraph induced by `core`: a homomorphism
/// `g -> g` with image inside `core` that fixes every core vertex.
///
/// The returned map is expressed in `g`'s vertex numbering.
pub fn find_retraction(g: &Digraph, core: &[usize]) -> Option<VertexMap> {
    let core_set = BitSet::from_iter_with_len(g.n(), core.iter().copied());
    let domains = (0..g.n())
        .map(|v| {
            if core_set.contains(v) {
                BitSet::from_iter_with_len(g.n(), [v])
            } else {
                core_set.clone()
            }
        })
        .collect();
    find_homomorphism_with_domains(g, g, domains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{arc_graph, generate, GraphKind};

    fn k(n: usize) -> Digraph {
        generate(GraphKind::Complete, n).unwrap()
    }

    #[test]
    fn odd_cycle_colourings() {
        let c5 = generate(GraphKind::UndirectedCycle, 5).unwrap();
        let phi = find_homomorphism(&c5, &k(3)).unwrap();
        assert!(phi.is_homomorphism(&c5, &k(3)));
        assert!(find_homomorphism(&c5, &k(2)).is_none());
    }

    #[test]
    fn cyclic_triangle_arc_graph() {
        let d = arc_graph(&generate(GraphKind::CyclicTriangle, 3).unwrap());
        assert!(find_homomorphism(&d, &k(2)).is_none());
        assert!(find_homomorphism(&d, &k(3)).is_some());
    }

    #[test]
    fn loops_need_loops() {
        let l = generate(GraphKind::CompleteWithLoops, 1).unwrap();
        assert!(find_homomorphism(&l, &k(3)).is_none());
        let target = generate(GraphKind::CompleteWithLoops, 2).unwrap();
        assert!(find_homomorphism(&l, &target).is_some());
        // anything maps to a looped vertex
        assert!(find_homomorphism(&k(4), &l).is_some());
    }

    #[test]
    fn empty_source_always_maps() {
        assert_eq!(
            find_homomorphism(&Digraph::empty(0), &Digraph::empty(0)),
            Some(VertexMap::new(vec![]))
        );
        assert!(find_homomorphism(&Digraph::empty(1), &Digraph::empty(0)).is_none());
    }

    #[test]
    fn retraction_identity_on_full_core() {
        let c5 = generate(GraphKind::UndirectedCycle, 5).unwrap();
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(find_retraction(&c5, &all), Some(VertexMap::identity(5)));
    }

    #[test]
    fn pendant_retracts_onto_triangle() {
        let mut arcs: Vec<(usize, usize)> = k(3).arcs().collect();
        arcs.extend([(0, 3), (3, 0)]);
        let g = Digraph::from_arcs(4, arcs).unwrap();
        let rho = find_retraction(&g, &[0, 1, 2]).unwrap();
        assert_eq!(&rho.assignment[..3], &[0, 1, 2]);
        // brute force: the pendant may go to 1 or 2, never 0
        let ok: Vec<usize> = (0..3)
            .filter(|&t| {
                let m = VertexMap::new(vec![0, 1, 2, t]);
                m.is_homomorphism(&g, &g)
            })
            .collect();
        assert_eq!(ok, vec![1, 2]);
        assert_eq!(rho.image(3), 1);
    }

    #[test]
    fn odd_cycle_does_not_retract_to_edge() {
        let c5 = generate(GraphKind::UndirectedCycle, 5).unwrap();
        assert!(find_retraction(&c5, &[0, 1]).is_none());
    }
}
