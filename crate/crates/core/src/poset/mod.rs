//! Finite posets, ideal lattices and their iterates, level statistics, and
//! nondomination digraphs.
//!
//! A poset is either backed by an explicit strict-order matrix, or, for ideal
//! lattices, by the subset labels of its elements with strict inclusion as the
//! order. The second form lets `I²` of a 64-element base (about 7.8 million
//! elements) exist without a quadratic matrix; the matrix is built on demand
//! when a caller needs rows.

mod btable;
mod io;
mod width;

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};

use crate::bits::{self, BitMatrix, Ones};
use crate::digraph::{Digraph, Label};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::Budget;

pub use btable::{b_value, BTable};
pub use io::PosetJson;
pub use width::{width, width_with_limit, WidthCertificate};

/// Bit-packed subsets of a base set, one per element, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetLabels {
    base: usize,
    stride: usize,
    count: usize,
    words: Vec<u64>,
}

impl SubsetLabels {
    pub fn base_size(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn cardinality(&self, i: usize) -> usize {
        bits::popcount(self.get(i))
    }

    pub fn elements(&self, i: usize) -> Vec<usize> {
        Ones::new(self.get(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Order {
    /// Row `v` holds every `u` with `u < v`.
    Below(BitMatrix),
    /// Strict inclusion of subset labels.
    Inclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    m: usize,
    order: Order,
    labels: Option<SubsetLabels>,
}

/// Above this many elements the order matrix is never materialised.
pub const MATRIX_LIMIT: usize = 1 << 17;

impl Poset {
    /// `n` pairwise incomparable elements.
    pub fn antichain(n: usize) -> Poset {
        Poset {
            m: n,
            order: Order::Below(BitMatrix::square(n)),
            labels: None,
        }
    }

    /// `0 < 1 < … < m-1`.
    pub fn chain(m: usize) -> Poset {
        let mut below = BitMatrix::square(m);
        for v in 0..m {
            for u in 0..v {
                below.set(v, u);
            }
        }
        Poset {
            m,
            order: Order::Below(below),
            labels: None,
        }
    }

    /// Transitive closure of `pairs` (each `(u, v)` meaning `u < v`).
    /// Reflexive pairs and cycles are rejected.
    pub fn from_relation<I>(m: usize, pairs: I) -> Result<Poset>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut below = BitMatrix::square(m);
        for (u, v) in pairs {
            if u >= m || v >= m {
                return Err(Error::InvalidPoset(format!(
                    "pair ({u},{v}) out of range for {m} elements"
                )));
            }
            if u == v {
                return Err(Error::InvalidPoset(format!("reflexive pair ({u},{u})")));
            }
            below.set(v, u);
        }
        // Warshall on rows: if w < v then everything below w is below v
        for w in 0..m {
            let row_w = below.row(w).to_vec();
            for v in 0..m {
                if below.get(v, w) {
                    let r = below.row_mut(v);
                    for (a, b) in r.iter_mut().zip(&row_w) {
                        *a |= b;
                    }
                }
            }
        }
        if let Some(v) = (0..m).find(|&v| below.get(v, v)) {
            return Err(Error::InvalidPoset(format!("cycle through element {v}")));
        }
        Ok(Poset {
            m,
            order: Order::Below(below),
            labels: None,
        })
    }

    /// Builds from a strict order that is already irreflexive and transitive.
    #[cfg(test)]
    pub(crate) fn from_below(below: BitMatrix) -> Poset {
        Poset {
            m: below.rows(),
            order: Order::Below(below),
            labels: None,
        }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> Option<&SubsetLabels> {
        self.labels.as_ref()
    }

    /// `u < v`.
    pub fn lt(&self, u: usize, v: usize) -> bool {
        match &self.order {
            Order::Below(b) => b.get(v, u),
            Order::Inclusion => {
                let l = self.labels.as_ref().expect("inclusion order has labels");
                u != v && bits::is_subset(l.get(u), l.get(v))
            }
        }
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.lt(u, v) || self.lt(v, u)
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.order, Order::Below(_))
    }

    /// Strict-down-set rows, building them if the order is implicit.
    pub fn below_matrix(&self, exec: Exec) -> Result<Cow<'_, BitMatrix>> {
        match &self.order {
            Order::Below(b) => Ok(Cow::Borrowed(b)),
            Order::Inclusion => {
                if self.m > MATRIX_LIMIT {
                    return Err(Error::SizeBudgetExceeded {
                        what: "order matrix",
                        reached: self.m,
                        limit: MATRIX_LIMIT,
                    });
                }
                let labels = self.labels.as_ref().expect("inclusion order has labels");
                let mut below = BitMatrix::square(self.m);
                let stride = below.stride();
                par::for_each_chunk_mut(exec, below.data_mut(), stride, |v, row| {
                    let lv = labels.get(v);
                    let cv = bits::popcount(lv);
                    // elements are sorted by cardinality; only earlier ones can be below
                    for u in 0..v {
                        let lu = labels.get(u);
                        if bits::popcount(lu) < cv && bits::is_subset(lu, lv) {
                            bits::set_bit(row, u);
                        }
                    }
                });
                Ok(Cow::Owned(below))
            }
        }
    }

    /// Same poset with the order matrix built.
    pub fn materialized(&self, exec: Exec) -> Result<Poset> {
        let below = self.below_matrix(exec)?.into_owned();
        Ok(Poset {
            m: self.m,
            order: Order::Below(below),
            labels: self.labels.clone(),
        })
    }

    /// A linear extension: smallest available index first.
    pub fn linear_extension(&self, exec: Exec) -> Result<Vec<usize>> {
        if self.labels.is_some() && matches!(self.order, Order::Inclusion) {
            return Ok((0..self.m).collect());
        }
        let below = self.below_matrix(exec)?;
        let mut remaining: Vec<usize> = (0..self.m).map(|v| bits::popcount(below.row(v))).collect();
        let above = below.transpose();
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..self.m)
            .filter(|&v| remaining[v] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut out = Vec::with_capacity(self.m);
        while let Some(std::cmp::Reverse(v)) = ready.pop() {
            out.push(v);
            for w in Ones::new(above.row(v)) {
                remaining[w] -= 1;
                if remaining[w] == 0 {
                    ready.push(std::cmp::Reverse(w));
                }
            }
        }
        debug_assert_eq!(out.len(), self.m);
        Ok(out)
    }

    /// Cover pairs `(u, v)`: `u < v` with nothing strictly between.
    pub fn covers(&self) -> Result<Vec<(usize, usize)>> {
        if let (Some(labels), Order::Inclusion) = (&self.labels, &self.order) {
            // in an ideal lattice, covers add exactly one element
            let index: HashMap<&[u64], usize> =
                (0..self.m).map(|i| (labels.get(i), i)).collect();
            let mut out = Vec::new();
            for v in 0..self.m {
                let lv = labels.get(v);
                let mut scratch = lv.to_vec();
                for e in Ones::new(lv) {
                    scratch[e / 64] &= !(1 << (e % 64));
                    if let Some(&u) = index.get(scratch.as_slice()) {
                        out.push((u, v));
                    }
                    scratch[e / 64] |= 1 << (e % 64);
                }
            }
            out.sort_unstable();
            return Ok(out);
        }
        let below = self.below_matrix(Exec::Sequential)?;
        let mut out = Vec::new();
        for v in 0..self.m {
            let mut reach = vec![0u64; below.stride()];
            for w in Ones::new(below.row(v)) {
                for (a, b) in reach.iter_mut().zip(below.row(w)) {
                    *a |= b;
                }
            }
            for u in Ones::new(below.row(v)) {
                if !bits::test_bit(&reach, u) {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Checks irreflexivity, antisymmetry and transitivity.
    pub fn check_axioms(&self) -> bool {
        for u in 0..self.m {
            if self.lt(u, u) {
                return false;
            }
            for v in 0..self.m {
                if self.lt(u, v) && self.lt(v, u) {
                    return false;
                }
                if self.lt(u, v) && (0..self.m).any(|w| self.lt(v, w) && !self.lt(u, w)) {
                    return false;
                }
            }
        }
        true
    }
}


/// Canonical element order of an ideal lattice: by cardinality, then
/// lexicographically on the sorted element lists (for equal sizes, the set
/// holding the smallest element of the symmetric difference comes first).
pub fn canonical_cmp(a: &[u64], b: &[u64]) -> Ordering {
    bits::popcount(a).cmp(&bits::popcount(b)).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            if x != y {
                let low = (x ^ y) & (x ^ y).wrapping_neg();
                return if x & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    })
}

#[inline]
fn single_word_key(w: u64) -> (u32, u64) {
    (w.count_ones(), !w.reverse_bits())
}

/// Shared leaf counter so parallel branches stop once the budget is blown.
struct LeafBudget {
    limit: usize,
    seen: AtomicUsize,
    blown: AtomicBool,
}

impl LeafBudget {
    const BATCH: usize = 1 << 12;

    fn flush(&self, n: usize) -> bool {
        let total = self.seen.fetch_add(n, AtomicOrdering::Relaxed) + n;
        if total > self.limit {
            self.blown.store(true, AtomicOrdering::Relaxed);
        }
        !self.blown.load(AtomicOrdering::Relaxed)
    }
}

struct Enumerator<'a> {
    below: &'a BitMatrix,
    ext: &'a [usize],
    stride: usize,
    budget: &'a LeafBudget,
}

impl Enumerator<'_> {
    /// Depth-first over the linear extension: element `ext[i]` may join the
    /// current ideal only when everything below it already has.
    fn run(&self, depth: usize, start: &[u64]) -> Vec<u64> {
        if self.stride == 1 {
            return self.run_single(depth, start[0]);
        }
        let m = self.ext.len();
        let mut out = Vec::new();
        let mut pending = 0usize;
        let mut stack: Vec<(usize, Vec<u64>)> = vec![(depth, start.to_vec())];
        while let Some((mut i, cur)) = stack.pop() {
            while i < m {
                let e = self.ext[i];
                if bits::is_subset(self.below.row(e), &cur) {
                    let mut with = cur.clone();
                    bits::set_bit(&mut with, e);
                    stack.push((i + 1, with));
                }
                i += 1;
            }
            out.extend_from_slice(&cur);
            pending += 1;
            if pending == LeafBudget::BATCH {
                pending = 0;
                if !self.budget.flush(LeafBudget::BATCH) {
                    return out;
                }
            }
        }
        self.budget.flush(pending);
        out
    }

    fn run_single(&self, depth: usize, start: u64) -> Vec<u64> {
        let m = self.ext.len();
        let below: Vec<u64> = self.ext.iter().map(|&e| self.below.row(e)[0]).collect();
        let mut out = Vec::new();
        let mut pending = 0usize;
        let mut stack: Vec<(usize, u64)> = vec![(depth, start)];
        while let Some((mut i, cur)) = stack.pop() {
            while i < m {
                if below[i] & !cur == 0 {
                    stack.push((i + 1, cur | 1 << self.ext[i]));
                }
                i += 1;
            }
            out.push(cur);
            pending += 1;
            if pending == LeafBudget::BATCH {
                pending = 0;
                if !self.budget.flush(LeafBudget::BATCH) {
                    return out;
                }
            }
        }
        self.budget.flush(pending);
        out
    }
}

/// All ideals (down-sets) of `p`, ordered by inclusion, in canonical order.
pub fn ideal_lattice(p: &Poset, budget: usize) -> Result<Poset> {
    ideal_lattice_with(p, budget, Exec::default())
}

pub fn ideal_lattice_with(p: &Poset, budget: usize, exec: Exec) -> Result<Poset> {
    let m = p.m;
    // every principal ideal plus the empty one
    if m.saturating_add(1) > budget {
        return Err(Error::SizeBudgetExceeded {
            what: "ideal lattice",
            reached: m + 1,
            limit: budget,
        });
    }
    let below = p.below_matrix(exec)?;
    let ext = p.linear_extension(exec)?;
    let stride = bits::words_for(m);

    // split the search tree into independent subtrees
    let target = if exec.is_parallel() { 256 } else { 1 };
    let mut depth = 0;
    let mut frontier: Vec<Vec<u64>> = vec![vec![0; stride]];
    while frontier.len() < target && depth < m {
        let e = ext[depth];
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for cur in frontier {
            if bits::is_subset(below.row(e), &cur) {
                let mut with = cur.clone();
                bits::set_bit(&mut with, e);
                next.push(with);
            }
            next.push(cur);
        }
        frontier = next;
        depth += 1;
    }

    let leaf_budget = LeafBudget {
        limit: budget,
        seen: AtomicUsize::new(0),
        blown: AtomicBool::new(false),
    };
    let en = Enumerator {
        below: &below,
        ext: &ext,
        stride,
        budget: &leaf_budget,
    };
    let parts = if stride == 0 {
        // empty base: the single empty ideal
        leaf_budget.flush(1);
        vec![Vec::new()]
    } else {
        par::map(exec, &frontier, |start| en.run(depth, start))
    };
    let reached = leaf_budget.seen.load(AtomicOrdering::Relaxed);
    if leaf_budget.blown.load(AtomicOrdering::Relaxed) || reached > budget {
        return Err(Error::SizeBudgetExceeded {
            what: "ideal lattice",
            reached,
            limit: budget,
        });
    }

    let (count, words) = if stride == 0 {
        (1, Vec::new())
    } else if stride == 1 {
        let mut all: Vec<u64> = parts.concat();
        par::sort_unstable_by(exec, &mut all, |a, b| {
            single_word_key(*a).cmp(&single_word_key(*b))
        });
        (all.len(), all)
    } else {
        let flat: Vec<u64> = parts.concat();
        let count = flat.len() / stride;
        let mut idx: Vec<usize> = (0..count).collect();
        par::sort_unstable_by(exec, &mut idx, |&a, &b| {
            canonical_cmp(
                &flat[a * stride..(a + 1) * stride],
                &flat[b * stride..(b + 1) * stride],
            )
        });
        let mut words = Vec::with_capacity(flat.len());
        for i in idx {
            words.extend_from_slice(&flat[i * stride..(i + 1) * stride]);
        }
        (count, words)
    };
    Ok(Poset {
        m: count,
        order: Order::Inclusion,
        labels: Some(SubsetLabels {
            base: m,
            stride,
            count,
            words,
        }),
    })
}

/// `I^k` of the `n`-element antichain; `k = 0` gives the antichain itself.
pub fn iterated_ideal_lattice(n: usize, k: usize, budget: usize) -> Result<Poset> {
    iterated_ideal_lattice_with(n, k, budget, Exec::default())
}

pub fn iterated_ideal_lattice_with(n: usize, k: usize, budget: usize, exec: Exec) -> Result<Poset> {
    let mut p = Poset::antichain(n);
    for _ in 0..k {
        p = ideal_lattice_with(&p, budget, exec)?;
    }
    Ok(p)
}

/// Number of elements of each cardinality, from 0 to the largest present.
pub fn level_sizes(lattice: &Poset) -> Result<Vec<usize>> {
    let labels = lattice.labels.as_ref().ok_or(Error::MissingLabels)?;
    let mut sizes = Vec::new();
    for i in 0..labels.len() {
        let c = labels.cardinality(i);
        if sizes.len() <= c {
            sizes.resize(c + 1, 0);
        }
        sizes[c] += 1;
    }
    Ok(sizes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpernerReport {
    pub sperner: bool,
    /// Smallest level whose size equals the width.
    pub level: Option<usize>,
    pub width: usize,
    pub largest_level: usize,
}

/// Whether some level of `lattice` is a maximum antichain.
pub fn sperner_check(lattice: &Poset, budget: &Budget) -> Result<SpernerReport> {
    let sizes = level_sizes(lattice)?;
    let w = width_with_limit(lattice, budget.width_elements)?.width();
    let largest_level = sizes.iter().copied().max().unwrap_or(0);
    let level = sizes.iter().position(|&s| s == w);
    Ok(SpernerReport {
        sperner: level.is_some(),
        level,
        width: w,
        largest_level,
    })
}

/// `|I²(K̄_n)|`, the number of antichains of the boolean lattice on `n` generators.
pub fn dedekind(n: usize, budget: usize) -> Result<usize> {
    dedekind_with(n, budget, Exec::default())
}

pub fn dedekind_with(n: usize, budget: usize, exec: Exec) -> Result<usize> {
    Ok(iterated_ideal_lattice_with(n, 2, budget, exec)?.m())
}

/// Arc `(u, v)` whenever `u >= v` fails: `u < v` or the two are incomparable.
pub fn nondomination(p: &Poset) -> Result<Digraph> {
    let below = p.below_matrix(Exec::default())?;
    let out: Vec<Vec<usize>> = (0..p.m)
        .map(|u| {
            (0..p.m)
                .filter(|&v| v != u && !below.get(u, v))
                .collect()
        })
        .collect();
    let g = Digraph::from_sorted_out(out);
    Ok(match &p.labels {
        Some(l) => g.with_labels_unchecked((0..p.m).map(|i| Label::Tuple(l.elements(i))).collect()),
        None => g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: usize = 10_000_000;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn antichains() {
        assert_eq!(Poset::antichain(3).m(), 3);
        assert!(!Poset::antichain(3).comparable(0, 1));
        assert_eq!(Poset::antichain(0).m(), 0);
        assert_eq!(Poset::antichain(1).m(), 1);
    }

    #[test]
    fn from_relation_closes_and_rejects_cycles() {
        let p = Poset::from_relation(3, [(0, 1), (1, 2)]).unwrap();
        assert!(p.lt(0, 2));
        assert!(p.check_axioms());
        assert!(Poset::from_relation(3, [(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Poset::from_relation(2, [(1, 1)]).is_err());
        assert!(Poset::from_relation(2, [(0, 2)]).is_err());
    }

    #[test]
    fn boolean_lattice_of_three() {
        let b3 = ideal_lattice(&Poset::antichain(3), BUDGET).unwrap();
        assert_eq!(b3.m(), 8);
        let l = b3.labels().unwrap();
        let sets: Vec<Vec<usize>> = (0..8).map(|i| l.elements(i)).collect();
        assert_eq!(
            sets,
            vec![
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(level_sizes(&b3).unwrap(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn free_distributive_lattice_of_three() {
        let fd3 = iterated_ideal_lattice(3, 2, BUDGET).unwrap();
        assert_eq!(fd3.m(), 20);
        // ↓{ab}, ↓{ac}, ↓{bc}, ↓{a,b,c} each have four elements
        assert_eq!(level_sizes(&fd3).unwrap()[4], 4);
        assert!(fd3.materialized(Exec::Sequential).unwrap().check_axioms());
    }

    #[test]
    fn ideals_of_a_chain_form_a_longer_chain() {
        for m in 0..6 {
            let l = ideal_lattice(&Poset::chain(m), BUDGET).unwrap();
            assert_eq!(l.m(), m + 1);
            assert!((1..=m).all(|i| l.lt(i - 1, i)));
        }
    }

    #[test]
    fn boolean_levels_are_binomials() {
        for n in 0..7 {
            let b = iterated_ideal_lattice(n, 1, BUDGET).unwrap();
            assert_eq!(b.m(), 1 << n);
            let expect: Vec<usize> = (0..=n).map(|l| binom(n, l)).collect();
            assert_eq!(level_sizes(&b).unwrap(), expect);
        }
    }

    #[test]
    fn small_dedekind_numbers() {
        let got: Vec<usize> = (0..5).map(|n| dedekind(n, BUDGET).unwrap()).collect();
        assert_eq!(got, vec![2, 3, 6, 20, 168]);
    }

    #[test]
    fn strategies_agree() {
        let a = iterated_ideal_lattice_with(4, 2, BUDGET, Exec::Sequential).unwrap();
        let b = iterated_ideal_lattice_with(4, 2, BUDGET, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        // multi-word labels: a 70-chain beside two free elements
        let p = Poset::from_relation(72, (0..69).map(|i| (i, i + 1))).unwrap();
        let a = ideal_lattice_with(&p, BUDGET, Exec::Sequential).unwrap();
        let b = ideal_lattice_with(&p, BUDGET, Exec::Parallel).unwrap();
        assert_eq!(a.m(), 71 * 4);
        assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn budget_is_enforced() {
        let err = iterated_ideal_lattice(4, 2, 100).unwrap_err();
        assert!(matches!(err, Error::SizeBudgetExceeded { limit: 100, .. }));
        assert!(ideal_lattice(&Poset::antichain(10), 5).is_err());
    }

    #[test]
    fn missing_labels() {
        assert!(matches!(
            level_sizes(&Poset::antichain(2)),
            Err(Error::MissingLabels)
        ));
    }

    #[test]
    fn canonical_order_multiword() {
        let a = [0u64, 1];
        let b = [1u64, 0];
        assert_eq!(canonical_cmp(&b, &a), Ordering::Less);
        assert_eq!(canonical_cmp(&[3], &[4]), Ordering::Greater);
        assert_eq!(canonical_cmp(&[0b011], &[0b101]), Ordering::Less);
        assert_eq!(
            single_word_key(0b011).cmp(&single_word_key(0b101)),
            Ordering::Less
        );
    }

    #[test]
    fn nondomination_examples() {
        let k3 = nondomination(&Poset::antichain(3)).unwrap();
        assert_eq!(k3, crate::digraph::generate(crate::GraphKind::Complete, 3).unwrap());
        let c2 = nondomination(&Poset::chain(2)).unwrap();
        assert_eq!(c2.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn covers_of_free_distributive_lattice() {
        let fd3 = iterated_ideal_lattice(3, 2, BUDGET).unwrap();
        let fast = fd3.covers().unwrap();
        let slow = fd3.materialized(Exec::Sequential).unwrap();
        let slow = Poset::from_below(slow.below_matrix(Exec::Sequential).unwrap().into_owned());
        assert_eq!(fast, slow.covers().unwrap());
        assert_eq!(fast.len(), 32);
    }
}
