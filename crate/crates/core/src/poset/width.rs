//! Width of a poset through Dilworth's theorem.
//!
//! A maximum matching in the bipartite graph `{u_left -> v_right : u < v}`
//! links elements into chains; `m - |matching|` chains remain. The König
//! vertex cover read off the same matching leaves a maximum antichain of the
//! same size. Matching is Hopcroft–Karp on bit rows: each phase visits every
//! right vertex at most once in the BFS and once in the DFS.

use serde::{Deserialize, Serialize};

use super::Poset;
use crate::bits::{BitMatrix, BitSet, Ones};
use crate::error::{Error, Result};
use crate::par::Exec;

/// A maximum antichain together with a chain partition of the same size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthCertificate {
    pub antichain: Vec<usize>,
    pub chains: Vec<Vec<usize>>,
}

impl WidthCertificate {
    pub fn width(&self) -> usize {
        self.antichain.len()
    }

    /// Checks every certificate invariant against `p`.
    pub fn is_valid_for(&self, p: &Poset) -> bool {
        let m = p.m();
        let anti_ok = self.antichain.iter().all(|&a| a < m)
            && self
                .antichain
                .iter()
                .enumerate()
                .all(|(i, &a)| self.antichain[i + 1..].iter().all(|&b| a != b && !p.comparable(a, b)));
        let mut seen = vec![false; m];
        for chain in &self.chains {
            if chain.is_empty() {
                return false;
            }
            for w in chain.windows(2) {
                if !p.lt(w[0], w[1]) {
                    return false;
                }
            }
            for &x in chain {
                if x >= m || std::mem::replace(&mut seen[x], true) {
                    return false;
                }
            }
        }
        anti_ok && seen.iter().all(|&s| s) && self.antichain.len() == self.chains.len()
    }
}

const UNMATCHED: usize = usize::MAX;
const INF: usize = usize::MAX;

struct Matching {
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Maximum matching where left vertex `u` may pair with any right vertex in
/// `adj.row(u)`.
fn hopcroft_karp(adj: &BitMatrix) -> Matching {
    let nl = adj.rows();
    let nr = adj.cols();
    let stride = adj.stride();
    let mut left = vec![UNMATCHED; nl];
    let mut right = vec![UNMATCHED; nr];

    // greedy start
    let mut free_r = BitSet::full(nr);
    for (u, slot) in left.iter_mut().enumerate() {
        let hit = adj
            .row(u)
            .iter()
            .zip(free_r.words())
            .position(|(r, f)| r & f != 0);
        if let Some(w) = hit {
            let v = w * 64 + (adj.row(u)[w] & free_r.words()[w]).trailing_zeros() as usize;
            *slot = v;
            right[v] = u;
            free_r.remove(v);
        }
    }

    let mut dist = vec![INF; nl];
    let mut queue = Vec::with_capacity(nl);
    loop {
        // BFS layers from free left vertices
        dist.iter_mut().for_each(|d| *d = INF);
        queue.clear();
        for u in 0..nl {
            if left[u] == UNMATCHED {
                dist[u] = 0;
                queue.push(u);
            }
        }
        let mut unvisited = BitSet::full(nr);
        let mut found = INF;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            if dist[u] >= found {
                continue;
            }
            for (w, &word) in adj.row(u).iter().enumerate() {
                let mut bits_w = word & unvisited.words()[w];
                while bits_w != 0 {
                    let v = w * 64 + bits_w.trailing_zeros() as usize;
                    bits_w &= bits_w - 1;
                    unvisited.remove(v);
                    let partner = right[v];
                    if partner == UNMATCHED {
                        found = found.min(dist[u]);
                    } else if dist[partner] == INF {
                        dist[partner] = dist[u] + 1;
                        queue.push(partner);
                    }
                }
            }
        }
        if found == INF {
            break;
        }

        // right vertices usable from a left vertex at layer d: free ones, and
        // matched ones whose partner sits at layer d + 1
        let mut layer_masks = BitMatrix::new(found + 1, nr);
        for (v, &partner) in right.iter().enumerate() {
            if partner == UNMATCHED {
                for d in 0..=found {
                    layer_masks.set(d, v);
                }
            } else if dist[partner] != INF && dist[partner] >= 1 && dist[partner] <= found {
                layer_masks.set(dist[partner] - 1, v);
            }
        }

        let mut alive = BitSet::full(nr);
        let mut cursor = vec![0usize; nl];
        let mut augmented = false;
        for root in 0..nl {
            if left[root] != UNMATCHED || dist[root] != 0 {
                continue;
            }
            let mut stack: Vec<usize> = vec![root];
            let mut via: Vec<usize> = Vec::new();
            while let Some(&u) = stack.last() {
                let mask = layer_masks.row(dist[u]);
                let row = adj.row(u);
                let mut next = None;
                while cursor[u] < stride {
                    let w = cursor[u];
                    let cand = row[w] & mask[w] & alive.words()[w];
                    if cand != 0 {
                        next = Some(w * 64 + cand.trailing_zeros() as usize);
                        break;
                    }
                    cursor[u] += 1;
                }
                let Some(v) = next else {
                    stack.pop();
                    via.pop();
                    continue;
                };
                alive.remove(v);
                let partner = right[v];
                via.push(v);
                if partner == UNMATCHED {
                    for (&a, &b) in stack.iter().zip(&via) {
                        left[a] = b;
                        right[b] = a;
                    }
                    augmented = true;
                    break;
                }
                stack.push(partner);
            }
        }
        if !augmented {
            break;
        }
    }
    Matching { left, right }
}

/// Width certificate; refuses posets larger than the default limit.
pub fn width(p: &Poset) -> Result<WidthCertificate> {
    width_with_limit(p, crate::Budget::default().width_elements)
}

pub fn width_with_limit(p: &Poset, max_elements: usize) -> Result<WidthCertificate> {
    let m = p.m();
    if m > max_elements {
        return Err(Error::SizeBudgetExceeded {
            what: "width computation",
            reached: m,
            limit: max_elements,
        });
    }
    let below = p.below_matrix(Exec::default())?;
    let above = below.transpose();
    let matching = hopcroft_karp(&above);

    let mut chains = Vec::new();
    for start in 0..m {
        if matching.right[start] != UNMATCHED {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        while matching.left[cur] != UNMATCHED {
            cur = matching.left[cur];
            chain.push(cur);
        }
        chains.push(chain);
    }

    // König: alternate from free left vertices; cover = (L \ Z) ∪ (R ∩ Z)
    let mut z_left = BitSet::new(m);
    let mut z_right = BitSet::new(m);
    let mut queue: Vec<usize> = (0..m)
        .filter(|&u| matching.left[u] == UNMATCHED)
        .collect();
    for &u in &queue {
        z_left.insert(u);
    }
    while let Some(u) = queue.pop() {
        let row = above.row(u);
        let fresh: Vec<usize> = Ones::new(row).filter(|&v| !z_right.contains(v)).collect();
        for v in fresh {
            z_right.insert(v);
            let partner = matching.right[v];
            if partner != UNMATCHED && !z_left.contains(partner) {
                z_left.insert(partner);
                queue.push(partner);
            }
        }
    }
    let antichain: Vec<usize> = (0..m)
        .filter(|&x| z_left.contains(x) && !z_right.contains(x))
        .collect();
    debug_assert_eq!(antichain.len(), chains.len());
    Ok(WidthCertificate { antichain, chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{ideal_lattice, iterated_ideal_lattice};

    #[test]
    fn antichain_width() {
        let c = width(&Poset::antichain(5)).unwrap();
        assert_eq!(c.width(), 5);
        assert!(c.is_valid_for(&Poset::antichain(5)));
        let e = width(&Poset::antichain(0)).unwrap();
        assert_eq!(e.width(), 0);
    }

    #[test]
    fn chain_width_is_one() {
        let p = Poset::chain(7);
        let c = width(&p).unwrap();
        assert_eq!(c.width(), 1);
        assert_eq!(c.chains, vec![(0..7).collect::<Vec<_>>()]);
    }

    #[test]
    fn boolean_lattice_of_four() {
        let b4 = ideal_lattice(&Poset::antichain(4), 1000).unwrap();
        let c = width(&b4).unwrap();
        assert_eq!(c.width(), 6);
        assert!(c.is_valid_for(&b4));
    }

    #[test]
    fn free_distributive_lattice_of_three() {
        let fd3 = iterated_ideal_lattice(3, 2, 1000).unwrap();
        let c = width(&fd3).unwrap();
        assert_eq!(c.width(), 4);
        assert!(c.is_valid_for(&fd3));
    }

    #[test]
    fn limit_refuses_large_posets() {
        assert!(matches!(
            width_with_limit(&Poset::antichain(10), 9),
            Err(Error::SizeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn matching_on_crown() {
        // 0,1,2 below 3,4,5 except i below 3+i
        let pairs = (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, 3 + j)));
        let p = Poset::from_relation(6, pairs).unwrap();
        let c = width(&p).unwrap();
        assert_eq!(c.width(), 3);
        assert!(c.is_valid_for(&p));
    }
}
