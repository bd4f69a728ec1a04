//! Brute-force oracles and instance generators shared by the test targets.
//! None of these reuse the library's search code.

#![allow(dead_code)]

use arcgraph::{Digraph, Poset};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every labelled digraph on `n` vertices, loops allowed, in bitmask order.
pub fn all_digraphs(n: usize) -> Vec<Digraph> {
    let cells = n * n;
    (0..1u64 << cells)
        .map(|mask| {
            let arcs = (0..cells)
                .filter(|&c| mask >> c & 1 == 1)
                .map(|c| (c / n, c % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
        .collect()
}

/// Every strict order on `m` labelled elements, found by filtering all
/// irreflexive relations for antisymmetry and transitivity.
pub fn all_posets(m: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|u| (0..m).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let mut rel = vec![vec![false; m]; m];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                rel[u][v] = true;
            }
        }
        let antisymmetric = (0..m).all(|u| (0..m).all(|v| !(rel[u][v] && rel[v][u])));
        let transitive = (0..m).all(|u| {
            (0..m).all(|v| !rel[u][v] || (0..m).all(|w| !rel[v][w] || rel[u][w]))
        });
        if antisymmetric && transitive {
            let chosen = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p);
            out.push(Poset::from_relation(m, chosen).unwrap());
        }
    }
    out
}

/// A random poset on `m` elements: random arcs along a shuffled order, closed
/// transitively by the constructor.
pub fn random_poset<R: Rng>(rng: &mut R, m: usize, density: f64) -> Poset {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut rel = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if rng.gen_bool(density) {
                rel.push((perm[i], perm[j]));
            }
        }
    }
    Poset::from_relation(m, rel).unwrap()
}

pub fn random_loop_free<R: Rng>(rng: &mut R, n: usize, density: f64) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(density))
        .collect();
    Digraph::from_arcs(n, arcs).unwrap()
}

/// Largest antichain by trying every subset.
pub fn brute_width(p: &Poset) -> usize {
    let m = p.m();
    (0..1u32 << m)
        .filter(|&s| {
            (0..m).all(|a| {
                s >> a & 1 == 0 || (a + 1..m).all(|b| s >> b & 1 == 0 || !p.comparable(a, b))
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Antichains of the subset lattice on `n` points, by checking every family
/// of subsets. Feasible for `n <= 4`.
pub fn brute_dedekind(n: usize) -> usize {
    assert!(n <= 4);
    let sets = 1usize << n;
    (0..1u64 << sets)
        .filter(|&fam| {
            (0..sets).all(|a| {
                fam >> a & 1 == 0
                    || (0..sets).all(|b| a == b || fam >> b & 1 == 0 || a & b != a)
            })
        })
        .count()
}

/// Monotone boolean functions on `n` variables as truth tables, built from
/// pairs `f0 <= f1` on `n - 1` variables. Feasible for `n <= 5`.
pub fn monotone_functions(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0, 1];
    }
    let prev = monotone_functions(n - 1);
    let half = 1u32 << (n - 1);
    let mut out = Vec::new();
    for &f0 in &prev {
        for &f1 in &prev {
            if f0 & !f1 == 0 {
                out.push(f0 | f1 << half);
            }
        }
    }
    out
}

/// Counts monotone functions on `n` variables; `n = 6` pairs up the 7581
/// functions on five.
pub fn dedekind_by_pairs(n: usize) -> usize {
    if n == 0 {
        return 2;
    }
    let prev = monotone_functions(n - 1);
    prev.iter()
        .map(|&f0| prev.iter().filter(|&&f1| f0 & !f1 == 0).count())
        .sum()
}

/// Chromatic number by trying every assignment with `k` colours.
pub fn brute_chromatic(g: &Digraph) -> usize {
    let n = g.n();
    let arcs: Vec<(usize, usize)> = g.arcs().collect();
    (0..=n)
        .find(|&k| {
            if n == 0 {
                return true;
            }
            if k == 0 {
                return false;
            }
            let total = (k as u64).pow(n as u32);
            (0..total).any(|code| {
                let mut c = vec![0; n];
                let mut x = code;
                for slot in c.iter_mut() {
                    *slot = (x % k as u64) as usize;
                    x /= k as u64;
                }
                arcs.iter().all(|&(u, v)| c[u] != c[v])
            })
        })
        .unwrap()
}

pub fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
