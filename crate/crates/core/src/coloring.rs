//! Exact chromatic number by DSATUR branch and bound.
//!
//! Arc direction is ignored: two vertices conflict when an arc joins them in
//! either direction. Loops make a digraph uncolourable and are rejected.

use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, Ones};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// A proper colouring using colours `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub k: usize,
}

impl Coloring {
    /// Proper for `g`, total, and the used colours are exactly `0..k`.
    pub fn is_valid_for(&self, g: &Digraph) -> bool {
        if self.colors.len() != g.n() {
            return false;
        }
        let mut used = vec![false; self.k];
        for &c in &self.colors {
            match used.get_mut(c) {
                Some(u) => *u = true,
                None => return false,
            }
        }
        used.iter().all(|&u| u)
            && g.arcs()
                .all(|(u, v)| u != v && self.colors[u] != self.colors[v])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }
}

struct Undirected {
    adj: Vec<Vec<usize>>,
    matrix: BitMatrix,
}

fn undirected(g: &Digraph) -> Result<Undirected> {
    if let Some(v) = g.first_loop() {
        return Err(Error::LoopPresent(v));
    }
    let mut matrix = BitMatrix::square(g.n());
    for (u, v) in g.arcs() {
        matrix.set(u, v);
        matrix.set(v, u);
    }
    let adj = (0..g.n()).map(|u| Ones::new(matrix.row(u)).collect()).collect();
    Ok(Undirected { adj, matrix })
}

/// Greedy clique: grow from every seed, always adding the candidate with the
/// most neighbours among the remaining candidates. Returns the largest found.
fn greedy_clique(ug: &Undirected) -> Vec<usize> {
    let n = ug.adj.len();
    let stride = ug.matrix.stride();
    let mut best: Vec<usize> = Vec::new();
    for seed in 0..n {
        let mut clique = vec![seed];
        let mut cand: Vec<u64> = ug.matrix.row(seed).to_vec();
        loop {
            let next = Ones::new(&cand)
                .map(|v| {
                    let common: usize = (0..stride)
                        .map(|w| (cand[w] & ug.matrix.row(v)[w]).count_ones() as usize)
                        .sum();
                    (common, v)
                })
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
            let Some((_, v)) = next else { break };
            clique.push(v);
            for (c, r) in cand.iter_mut().zip(ug.matrix.row(v)) {
                *c &= r;
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

const NONE: usize = usize::MAX;

struct Dsatur<'a> {
    adj: &'a [Vec<usize>],
    k: usize,
    color: Vec<usize>,
    /// conflicts[v * k + c]: coloured neighbours of v with colour c
    conflicts: Vec<u32>,
    sat: Vec<usize>,
    /// uncoloured neighbours of each vertex
    free: Vec<usize>,
    colored: usize,
}

impl Dsatur<'_> {
    /// Colours `v` with `c`; false if some uncoloured neighbour is left with
    /// no colour. The assignment is applied either way and must be undone.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        self.color[v] = c;
        self.colored += 1;
        let mut ok = true;
        let adj = self.adj;
        for &w in &adj[v] {
            self.free[w] -= 1;
            let slot = &mut self.conflicts[w * self.k + c];
            *slot += 1;
            if *slot == 1 {
                self.sat[w] += 1;
                if self.sat[w] == self.k && self.color[w] == NONE {
                    ok = false;
                }
            }
        }
        ok
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = NONE;
        self.colored -= 1;
        let adj = self.adj;
        for &w in &adj[v] {
            self.free[w] += 1;
            let slot = &mut self.conflicts[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[w] -= 1;
            }
        }
    }

    /// Uncoloured vertex of maximum saturation; ties by degree, then index.
    fn pick(&self) -> usize {
        let mut best = NONE;
        for v in 0..self.color.len() {
            if self.color[v] != NONE {
                continue;
            }
            if best == NONE
                || (self.sat[v], self.free[v]) > (self.sat[best], self.free[best])
            {
                best = v;
            }
        }
        best
    }

    fn search(&mut self, used: usize) -> bool {
        if self.colored == self.color.len() {
            return true;
        }
        let v = self.pick();
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.conflicts[v * self.k + c] != 0 {
                continue;
            }
            let ok = self.assign(v, c);
            if ok && self.search(used.max(c + 1)) {
                return true;
            }
            self.unassign(v);
        }
        false
    }
}

/// A proper colouring with at most `k` colours, or `None`.
pub fn k_colorable(g: &Digraph, k: usize) -> Result<Option<Coloring>> {
    let ug = undirected(g)?;
    Ok(k_colorable_inner(&ug, k, None))
}

fn k_colorable_inner(ug: &Undirected, k: usize, clique: Option<&[usize]>) -> Option<Coloring> {
    let n = ug.adj.len();
    if n == 0 {
        return Some(Coloring {
            colors: vec![],
            k: 0,
        });
    }
    if k == 0 {
        return None;
    }
    let owned;
    let clique = match clique {
        Some(c) => c,
        None => {
            owned = greedy_clique(ug);
            &owned
        }
    };
    if clique.len() > k {
        return None;
    }
    let mut st = Dsatur {
        adj: &ug.adj,
        k,
        color: vec![NONE; n],
        conflicts: vec![0; n * k],
        sat: vec![0; n],
        free: ug.adj.iter().map(Vec::len).collect(),
        colored: 0,
    };
    for (c, &v) in clique.iter().enumerate() {
        if !st.assign(v, c) {
            return None;
        }
    }
    if !st.search(clique.len()) {
        return None;
    }
    let used = st.color.iter().max().map_or(0, |&c| c + 1);
    Some(Coloring {
        colors: st.color,
        k: used,
    })
}

/// An optimal colouring.
pub fn optimal_coloring(g: &Digraph) -> Result<Coloring> {
    let ug = undirected(g)?;
    let n = g.n();
    if n == 0 {
        return Ok(Coloring {
            colors: vec![],
            k: 0,
        });
    }
    let clique = greedy_clique(&ug);
    // first DSATUR descent is a greedy colouring: it never backtracks with k = n
    let mut best = k_colorable_inner(&ug, n, Some(&clique)).expect("n colours always suffice");
    for k in clique.len()..best.k {
        if let Some(c) = k_colorable_inner(&ug, k, Some(&clique)) {
            best = c;
            break;
        }
    }
    debug_assert!(best.is_valid_for(g));
    Ok(best)
}

pub fn chromatic_number(g: &Digraph) -> Result<usize> {
    optimal_coloring(g).map(|c| c.k)
}

/// Size of the greedy clique used as the lower bound.
pub fn clique_lower_bound(g: &Digraph) -> Result<usize> {
    Ok(greedy_clique(&undirected(g)?).len())
}
