use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Poset;
use crate::error::Result;

/// Wire form of a poset. `less` may be any acyclic relation on input; on
/// output it is the cover relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<usize>>>,
    pub less: Vec<[usize; 2]>,
    pub m: usize,
}

impl Poset {
    pub fn to_json(&self) -> Result<String> {
        let j = PosetJson {
            labels: self
                .labels()
                .map(|l| (0..l.len()).map(|i| l.elements(i)).collect()),
            less: self.covers()?.into_iter().map(|(u, v)| [u, v]).collect(),
            m: self.m(),
        };
        Ok(serde_json::to_string(&j)?)
    }

    /// Parses and transitively closes the relation; labels are ignored.
    pub fn from_json(text: &str) -> Result<Poset> {
        let j: PosetJson = serde_json::from_str(text)?;
        Poset::from_relation(j.m, j.less.into_iter().map(|[u, v]| (u, v)))
    }

    /// Graphviz source for the Hasse diagram, bottom to top.
    pub fn hasse_dot(&self) -> Result<String> {
        let mut s = String::from("digraph Hasse {\n  rankdir=BT;\n");
        for v in 0..self.m() {
            match self.labels() {
                Some(l) => {
                    let elems: Vec<String> = l.elements(v).iter().map(|e| e.to_string()).collect();
                    let _ = writeln!(s, "  {v} [label=\"{{{}}}\"];", elems.join(","));
                }
                None => {
                    let _ = writeln!(s, "  {v};");
                }
            }
        }
        for (u, v) in self.covers()? {
            let _ = writeln!(s, "  {u} -> {v};");
        }
        s.push_str("}\n");
        Ok(s)
    }
}
