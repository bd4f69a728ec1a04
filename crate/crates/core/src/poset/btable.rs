//! Persistent table of computed widths `b(n, k)`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{iterated_ideal_lattice, width_with_limit};
use crate::error::{Error, Result};
use crate::Budget;

/// Width of `I^k(K̄_n)`, computed from scratch.
pub fn b_value(n: usize, k: usize, budget: &Budget) -> Result<usize> {
    let lattice = iterated_ideal_lattice(n, k, budget.elements)?;
    Ok(width_with_limit(&lattice, budget.width_elements)?.width())
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct TableFile {
    entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    b: usize,
    k: usize,
    n: usize,
}

/// Cache of `b(n, k)` values, optionally backed by a JSON file.
///
/// All access goes through one mutex. A computation runs outside the lock;
/// the result is checked against whatever another writer stored meanwhile.
#[derive(Debug, Default)]
pub struct BTable {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<(usize, usize), usize>>,
    recompute: bool,
}

impl BTable {
    pub fn in_memory() -> Self {
        BTable::default()
    }

    /// Loads `path` if it exists; a missing file is an empty table.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let file: TableFile = serde_json::from_str(&text)?;
            for e in file.entries {
                if let Some(old) = entries.insert((e.n, e.k), e.b) {
                    if old != e.b {
                        return Err(Error::TableMismatch {
                            n: e.n,
                            k: e.k,
                            cached: old,
                            computed: e.b,
                        });
                    }
                }
            }
        }
        Ok(BTable {
            path: Some(path),
            entries: Mutex::new(entries),
            recompute: false,
        })
    }

    /// Ignore cached values when asked, recomputing and cross-checking them.
    pub fn recompute_all(mut self, yes: bool) -> Self {
        self.recompute = yes;
        self
    }

    pub fn get(&self, n: usize, k: usize) -> Option<usize> {
        self.entries.lock().unwrap().get(&(n, k)).copied()
    }

    pub fn insert(&self, n: usize, k: usize, b: usize) -> Result<()> {
        let mut map = self.entries.lock().unwrap();
        match map.get(&(n, k)) {
            Some(&cached) if cached != b => Err(Error::TableMismatch {
                n,
                k,
                cached,
                computed: b,
            }),
            _ => {
                map.insert((n, k), b);
                Ok(())
            }
        }
    }

    /// Cached value, or compute and record it.
    pub fn b(&self, n: usize, k: usize, budget: &Budget) -> Result<usize> {
        if !self.recompute {
            if let Some(b) = self.get(n, k) {
                return Ok(b);
            }
        }
        let b = b_value(n, k, budget)?;
        self.insert(n, k, b)?;
        Ok(b)
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize)> {
        self.entries
            .lock()
            .unwrap()
            .iter()
            .map(|(&(n, k), &b)| (n, k, b))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            entries: self
                .entries()
                .into_iter()
                .map(|(n, k, b)| Entry { b, k, n })
                .collect(),
        };
        serde_json::to_string(&file).expect("table serializes")
    }

    /// Writes the table back to its file, if it has one.
    pub fn save(&self) -> Result<()> {
        if let Some(path) = &self.path {
            std::fs::write(path, self.to_json())?;
        }
        Ok(())
    }
}
