//! Iterated arc graphs, their right adjoint, ideal lattices and exact
//! chromatic numbers.
//!
//! The central computation is the chromatic number of the `k`-fold arc graph
//! of a graph, which can be read off from the widths of iterated ideal
//! lattices of antichains. Everything needed to check that on concrete inputs
//! lives here: digraph constructions, an exact coloring solver, poset
//! machinery (ideal enumeration, Dilworth width) and the right adjoint of the
//! arc-graph functor.

pub mod adjoint;
pub mod bits;
pub mod coloring;
pub mod digraph;
pub mod error;
pub mod par;
pub mod poset;
pub mod verify;

pub use coloring::{chromatic_number, k_colorable, optimal_coloring, Coloring};
pub use digraph::{
    arc_graph, find_homomorphism, generate, iterated_arc_graph, Digraph, GraphKind, Label,
    VertexMap,
};
pub use error::{Error, Result};
pub use par::Exec;
pub use poset::{b_value, ideal_lattice, iterated_ideal_lattice, width, BTable, Poset};

/// Size limits shared by the expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Most lattice elements any enumeration may produce.
    pub elements: usize,
    /// Largest poset handed to the width computation.
    pub width_elements: usize,
    /// Most candidate subset pairs (`4^n`) for the right adjoint.
    pub pairs: usize,
    /// Largest graph the verification harness will color.
    pub graph_vertices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            elements: 10_000_000,
            width_elements: 100_000,
            pairs: 1 << 20,
            graph_vertices: 5_000,
        }
    }
}
