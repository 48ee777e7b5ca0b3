//! Valued digraphs: a peeling process on acyclic digraphs whose reachable
//! vertex sets ("initial sections") form graded complete meet semi-lattices.
//! Specializations cover the weak orders of types A, B and affine A, a weak
//! order on wreath products, down-set lattices of posets, and the
//! quasisymmetric series attached to all of these.

pub mod digraph;
pub mod flag;
pub mod io;
pub mod lattice;
pub mod order;
pub mod posets;
pub mod quasisym;
pub mod weak_a;
pub mod weak_affine;
pub mod weak_b;

pub use digraph::{
    DigraphError, InitialSection, ValidationReport, ValuedDigraph, VertexId, VertexSet, Violation,
};
