//! Finite residuated ortholattices and orthomodular lattices.

pub mod algebra;
pub mod classify;
pub mod congruence;
pub mod consequence;
pub mod enumerate;
pub mod fixtures;
pub mod format;
pub mod laws;
pub mod ops;
pub mod term;

pub use algebra::{build_from_cover, Elem, FiniteAlgebra, Table, Witness};
