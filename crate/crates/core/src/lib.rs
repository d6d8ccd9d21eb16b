//! Exact canonical local heights on tropical tori.

pub mod doubling;
pub mod evaluator;
pub mod geometry;
pub mod ledger;
pub mod linalg;
pub mod measure;
pub mod metric;
pub mod pl;
pub mod rat;

pub use geometry::{AffineMap, Lattice, RationalSimplex, TorusPoint};
pub use rat::Rat;
