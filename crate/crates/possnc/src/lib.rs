//! Possibilistic reasoning over Horn non-clausal (Horn-NC) bases.
//!
//! Bases are weighted NC formulas. The inconsistency degree of a Horn-NC
//! base is computed by a unit-resolution calculus working directly on the
//! non-clausal formulas, and cross-checked against a truth-table oracle.

pub mod calculus;
pub mod cli;
pub mod formula;
pub mod hornnc;
pub mod semantics;
pub mod solver;

pub use formula::{Base, Formula, Literal, Position, Rational, Weight, WeightedFormula};
