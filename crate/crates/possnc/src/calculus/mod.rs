//! The unit-resolution calculus for possibilistic NC bases.

mod engine;
mod rules;
mod split;

use thiserror::Error;

use crate::formula::Position;

pub use engine::{
    saturate, saturate_with, Derivation, EngineItem, ItemStatus, Outcome, Rule, SaturateOptions, Saturation, Step,
};
pub use rules::{hur_step, lur_step, max_n, min_d, simplify_structural, ur_p_saturate, ur_sigma_step, UrPOutcome};
pub use split::{extract_cd, CDSplit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("position {0} does not address a node")]
    InvalidPosition(Position),
    #[error("position {0} does not address a literal")]
    NotALiteral(Position),
    #[error("no complementary literal at position {0}")]
    PatternAbsent(Position),
    #[error("unit premise is not a literal")]
    NotAUnit,
    #[error("formula is not a conjunction")]
    NotAConjunction,
    #[error("formulas are not identical after simplification")]
    FormulasDiffer,
    #[error("formula is not Horn-NC")]
    NotHornNc,
    #[error("split disjunction is outside the literal's conjunctive scope")]
    NoCommonScope,
    #[error("occurrence {0} removes the region containing occurrence {1}")]
    Overlap(Position, Position),
    #[error("occurrence {0} is designated twice")]
    DuplicateOccurrence(Position),
}
