//! Cuts, the Find recursion for the inconsistency degree, and entailment.

use num_traits::Zero;
use thiserror::Error;

use crate::calculus::{saturate_with, Outcome, SaturateOptions, Saturation};
use crate::formula::{negate_nnf, Base, Formula, Rational, Weight, WeightedFormula};
use crate::hornnc::first_non_horn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("item {index} is not Horn-NC: {formula}")]
    NotHornNc { index: usize, formula: Formula },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutSpec {
    pub threshold: Weight,
    pub strict: bool,
}

pub fn alpha_cut(s: &Base, c: CutSpec) -> Base {
    Base::new(
        s.items
            .iter()
            .filter(|i| if c.strict { i.weight > c.threshold } else { i.weight >= c.threshold })
            .cloned()
            .collect(),
    )
}

/// One saturation of the recursion.
#[derive(Debug, Clone)]
pub struct Round {
    /// Strict cut threshold, `None` for the first round.
    pub above: Option<Weight>,
    pub base: Base,
    pub saturation: Saturation,
}

#[derive(Debug, Clone)]
pub struct FindReport {
    pub inc: Rational,
    pub rounds: Vec<Round>,
    pub inferences: usize,
    /// Recursive calls after the first saturation.
    pub recursions: usize,
    /// Size of the input times its number of distinct weights.
    pub bound: usize,
}

fn check_horn(s: &Base) -> Result<(), SolverError> {
    match first_non_horn(s) {
        Some(index) => Err(SolverError::NotHornNc { index, formula: s.items[index].formula.clone() }),
        None => Ok(()),
    }
}

pub fn find_inc(s: &Base) -> Result<Rational, SolverError> {
    Ok(find_inc_report(s, SaturateOptions::default())?.inc)
}

pub fn find_inc_with(s: &Base, opts: SaturateOptions) -> Result<Rational, SolverError> {
    Ok(find_inc_report(s, opts)?.inc)
}

/// Saturates, and on an empty clause at `a` recurses on the strict `a`-cut
/// of the input extended with the deduced literals weighing more than `a`.
pub fn find_inc_report(s: &Base, opts: SaturateOptions) -> Result<FindReport, SolverError> {
    check_horn(s)?;
    Ok(find_unchecked(s, opts))
}

pub(crate) fn find_unchecked(s: &Base, opts: SaturateOptions) -> FindReport {
    let bound = s.size() * s.weights().len();
    let mut inc = Rational::zero();
    let mut above: Option<Weight> = None;
    let mut base = s.clone();
    let mut rounds = Vec::new();
    let mut inferences = 0;
    loop {
        let saturation = saturate_with(&base, opts);
        inferences += saturation.inferences;
        let outcome = saturation.derivation.outcome;
        let units = saturation.derived_units();
        rounds.push(Round { above, base: base.clone(), saturation });
        let Outcome::EmptyClauseFound(a) = outcome else { break };
        inc = a.value();
        above = Some(a);
        let mut next = alpha_cut(s, CutSpec { threshold: a, strict: true });
        for u in units.into_iter().filter(|u| u.weight > a) {
            let dominated = next.items.iter().any(|i| i.formula == u.formula && i.weight >= u.weight);
            if !dominated {
                next.items.push(u);
            }
        }
        base = next;
    }
    let recursions = rounds.len() - 1;
    assert!(inferences <= bound, "{inferences} inferences exceed the bound {bound}");
    assert!(recursions <= bound, "{recursions} recursions exceed the bound {bound}");
    FindReport { inc, rounds, inferences, recursions, bound }
}

pub fn augmented(s: &Base, f: &Formula) -> Base {
    let mut aug = s.clone();
    aug.items.push(WeightedFormula::new(negate_nnf(f), Weight::one()));
    aug
}

/// Degree to which `s` entails `f`.
pub fn entails(s: &Base, f: &Formula) -> Result<Rational, SolverError> {
    find_inc(&augmented(s, f))
}

pub fn is_consistent(s: &Base) -> Result<bool, SolverError> {
    Ok(find_inc(s)?.is_zero())
}
