//! Single-step inference and simplification rules.

use crate::formula::{Formula, Literal, Position, WeightedFormula};
use crate::hornnc::is_horn_nc;

use super::split::{anchor, chain_top, literal_at, remove_regions, Anchor};
use super::CalculusError;

/// Applies the four structural rules bottom-up until none applies:
/// `(or)` disappears from disjunctions, absorbs conjunctions, single-child
/// connectives are unwrapped and same-connective nesting is spliced.
pub fn simplify_structural(f: &Formula) -> Formula {
    match f {
        Formula::Conj(c) | Formula::Disj(c) => {
            let conj = matches!(f, Formula::Conj(_));
            let mut out = Vec::with_capacity(c.len());
            for g in c {
                let g = simplify_structural(g);
                if g.is_empty_clause() {
                    if conj {
                        return Formula::empty_clause();
                    }
                    continue;
                }
                match g {
                    Formula::Conj(inner) if conj => out.extend(inner),
                    Formula::Disj(inner) if !conj => out.extend(inner),
                    g => out.push(g),
                }
            }
            if out.len() == 1 {
                return out.pop().unwrap();
            }
            if conj {
                Formula::Conj(out)
            } else {
                Formula::Disj(out)
            }
        }
        _ => f.clone(),
    }
}

fn unit_literal(unit: &WeightedFormula) -> Result<&Literal, CalculusError> {
    match &unit.formula {
        Formula::Lit(l) => Ok(l),
        Formula::Disj(c) if c.len() == 1 => c[0].as_literal().ok_or(CalculusError::NotAUnit),
        _ => Err(CalculusError::NotAUnit),
    }
}

fn check_complement(target: &Formula, occ: &Position, lit: &Literal) -> Result<(), CalculusError> {
    let found = literal_at(target, occ).map_err(|e| match e {
        CalculusError::NotALiteral(p) => CalculusError::PatternAbsent(p),
        e => e,
    })?;
    if found.atom == lit.atom && found.positive != lit.positive {
        Ok(())
    } else {
        Err(CalculusError::PatternAbsent(occ.clone()))
    }
}

/// Unit resolution of `unit` against the occurrence at `occ` in `target`:
/// the `C` disjunct of the split is deleted and the weight is the minimum.
/// An occurrence that is a top-level conjunct yields `(or)`, and a lone
/// disjunct leaves an empty disjunction in place. The result is not
/// simplified.
pub fn ur_sigma_step(
    unit: &WeightedFormula,
    target: &WeightedFormula,
    occ: &Position,
) -> Result<WeightedFormula, CalculusError> {
    let lit = unit_literal(unit)?;
    check_complement(&target.formula, occ, lit)?;
    let formula = remove_regions(&target.formula, std::slice::from_ref(occ))?;
    Ok(WeightedFormula::new(formula, unit.weight.min(target.weight)))
}

pub fn min_d(item: &WeightedFormula) -> Result<Vec<WeightedFormula>, CalculusError> {
    match &item.formula {
        Formula::Conj(c) => Ok(c.iter().map(|g| WeightedFormula::new(g.clone(), item.weight)).collect()),
        _ => Err(CalculusError::NotAConjunction),
    }
}

pub fn max_n(a: &WeightedFormula, b: &WeightedFormula) -> Result<WeightedFormula, CalculusError> {
    let fa = simplify_structural(&a.formula);
    if fa != simplify_structural(&b.formula) {
        return Err(CalculusError::FormulasDiffer);
    }
    Ok(WeightedFormula::new(fa, a.weight.max(b.weight)))
}

/// Local unit resolution: the literal at `lit_occ` deletes the `C` part
/// around the complementary occurrence at `neg_occ`, provided the split
/// disjunction lies inside the literal's conjunctive scope.
pub fn lur_step(
    item: &WeightedFormula,
    lit_occ: &Position,
    neg_occ: &Position,
) -> Result<WeightedFormula, CalculusError> {
    let lit = literal_at(&item.formula, lit_occ)?.clone();
    check_complement(&item.formula, neg_occ, &lit)?;
    let scope = chain_top(&item.formula, lit_occ);
    match anchor(&item.formula, neg_occ)? {
        Anchor::Split(s) if s.disj_pos.is_within(&scope) => {}
        Anchor::Lone { disj_pos } if disj_pos.is_within(&scope) => {}
        _ => return Err(CalculusError::NoCommonScope),
    }
    let formula = remove_regions(&item.formula, std::slice::from_ref(neg_occ))?;
    Ok(WeightedFormula::new(formula, item.weight))
}

/// Simultaneous unit resolution of one unit against several occurrences.
/// Occurrences in the same target are rewritten in a single copy of it;
/// targets are identified by value and reported in first-seen order.
pub fn hur_step(
    unit: &WeightedFormula,
    targets: &[(WeightedFormula, Position)],
) -> Result<Vec<WeightedFormula>, CalculusError> {
    let lit = unit_literal(unit)?;
    let mut groups: Vec<(&WeightedFormula, Vec<Position>)> = Vec::new();
    for (t, occ) in targets {
        check_complement(&t.formula, occ, lit)?;
        match groups.iter_mut().find(|(g, _)| *g == t) {
            Some((_, occs)) => occs.push(occ.clone()),
            None => groups.push((t, vec![occ.clone()])),
        }
    }
    groups
        .into_iter()
        .map(|(t, occs)| {
            let formula = remove_regions(&t.formula, &occs)?;
            Ok(WeightedFormula::new(formula, unit.weight.min(t.weight)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Scope {
    /// Only top-level conjuncts resolve (UR_P).
    Root,
    /// Any literal resolves inside its own conjunctive scope (LUR).
    Local,
}

/// One rewrite of a local saturation run.
#[derive(Debug, Clone)]
pub(crate) struct LocalStep {
    pub(crate) simultaneous: bool,
    pub(crate) raw: Formula,
}

pub(crate) struct LocalRun {
    pub(crate) steps: Vec<LocalStep>,
    pub(crate) result: Formula,
}

/// Finds the next local resolution opportunity in a structurally simplified
/// formula and returns the rewritten (unsimplified) formula. When
/// `simultaneous` is set every admissible complementary occurrence in the
/// scope is removed at once, falling back to the first on overlap.
fn local_rewrite(f: &Formula, scope_kind: Scope, simultaneous: bool) -> Option<LocalStep> {
    let occurrences = crate::formula::literal_occurrences(f);
    for (pos, lit) in &occurrences {
        let scope = chain_top(f, pos);
        if scope_kind == Scope::Root && scope != Position::root() {
            continue;
        }
        let comp = lit.complement();
        let mut hits = Vec::new();
        for (npos, nlit) in &occurrences {
            if *nlit != comp || !npos.is_within(&scope) {
                continue;
            }
            let top = chain_top(f, npos);
            if top == scope {
                // Both literals are conjuncts of the same chain.
                let raw = f.replace_at(&scope.0, Formula::empty_clause()).expect("valid scope");
                return Some(LocalStep { simultaneous: false, raw });
            }
            match anchor(f, npos).expect("literal occurrence") {
                Anchor::Split(s) if s.disj_pos.is_within(&scope) => hits.push(npos.clone()),
                Anchor::Lone { disj_pos } if disj_pos.is_within(&scope) => hits.push(npos.clone()),
                _ => {}
            }
        }
        if hits.is_empty() {
            continue;
        }
        if simultaneous && hits.len() > 1 {
            if let Ok(raw) = remove_regions(f, &hits) {
                return Some(LocalStep { simultaneous: true, raw });
            }
        }
        let raw = remove_regions(f, &hits[..1]).expect("single occurrence");
        return Some(LocalStep { simultaneous: false, raw });
    }
    None
}

pub(crate) fn local_saturate(f: &Formula, scope: Scope, simultaneous: bool) -> LocalRun {
    let mut cur = simplify_structural(f);
    let mut steps = Vec::new();
    while !cur.is_empty_clause() {
        let Some(step) = local_rewrite(&cur, scope, simultaneous) else { break };
        cur = simplify_structural(&step.raw);
        steps.push(step);
    }
    LocalRun { steps, result: cur }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UrPOutcome {
    Inconsistent,
    Consistent(Formula),
}

/// Saturates a Horn-NC formula with its own top-level literals. Resolving
/// literals are kept in the formula.
pub fn ur_p_saturate(item: &WeightedFormula) -> Result<UrPOutcome, CalculusError> {
    let f = simplify_structural(&item.formula);
    if f.is_empty_clause() {
        return Ok(UrPOutcome::Inconsistent);
    }
    if !is_horn_nc(&f).map_err(|_| CalculusError::NotHornNc)? {
        return Err(CalculusError::NotHornNc);
    }
    let run = local_saturate(&f, Scope::Root, false);
    Ok(if run.result.is_empty_clause() {
        UrPOutcome::Inconsistent
    } else {
        UrPOutcome::Consistent(run.result)
    })
}
