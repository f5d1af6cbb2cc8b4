//! Truth-table ground truth: evaluation, possibility distributions, the
//! inconsistency-degree oracle and the distributive clausal transform.
//! Deliberately naive.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{negate_nnf, Base, Formula, Literal, Rational, Weight, WeightedFormula};

pub const DEFAULT_ATOM_BUDGET: usize = 20;
pub const DEFAULT_CLAUSE_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("proposition {0} is not assigned")]
    Unbound(String),
    #[error("{found} propositions exceed the enumeration budget of {budget}")]
    AtomBudget { found: usize, budget: usize },
    #[error("clausal transform exceeds the budget of {0} clauses")]
    ClauseBudget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interpretation(pub BTreeMap<Arc<str>, bool>);

impl Interpretation {
    pub fn from_pairs(pairs: &[(&str, bool)]) -> Self {
        Interpretation(pairs.iter().map(|&(a, v)| (Arc::from(a), v)).collect())
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.0.get(atom).copied()
    }
}

pub fn evaluate(w: &Interpretation, f: &Formula) -> Result<bool, SemanticsError> {
    Ok(match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Lit(l) => {
            let v = w.get(&l.atom).ok_or_else(|| SemanticsError::Unbound(l.atom.to_string()))?;
            v == l.positive
        }
        Formula::Conj(c) => {
            for g in c {
                if !evaluate(w, g)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Disj(c) => {
            for g in c {
                if evaluate(w, g)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// A formula with atoms replaced by bit indices, for enumeration.
enum Compiled {
    Const(bool),
    Lit(u32, bool),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    fn new(f: &Formula, index: &HashMap<Arc<str>, u32>) -> Self {
        match f {
            Formula::Top => Compiled::Const(true),
            Formula::Bottom => Compiled::Const(false),
            Formula::Lit(l) => Compiled::Lit(index[&l.atom], l.positive),
            Formula::Conj(c) => Compiled::And(c.iter().map(|g| Compiled::new(g, index)).collect()),
            Formula::Disj(c) => Compiled::Or(c.iter().map(|g| Compiled::new(g, index)).collect()),
        }
    }

    fn eval(&self, mask: u64) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Lit(i, pos) => ((mask >> i) & 1 == 1) == *pos,
            Compiled::And(c) => c.iter().all(|g| g.eval(mask)),
            Compiled::Or(c) => c.iter().any(|g| g.eval(mask)),
        }
    }
}

struct Enumeration {
    atoms: Vec<Arc<str>>,
    items: Vec<(Compiled, Rational)>,
}

impl Enumeration {
    fn new<'a>(
        formulas: impl Iterator<Item = (&'a Formula, Rational)> + Clone,
        budget: usize,
    ) -> Result<Self, SemanticsError> {
        let mut set = std::collections::BTreeSet::new();
        for (f, _) in formulas.clone() {
            f.collect_atoms(&mut set);
        }
        let atoms: Vec<Arc<str>> = set.into_iter().collect();
        let budget = budget.min(63);
        if atoms.len() > budget {
            return Err(SemanticsError::AtomBudget { found: atoms.len(), budget });
        }
        let index: HashMap<Arc<str>, u32> =
            atoms.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();
        let items = formulas.map(|(f, a)| (Compiled::new(f, &index), a)).collect();
        Ok(Enumeration { atoms, items })
    }

    fn masks(&self) -> std::ops::Range<u64> {
        0..(1u64 << self.atoms.len())
    }

    fn pi(&self, mask: u64) -> Rational {
        let mut pi = Rational::one();
        for (f, a) in &self.items {
            if !f.eval(mask) {
                pi = pi.min(Rational::one() - a);
            }
        }
        pi
    }

    fn satisfiable(&self) -> bool {
        self.masks().any(|m| self.items.iter().all(|(f, _)| f.eval(m)))
    }
}

pub fn is_consistent_oracle(f: &Formula) -> Result<bool, SemanticsError> {
    is_consistent_oracle_with_budget(f, DEFAULT_ATOM_BUDGET)
}

pub fn is_consistent_oracle_with_budget(f: &Formula, budget: usize) -> Result<bool, SemanticsError> {
    let e = Enumeration::new(std::iter::once((f, Rational::one())), budget)?;
    Ok(e.satisfiable())
}

pub fn pi_sigma(w: &Interpretation, s: &Base) -> Result<Rational, SemanticsError> {
    let mut pi = Rational::one();
    for it in &s.items {
        if !evaluate(w, &it.formula)? {
            pi = pi.min(Rational::one() - it.weight.value());
        }
    }
    Ok(pi)
}

fn weighted(s: &Base) -> impl Iterator<Item = (&Formula, Rational)> + Clone {
    s.items.iter().map(|i| (&i.formula, i.weight.value()))
}

/// `1 - max_w pi_sigma(w)`.
pub fn inc_oracle(s: &Base) -> Result<Rational, SemanticsError> {
    inc_oracle_with_budget(s, DEFAULT_ATOM_BUDGET)
}

pub fn inc_oracle_with_budget(s: &Base, budget: usize) -> Result<Rational, SemanticsError> {
    let e = Enumeration::new(weighted(s), budget)?;
    let mut best = Rational::zero();
    for m in e.masks() {
        best = best.max(e.pi(m));
        if best.is_one() {
            break;
        }
    }
    Ok(Rational::one() - best)
}

/// `max{a | the a-cut is inconsistent}`, by model enumeration of each cut.
pub fn inc_by_cuts(s: &Base) -> Result<Rational, SemanticsError> {
    inc_by_cuts_with_budget(s, DEFAULT_ATOM_BUDGET)
}

pub fn inc_by_cuts_with_budget(s: &Base, budget: usize) -> Result<Rational, SemanticsError> {
    let mut inc = Rational::zero();
    for a in s.weights() {
        let cut = s.items.iter().filter(|i| i.weight >= a).map(|i| (&i.formula, Rational::one()));
        let e = Enumeration::new(cut, budget)?;
        if !e.satisfiable() {
            inc = a.value();
        }
    }
    Ok(inc)
}

/// Largest `a` such that `s` entails `f` at weight `a`.
pub fn necessity_oracle(s: &Base, f: &Formula) -> Result<Rational, SemanticsError> {
    let mut aug = s.clone();
    aug.items.push(WeightedFormula::new(negate_nnf(f), Weight::one()));
    inc_oracle(&aug)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClausalFormula {
    pub clauses: Vec<Vec<Literal>>,
}

impl ClausalFormula {
    pub fn evaluate(&self, w: &Interpretation) -> Result<bool, SemanticsError> {
        for c in &self.clauses {
            let mut sat = false;
            for l in c {
                let v = w.get(&l.atom).ok_or_else(|| SemanticsError::Unbound(l.atom.to_string()))?;
                if v == l.positive {
                    sat = true;
                    break;
                }
            }
            if !sat {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::Conj(
            self.clauses
                .iter()
                .map(|c| Formula::Disj(c.iter().cloned().map(Formula::Lit).collect()))
                .collect(),
        )
    }
}

impl fmt::Display for ClausalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

pub fn cl_transform(f: &Formula) -> Result<ClausalFormula, SemanticsError> {
    cl_transform_with_budget(f, DEFAULT_CLAUSE_BUDGET)
}

/// Distributes disjunctions over conjunctions, innermost first and left to
/// right. Clauses keep every literal occurrence (no merging).
pub fn cl_transform_with_budget(f: &Formula, budget: usize) -> Result<ClausalFormula, SemanticsError> {
    Ok(ClausalFormula { clauses: cl_rec(f, budget)? })
}

fn cl_rec(f: &Formula, budget: usize) -> Result<Vec<Vec<Literal>>, SemanticsError> {
    let out = match f {
        Formula::Top => Vec::new(),
        Formula::Bottom => vec![Vec::new()],
        Formula::Lit(l) => vec![vec![l.clone()]],
        Formula::Conj(c) => {
            let mut out = Vec::new();
            for g in c {
                out.extend(cl_rec(g, budget)?);
                if out.len() > budget {
                    return Err(SemanticsError::ClauseBudget(budget));
                }
            }
            out
        }
        Formula::Disj(c) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for g in c {
                let part = cl_rec(g, budget)?;
                if acc.len().saturating_mul(part.len()) > budget {
                    return Err(SemanticsError::ClauseBudget(budget));
                }
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for b in &part {
                        let mut clause = a.clone();
                        clause.extend(b.iter().cloned());
                        next.push(clause);
                    }
                }
                acc = next;
            }
            acc
        }
    };
    Ok(out)
}

pub fn is_horn_clausal(c: &ClausalFormula) -> bool {
    c.clauses.iter().all(|cl| cl.iter().filter(|l| l.positive).count() <= 1)
}

/// Every interpretation over `atoms`, in binary counting order.
pub fn interpretations(atoms: &[Arc<str>]) -> impl Iterator<Item = Interpretation> + '_ {
    assert!(atoms.len() < 32, "too many atoms to enumerate");
    (0u32..(1u32 << atoms.len())).map(move |m| {
        Interpretation(atoms.iter().enumerate().map(|(i, a)| (a.clone(), (m >> i) & 1 == 1)).collect())
    })
}
