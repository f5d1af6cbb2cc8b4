//! Recognition of negative formulas, Horn-NC formulas and Horn-NC bases.

use thiserror::Error;

use crate::formula::{simplify_constants, Base, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HornError {
    #[error("constant or empty connective in formula; simplify constants first")]
    Constant,
}

/// Result of the single bottom-up recognition pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recognition {
    pub negative: bool,
    pub horn_nc: bool,
    /// Nodes visited by the pass.
    pub visits: usize,
}

pub fn recognize(f: &Formula) -> Result<Recognition, HornError> {
    let mut visits = 0;
    let (negative, horn_nc) = classify(f, &mut visits)?;
    Ok(Recognition { negative, horn_nc, visits })
}

fn classify(f: &Formula, visits: &mut usize) -> Result<(bool, bool), HornError> {
    *visits += 1;
    match f {
        Formula::Lit(l) => Ok((!l.positive, true)),
        Formula::Top | Formula::Bottom => Err(HornError::Constant),
        Formula::Conj(c) | Formula::Disj(c) if c.is_empty() => Err(HornError::Constant),
        Formula::Conj(c) => {
            let (mut neg, mut horn) = (true, true);
            for g in c {
                let (n, h) = classify(g, visits)?;
                neg &= n;
                horn &= h;
            }
            Ok((neg, horn))
        }
        Formula::Disj(c) => {
            let (mut neg, mut horn, mut non_negative) = (true, true, 0usize);
            for g in c {
                let (n, h) = classify(g, visits)?;
                neg &= n;
                horn &= h;
                non_negative += usize::from(!n);
            }
            Ok((neg, horn && non_negative <= 1))
        }
    }
}

pub fn is_negative(f: &Formula) -> Result<bool, HornError> {
    Ok(recognize(f)?.negative)
}

pub fn is_horn_nc(f: &Formula) -> Result<bool, HornError> {
    Ok(recognize(f)?.horn_nc)
}

/// Verdict for one base item after constant elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemVerdict {
    HornNc,
    NotHornNc,
    /// The item simplifies to `true` and is ignored.
    Vacuous,
    /// The item simplifies to `false`.
    Contradiction,
}

impl ItemVerdict {
    pub fn accepted(self) -> bool {
        self != ItemVerdict::NotHornNc
    }
}

pub fn classify_item(f: &Formula) -> ItemVerdict {
    match simplify_constants(f) {
        Formula::Top => ItemVerdict::Vacuous,
        Formula::Bottom => ItemVerdict::Contradiction,
        g => match is_horn_nc(&g) {
            Ok(true) => ItemVerdict::HornNc,
            Ok(false) => ItemVerdict::NotHornNc,
            Err(HornError::Constant) => unreachable!("constants were eliminated"),
        },
    }
}

pub fn is_horn_nc_base(s: &Base) -> bool {
    s.items.iter().all(|i| classify_item(&i.formula).accepted())
}

/// Index of the first item that is not Horn-NC.
pub fn first_non_horn(s: &Base) -> Option<usize> {
    s.items.iter().position(|i| !classify_item(&i.formula).accepted())
}
