//! C/D splitting around a literal occurrence.

use crate::formula::{Formula, Position};

use super::CalculusError;

/// The disjunction enclosing an occurrence, split into the disjunct `C`
/// conjunctively linked to the occurrence and the remaining disjuncts `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CDSplit {
    pub disj_pos: Position,
    pub c_child_index: usize,
    pub c_formula: Formula,
    pub d_children: Vec<Formula>,
}

impl CDSplit {
    pub fn c_pos(&self) -> Position {
        self.disj_pos.child(self.c_child_index)
    }

    pub fn d_formula(&self) -> Formula {
        Formula::Disj(self.d_children.clone())
    }
}

/// Where an occurrence's conjunctive chain ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Anchor {
    Split(CDSplit),
    /// The chain reaches the root: the occurrence is a top-level conjunct.
    Root,
    /// The enclosing disjunction has no other disjunct.
    Lone { disj_pos: Position },
}

/// Highest ancestor of `pos` (itself included) reachable through
/// conjunction parents only.
pub(crate) fn chain_top(f: &Formula, pos: &Position) -> Position {
    let mut cur = pos.clone();
    while let Some(parent) = cur.parent() {
        match f.subformula(&parent) {
            Some(Formula::Conj(_)) => cur = parent,
            _ => break,
        }
    }
    cur
}

pub(crate) fn literal_at<'a>(f: &'a Formula, occ: &Position) -> Result<&'a crate::formula::Literal, CalculusError> {
    match f.subformula(occ) {
        None => Err(CalculusError::InvalidPosition(occ.clone())),
        Some(Formula::Lit(l)) => Ok(l),
        Some(_) => Err(CalculusError::NotALiteral(occ.clone())),
    }
}

pub(crate) fn anchor(f: &Formula, occ: &Position) -> Result<Anchor, CalculusError> {
    literal_at(f, occ)?;
    let top = chain_top(f, occ);
    let Some(disj_pos) = top.parent() else {
        return Ok(Anchor::Root);
    };
    let children = f.subformula(&disj_pos).expect("parent exists").children();
    if children.len() == 1 {
        return Ok(Anchor::Lone { disj_pos });
    }
    let c_child_index = *top.0.last().expect("non-root");
    let d_children = children
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != c_child_index)
        .map(|(_, g)| g.clone())
        .collect();
    Ok(Anchor::Split(CDSplit {
        disj_pos,
        c_child_index,
        c_formula: children[c_child_index].clone(),
        d_children,
    }))
}

/// Splits the disjunction enclosing the literal at `occ`. Returns `None`
/// when the occurrence is a top-level conjunct or its disjunction has a
/// single disjunct.
pub fn extract_cd(pi: &Formula, occ: &Position) -> Result<Option<CDSplit>, CalculusError> {
    Ok(match anchor(pi, occ)? {
        Anchor::Split(s) => Some(s),
        _ => None,
    })
}

/// Deletes the `C` part of every anchor at once. Anchors whose `C` region
/// contains another designated occurrence are rejected.
pub(crate) fn remove_regions(f: &Formula, occs: &[Position]) -> Result<Formula, CalculusError> {
    let mut anchors = Vec::with_capacity(occs.len());
    for (i, o) in occs.iter().enumerate() {
        if occs[..i].contains(o) {
            return Err(CalculusError::DuplicateOccurrence(o.clone()));
        }
        anchors.push(anchor(f, o)?);
    }
    if anchors.iter().any(|a| matches!(a, Anchor::Root)) {
        return Ok(Formula::empty_clause());
    }
    // (disjunction, child indices to delete; empty means the whole node)
    let mut edits: Vec<(Position, Vec<usize>)> = Vec::new();
    for (o, a) in occs.iter().zip(&anchors) {
        let (disj, region, idx) = match a {
            Anchor::Split(s) => (s.disj_pos.clone(), s.c_pos(), Some(s.c_child_index)),
            Anchor::Lone { disj_pos } => (disj_pos.clone(), disj_pos.clone(), None),
            Anchor::Root => unreachable!(),
        };
        if let Some(other) = occs.iter().find(|p| *p != o && p.is_within(&region)) {
            return Err(CalculusError::Overlap(o.clone(), other.clone()));
        }
        match edits.iter_mut().find(|(d, _)| *d == disj) {
            Some((_, del)) => del.extend(idx),
            None => edits.push((disj, idx.into_iter().collect())),
        }
    }
    edits.sort_by(|a, b| b.0.cmp(&a.0));
    let mut out = f.clone();
    for (disj, del) in edits {
        let node = out.subformula(&disj).expect("edits address disjunctions");
        let kept: Vec<Formula> = if del.is_empty() {
            Vec::new()
        } else {
            node.children().iter().enumerate().filter(|(i, _)| !del.contains(i)).map(|(_, g)| g.clone()).collect()
        };
        out = out.replace_at(&disj.0, Formula::Disj(kept)).expect("valid position");
    }
    Ok(out)
}
