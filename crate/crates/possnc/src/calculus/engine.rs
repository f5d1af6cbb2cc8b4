//! Saturation engine.
//!
//! Items are processed depth-first in base order. Processing an item first
//! resolves it against the most recently processed unit that has a
//! complementary occurrence in it; the item is then replaced by the
//! resolvent. Conjunctions with nothing to resolve are split by MinD, and
//! a new unit is resolved against every earlier item that mentions its
//! complement. Each resolution deletes at least one literal leaf from the
//! lineage of a base item, which bounds the number of inferences by the
//! base size.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::formula::{
    literal_occurrences, locate_literal, simplify_constants, Base, Formula, Literal, Position, Weight,
    WeightedFormula,
};

use super::rules::{local_saturate, simplify_structural, Scope};
use super::split::remove_regions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SaturateOptions {
    pub lur: bool,
    pub hur: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    #[serde(rename = "UR_Sigma")]
    UrSigma,
    #[serde(rename = "UR_P")]
    UrP,
    #[serde(rename = "LUR")]
    Lur,
    #[serde(rename = "HUR")]
    Hur,
    MinD,
    MaxN,
    Simplify,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::UrSigma => "UR_Sigma",
            Rule::UrP => "UR_P",
            Rule::Lur => "LUR",
            Rule::Hur => "HUR",
            Rule::MinD => "MinD",
            Rule::MaxN => "MaxN",
            Rule::Simplify => "Simplify",
        }
    }

    /// Resolution rules; the others are bookkeeping.
    pub fn is_inference(self) -> bool {
        matches!(self, Rule::UrSigma | Rule::UrP | Rule::Lur | Rule::Hur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub conclusion: WeightedFormula,
    /// Engine item holding the conclusion.
    pub item: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    EmptyClauseFound(Weight),
    Fixpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

#[derive(Serialize)]
pub(crate) struct StepView {
    pub(crate) index: usize,
    pub(crate) rule: Rule,
    pub(crate) premises: Vec<usize>,
    pub(crate) conclusion: String,
    pub(crate) weight: String,
    pub(crate) item: usize,
}

impl Derivation {
    /// One `step N: RULE premises -> conclusion : weight` line per step.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            let premises: Vec<String> = s.premises.iter().map(|p| format!("#{p}")).collect();
            let _ = writeln!(
                out,
                "step {}: {} {} -> {} [#{}]",
                i + 1,
                s.rule.name(),
                premises.join(","),
                s.conclusion,
                s.item
            );
        }
        match self.outcome {
            Outcome::EmptyClauseFound(w) => {
                let _ = writeln!(out, "outcome: empty clause at {w}");
            }
            Outcome::Fixpoint => out.push_str("outcome: fixpoint\n"),
        }
        out
    }

    pub(crate) fn views(&self) -> Vec<StepView> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepView {
                index: i + 1,
                rule: s.rule,
                premises: s.premises.clone(),
                conclusion: s.conclusion.formula.to_string(),
                weight: s.conclusion.weight.to_string(),
                item: s.item,
            })
            .collect()
    }

    pub fn conclusions(&self) -> impl Iterator<Item = &WeightedFormula> {
        self.steps.iter().map(|s| &s.conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemStatus {
    /// Available as premise and target.
    Active,
    /// Replaced by a resolvent, a simplification or its MinD conjuncts.
    Superseded,
    /// A copy with at least the same weight exists.
    Dominated,
    /// An intermediate conclusion awaiting simplification.
    Transient,
    /// Simplified to `true`.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineItem {
    pub item: WeightedFormula,
    pub status: ItemStatus,
}

#[derive(Debug, Clone)]
pub struct Saturation {
    pub derivation: Derivation,
    pub items: Vec<EngineItem>,
    pub inferences: usize,
    input_len: usize,
    canonical: Vec<usize>,
}

impl Saturation {
    /// Input plus deduced items, one per canonical formula at its best
    /// weight.
    pub fn base(&self) -> Base {
        Base::new(self.canonical.iter().map(|&i| self.items[i].item.clone()).collect())
    }

    /// Deduced literals that survived MaxN.
    pub fn derived_units(&self) -> Vec<WeightedFormula> {
        self.canonical
            .iter()
            .filter(|&&i| i >= self.input_len && self.items[i].item.formula.as_literal().is_some())
            .map(|&i| self.items[i].item.clone())
            .collect()
    }
}

enum Frame {
    Process(usize),
    Scan { unit: usize, targets: Vec<usize>, next: usize },
}

enum Added {
    New(usize),
    Kept { id: usize, promote: bool },
    Stop,
}

struct Engine {
    opts: SaturateOptions,
    items: Vec<EngineItem>,
    steps: Vec<Step>,
    seen: HashMap<Formula, usize>,
    units: HashMap<Literal, usize>,
    occ: HashMap<Literal, Vec<usize>>,
    stamp: Vec<Option<u64>>,
    clock: u64,
    inferences: usize,
    found: Option<Weight>,
    stack: Vec<Frame>,
}

pub fn saturate(s: &Base) -> Saturation {
    saturate_with(s, SaturateOptions::default())
}

pub fn saturate_with(s: &Base, opts: SaturateOptions) -> Saturation {
    let mut e = Engine {
        opts,
        items: Vec::new(),
        steps: Vec::new(),
        seen: HashMap::new(),
        units: HashMap::new(),
        occ: HashMap::new(),
        stamp: Vec::new(),
        clock: 0,
        inferences: 0,
        found: None,
        stack: Vec::new(),
    };
    e.run(s);
    let bound = s.size() * s.weights().len();
    assert!(
        e.inferences <= bound,
        "saturation used {} inferences, above the size-times-levels bound {bound}",
        e.inferences
    );
    let outcome = match e.found {
        Some(w) => Outcome::EmptyClauseFound(w),
        None => Outcome::Fixpoint,
    };
    let mut canonical: Vec<usize> = e.seen.values().copied().collect();
    canonical.sort_unstable();
    Saturation {
        derivation: Derivation { steps: e.steps, outcome },
        items: e.items,
        inferences: e.inferences,
        input_len: s.len(),
        canonical,
    }
}

impl Engine {
    fn push(&mut self, formula: Formula, weight: Weight) -> usize {
        self.items.push(EngineItem { item: WeightedFormula::new(formula, weight), status: ItemStatus::Transient });
        self.stamp.push(None);
        self.items.len() - 1
    }

    fn record(&mut self, rule: Rule, premises: Vec<usize>, item: usize) {
        if rule.is_inference() {
            self.inferences += 1;
        }
        let conclusion = self.items[item].item.clone();
        self.steps.push(Step { rule, premises, conclusion, item });
    }

    fn formula(&self, id: usize) -> &Formula {
        &self.items[id].item.formula
    }

    fn weight(&self, id: usize) -> Weight {
        self.items[id].item.weight
    }

    fn active(&self, id: usize) -> bool {
        self.items[id].status == ItemStatus::Active
    }

    fn run(&mut self, s: &Base) {
        for it in &s.items {
            self.push(it.formula.clone(), it.weight);
        }
        // Normalize and deduplicate the input.
        let mut roots = Vec::new();
        for i in 0..s.len() {
            let f = &s.items[i].formula;
            let g = match simplify_constants(f) {
                Formula::Top => {
                    self.items[i].status = ItemStatus::Vacuous;
                    continue;
                }
                Formula::Bottom => Formula::empty_clause(),
                g => simplify_structural(&g),
            };
            let cur = if g == *f {
                i
            } else {
                self.items[i].status = ItemStatus::Superseded;
                let id = self.push(g, s.items[i].weight);
                self.record(Rule::Simplify, vec![i], id);
                id
            };
            if self.formula(cur).is_empty_clause() {
                self.found = Some(self.weight(cur));
                return;
            }
            if let Added::New(id) = self.register(cur) {
                roots.push(id);
            }
        }
        // Saturate every item with its own literals.
        for root in roots.iter_mut() {
            if !self.active(*root) {
                continue;
            }
            match self.local(*root, true) {
                Added::New(id) => *root = id,
                Added::Kept { .. } => {}
                Added::Stop => return,
            }
        }
        for &root in roots.iter().rev() {
            self.stack.push(Frame::Process(root));
        }
        while let Some(frame) = self.stack.pop() {
            match frame {
                Frame::Process(id) => self.process(id),
                Frame::Scan { unit, targets, next } => self.scan(unit, targets, next),
            }
            if self.found.is_some() {
                return;
            }
        }
    }

    /// Runs UR_P (or LUR when enabled) inside item `id`. Returns `Kept` with
    /// `id` itself when nothing applies.
    fn local(&mut self, id: usize, root_pass: bool) -> Added {
        let scope = if self.opts.lur { Scope::Local } else { Scope::Root };
        if !root_pass && scope == Scope::Root {
            return Added::Kept { id, promote: false };
        }
        let run = local_saturate(self.formula(id), scope, self.opts.hur);
        if run.steps.is_empty() {
            return Added::Kept { id, promote: false };
        }
        let weight = self.weight(id);
        let mut prev = id;
        for step in run.steps {
            let rule = match (step.simultaneous, scope) {
                (true, _) => Rule::Hur,
                (false, Scope::Local) => Rule::Lur,
                (false, Scope::Root) => Rule::UrP,
            };
            let raw_id = self.push(step.raw.clone(), weight);
            self.record(rule, vec![prev], raw_id);
            prev = raw_id;
            let simple = simplify_structural(&step.raw);
            if simple != step.raw {
                let sid = self.push(simple, weight);
                self.record(Rule::Simplify, vec![raw_id], sid);
                prev = sid;
            }
        }
        self.items[id].status = ItemStatus::Superseded;
        if run.result.is_empty_clause() {
            self.found = Some(weight);
            return Added::Stop;
        }
        self.register(prev)
    }

    /// MaxN against every formula seen so far.
    fn register(&mut self, id: usize) -> Added {
        let f = self.formula(id).clone();
        match self.seen.get(&f).copied() {
            Some(e) if self.weight(e) >= self.weight(id) => {
                self.items[id].status = ItemStatus::Dominated;
                self.record(Rule::MaxN, vec![e, id], e);
                let promote = self.active(e) && self.stamp[e].is_none();
                Added::Kept { id: e, promote }
            }
            Some(e) => {
                self.items[e].status = ItemStatus::Dominated;
                if let Formula::Lit(l) = &f {
                    if self.units.get(l) == Some(&e) {
                        self.units.remove(l);
                    }
                }
                self.seen.insert(f, id);
                self.items[id].status = ItemStatus::Active;
                self.record(Rule::MaxN, vec![e, id], id);
                Added::New(id)
            }
            None => {
                self.seen.insert(f, id);
                self.items[id].status = ItemStatus::Active;
                Added::New(id)
            }
        }
    }

    /// Records a conclusion, simplifies it and registers the result.
    fn derive(&mut self, rule: Rule, premises: Vec<usize>, raw: Formula, weight: Weight) -> Added {
        let raw_id = self.push(raw, weight);
        self.record(rule, premises, raw_id);
        let simple = simplify_structural(self.formula(raw_id));
        let mut cur = raw_id;
        if simple != *self.formula(raw_id) {
            cur = self.push(simple, weight);
            self.record(Rule::Simplify, vec![raw_id], cur);
        }
        if self.formula(cur).is_empty_clause() {
            self.found = Some(weight);
            return Added::Stop;
        }
        if self.opts.lur {
            match self.local(cur, false) {
                Added::Kept { id, .. } if id == cur => {}
                other => return other,
            }
        }
        self.register(cur)
    }

    fn schedule(&mut self, added: Added) {
        match added {
            Added::New(id) | Added::Kept { id, promote: true } => self.stack.push(Frame::Process(id)),
            _ => {}
        }
    }

    fn process(&mut self, id: usize) {
        if !self.active(id) || self.stamp[id].is_some() {
            return;
        }
        self.stamp[id] = Some(self.clock);
        self.clock += 1;
        if let Some((unit, occs)) = self.newest_unit_against(id) {
            self.resolve(unit, id, occs);
            return;
        }
        match self.formula(id).clone() {
            Formula::Conj(children) => {
                self.items[id].status = ItemStatus::Superseded;
                let weight = self.weight(id);
                let mut pending = Vec::new();
                for child in children {
                    let cid = self.push(child, weight);
                    self.record(Rule::MinD, vec![id], cid);
                    let added = if self.opts.lur {
                        match self.local(cid, false) {
                            Added::Kept { id, .. } if id == cid => self.register(cid),
                            other => other,
                        }
                    } else {
                        self.register(cid)
                    };
                    if matches!(added, Added::Stop) {
                        return;
                    }
                    pending.push(added);
                }
                for added in pending.into_iter().rev() {
                    self.schedule(added);
                }
            }
            Formula::Lit(l) => {
                self.units.insert(l.clone(), id);
                self.occ.entry(l.clone()).or_default().push(id);
                let targets: Vec<usize> = self
                    .occ
                    .get(&l.complement())
                    .map(|v| v.iter().copied().filter(|&t| t != id).collect())
                    .unwrap_or_default();
                if !targets.is_empty() {
                    self.stack.push(Frame::Scan { unit: id, targets, next: 0 });
                }
            }
            f => {
                let mut lits: Vec<Literal> = literal_occurrences(&f).into_iter().map(|(_, l)| l).collect();
                lits.sort();
                lits.dedup();
                for l in lits {
                    self.occ.entry(l).or_default().push(id);
                }
            }
        }
    }

    /// The most recently processed active unit whose complement occurs in
    /// `id`, with all of those occurrences in document order.
    fn newest_unit_against(&self, id: usize) -> Option<(usize, Vec<Position>)> {
        let mut best: Option<(u64, usize, Literal)> = None;
        for (_, l) in literal_occurrences(self.formula(id)) {
            let comp = l.complement();
            let Some(&u) = self.units.get(&comp) else { continue };
            if u == id || !self.active(u) {
                continue;
            }
            let st = self.stamp[u].expect("units are processed");
            if best.as_ref().map_or(true, |b| st > b.0) {
                best = Some((st, u, comp));
            }
        }
        let (_, u, comp) = best?;
        let occs = locate_literal(self.formula(id), &comp.complement());
        Some((u, occs))
    }

    fn resolve(&mut self, unit: usize, target: usize, occs: Vec<Position>) {
        let f = self.formula(target).clone();
        let mut rule = Rule::UrSigma;
        let mut raw = None;
        if self.opts.hur && occs.len() > 1 {
            if let Ok(r) = remove_regions(&f, &occs) {
                raw = Some(r);
                rule = Rule::Hur;
            }
        }
        let raw = match raw {
            Some(r) => r,
            None => remove_regions(&f, &occs[..1]).expect("occurrence of a literal"),
        };
        let weight = self.weight(unit).min(self.weight(target));
        self.items[target].status = ItemStatus::Superseded;
        let added = self.derive(rule, vec![unit, target], raw, weight);
        self.schedule(added);
    }

    fn scan(&mut self, unit: usize, targets: Vec<usize>, next: usize) {
        if !self.active(unit) {
            return;
        }
        let comp = self.formula(unit).as_literal().expect("unit").complement();
        for i in next..targets.len() {
            let t = targets[i];
            if !self.active(t) {
                continue;
            }
            let occs = locate_literal(self.formula(t), &comp);
            if occs.is_empty() {
                continue;
            }
            let rest = Frame::Scan { unit, targets: targets.clone(), next: i + 1 };
            self.stack.push(rest);
            self.resolve(unit, t, occs);
            return;
        }
    }
}
