#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use possnc::formula::{Base, Formula, Literal, Rational, Weight, WeightedFormula};
use possnc::hornnc::is_horn_nc;
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATOMS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

pub fn quarter_weights() -> Vec<Weight> {
    (1..=4).map(|i| Weight::from_ratio(i, 4)).collect()
}

pub fn all_literals(atoms: &[&str]) -> Vec<Formula> {
    atoms.iter().flat_map(|a| [Formula::pos(a), Formula::neg(a)]).collect()
}

/// Literals, plus every conjunction and disjunction of one or two distinct
/// literals (unordered).
pub fn depth_two_formulas(atoms: &[&str]) -> Vec<Formula> {
    let lits = all_literals(atoms);
    let mut out = lits.clone();
    for conj in [true, false] {
        for i in 0..lits.len() {
            for j in i..lits.len() {
                let children = if i == j { vec![lits[i].clone()] } else { vec![lits[i].clone(), lits[j].clone()] };
                out.push(if conj { Formula::Conj(children) } else { Formula::Disj(children) });
            }
        }
    }
    out
}

/// Every Horn-NC base of at most three items drawn (as a multiset) from the
/// weighted depth-two formulas over `A B C` with quarter weights.
pub fn exhaustive_bases() -> Vec<Base> {
    let items: Vec<WeightedFormula> = depth_two_formulas(&ATOMS[..3])
        .into_iter()
        .filter(|f| is_horn_nc(f).unwrap())
        .flat_map(|f| quarter_weights().into_iter().map(move |w| WeightedFormula::new(f.clone(), w)))
        .collect();
    let n = items.len();
    let mut out = vec![Base::default()];
    for i in 0..n {
        out.push(Base::new(vec![items[i].clone()]));
        for j in i..n {
            out.push(Base::new(vec![items[i].clone(), items[j].clone()]));
            for k in j..n {
                out.push(Base::new(vec![items[i].clone(), items[j].clone(), items[k].clone()]));
            }
        }
    }
    out
}

/// Every formula whose tree height is at most `depth` (a literal has height
/// one) with connectives of one or two ordered children.
pub fn all_formulas_upto(depth: usize, atoms: &[&str]) -> Vec<Formula> {
    let lits = all_literals(atoms);
    if depth <= 1 {
        return lits;
    }
    let smaller = all_formulas_upto(depth - 1, atoms);
    let mut out = lits;
    for conj in [true, false] {
        let make = |c: Vec<Formula>| if conj { Formula::Conj(c) } else { Formula::Disj(c) };
        for a in &smaller {
            out.push(make(vec![a.clone()]));
        }
        for a in &smaller {
            for b in &smaller {
                out.push(make(vec![a.clone(), b.clone()]));
            }
        }
    }
    out
}

pub fn random_literal<R: Rng>(rng: &mut R, atoms: &[&str], positive: Option<bool>) -> Formula {
    let a = atoms[rng.gen_range(0..atoms.len())];
    let pos = positive.unwrap_or_else(|| rng.gen_bool(0.5));
    Formula::Lit(Literal::new(a, pos))
}

pub fn random_negative<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.45) {
        return random_literal(rng, atoms, Some(false));
    }
    let k = rng.gen_range(1..=3);
    let children = (0..k).map(|_| random_negative(rng, atoms, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        Formula::Conj(children)
    } else {
        Formula::Disj(children)
    }
}

pub fn random_horn<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.3) {
        return random_literal(rng, atoms, None);
    }
    let k = rng.gen_range(1..=3);
    if rng.gen_bool(0.45) {
        Formula::Conj((0..k).map(|_| random_horn(rng, atoms, depth - 1)).collect())
    } else {
        let mut children: Vec<Formula> = (0..k).map(|_| random_negative(rng, atoms, depth - 1)).collect();
        if rng.gen_bool(0.8) {
            let at = rng.gen_range(0..=children.len());
            children.insert(at, random_horn(rng, atoms, depth - 1));
        }
        Formula::Disj(children)
    }
}

pub fn random_nc<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth <= 1 || rng.gen_bool(0.25) {
        return random_literal(rng, atoms, None);
    }
    let k = rng.gen_range(1..=3);
    let children = (0..k).map(|_| random_nc(rng, atoms, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        Formula::Conj(children)
    } else {
        Formula::Disj(children)
    }
}

pub fn random_weight_levels<R: Rng>(rng: &mut R) -> Vec<Weight> {
    let mut pool: Vec<i64> = (1..=10).collect();
    pool.shuffle(rng);
    let k = rng.gen_range(1..=4);
    pool[..k].iter().map(|&n| Weight::from_ratio(n, 10)).collect()
}

/// A Horn-NC base over at most `max_atoms` propositions, biased towards
/// units so that contradictions are common.
pub fn random_horn_base<R: Rng>(rng: &mut R, max_atoms: usize) -> Base {
    let n_atoms = rng.gen_range(1..=max_atoms);
    let atoms = &ATOMS[..n_atoms];
    let levels = random_weight_levels(rng);
    let n_items = rng.gen_range(1..=6);
    let mut base = Base::default();
    for _ in 0..n_items {
        let f = if rng.gen_bool(0.3) {
            random_literal(rng, atoms, None)
        } else {
            let depth = rng.gen_range(2..=4);
            random_horn(rng, atoms, depth)
        };
        base.push(f, *levels.choose(rng).unwrap());
    }
    base
}

/// A Horn clausal base: units and clauses of distinct literals with at most
/// one positive literal.
pub fn random_clausal_base<R: Rng>(rng: &mut R) -> Base {
    let n_atoms = rng.gen_range(2..=6);
    let atoms = &ATOMS[..n_atoms];
    let levels = random_weight_levels(rng);
    let mut base = Base::default();
    for _ in 0..rng.gen_range(2..=8) {
        let len = rng.gen_range(1..=3.min(n_atoms));
        let mut chosen: Vec<&str> = atoms.to_vec();
        chosen.shuffle(rng);
        chosen.truncate(len);
        let pos_at = if rng.gen_bool(0.6) { Some(rng.gen_range(0..len)) } else { None };
        let lits: Vec<Formula> =
            chosen.iter().enumerate().map(|(i, a)| Formula::Lit(Literal::new(a, Some(i) == pos_at))).collect();
        let f = if len == 1 && rng.gen_bool(0.5) { lits[0].clone() } else { Formula::Disj(lits) };
        base.push(f, *levels.choose(rng).unwrap());
    }
    base
}

pub fn clause_literals(f: &Formula) -> Vec<Literal> {
    match f {
        Formula::Lit(l) => vec![l.clone()],
        Formula::Disj(c) => c.iter().map(|g| g.as_literal().expect("clausal").clone()).collect(),
        _ => panic!("not a clause: {f}"),
    }
}

/// Horn unit propagation on a set of clauses; false when the empty clause
/// is reached.
pub fn horn_propagation_consistent(clauses: &[Vec<Literal>]) -> bool {
    let mut truth: HashMap<&str, bool> = HashMap::new();
    loop {
        let mut changed = false;
        for c in clauses {
            let mut open = Vec::new();
            let mut sat = false;
            for l in c {
                match truth.get(&*l.atom) {
                    Some(&v) if v == l.positive => sat = true,
                    Some(_) => {}
                    None => open.push(l),
                }
            }
            if sat {
                continue;
            }
            match open.len() {
                0 => return false,
                1 => {
                    truth.insert(&*open[0].atom, open[0].positive);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    // Remaining clauses all have two or more unassigned literals; in a Horn
    // set each has a negative one, so setting the rest false satisfies it.
    true
}

/// Inconsistency degree of a clausal Horn base by unit propagation on each
/// cut.
pub fn clausal_reference_inc(base: &Base) -> Rational {
    let mut inc = Rational::from_integer(0);
    for w in base.weights() {
        let cut: Vec<Vec<Literal>> =
            base.items.iter().filter(|i| i.weight >= w).map(|i| clause_literals(&i.formula)).collect();
        if !horn_propagation_consistent(&cut) {
            inc = w.value();
        }
    }
    inc
}

pub fn distinct_count<T: std::hash::Hash + Eq>(xs: impl IntoIterator<Item = T>) -> usize {
    xs.into_iter().collect::<HashSet<_>>().len()
}

pub const PROPAGATION: &str = include_str!("../../data/propagation.pnc");
pub const CONSISTENT: &str = include_str!("../../data/consistent.pnc");
pub const INNER_CONTRADICTION: &str = include_str!("../../data/inner_contradiction.pnc");
pub const LAYERED: &str = include_str!("../../data/layered.pnc");
