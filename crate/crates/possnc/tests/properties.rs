use std::sync::Arc;

use possnc::calculus::{
    extract_cd, hur_step, lur_step, saturate, simplify_structural, ur_sigma_step, Outcome, SaturateOptions,
};
use possnc::formula::{
    literal_occurrences, negate_nnf, parse_base, render_base, simplify_constants, size, Base, Formula, Literal,
    Position, Weight, WeightedFormula,
};
use possnc::hornnc::{is_horn_nc, is_negative, recognize};
use possnc::semantics::{
    cl_transform, evaluate, inc_by_cuts, inc_oracle, interpretations, is_consistent_oracle, is_horn_clausal,
    necessity_oracle, Interpretation,
};
use possnc::solver::{alpha_cut, entails, find_inc, find_inc_report, CutSpec};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::{select, Index};

const FIVE: &[&str] = &["A", "B", "C", "D", "E"];
const THREE: &[&str] = &["A", "B", "C"];

fn lit(atoms: &'static [&'static str]) -> impl Strategy<Value = Formula> + Clone {
    (select(atoms), any::<bool>()).prop_map(|(a, p)| Formula::Lit(Literal::new(a, p)))
}

fn nc(atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    lit(atoms)
        .prop_recursive(4, 24, 3, |inner| {
            prop_oneof![vec(inner.clone(), 1..4).prop_map(Formula::Conj), vec(inner, 1..4).prop_map(Formula::Disj)]
        })
        .boxed()
}

fn nc_with_constants(atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    prop_oneof![
        4 => lit(atoms),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
        1 => Just(Formula::Disj(vec![])),
        1 => Just(Formula::Conj(vec![])),
    ]
    .prop_recursive(4, 24, 3, |inner| {
        prop_oneof![vec(inner.clone(), 0..4).prop_map(Formula::Conj), vec(inner, 0..4).prop_map(Formula::Disj)]
    })
    .boxed()
}

fn negative(atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    select(atoms)
        .prop_map(Formula::neg)
        .prop_recursive(3, 12, 3, |inner| {
            prop_oneof![vec(inner.clone(), 1..3).prop_map(Formula::Conj), vec(inner, 1..3).prop_map(Formula::Disj)]
        })
        .boxed()
}

fn horn(atoms: &'static [&'static str]) -> BoxedStrategy<Formula> {
    lit(atoms)
        .prop_recursive(4, 24, 3, move |inner| {
            prop_oneof![
                vec(inner.clone(), 1..4).prop_map(Formula::Conj),
                (vec(negative(atoms), 0..3), inner, any::<Index>()).prop_map(|(mut negs, h, at)| {
                    let i = at.index(negs.len() + 1);
                    negs.insert(i, h);
                    Formula::Disj(negs)
                }),
            ]
        })
        .boxed()
}

fn weight() -> impl Strategy<Value = Weight> {
    (1i64..=10).prop_map(|n| Weight::from_ratio(n, 10))
}

fn base_of(f: BoxedStrategy<Formula>, max: usize) -> impl Strategy<Value = Base> {
    vec((f, weight()), 0..max)
        .prop_map(|items| Base::new(items.into_iter().map(|(f, w)| WeightedFormula::new(f, w)).collect()))
}

fn models(f: &Formula) -> Vec<Interpretation> {
    let atoms: Vec<Arc<str>> = f.atoms().into_iter().collect();
    interpretations(&atoms).collect()
}

fn equivalent(f: &Formula, g: &Formula) -> bool {
    let both = Formula::Conj(vec![f.clone(), g.clone()]);
    models(&both).iter().all(|w| evaluate(w, f).unwrap() == evaluate(w, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(b in base_of(nc_with_constants(FIVE), 6)) {
        prop_assert_eq!(parse_base(&render_base(&b)).unwrap(), b);
    }

    #[test]
    fn negation_is_complement_and_involution(f in nc_with_constants(FIVE)) {
        let n = negate_nnf(&f);
        let nn = negate_nnf(&n);
        for w in models(&f) {
            let v = evaluate(&w, &f).unwrap();
            prop_assert_eq!(evaluate(&w, &n).unwrap(), !v);
            prop_assert_eq!(evaluate(&w, &nn).unwrap(), v);
        }
    }

    #[test]
    fn constant_elimination_preserves_meaning(f in nc_with_constants(FIVE)) {
        let g = simplify_constants(&f);
        prop_assert!(equivalent(&f, &g));
        if !matches!(g, Formula::Top | Formula::Bottom) {
            prop_assert!(!g.has_constants());
            prop_assert!(recognize(&g).is_ok());
        }
    }

    #[test]
    fn clausal_transform_is_equivalent(f in nc(FIVE)) {
        let cl = cl_transform(&f).unwrap();
        for w in models(&f) {
            prop_assert_eq!(cl.evaluate(&w).unwrap(), evaluate(&w, &f).unwrap());
        }
    }

    #[test]
    fn recognizer_matches_clausal_horn(f in nc(FIVE)) {
        let cl = cl_transform(&f).unwrap();
        prop_assert_eq!(is_horn_nc(&f).unwrap(), is_horn_clausal(&cl));
    }

    #[test]
    fn horn_nc_is_hereditary(f in horn(FIVE)) {
        prop_assert!(is_horn_nc(&f).unwrap());
        fn all_sub(f: &Formula, out: &mut Vec<Formula>) {
            out.push(f.clone());
            f.children().iter().for_each(|g| all_sub(g, out));
        }
        let mut subs = Vec::new();
        all_sub(&f, &mut subs);
        for g in subs {
            prop_assert!(is_horn_nc(&g).unwrap());
        }
        prop_assert!(is_horn_clausal(&cl_transform(&f).unwrap()));
    }

    #[test]
    fn negative_implies_horn(f in nc(FIVE)) {
        if is_negative(&f).unwrap() {
            prop_assert!(is_horn_nc(&f).unwrap());
        }
    }

    #[test]
    fn recognizer_is_linear(f in nc(FIVE)) {
        prop_assert!(recognize(&f).unwrap().visits <= size(&f));
    }

    #[test]
    fn degree_definitions_agree(b in base_of(nc(FIVE), 6)) {
        prop_assert_eq!(inc_oracle(&b).unwrap(), inc_by_cuts(&b).unwrap());
    }

    #[test]
    fn cuts_are_monotone(b in base_of(nc(FIVE), 6)) {
        let consistent: Vec<(Weight, bool)> = b
            .weights()
            .into_iter()
            .map(|a| {
                let cut = alpha_cut(&b, CutSpec { threshold: a, strict: false });
                let conj = Formula::Conj(cut.items.into_iter().map(|i| i.formula).collect());
                (a, is_consistent_oracle(&conj).unwrap())
            })
            .collect();
        for w in consistent.windows(2) {
            prop_assert!(!w[0].1 || w[1].1);
        }
    }

    #[test]
    fn structural_simplification_is_idempotent(f in nc_with_constants(FIVE)) {
        let f = simplify_constants(&f);
        let g = simplify_structural(&f);
        prop_assert_eq!(simplify_structural(&g), g.clone());
        prop_assert!(equivalent(&f, &g));
    }

    #[test]
    fn splits_are_conjunctively_linked(f in nc(FIVE), pick in any::<Index>()) {
        let occs = literal_occurrences(&f);
        let (occ, lit) = &occs[pick.index(occs.len())];
        if let Some(split) = extract_cd(&f, occ).unwrap() {
            prop_assert!(occ.is_within(&split.c_pos()));
            let mut p = occ.clone();
            while p != split.c_pos() {
                p = p.parent().unwrap();
                prop_assert!(matches!(f.subformula(&p), Some(Formula::Conj(_))));
            }
            prop_assert!(matches!(f.subformula(&split.disj_pos), Some(Formula::Disj(c)) if c.len() >= 2));
            // C implies the literal.
            let c_and_not = Formula::Conj(vec![split.c_formula.clone(), Formula::Lit(lit.complement())]);
            prop_assert!(!is_consistent_oracle(&c_and_not).unwrap());
        }
    }

    #[test]
    fn local_resolution_preserves_meaning(f in horn(FIVE), a in any::<Index>(), b in any::<Index>()) {
        let occs = literal_occurrences(&f);
        let (lp, l) = &occs[a.index(occs.len())];
        let comps: Vec<&Position> = occs.iter().filter(|(_, m)| *m == l.complement()).map(|(p, _)| p).collect();
        if !comps.is_empty() {
            let np = comps[b.index(comps.len())];
            let item = WeightedFormula::new(f.clone(), Weight::one());
            if let Ok(out) = lur_step(&item, lp, np) {
                prop_assert!(equivalent(&f, &out.formula));
            }
        }
    }

    #[test]
    fn hyper_step_matches_separate_steps(
        targets in vec((horn(FIVE), weight()), 1..4),
        unit_w in weight(),
        picks in vec(any::<Index>(), 4),
    ) {
        let unit = WeightedFormula::new(Formula::pos("A"), unit_w);
        let mut pairs = Vec::new();
        for (i, (f, w)) in targets.into_iter().enumerate() {
            // Tag each target so that none is shared.
            let f = Formula::Conj(vec![f, Formula::pos(["B", "C", "D", "E"][i])]);
            let occs = possnc::formula::locate_literal(&f, &Literal::neg("A"));
            if !occs.is_empty() {
                let occ = occs[picks[i].index(occs.len())].clone();
                pairs.push((WeightedFormula::new(f, w), occ));
            }
        }
        let hyper = hur_step(&unit, &pairs).unwrap();
        let single: Vec<WeightedFormula> = pairs.iter().map(|(t, o)| ur_sigma_step(&unit, t, o).unwrap()).collect();
        prop_assert_eq!(hyper, single);
    }

    #[test]
    fn every_step_is_sound(b in base_of(horn(FIVE), 5)) {
        for opts in [SaturateOptions::default(), SaturateOptions { lur: true, hur: true }] {
            let rep = find_inc_report(&b, opts).unwrap();
            for round in &rep.rounds {
                for step in &round.saturation.derivation.steps {
                    let c = &step.conclusion;
                    let mut aug = alpha_cut(&b, CutSpec { threshold: c.weight, strict: false });
                    aug.push(negate_nnf(&c.formula), Weight::one());
                    prop_assert!(inc_oracle(&aug).unwrap() >= c.weight.value(), "{}", c);
                }
            }
        }
    }

    #[test]
    fn saturation_is_complete_and_weight_correct(b in base_of(horn(FIVE), 6)) {
        let inc = inc_oracle(&b).unwrap();
        match saturate(&b).derivation.outcome {
            Outcome::EmptyClauseFound(a) => {
                prop_assert!(inc >= a.value());
            }
            Outcome::Fixpoint => prop_assert_eq!(inc, 0.into()),
        }
    }

    #[test]
    fn find_matches_oracle_and_cuts(b in base_of(horn(FIVE), 7)) {
        let rep = find_inc_report(&b, SaturateOptions::default()).unwrap();
        prop_assert_eq!(rep.inc, inc_oracle(&b).unwrap());
        prop_assert_eq!(rep.inc, inc_by_cuts(&b).unwrap());
        prop_assert!(rep.inferences <= rep.bound);
        prop_assert!(rep.recursions <= rep.bound);
    }

    #[test]
    fn entailment_matches_necessity(b in base_of(horn(THREE), 5), q in nc(THREE)) {
        if let Ok(v) = entails(&b, &q) {
            prop_assert_eq!(v, necessity_oracle(&b, &q).unwrap());
        }
    }

    #[test]
    fn adding_items_never_lowers_degree(b in base_of(horn(FIVE), 5), f in horn(FIVE), w in weight()) {
        let before = find_inc(&b).unwrap();
        let mut more = b.clone();
        more.push(f, w);
        prop_assert!(find_inc(&more).unwrap() >= before);
    }

    #[test]
    fn non_horn_saturation_stays_sound(b in base_of(nc(THREE), 5)) {
        if let Outcome::EmptyClauseFound(a) = saturate(&b).derivation.outcome {
            prop_assert!(inc_oracle(&b).unwrap() >= a.value());
        }
    }
}
