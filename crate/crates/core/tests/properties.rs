//! Property suites over randomly generated formulas and models: round-trip,
//! textbook evaluator laws, lifting soundness, singleton collapse, model
//! canonicalization, world-uniformity, antitonicity of the positive strict
//! fragment, and coherence between the equivalence modes.

use lawlike_core::{
    enumerate_structures, enumerate_valuations, equiv_material_prop, equiv_strict, eval_fo,
    eval_prop, eval_strict_assert, eval_strict_at, eval_via_encoding, parse, Bounds, EnumCaps,
    Formula, KripkeModel, Signature, StrictMode, Structure, Var, Verdict,
};
use proptest::prelude::*;
use proptest::strategy::Union;

const ATOMS: &[&str] = &["p", "q", "r"];

/// Propositional formulas over `p, q, r`; strict arrows included on demand.
fn arb_prop_formula(allow_strict: bool) -> impl Strategy<Value = Formula> {
    let leaf = proptest::sample::select(ATOMS).prop_map(Formula::prop);
    leaf.prop_recursive(3, 24, 2, move |inner| {
        let mut choices: Vec<BoxedStrategy<Formula>> = vec![
            inner.clone().prop_map(Formula::negate).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.imp(b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.iff(b)).boxed(),
        ];
        if allow_strict {
            choices.push((inner.clone(), inner).prop_map(|(a, b)| a.strict_imp(b)).boxed());
        }
        Union::new(choices)
    })
}

/// First-order sentences over `p, q, r`, `P/1`, `Q/2`: predicate atoms only
/// appear under enough quantifiers to bind their variables, so every
/// generated formula is a sentence.
fn arb_fo_sentence(depth: u32, vars: usize, allow_strict: bool) -> BoxedStrategy<Formula> {
    let var_names: Vec<String> = (0..vars).map(|i| format!("x{i}")).collect();
    let mut leaves: Vec<BoxedStrategy<Formula>> =
        vec![proptest::sample::select(ATOMS).prop_map(Formula::prop).boxed()];
    if vars > 0 {
        let names = var_names.clone();
        leaves.push(
            proptest::sample::select(names)
                .prop_map(|n| Formula::pred("P", vec![Var::new(n)]))
                .boxed(),
        );
        let names2 = (
            proptest::sample::select(var_names.clone()),
            proptest::sample::select(var_names),
        );
        leaves.push(
            names2
                .prop_map(|(a, b)| Formula::pred("Q", vec![Var::new(a), Var::new(b)]))
                .boxed(),
        );
    }
    let leaf = Union::new(leaves).boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = arb_fo_sentence(depth - 1, vars, allow_strict);
    let subq = arb_fo_sentence(depth - 1, vars + 1, allow_strict);
    let next_var = format!("x{vars}");
    let mut choices: Vec<BoxedStrategy<Formula>> = vec![
        leaf,
        sub.clone().prop_map(Formula::negate).boxed(),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| a.and(b)).boxed(),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| a.or(b)).boxed(),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| a.imp(b)).boxed(),
        (sub.clone(), sub.clone()).prop_map(|(a, b)| a.iff(b)).boxed(),
        {
            let nv = next_var.clone();
            subq.clone()
                .prop_map(move |b| Formula::forall(Var::new(nv.clone()), b))
                .boxed()
        },
        {
            let nv = next_var;
            subq.prop_map(move |b| Formula::exists(Var::new(nv.clone()), b)).boxed()
        },
    ];
    if allow_strict {
        choices.push((sub.clone(), sub).prop_map(|(a, b)| a.strict_imp(b)).boxed());
    }
    Union::new(choices).boxed()
}

/// Conjunctions and disjunctions of strict conditionals — the fragment whose
/// asserted truth survives shrinking the world set.
fn arb_positive_strict(depth: u32) -> BoxedStrategy<Formula> {
    let strict_free = arb_prop_formula(false).boxed();
    let leaf = (strict_free.clone(), strict_free)
        .prop_map(|(a, b)| a.strict_imp(b))
        .boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = arb_positive_strict(depth - 1);
    Union::new(vec![
        leaf,
        (sub.clone(), sub.clone()).prop_map(|(a, b)| a.and(b)).boxed(),
        (sub.clone(), sub).prop_map(|(a, b)| a.or(b)).boxed(),
    ])
    .boxed()
}

/// Every formula strategy above stays inside this vocabulary, so models over
/// it evaluate any generated formula.
fn ambient_sig() -> Signature {
    let mut sig = Signature::new();
    for a in ATOMS {
        sig.declare_prop(*a).unwrap();
    }
    sig.declare_pred("P", 1).unwrap();
    sig.declare_pred("Q", 2).unwrap();
    sig
}

fn arb_model() -> impl Strategy<Value = KripkeModel> {
    (1usize..=2).prop_flat_map(|d| {
        let space = enumerate_structures(&ambient_sig(), d, &EnumCaps::default()).unwrap();
        let n = space.len();
        proptest::collection::vec(0..n, 1..=3).prop_map(move |idxs| {
            let worlds: Vec<Structure> =
                idxs.iter().map(|&i| space.get(i).unwrap()).collect();
            KripkeModel::new(d, worlds).unwrap()
        })
    })
}

fn arb_single_world() -> impl Strategy<Value = Structure> {
    (1usize..=2).prop_flat_map(|d| {
        let space = enumerate_structures(&ambient_sig(), d, &EnumCaps::default()).unwrap();
        let n = space.len();
        (0..n).prop_map(move |i| space.get(i).unwrap())
    })
}

proptest! {
    #[test]
    fn parse_render_round_trip_propositional(f in arb_prop_formula(true)) {
        let rendered = f.render();
        let back = parse(&rendered).unwrap().formula;
        prop_assert_eq!(back, f, "round trip changed {}", rendered);
    }

    #[test]
    fn parse_render_round_trip_first_order(f in arb_fo_sentence(3, 0, true)) {
        let rendered = f.render();
        let back = parse(&rendered).unwrap().formula;
        prop_assert_eq!(back, f, "round trip changed {}", rendered);
    }

    #[test]
    fn rendering_is_deterministic(f in arb_fo_sentence(3, 0, true)) {
        prop_assert_eq!(f.render(), f.render());
    }

    #[test]
    fn double_negation_and_de_morgan_at_every_world(
        f in arb_prop_formula(false),
        g in arb_prop_formula(false),
        m in arb_model(),
    ) {
        for w in 0..m.world_count() {
            let not_not = f.clone().negate().negate();
            prop_assert_eq!(
                eval_strict_at(&not_not, &m, w).unwrap(),
                eval_strict_at(&f, &m, w).unwrap()
            );
            let lhs = f.clone().and(g.clone()).negate();
            let rhs = f.clone().negate().or(g.clone().negate());
            prop_assert_eq!(
                eval_strict_at(&lhs, &m, w).unwrap(),
                eval_strict_at(&rhs, &m, w).unwrap()
            );
        }
    }

    #[test]
    fn eval_prop_agrees_with_eval_fo_embedding(f in arb_prop_formula(false)) {
        let sig = ambient_sig();
        let vals = enumerate_valuations(&sig, &EnumCaps::default()).unwrap();
        for v in vals.iter() {
            let mut s = Structure::new(1).unwrap();
            for (n, b) in v.iter() {
                s.set_prop(n, b);
            }
            prop_assert_eq!(eval_prop(&f, &v).unwrap(), eval_fo(&f, &s).unwrap());
        }
    }

    #[test]
    fn lifting_soundness(f in arb_fo_sentence(2, 0, true), m in arb_model()) {
        let sig = ambient_sig();
        prop_assert_eq!(
            eval_via_encoding(&f, &m, &sig).unwrap(),
            eval_strict_assert(&f, &m).unwrap(),
            "lift/encode disagrees with direct Kripke evaluation on {}",
            f.render()
        );
    }

    #[test]
    fn singleton_collapse(f in arb_fo_sentence(2, 0, true), w in arb_single_world()) {
        let m = KripkeModel::singleton(w.clone());
        prop_assert_eq!(
            eval_strict_assert(&f, &m).unwrap(),
            eval_fo(&f.erase_strict(), &w).unwrap(),
            "strict and erased readings split on a single world for {}",
            f.render()
        );
    }

    #[test]
    fn model_construction_is_order_and_duplicate_invariant(
        m in arb_model(),
        seed in any::<u64>(),
    ) {
        // Rebuild from a rotated, duplicated world list; the canonical form
        // must come out identical.
        let mut worlds: Vec<Structure> = m.worlds().to_vec();
        let rot = (seed as usize) % worlds.len();
        worlds.rotate_left(rot);
        worlds.push(worlds[0].clone());
        let rebuilt = KripkeModel::new(m.domain_size(), worlds).unwrap();
        prop_assert_eq!(rebuilt, m);
    }

    #[test]
    fn strict_values_are_world_uniform(
        a in arb_prop_formula(false),
        b in arb_prop_formula(false),
        m in arb_model(),
    ) {
        let f = a.strict_imp(b);
        let v0 = eval_strict_at(&f, &m, 0).unwrap();
        for w in 1..m.world_count() {
            prop_assert_eq!(eval_strict_at(&f, &m, w).unwrap(), v0);
        }
    }

    #[test]
    fn positive_strict_fragment_is_antitone(
        f in arb_positive_strict(2),
        m in arb_model(),
        mask in proptest::collection::vec(any::<bool>(), 1..=3),
    ) {
        if eval_strict_assert(&f, &m).unwrap() {
            let kept: Vec<Structure> = m
                .worlds()
                .iter()
                .enumerate()
                .filter(|(i, _)| *mask.get(*i % mask.len()).unwrap_or(&true))
                .map(|(_, w)| w.clone())
                .collect();
            let kept = if kept.is_empty() { vec![m.worlds()[0].clone()] } else { kept };
            let sub = KripkeModel::new(m.domain_size(), kept).unwrap();
            prop_assert!(
                eval_strict_assert(&f, &sub).unwrap(),
                "asserted law {} lost on a submodel",
                f.render()
            );
        }
    }

    #[test]
    fn pointwise_equivalence_implies_assertional(
        f in arb_prop_formula(true),
        g in arb_prop_formula(true),
    ) {
        let b = Bounds::default();
        let pw = equiv_strict(&f, &g, &b, StrictMode::Pointwise).unwrap();
        if pw.is_equivalent() {
            let at = equiv_strict(&f, &g, &b, StrictMode::Assertional).unwrap();
            prop_assert!(at.is_equivalent());
        }
    }

    #[test]
    fn strict_free_pointwise_agrees_with_material(
        f in arb_prop_formula(false),
        g in arb_prop_formula(false),
    ) {
        let single_world = Bounds { max_worlds: 1, ..Bounds::default() };
        let strict = equiv_strict(&f, &g, &single_world, StrictMode::Pointwise).unwrap();
        let material = equiv_material_prop(&f, &g, &EnumCaps::default()).unwrap();
        prop_assert_eq!(strict.is_equivalent(), material.is_equivalent());
    }

    #[test]
    fn classical_countermodels_transfer_to_strict_semantics(
        f in arb_prop_formula(false),
        g in arb_prop_formula(false),
    ) {
        let material = equiv_material_prop(&f, &g, &EnumCaps::default()).unwrap();
        if !material.is_equivalent() {
            let strict =
                equiv_strict(&f, &g, &Bounds::default(), StrictMode::Assertional).unwrap();
            prop_assert!(!strict.is_equivalent());
        }
    }

    #[test]
    fn strict_countermodels_replay(
        f in arb_prop_formula(true),
        g in arb_prop_formula(true),
    ) {
        let v = equiv_strict(&f, &g, &Bounds::default(), StrictMode::Assertional).unwrap();
        if let Verdict::NotEquivalent { countermodel, .. } = v {
            match countermodel {
                lawlike_core::Countermodel::Kripke { model, .. } => {
                    prop_assert_ne!(
                        eval_strict_assert(&f, &model).unwrap(),
                        eval_strict_assert(&g, &model).unwrap()
                    );
                }
                other => prop_assert!(false, "unexpected countermodel shape {other:?}"),
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_and_duplicate_free() {
    let sig = ambient_sig();
    for d in 1..=2usize {
        let a = enumerate_structures(&sig, d, &EnumCaps::default()).unwrap();
        let b = enumerate_structures(&sig, d, &EnumCaps::default()).unwrap();
        let xs: Vec<Structure> = a.iter().collect();
        let ys: Vec<Structure> = b.iter().collect();
        assert_eq!(xs, ys);
        let distinct: std::collections::BTreeSet<String> =
            xs.iter().map(|s| format!("{s:?}")).collect();
        assert_eq!(distinct.len() as u64, a.len());
    }
    let vals = enumerate_valuations(&sig, &EnumCaps::default()).unwrap();
    assert_eq!(vals.len(), 8);
    let distinct: std::collections::BTreeSet<String> =
        vals.iter().map(|v| format!("{v:?}")).collect();
    assert_eq!(distinct.len(), 8);
}
