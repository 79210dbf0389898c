//! End-to-end gate for the finished tool. Each test exercises one advertised
//! behavior through the real binary and cross-checks the result in process
//! against the core library, printing one PASS line with the measured
//! numbers. Random cases use a fixed-seed generator so every run checks the
//! same inputs.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lawlike_core::{
    enumerate_structures, equiv_strict, eval_fo, eval_strict_assert, eval_via_encoding, parse,
    Bounds, EnumCaps, Formula, KripkeModel, Signature, StrictMode, Structure, Var, Verdict,
};
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_lawlike"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

fn formula(src: &str) -> Formula {
    parse(src).expect("acceptance formulas parse").formula
}

fn shared_sig(f: &Formula, g: &Formula) -> Signature {
    f.infer_signature()
        .unwrap()
        .union(&g.infer_signature().unwrap())
        .unwrap()
}

/// Rebuilds the Kripke countermodel from the JSON document, using `sig` for
/// predicate arities, so the replayed model is exactly what the tool printed.
fn model_from_doc(cm: &Value, sig: &Signature) -> KripkeModel {
    let d = cm["domain_size"].as_u64().expect("countermodel has domain_size") as usize;
    let atoms: Vec<String> = cm["atoms"]
        .as_array()
        .expect("countermodel lists atoms")
        .iter()
        .map(|a| a.as_str().unwrap().to_string())
        .collect();
    let worlds: Vec<Structure> = cm["worlds"]
        .as_array()
        .expect("kripke countermodel lists worlds")
        .iter()
        .map(|w| {
            let mut s = Structure::new(d).unwrap();
            let true_atoms: BTreeSet<&str> = w["true_atoms"]
                .as_array()
                .unwrap()
                .iter()
                .map(|a| a.as_str().unwrap())
                .collect();
            for a in &atoms {
                s.set_prop(a.clone(), true_atoms.contains(a.as_str()));
            }
            for (name, arity) in sig.preds() {
                s.ensure_pred(name, arity);
            }
            if let Some(tables) = w["predicates"].as_object() {
                for (name, tuples) in tables {
                    for t in tuples.as_array().unwrap() {
                        let tuple: Vec<usize> = t
                            .as_array()
                            .unwrap()
                            .iter()
                            .map(|e| e.as_u64().unwrap() as usize)
                            .collect();
                        s.add_tuple(name.clone(), tuple).unwrap();
                    }
                }
            }
            s
        })
        .collect();
    KripkeModel::new(d, worlds).unwrap()
}

// Deterministic xorshift generator: fixed seeds make the random suites
// reproducible run to run.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next() % n
    }
}

const ATOMS: [&str; 3] = ["p", "q", "r"];

fn gen_leaf(rng: &mut Rng, vars: u64) -> Formula {
    if vars > 0 && rng.below(2) == 0 {
        if rng.below(2) == 0 {
            Formula::pred("P", vec![Var::new(format!("x{}", rng.below(vars)))])
        } else {
            Formula::pred(
                "Q",
                vec![
                    Var::new(format!("x{}", rng.below(vars))),
                    Var::new(format!("x{}", rng.below(vars))),
                ],
            )
        }
    } else {
        Formula::prop(ATOMS[rng.below(3) as usize])
    }
}

/// Random sentence: predicate atoms only use variables bound by an enclosing
/// quantifier, so at `vars = 0` the result is always closed.
fn gen_sentence(rng: &mut Rng, depth: u32, vars: u64, allow_strict: bool) -> Formula {
    if depth == 0 {
        return gen_leaf(rng, vars);
    }
    match rng.below(if allow_strict { 10 } else { 9 }) {
        0 | 1 => gen_leaf(rng, vars),
        2 => gen_sentence(rng, depth - 1, vars, allow_strict).negate(),
        3 => gen_sentence(rng, depth - 1, vars, allow_strict)
            .and(gen_sentence(rng, depth - 1, vars, allow_strict)),
        4 => gen_sentence(rng, depth - 1, vars, allow_strict)
            .or(gen_sentence(rng, depth - 1, vars, allow_strict)),
        5 => gen_sentence(rng, depth - 1, vars, allow_strict)
            .imp(gen_sentence(rng, depth - 1, vars, allow_strict)),
        6 => gen_sentence(rng, depth - 1, vars, allow_strict)
            .iff(gen_sentence(rng, depth - 1, vars, allow_strict)),
        7 => Formula::forall(
            Var::new(format!("x{vars}")),
            gen_sentence(rng, depth - 1, vars + 1, allow_strict),
        ),
        8 => Formula::exists(
            Var::new(format!("x{vars}")),
            gen_sentence(rng, depth - 1, vars + 1, allow_strict),
        ),
        _ => gen_sentence(rng, depth - 1, vars, allow_strict)
            .strict_imp(gen_sentence(rng, depth - 1, vars, allow_strict)),
    }
}

fn ambient_sig() -> Signature {
    let mut sig = Signature::new();
    for a in ATOMS {
        sig.declare_prop(a).unwrap();
    }
    sig.declare_pred("P", 1).unwrap();
    sig.declare_pred("Q", 2).unwrap();
    sig
}

fn gen_model(rng: &mut Rng, sig: &Signature) -> KripkeModel {
    let d = 1 + rng.below(2) as usize;
    let space = enumerate_structures(sig, d, &EnumCaps::default()).unwrap();
    let k = 1 + rng.below(3);
    let worlds: Vec<Structure> =
        (0..k).map(|_| space.get(rng.below(space.len())).unwrap()).collect();
    KripkeModel::new(d, worlds).unwrap()
}

#[test]
fn criterion_1_material_conjunctive_split_is_exactly_equivalent() {
    let started = Instant::now();
    let (code, out, err) = cli(&["equiv", "(p & q) -> r", "(p -> r) | (q -> r)"]);
    let elapsed = started.elapsed();
    assert_eq!(code, 0, "stderr: {err}");
    assert_eq!(out, "EQUIVALENT (exact, 8 valuations)\n");
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "PASS criterion 1: material conjunctive split equivalent, exact over 8 valuations \
         ({elapsed:?})"
    );
}

#[test]
fn criterion_2_strict_split_has_minimal_two_world_countermodel() {
    let started = Instant::now();
    let (code, out, err) = cli(&[
        "equiv",
        "--semantics",
        "strict",
        "--json",
        "(p & q) => r",
        "(p => r) | (q => r)",
    ]);
    assert_eq!(code, 1, "stderr: {err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["verdict"], "not_equivalent");
    let worlds = doc["countermodel"]["worlds"].as_array().unwrap();
    assert_eq!(worlds.len(), 2, "countermodel must use exactly 2 worlds");

    let lhs = formula("(p & q) => r");
    let rhs = formula("(p => r) | (q => r)");
    let sig = shared_sig(&lhs, &rhs);
    let model = model_from_doc(&doc["countermodel"], &sig);
    assert!(eval_strict_assert(&lhs, &model).unwrap(), "lhs must hold on the countermodel");
    assert!(!eval_strict_assert(&rhs, &model).unwrap(), "rhs must fail on the countermodel");

    // Minimality: every single-world model gives both sides the same value.
    let space = enumerate_structures(&sig, 1, &EnumCaps::default()).unwrap();
    let mut singletons = 0u32;
    for s in space.iter() {
        let m = KripkeModel::singleton(s);
        assert_eq!(
            eval_strict_assert(&lhs, &m).unwrap(),
            eval_strict_assert(&rhs, &m).unwrap(),
            "a single-world model separated the sides"
        );
        singletons += 1;
    }
    assert_eq!(singletons, 8);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "PASS criterion 2: strict split not equivalent, 2-world countermodel replays \
         true/false, all {singletons} single-world models agree ({elapsed:?})"
    );
}

#[test]
fn criterion_3_first_order_paradox_is_bounded_equivalent_over_28_structures() {
    let started = Instant::now();
    let (code, out, err) =
        cli(&["equiv", "--json", "(forall x. P(x)) -> r", "exists x. (P(x) -> r)"]);
    let elapsed = started.elapsed();
    assert_eq!(code, 0, "stderr: {err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["verdict"], "equivalent");
    assert_eq!(doc["exact"], false);
    assert_eq!(doc["bounds"]["max_domain"], 3);
    // 2^(d+1) structures for each domain size d = 1, 2, 3: 4 + 8 + 16.
    assert_eq!(doc["statistics"]["models_examined"], 28);
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "PASS criterion 3: first-order paradox equivalent within bounds, \
         28 structures examined ({elapsed:?})"
    );
}

#[test]
fn criterion_4_strict_first_order_countermodel_is_minimal() {
    let started = Instant::now();
    let (code, out, err) = cli(&[
        "equiv",
        "--semantics",
        "strict",
        "--json",
        "(forall x. P(x)) => r",
        "exists x. (P(x) => r)",
    ]);
    assert_eq!(code, 1, "stderr: {err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["verdict"], "not_equivalent");
    let cm = &doc["countermodel"];
    assert_eq!(cm["domain_size"], 2, "countermodel must use 2 individuals");
    let worlds = cm["worlds"].as_array().unwrap();
    assert_eq!(worlds.len(), 2, "countermodel must use 2 worlds");

    let lhs = formula("(forall x. P(x)) => r");
    let rhs = formula("exists x. (P(x) => r)");
    let sig = shared_sig(&lhs, &rhs);
    let model = model_from_doc(cm, &sig);
    assert!(eval_strict_assert(&lhs, &model).unwrap());
    assert!(!eval_strict_assert(&rhs, &model).unwrap());

    // No countermodel at domain size 1, whatever the world count.
    let domain_one = Bounds { max_domain: 1, ..Bounds::default() };
    let v = equiv_strict(&lhs, &rhs, &domain_one, StrictMode::Assertional).unwrap();
    assert!(matches!(v, Verdict::Equivalent { .. }), "domain size 1 must not separate the sides");

    // No countermodel with 1 world, whatever the domain size.
    let one_world = Bounds { max_worlds: 1, ..Bounds::default() };
    let v = equiv_strict(&lhs, &rhs, &one_world, StrictMode::Assertional).unwrap();
    assert!(matches!(v, Verdict::Equivalent { .. }), "single worlds must not separate the sides");

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "PASS criterion 4: strict first-order pair not equivalent; countermodel needs \
         domain 2 and 2 worlds, none at domain 1 or with 1 world ({elapsed:?})"
    );
}

#[test]
fn criterion_5_law_survival_pattern() {
    let (code, out, err) = cli(&["laws", "--json"]);
    assert_eq!(code, 1, "a failing law must set the exit code; stderr: {err}");
    let doc: Value = serde_json::from_str(&out).unwrap();
    let laws = doc["laws"].as_array().unwrap();
    let get = |name: &str| {
        laws.iter()
            .find(|l| l["name"] == name)
            .unwrap_or_else(|| panic!("law {name} missing"))
    };
    for survivor in ["cases-2", "cases-3", "biconditional-split", "contraposition"] {
        assert_eq!(get(survivor)["survives"], true, "{survivor} must survive");
    }
    let split = get("conjunctive-antecedent-split");
    assert_eq!(split["survives"], false);
    assert_eq!(split["classical"], "equivalent");
    assert_eq!(split["strict"], "not_equivalent");
    println!(
        "PASS criterion 5: cases (n=2,3), biconditional-split, contraposition survive; \
         conjunctive-antecedent-split is classically equivalent but strictly not"
    );
}

#[test]
fn criterion_6_lifting_soundness_on_500_random_pairs() {
    let sig = ambient_sig();
    let mut rng = Rng(0x6c69_6674_u64);
    let mut checked = 0u32;
    while checked < 500 {
        let f = gen_sentence(&mut rng, 2, 0, true);
        let m = gen_model(&mut rng, &sig);
        let direct = eval_strict_assert(&f, &m).unwrap();
        let encoded = eval_via_encoding(&f, &m, &sig).unwrap();
        assert_eq!(
            encoded,
            direct,
            "lift/encode disagreed with Kripke evaluation on {}",
            f.render()
        );
        checked += 1;
    }
    println!("PASS criterion 6: lifting soundness on {checked} random (sentence, model) pairs, 0 mismatches");
}

#[test]
fn criterion_7_singleton_collapse_on_500_random_sentences() {
    let sig = ambient_sig();
    let mut rng = Rng(0x636f_6c6c_u64);
    let mut checked = 0u32;
    while checked < 500 {
        let f = gen_sentence(&mut rng, 2, 0, true);
        let d = 1 + rng.below(2) as usize;
        let space = enumerate_structures(&sig, d, &EnumCaps::default()).unwrap();
        let w = space.get(rng.below(space.len())).unwrap();
        let strict = eval_strict_assert(&f, &KripkeModel::singleton(w.clone())).unwrap();
        let material = eval_fo(&f.erase_strict(), &w).unwrap();
        assert_eq!(
            strict,
            material,
            "strict and erased readings split on one world for {}",
            f.render()
        );
        checked += 1;
    }
    println!("PASS criterion 7: singleton collapse on {checked} random sentences, 0 mismatches");
}

#[test]
fn criterion_8_round_trip_and_byte_identical_output() {
    let mut rng = Rng(0x726f_756e_u64);
    let mut checked = 0u32;
    while checked < 1000 {
        let f = gen_sentence(&mut rng, 3, 0, true);
        let rendered = f.render();
        let back = parse(&rendered)
            .unwrap_or_else(|e| panic!("render of {rendered} failed to parse: {e}"))
            .formula;
        assert_eq!(back, f, "round trip changed {rendered}");
        checked += 1;
    }

    let invocations: [&[&str]; 4] = [
        &["equiv", "--semantics", "strict", "--json", "(p & q) => r", "(p => r) | (q => r)"],
        &["equiv", "--json", "(p & q) -> r", "(p -> r) | (q -> r)"],
        &["laws", "--json"],
        &["demo"],
    ];
    for args in invocations {
        let first = cli(args);
        let second = cli(args);
        assert_eq!(first, second, "output drifted between runs of {args:?}");
        assert!(!first.1.is_empty(), "no output from {args:?}");
    }
    println!(
        "PASS criterion 8: parse/render round trip on {checked} random formulas; \
         repeated invocations byte-identical across {} commands",
        invocations.len()
    );
}
