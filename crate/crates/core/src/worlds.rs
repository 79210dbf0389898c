//! World-quantified semantics for the strict conditional.
//!
//! Two independent readings are implemented and tested against each other:
//!
//! * a **syntactic lifting** that indexes every atom with a world variable
//!   and turns each `A => B` into `forall v. (A@v -> B@v)` with `v` fresh,
//!   plus `assert_closure`, which universally closes the designated world
//!   variable of an asserted sentence;
//! * a **direct evaluator** over Kripke models with universal accessibility
//!   and a constant individual domain, where `A => B` holds iff the material
//!   conditional holds at every world.
//!
//! `encode_model` bridges the two: it flattens a Kripke model into one
//! classical two-sorted structure so that the lifted formula, relativized to
//! sort guards, can be run through the ordinary first-order evaluator.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Signature, Var};
use crate::material::{eval_fo, EvalError, ModelError, Structure};

/// Variable ranging over worlds. Kept in its own type so world and
/// individual variables cannot be confused; generated names come from the
/// reserved family `u, u1, u2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldVar(String);

impl WorldVar {
    pub fn new(name: impl Into<String>) -> WorldVar {
        WorldVar(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WorldVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Source of fresh world variables: yields `u, u1, u2, ...`, skipping any
/// reserved name, so generated variables never collide with a formula's
/// atoms or individual variables (which share the lowercase namespace).
#[derive(Debug, Clone)]
pub struct WorldVarGen {
    reserved: BTreeSet<String>,
    next: usize,
}

impl WorldVarGen {
    pub fn new(reserved: BTreeSet<String>) -> WorldVarGen {
        WorldVarGen { reserved, next: 0 }
    }

    /// Reserves every lowercase name occurring in `f`.
    pub fn for_formula(f: &Formula) -> WorldVarGen {
        WorldVarGen::new(f.lowercase_names())
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.reserved.insert(name.into());
    }

    pub fn fresh(&mut self) -> WorldVar {
        loop {
            let name = if self.next == 0 { String::from("u") } else { format!("u{}", self.next) };
            self.next += 1;
            if !self.reserved.contains(&name) {
                return WorldVar(name);
            }
        }
    }
}

/// Two-sorted first-order formula produced by lifting: every atom carries a
/// world index (`p@u`, `P(x)@u`), the strict arrow is gone, and world
/// quantification is universal only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftedFormula {
    PropAt(String, WorldVar),
    PredAt(String, Vec<Var>, WorldVar),
    Not(Box<LiftedFormula>),
    And(Box<LiftedFormula>, Box<LiftedFormula>),
    Or(Box<LiftedFormula>, Box<LiftedFormula>),
    Imp(Box<LiftedFormula>, Box<LiftedFormula>),
    Iff(Box<LiftedFormula>, Box<LiftedFormula>),
    Forall(Var, Box<LiftedFormula>),
    Exists(Var, Box<LiftedFormula>),
    ForallWorld(WorldVar, Box<LiftedFormula>),
}

impl LiftedFormula {
    pub fn render(&self) -> String {
        use alloc::string::ToString;
        self.to_string()
    }

    /// World variables with an occurrence not bound by a `ForallWorld`.
    pub fn free_world_vars(&self) -> BTreeSet<WorldVar> {
        fn walk(f: &LiftedFormula, bound: &mut Vec<WorldVar>, free: &mut BTreeSet<WorldVar>) {
            match f {
                LiftedFormula::PropAt(_, w) | LiftedFormula::PredAt(_, _, w) => {
                    if !bound.contains(w) {
                        free.insert(w.clone());
                    }
                }
                LiftedFormula::Not(c) => walk(c, bound, free),
                LiftedFormula::And(a, b)
                | LiftedFormula::Or(a, b)
                | LiftedFormula::Imp(a, b)
                | LiftedFormula::Iff(a, b) => {
                    walk(a, bound, free);
                    walk(b, bound, free);
                }
                LiftedFormula::Forall(_, body) | LiftedFormula::Exists(_, body) => {
                    walk(body, bound, free)
                }
                LiftedFormula::ForallWorld(w, body) => {
                    bound.push(w.clone());
                    walk(body, bound, free);
                    bound.pop();
                }
            }
        }
        let mut free = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut free);
        free
    }

    /// Bound world variables in pre-order (for freshness checks).
    pub fn bound_world_vars(&self) -> Vec<WorldVar> {
        fn walk(f: &LiftedFormula, out: &mut Vec<WorldVar>) {
            match f {
                LiftedFormula::PropAt(_, _) | LiftedFormula::PredAt(_, _, _) => {}
                LiftedFormula::Not(c) => walk(c, out),
                LiftedFormula::And(a, b)
                | LiftedFormula::Or(a, b)
                | LiftedFormula::Imp(a, b)
                | LiftedFormula::Iff(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                LiftedFormula::Forall(_, body) | LiftedFormula::Exists(_, body) => walk(body, out),
                LiftedFormula::ForallWorld(w, body) => {
                    out.push(w.clone());
                    walk(body, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

// Same parenthesization policy as the surface syntax: binary operands are
// bare only when atomic or negated; quantifier bodies also stay bare when
// they are quantifiers themselves.

fn lifted_operand_bare(f: &LiftedFormula) -> bool {
    matches!(
        f,
        LiftedFormula::PropAt(_, _) | LiftedFormula::PredAt(_, _, _) | LiftedFormula::Not(_)
    )
}

fn lifted_body_bare(f: &LiftedFormula) -> bool {
    lifted_operand_bare(f)
        || matches!(
            f,
            LiftedFormula::Forall(_, _) | LiftedFormula::Exists(_, _) | LiftedFormula::ForallWorld(_, _)
        )
}

fn fmt_lifted_operand(f: &LiftedFormula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if lifted_operand_bare(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

fn fmt_lifted_body(f: &LiftedFormula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if lifted_body_bare(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

fn fmt_lifted_binary(
    a: &LiftedFormula,
    op: &str,
    b: &LiftedFormula,
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    fmt_lifted_operand(a, out)?;
    write!(out, " {op} ")?;
    fmt_lifted_operand(b, out)
}

impl fmt::Display for LiftedFormula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftedFormula::PropAt(name, w) => write!(out, "{name}@{w}"),
            LiftedFormula::PredAt(name, args, w) => {
                write!(out, "{name}(")?;
                for (i, v) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(",")?;
                    }
                    write!(out, "{v}")?;
                }
                write!(out, ")@{w}")
            }
            LiftedFormula::Not(c) => {
                out.write_str("!")?;
                if lifted_operand_bare(c) {
                    write!(out, "{c}")
                } else {
                    write!(out, "({c})")
                }
            }
            LiftedFormula::And(a, b) => fmt_lifted_binary(a, "&", b, out),
            LiftedFormula::Or(a, b) => fmt_lifted_binary(a, "|", b, out),
            LiftedFormula::Imp(a, b) => fmt_lifted_binary(a, "->", b, out),
            LiftedFormula::Iff(a, b) => fmt_lifted_binary(a, "<->", b, out),
            LiftedFormula::Forall(v, body) => {
                write!(out, "forall {v}. ")?;
                fmt_lifted_body(body, out)
            }
            LiftedFormula::Exists(v, body) => {
                write!(out, "exists {v}. ")?;
                fmt_lifted_body(body, out)
            }
            LiftedFormula::ForallWorld(w, body) => {
                write!(out, "forall {w}. ")?;
                fmt_lifted_body(body, out)
            }
        }
    }
}

fn lift_rec(f: &Formula, w: Option<&WorldVar>, gen: &mut WorldVarGen) -> LiftedFormula {
    match f {
        Formula::PropAtom(name) => LiftedFormula::PropAt(
            name.clone(),
            w.expect("atom outside every strict arrow needs a world variable").clone(),
        ),
        Formula::PredAtom(name, args) => LiftedFormula::PredAt(
            name.clone(),
            args.clone(),
            w.expect("atom outside every strict arrow needs a world variable").clone(),
        ),
        Formula::Not(c) => LiftedFormula::Not(Box::new(lift_rec(c, w, gen))),
        Formula::And(a, b) => LiftedFormula::And(
            Box::new(lift_rec(a, w, gen)),
            Box::new(lift_rec(b, w, gen)),
        ),
        Formula::Or(a, b) => LiftedFormula::Or(
            Box::new(lift_rec(a, w, gen)),
            Box::new(lift_rec(b, w, gen)),
        ),
        Formula::MaterialImp(a, b) => LiftedFormula::Imp(
            Box::new(lift_rec(a, w, gen)),
            Box::new(lift_rec(b, w, gen)),
        ),
        Formula::Iff(a, b) => LiftedFormula::Iff(
            Box::new(lift_rec(a, w, gen)),
            Box::new(lift_rec(b, w, gen)),
        ),
        Formula::StrictImp(a, b) => {
            let v = gen.fresh();
            let body = LiftedFormula::Imp(
                Box::new(lift_rec(a, Some(&v), gen)),
                Box::new(lift_rec(b, Some(&v), gen)),
            );
            LiftedFormula::ForallWorld(v, Box::new(body))
        }
        Formula::Forall(x, body) => {
            LiftedFormula::Forall(x.clone(), Box::new(lift_rec(body, w, gen)))
        }
        Formula::Exists(x, body) => {
            LiftedFormula::Exists(x.clone(), Box::new(lift_rec(body, w, gen)))
        }
    }
}

/// Indexes every atom of `f` with `w` and expands each `A => B` into
/// `forall v. (A@v -> B@v)` with `v` fresh (never colliding with `w` or any
/// lowercase name in `f`). One wrinkle keeps the output tidy: when `f` is
/// itself a strict conditional, `w` cannot occur anywhere in the result, so
/// the top arrow binds `w` directly instead of inventing a new name.
pub fn lift(f: &Formula, w: &WorldVar) -> LiftedFormula {
    let mut gen = WorldVarGen::for_formula(f);
    gen.reserve(w.name());
    if let Formula::StrictImp(a, b) = f {
        let body = LiftedFormula::Imp(
            Box::new(lift_rec(a, Some(w), &mut gen)),
            Box::new(lift_rec(b, Some(w), &mut gen)),
        );
        return LiftedFormula::ForallWorld(w.clone(), Box::new(body));
    }
    lift_rec(f, Some(w), &mut gen)
}

/// True when some atom of `f` occurs outside every strict arrow, i.e. the
/// lift of `f` actually mentions its designated world variable.
pub fn has_atom_outside_strict(f: &Formula) -> bool {
    match f {
        Formula::PropAtom(_) | Formula::PredAtom(_, _) => true,
        Formula::StrictImp(_, _) => false,
        Formula::Not(c) => has_atom_outside_strict(c),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::MaterialImp(a, b)
        | Formula::Iff(a, b) => has_atom_outside_strict(a) || has_atom_outside_strict(b),
        Formula::Forall(_, body) | Formula::Exists(_, body) => has_atom_outside_strict(body),
    }
}

/// The asserted reading of `f`: `forall u. lift(f, u)`. The closure is
/// emitted even when `f`'s lift does not mention `u` (all atoms under strict
/// arrows); the vacuous quantifier is harmless and keeps the reading uniform.
pub fn assert_closure(f: &Formula) -> LiftedFormula {
    let mut gen = WorldVarGen::for_formula(f);
    let w = gen.fresh();
    let body = lift_rec(f, Some(&w), &mut gen);
    LiftedFormula::ForallWorld(w, Box::new(body))
}

/// Like [`assert_closure`] but without the vacuous outer quantifier when `f`
/// has no atom outside a strict arrow; the display form the CLI prints.
pub fn lifted_sentence(f: &Formula) -> LiftedFormula {
    if has_atom_outside_strict(f) {
        assert_closure(f)
    } else {
        let mut gen = WorldVarGen::for_formula(f);
        lift_rec(f, None, &mut gen)
    }
}

/// Kripke model with universal accessibility: a nonempty set of worlds, each
/// a classical structure over one shared domain and one shared vocabulary.
/// Construction canonicalizes: duplicate worlds are dropped and the rest are
/// sorted into enumeration order, so equal models compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    domain_size: usize,
    worlds: Vec<Structure>,
}

impl KripkeModel {
    pub fn new(domain_size: usize, worlds: Vec<Structure>) -> Result<KripkeModel, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        for w in &worlds {
            if w.domain_size() != domain_size {
                return Err(ModelError::DomainMismatch {
                    expected: domain_size,
                    found: w.domain_size(),
                });
            }
        }
        let vocab = |s: &Structure| -> (Vec<String>, Vec<(String, usize)>) {
            (
                s.props().map(|(n, _)| String::from(n)).collect(),
                s.preds().map(|(n, t)| (String::from(n), t.arity())).collect(),
            )
        };
        let first = vocab(&worlds[0]);
        if worlds.iter().skip(1).any(|w| vocab(w) != first) {
            return Err(ModelError::SignatureMismatch);
        }
        let mut worlds = worlds;
        worlds.sort_by_key(Structure::canonical_key);
        worlds.dedup();
        Ok(KripkeModel { domain_size, worlds })
    }

    /// One-world model over the structure's own domain.
    pub fn singleton(world: Structure) -> KripkeModel {
        let domain_size = world.domain_size();
        KripkeModel::new(domain_size, alloc::vec![world]).expect("one world, nonempty domain")
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[Structure] {
        &self.worlds
    }

    // Bypasses canonicalization so tests can exercise literal multisets.
    #[cfg(test)]
    pub(crate) fn raw(domain_size: usize, worlds: Vec<Structure>) -> KripkeModel {
        KripkeModel { domain_size, worlds }
    }
}

fn eval_at(
    f: &Formula,
    m: &KripkeModel,
    world: usize,
    env: &mut Vec<(String, usize)>,
) -> Result<bool, EvalError> {
    let here = &m.worlds()[world];
    match f {
        Formula::PropAtom(name) => {
            here.prop(name).ok_or_else(|| EvalError::MissingAtom(name.clone()))
        }
        Formula::PredAtom(name, args) => {
            let table = here
                .pred(name)
                .ok_or_else(|| EvalError::MissingPredicate(name.clone()))?;
            if table.arity() != args.len() {
                return Err(EvalError::PredicateArity {
                    name: name.clone(),
                    declared: table.arity(),
                    actual: args.len(),
                });
            }
            let mut tuple = Vec::with_capacity(args.len());
            for arg in args {
                let e = env
                    .iter()
                    .rev()
                    .find(|(n, _)| n == arg.name())
                    .map(|&(_, e)| e)
                    .ok_or_else(|| EvalError::FreeVariable(arg.name().into()))?;
                tuple.push(e);
            }
            Ok(table.contains(&tuple))
        }
        Formula::Not(c) => Ok(!eval_at(c, m, world, env)?),
        Formula::And(a, b) => {
            let (x, y) = (eval_at(a, m, world, env)?, eval_at(b, m, world, env)?);
            Ok(x && y)
        }
        Formula::Or(a, b) => {
            let (x, y) = (eval_at(a, m, world, env)?, eval_at(b, m, world, env)?);
            Ok(x || y)
        }
        Formula::MaterialImp(a, b) => {
            let (x, y) = (eval_at(a, m, world, env)?, eval_at(b, m, world, env)?);
            Ok(!x || y)
        }
        Formula::Iff(a, b) => {
            let (x, y) = (eval_at(a, m, world, env)?, eval_at(b, m, world, env)?);
            Ok(x == y)
        }
        // The strict clause ignores the current world: the value is the same
        // at every world of the model. Individual bindings carry across
        // worlds (constant domain).
        Formula::StrictImp(a, b) => {
            let mut all = true;
            for j in 0..m.world_count() {
                let (x, y) = (eval_at(a, m, j, env)?, eval_at(b, m, j, env)?);
                all &= !x || y;
            }
            Ok(all)
        }
        Formula::Forall(var, body) => {
            let mut all = true;
            for e in 0..m.domain_size() {
                env.push((var.name().into(), e));
                let r = eval_at(body, m, world, env);
                env.pop();
                all &= r?;
            }
            Ok(all)
        }
        Formula::Exists(var, body) => {
            let mut any = false;
            for e in 0..m.domain_size() {
                env.push((var.name().into(), e));
                let r = eval_at(body, m, world, env);
                env.pop();
                any |= r?;
            }
            Ok(any)
        }
    }
}

/// Truth of `f` at one world of the model, by index into
/// [`KripkeModel::worlds`]. Classical connectives are local to the world;
/// `A => B` quantifies over all worlds and so takes the same value
/// everywhere.
pub fn eval_strict_at(f: &Formula, m: &KripkeModel, world: usize) -> Result<bool, EvalError> {
    if world >= m.world_count() {
        return Err(EvalError::WorldNotInModel { index: world, world_count: m.world_count() });
    }
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(EvalError::FreeVariable(v.name().into()));
    }
    eval_at(f, m, world, &mut Vec::new())
}

/// Asserted truth: `f` holds at every world of the model. This is the
/// model-side counterpart of [`assert_closure`].
pub fn eval_strict_assert(f: &Formula, m: &KripkeModel) -> Result<bool, EvalError> {
    let mut all = true;
    for w in 0..m.world_count() {
        all &= eval_strict_at(f, m, w)?;
    }
    Ok(all)
}

/// Sort-guard predicate marking world elements in an encoded model. The `@`
/// keeps the name outside the surface grammar, so it can never collide with
/// a user predicate.
pub const WORLD_SORT: &str = "@world";
/// Sort-guard predicate marking individual elements in an encoded model.
pub const INDIV_SORT: &str = "@indiv";

/// Flattens a Kripke model into one classical structure: the domain is the
/// individuals `0..d` followed by the worlds `d..d+k`, each propositional
/// atom becomes a unary predicate over worlds, each k-ary predicate becomes
/// (k+1)-ary with the world last, and the two sort guards partition the
/// domain.
pub fn encode_model(m: &KripkeModel, sig: &Signature) -> Structure {
    let d = m.domain_size();
    let k = m.world_count();
    let mut s = Structure::new(d + k).expect("d >= 1");
    s.ensure_pred(INDIV_SORT, 1);
    for e in 0..d {
        s.add_tuple(INDIV_SORT, alloc::vec![e]).expect("in range");
    }
    s.ensure_pred(WORLD_SORT, 1);
    for i in 0..k {
        s.add_tuple(WORLD_SORT, alloc::vec![d + i]).expect("in range");
    }
    for p in sig.props() {
        s.ensure_pred(p, 1);
        for (i, w) in m.worlds().iter().enumerate() {
            if w.prop(p) == Some(true) {
                s.add_tuple(p, alloc::vec![d + i]).expect("in range");
            }
        }
    }
    for (name, arity) in sig.preds() {
        s.ensure_pred(name, arity + 1);
        for (i, w) in m.worlds().iter().enumerate() {
            if let Some(table) = w.pred(name) {
                for tuple in table.tuples() {
                    let mut t = tuple.to_vec();
                    t.push(d + i);
                    s.add_tuple(name, t).expect("in range");
                }
            }
        }
    }
    s
}

/// The vocabulary of [`encode_model`]'s output for `sig`.
pub fn encoded_signature(sig: &Signature) -> Signature {
    let mut out = Signature::new();
    out.insert_pred_raw(INDIV_SORT, 1);
    out.insert_pred_raw(WORLD_SORT, 1);
    for p in sig.props() {
        out.insert_pred_raw(p, 1);
    }
    for (name, arity) in sig.preds() {
        out.insert_pred_raw(name, arity + 1);
    }
    out
}

/// Rewrites a lifted formula into a plain first-order formula over the
/// encoded vocabulary: `p@u` becomes `p(u)`, `P(x)@u` becomes `P(x,u)`, and
/// every quantifier is relativized to its sort guard.
pub fn relativize(lf: &LiftedFormula) -> Formula {
    match lf {
        LiftedFormula::PropAt(name, w) => {
            Formula::pred(name.clone(), alloc::vec![Var::new(w.name())])
        }
        LiftedFormula::PredAt(name, args, w) => {
            let mut full = args.clone();
            full.push(Var::new(w.name()));
            Formula::pred(name.clone(), full)
        }
        LiftedFormula::Not(c) => relativize(c).negate(),
        LiftedFormula::And(a, b) => relativize(a).and(relativize(b)),
        LiftedFormula::Or(a, b) => relativize(a).or(relativize(b)),
        LiftedFormula::Imp(a, b) => relativize(a).imp(relativize(b)),
        LiftedFormula::Iff(a, b) => relativize(a).iff(relativize(b)),
        LiftedFormula::Forall(x, body) => Formula::forall(
            x.clone(),
            Formula::pred(INDIV_SORT, alloc::vec![x.clone()]).imp(relativize(body)),
        ),
        LiftedFormula::Exists(x, body) => Formula::exists(
            x.clone(),
            Formula::pred(INDIV_SORT, alloc::vec![x.clone()]).and(relativize(body)),
        ),
        LiftedFormula::ForallWorld(w, body) => {
            let wv = Var::new(w.name());
            Formula::forall(
                wv.clone(),
                Formula::pred(WORLD_SORT, alloc::vec![wv]).imp(relativize(body)),
            )
        }
    }
}

/// End-to-end check used by tests: classical evaluation of the relativized
/// assert-closure over the encoded model.
pub fn eval_via_encoding(f: &Formula, m: &KripkeModel, sig: &Signature) -> Result<bool, EvalError> {
    let lifted = assert_closure(f);
    let classical = relativize(&lifted);
    eval_fo(&classical, &encode_model(m, sig))
}
