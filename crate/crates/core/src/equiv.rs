//! Bounded equivalence checking with minimal countermodels, and the law
//! catalog that classifies classical conditional laws by whether they
//! survive the strict reading.
//!
//! Search order is fixed: domain size ascending, world count ascending,
//! then enumeration index (combinations of structure indices in
//! lexicographic order). The first model that separates two formulas is
//! therefore canonical, and countermodels reproduce bit-for-bit.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Signature, SignatureError};
use crate::material::{
    enumerate_structures, enumerate_valuations, eval_fo, eval_prop, CapExceeded, EnumCaps,
    EvalError, Structure, Valuation,
};
use crate::parser::parse;
use crate::worlds::{eval_strict_assert, eval_strict_at, KripkeModel};

/// Search limits. `max_models` is a global budget on Kripke models examined
/// in one query, so a query that cannot finish fails loudly instead of
/// hanging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_domain: u32,
    pub max_worlds: u32,
    pub caps: EnumCaps,
    pub max_models: u64,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            max_domain: 3,
            max_worlds: 4,
            caps: EnumCaps::default(),
            max_models: 5_000_000,
        }
    }
}

/// Whether strict equivalence compares asserted truth (one value per model)
/// or truth at every world of every model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrictMode {
    #[default]
    Assertional,
    Pointwise,
}

/// What a search looked at, reported inside every verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Every valuation over `atoms` propositional atoms (exhaustive).
    Valuations { atoms: u32 },
    /// Every structure at every domain size up to the bound.
    Structures { max_domain: u32 },
    /// Every Kripke model within the bounds (for propositional inputs the
    /// domain is trivially 1).
    KripkeModels { max_domain: u32, max_worlds: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    pub models_examined: u64,
}

/// The model on which two formulas disagree. For strict verdicts in
/// pointwise mode, `world` is the index of a world where the values differ;
/// in assertional mode the asserted values differ and `world` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Countermodel {
    Valuation(Valuation),
    Structure(Structure),
    Kripke { model: KripkeModel, world: Option<usize> },
}

/// Outcome of an equivalence query. `exact` marks searches that cover the
/// full semantics (all valuations, or all world-sets over the atoms);
/// otherwise Equivalent means "within the searched bounds".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent { exact: bool, searched: SearchSpace, stats: SearchStats },
    NotEquivalent { countermodel: Countermodel, stats: SearchStats },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            Verdict::Equivalent { stats, .. } | Verdict::NotEquivalent { stats, .. } => *stats,
        }
    }
}

/// Failures of an equivalence query itself (as opposed to a NotEquivalent
/// verdict, which is a successful answer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivError {
    Cap(CapExceeded),
    Eval(EvalError),
    Signature(SignatureError),
}

impl fmt::Display for EquivError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivError::Cap(e) => write!(f, "{e}"),
            EquivError::Eval(e) => write!(f, "{e}"),
            EquivError::Signature(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EquivError {}

impl From<CapExceeded> for EquivError {
    fn from(e: CapExceeded) -> EquivError {
        EquivError::Cap(e)
    }
}

impl From<EvalError> for EquivError {
    fn from(e: EvalError) -> EquivError {
        EquivError::Eval(e)
    }
}

impl From<SignatureError> for EquivError {
    fn from(e: SignatureError) -> EquivError {
        EquivError::Signature(e)
    }
}

fn shared_signature(f: &Formula, g: &Formula) -> Result<Signature, EquivError> {
    Ok(f.infer_signature()?.union(&g.infer_signature()?)?)
}

/// Exact propositional equivalence: truth tables over the union of both
/// formulas' atoms.
pub fn equiv_material_prop(f: &Formula, g: &Formula, caps: &EnumCaps) -> Result<Verdict, EquivError> {
    if !f.is_propositional() || !g.is_propositional() {
        return Err(EquivError::Eval(if f.contains_strict() || g.contains_strict() {
            EvalError::UnsupportedConnective
        } else {
            EvalError::NotPropositional
        }));
    }
    let sig = shared_signature(f, g)?;
    let space = enumerate_valuations(&sig, caps)?;
    let atoms = space.atoms().len() as u32;
    let mut examined = 0u64;
    for v in space.iter() {
        examined += 1;
        if eval_prop(f, &v)? != eval_prop(g, &v)? {
            return Ok(Verdict::NotEquivalent {
                countermodel: Countermodel::Valuation(v),
                stats: SearchStats { models_examined: examined },
            });
        }
    }
    Ok(Verdict::Equivalent {
        exact: true,
        searched: SearchSpace::Valuations { atoms },
        stats: SearchStats { models_examined: examined },
    })
}

/// Bounded first-order equivalence: all structures at every domain size from
/// 1 to the bound. An Equivalent verdict here is evidence, not proof.
pub fn equiv_material_fo(f: &Formula, g: &Formula, b: &Bounds) -> Result<Verdict, EquivError> {
    if f.contains_strict() || g.contains_strict() {
        return Err(EquivError::Eval(EvalError::UnsupportedConnective));
    }
    let sig = shared_signature(f, g)?;
    let mut examined = 0u64;
    for d in 1..=b.max_domain.max(1) {
        let space = enumerate_structures(&sig, d as usize, &b.caps)?;
        for s in space.iter() {
            examined += 1;
            if examined > b.max_models {
                return Err(EquivError::Cap(CapExceeded {
                    quantity: "models",
                    required: examined,
                    cap: b.max_models,
                }));
            }
            if eval_fo(f, &s)? != eval_fo(g, &s)? {
                return Ok(Verdict::NotEquivalent {
                    countermodel: Countermodel::Structure(s),
                    stats: SearchStats { models_examined: examined },
                });
            }
        }
    }
    Ok(Verdict::Equivalent {
        exact: false,
        searched: SearchSpace::Structures { max_domain: b.max_domain.max(1) },
        stats: SearchStats { models_examined: examined },
    })
}

// Lexicographic k-combinations of 0..n.
struct Combinations {
    n: u64,
    indices: Vec<u64>,
    started: bool,
    done: bool,
}

impl Combinations {
    fn new(n: u64, k: u64) -> Combinations {
        Combinations {
            n,
            indices: (0..k).collect(),
            started: false,
            done: k > n || k == 0,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.indices.clone());
        }
        let k = self.indices.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.indices[i] < self.n - (k as u64 - i as u64) {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                return Some(self.indices.clone());
            }
        }
    }
}

/// Whether the formula is propositional once strict arrows are read
/// materially — the case where world search alone decides equivalence.
fn propositional_modulo_strict(f: &Formula) -> bool {
    f.erase_strict().is_propositional()
}

/// Bounded strict equivalence over Kripke models. Propositional inputs fix
/// the domain at 1 and are exact whenever `max_worlds` covers every set of
/// distinct valuations (`max_worlds >= 2^atoms`); first-order inputs search
/// domains up to the bound.
pub fn equiv_strict(
    f: &Formula,
    g: &Formula,
    b: &Bounds,
    mode: StrictMode,
) -> Result<Verdict, EquivError> {
    let sig = shared_signature(f, g)?;
    let prop_inputs = propositional_modulo_strict(f) && propositional_modulo_strict(g);
    let max_domain = if prop_inputs { 1 } else { b.max_domain.max(1) };
    let mut examined = 0u64;
    let mut exact = false;
    for d in 1..=max_domain {
        let space = enumerate_structures(&sig, d as usize, &b.caps)?;
        let world_pool = space.len();
        if prop_inputs && b.max_worlds as u64 >= world_pool {
            exact = true;
        }
        let max_k = (b.max_worlds as u64).min(world_pool);
        for k in 1..=max_k {
            for combo in Combinations::new(world_pool, k) {
                examined += 1;
                if examined > b.max_models {
                    return Err(EquivError::Cap(CapExceeded {
                        quantity: "models",
                        required: examined,
                        cap: b.max_models,
                    }));
                }
                let worlds: Vec<Structure> = combo
                    .iter()
                    .map(|&i| space.get(i).expect("combination index in range"))
                    .collect();
                let m = KripkeModel::new(d as usize, worlds)
                    .expect("enumerated worlds share domain and vocabulary");
                match mode {
                    StrictMode::Assertional => {
                        if eval_strict_assert(f, &m)? != eval_strict_assert(g, &m)? {
                            return Ok(Verdict::NotEquivalent {
                                countermodel: Countermodel::Kripke { model: m, world: None },
                                stats: SearchStats { models_examined: examined },
                            });
                        }
                    }
                    StrictMode::Pointwise => {
                        for w in 0..m.world_count() {
                            if eval_strict_at(f, &m, w)? != eval_strict_at(g, &m, w)? {
                                return Ok(Verdict::NotEquivalent {
                                    countermodel: Countermodel::Kripke {
                                        model: m,
                                        world: Some(w),
                                    },
                                    stats: SearchStats { models_examined: examined },
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::Equivalent {
        exact,
        searched: SearchSpace::KripkeModels { max_domain, max_worlds: b.max_worlds },
        stats: SearchStats { models_examined: examined },
    })
}

/// How one classical law fares under the strict reading: `classical` checks
/// the strict-erased sides, `strict` the sides as written, and the law
/// survives only if both are equivalences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub name: String,
    pub lhs: Formula,
    pub rhs: Formula,
    pub classical: Verdict,
    pub strict: Verdict,
    pub survives: bool,
}

/// Classifies one law. The classical check runs on `erase_strict` of both
/// sides (propositional formulas exactly, first-order ones within bounds);
/// the strict check runs assertionally on the formulas as given.
pub fn law_survival(
    name: &str,
    f: &Formula,
    g: &Formula,
    b: &Bounds,
) -> Result<LawReport, EquivError> {
    let ef = f.erase_strict();
    let eg = g.erase_strict();
    let classical = if ef.is_propositional() && eg.is_propositional() {
        equiv_material_prop(&ef, &eg, &b.caps)?
    } else {
        equiv_material_fo(&ef, &eg, b)?
    };
    let strict = equiv_strict(f, g, b, StrictMode::Assertional)?;
    let survives = classical.is_equivalent() && strict.is_equivalent();
    Ok(LawReport { name: String::from(name), lhs: f.clone(), rhs: g.clone(), classical, strict, survives })
}

/// A named candidate law: two sides that are classically equivalent when the
/// arrows are material.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Law {
    pub name: &'static str,
    pub lhs: Formula,
    pub rhs: Formula,
}

/// The built-in catalog: proof by cases (two- and three-way), splitting a
/// conjunctive antecedent, splitting a biconditional, contraposition, and
/// the quantifier-swap for a universal antecedent.
pub fn law_catalog() -> Vec<Law> {
    let entry = |name, lhs, rhs| Law {
        name,
        lhs: parse(lhs).expect("catalog formulas parse").formula,
        rhs: parse(rhs).expect("catalog formulas parse").formula,
    };
    alloc::vec![
        entry("cases-2", "(p | q) => r", "(p => r) & (q => r)"),
        entry("cases-3", "(p | q | s) => r", "(p => r) & (q => r) & (s => r)"),
        entry("conjunctive-antecedent-split", "(p & q) => r", "(p => r) | (q => r)"),
        entry("biconditional-split", "p <=> q", "(p => q) & (q => p)"),
        entry("contraposition", "p => q", "!q => !p"),
        entry(
            "universal-antecedent-swap",
            "(forall x. P(x)) => r",
            "exists x. (P(x) => r)"
        ),
    ]
}

/// Runs [`law_survival`] over the whole catalog.
pub fn law_survival_catalog(b: &Bounds) -> Result<Vec<LawReport>, EquivError> {
    law_catalog()
        .iter()
        .map(|law| law_survival(law.name, &law.lhs, &law.rhs, b))
        .collect()
}
