//! Classical single-world semantics: propositional valuations, finite
//! first-order structures, and exhaustive enumeration of both.
//!
//! Enumeration order is part of the public contract (countermodels are
//! reported as "first in this order"): valuations count lexicographically by
//! sorted atom name with false < true and the first atom as the most
//! significant bit; structures extend the same scheme with propositional
//! atoms first, then predicates sorted by name, each table's tuples in
//! lexicographic order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Formula;

/// Truth assignment for propositional atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, bool)>) -> Valuation {
        Valuation(pairs.into_iter().map(|(n, v)| (n.into(), v)).collect())
    }

    pub fn set(&mut self, atom: impl Into<String>, value: bool) {
        self.0.insert(atom.into(), value);
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.0.get(atom).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(n, &v)| (n.as_str(), v))
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter(|(_, &v)| v).map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One predicate's extension: the set of argument tuples it holds of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredTable {
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl PredTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[usize]> {
        self.tuples.iter().map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Finite classical structure: a nonempty integer domain `0..domain_size`,
/// truth values for propositional atoms, and a table per predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    domain_size: usize,
    props: BTreeMap<String, bool>,
    preds: BTreeMap<String, PredTable>,
}

/// Invariant violations when building structures or models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    EmptyDomain,
    NoWorlds,
    TupleArity { pred: String, declared: usize, actual: usize },
    ElementOutOfRange { pred: String, element: usize, domain_size: usize },
    DomainMismatch { expected: usize, found: usize },
    SignatureMismatch,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyDomain => f.write_str("domain must be nonempty"),
            ModelError::NoWorlds => f.write_str("a model needs at least one world"),
            ModelError::TupleArity { pred, declared, actual } => write!(
                f,
                "predicate `{pred}` has arity {declared} but was given a {actual}-tuple"
            ),
            ModelError::ElementOutOfRange { pred, element, domain_size } => write!(
                f,
                "element {element} in a tuple of `{pred}` is outside the domain 0..{domain_size}"
            ),
            ModelError::DomainMismatch { expected, found } => {
                write!(f, "world has domain size {found}, expected {expected}")
            }
            ModelError::SignatureMismatch => {
                f.write_str("worlds must share one vocabulary (same atoms and predicate arities)")
            }
        }
    }
}

impl core::error::Error for ModelError {}

impl Structure {
    pub fn new(domain_size: usize) -> Result<Structure, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Structure { domain_size, props: BTreeMap::new(), preds: BTreeMap::new() })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn set_prop(&mut self, name: impl Into<String>, value: bool) {
        self.props.insert(name.into(), value);
    }

    pub fn prop(&self, name: &str) -> Option<bool> {
        self.props.get(name).copied()
    }

    pub fn props(&self) -> impl Iterator<Item = (&str, bool)> {
        self.props.iter().map(|(n, &v)| (n.as_str(), v))
    }

    /// Creates an empty table for `name` if none exists. An empty table is a
    /// predicate that holds of nothing; a missing table is an evaluation
    /// error.
    pub fn ensure_pred(&mut self, name: impl Into<String>, arity: usize) {
        self.preds.entry(name.into()).or_insert(PredTable { arity, tuples: BTreeSet::new() });
    }

    pub fn add_tuple(&mut self, name: impl Into<String>, tuple: Vec<usize>) -> Result<(), ModelError> {
        let name = name.into();
        for &e in &tuple {
            if e >= self.domain_size {
                return Err(ModelError::ElementOutOfRange {
                    pred: name,
                    element: e,
                    domain_size: self.domain_size,
                });
            }
        }
        match self.preds.get_mut(&name) {
            Some(table) => {
                if table.arity != tuple.len() {
                    return Err(ModelError::TupleArity {
                        pred: name,
                        declared: table.arity,
                        actual: tuple.len(),
                    });
                }
                table.tuples.insert(tuple);
                Ok(())
            }
            None => {
                let mut tuples = BTreeSet::new();
                let arity = tuple.len();
                tuples.insert(tuple);
                self.preds.insert(name, PredTable { arity, tuples });
                Ok(())
            }
        }
    }

    pub fn pred(&self, name: &str) -> Option<&PredTable> {
        self.preds.get(name)
    }

    pub fn preds(&self) -> impl Iterator<Item = (&str, &PredTable)> {
        self.preds.iter().map(|(n, t)| (n.as_str(), t))
    }

    /// The structure's position in enumeration order, as a bit sequence
    /// (most significant slot first). Total order over structures that share
    /// a vocabulary and domain size; used to canonicalize world lists.
    pub fn canonical_key(&self) -> Vec<bool> {
        let mut key = Vec::new();
        for (_, v) in self.props.iter().map(|(n, v)| (n, *v)) {
            key.push(v);
        }
        for table in self.preds.values() {
            for tuple in tuples_lex(self.domain_size, table.arity) {
                key.push(table.contains(&tuple));
            }
        }
        key
    }
}

/// All tuples over `0..domain_size` of the given arity, lexicographically.
pub(crate) fn tuples_lex(domain_size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..domain_size).map(move |e| {
                    let mut next = t.clone();
                    next.push(e);
                    next
                })
            })
            .collect();
    }
    out
}

/// Evaluation failures. `UnsupportedConnective` is the strict arrow reaching
/// a single-world evaluator, which has no truth value for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    UnsupportedConnective,
    NotPropositional,
    FreeVariable(String),
    MissingAtom(String),
    MissingPredicate(String),
    PredicateArity { name: String, declared: usize, actual: usize },
    WorldNotInModel { index: usize, world_count: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnsupportedConnective => f.write_str(
                "the strict arrow `=>` has no single-world truth value; use strict semantics",
            ),
            EvalError::NotPropositional => {
                f.write_str("predicates and quantifiers need a structure, not a valuation")
            }
            EvalError::FreeVariable(v) => {
                write!(f, "free variable `{v}`; only sentences can be evaluated")
            }
            EvalError::MissingAtom(n) => write!(f, "atom `{n}` has no value in this world"),
            EvalError::MissingPredicate(n) => {
                write!(f, "predicate `{n}` has no table in this structure")
            }
            EvalError::PredicateArity { name, declared, actual } => write!(
                f,
                "predicate `{name}` has arity {declared} but is applied to {actual} argument(s)"
            ),
            EvalError::WorldNotInModel { index, world_count } => write!(
                f,
                "world index {index} is out of range for a model with {world_count} world(s)"
            ),
        }
    }
}

impl core::error::Error for EvalError {}

/// Truth-table evaluation of a propositional formula. Both operands of every
/// connective are evaluated (no short-circuit), so missing atoms are
/// reported wherever they occur.
pub fn eval_prop(f: &Formula, v: &Valuation) -> Result<bool, EvalError> {
    match f {
        Formula::PropAtom(name) => v.get(name).ok_or_else(|| EvalError::MissingAtom(name.clone())),
        Formula::PredAtom(_, _) | Formula::Forall(_, _) | Formula::Exists(_, _) => {
            Err(EvalError::NotPropositional)
        }
        Formula::StrictImp(_, _) => Err(EvalError::UnsupportedConnective),
        Formula::Not(c) => Ok(!eval_prop(c, v)?),
        Formula::And(a, b) => {
            let (x, y) = (eval_prop(a, v)?, eval_prop(b, v)?);
            Ok(x && y)
        }
        Formula::Or(a, b) => {
            let (x, y) = (eval_prop(a, v)?, eval_prop(b, v)?);
            Ok(x || y)
        }
        Formula::MaterialImp(a, b) => {
            let (x, y) = (eval_prop(a, v)?, eval_prop(b, v)?);
            Ok(!x || y)
        }
        Formula::Iff(a, b) => {
            let (x, y) = (eval_prop(a, v)?, eval_prop(b, v)?);
            Ok(x == y)
        }
    }
}

/// Tarskian evaluation of a first-order sentence over a finite structure.
/// Quantifiers range over `0..domain_size`.
pub fn eval_fo(f: &Formula, s: &Structure) -> Result<bool, EvalError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(EvalError::FreeVariable(v.name().into()));
    }
    eval_fo_env(f, s, &mut Vec::new())
}

fn eval_fo_env(
    f: &Formula,
    s: &Structure,
    env: &mut Vec<(String, usize)>,
) -> Result<bool, EvalError> {
    match f {
        Formula::PropAtom(name) => s.prop(name).ok_or_else(|| EvalError::MissingAtom(name.clone())),
        Formula::PredAtom(name, args) => {
            let table = s
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
        Formula::StrictImp(_, _) => Err(EvalError::UnsupportedConnective),
        Formula::Not(c) => Ok(!eval_fo_env(c, s, env)?),
        Formula::And(a, b) => {
            let (x, y) = (eval_fo_env(a, s, env)?, eval_fo_env(b, s, env)?);
            Ok(x && y)
        }
        Formula::Or(a, b) => {
            let (x, y) = (eval_fo_env(a, s, env)?, eval_fo_env(b, s, env)?);
            Ok(x || y)
        }
        Formula::MaterialImp(a, b) => {
            let (x, y) = (eval_fo_env(a, s, env)?, eval_fo_env(b, s, env)?);
            Ok(!x || y)
        }
        Formula::Iff(a, b) => {
            let (x, y) = (eval_fo_env(a, s, env)?, eval_fo_env(b, s, env)?);
            Ok(x == y)
        }
        Formula::Forall(var, body) => {
            let mut all = true;
            for e in 0..s.domain_size() {
                env.push((var.name().into(), e));
                let r = eval_fo_env(body, s, env);
                env.pop();
                all &= r?;
            }
            Ok(all)
        }
        Formula::Exists(var, body) => {
            let mut any = false;
            for e in 0..s.domain_size() {
                env.push((var.name().into(), e));
                let r = eval_fo_env(body, s, env);
                env.pop();
                any |= r?;
            }
            Ok(any)
        }
    }
}

/// Enumeration limits. Valuation enumeration is capped by atom count,
/// structure enumeration by total table bits; past a cap the tool fails
/// loudly instead of hanging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumCaps {
    pub max_atoms: u32,
    pub max_table_bits: u32,
}

impl Default for EnumCaps {
    fn default() -> EnumCaps {
        EnumCaps { max_atoms: 16, max_table_bits: 24 }
    }
}

/// An enumeration whose size would exceed the configured cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapExceeded {
    pub quantity: &'static str,
    pub required: u64,
    pub cap: u64,
}

impl fmt::Display for CapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "enumeration cap exceeded: needs {} {}, cap is {}",
            self.required, self.quantity, self.cap
        )
    }
}

impl core::error::Error for CapExceeded {}

/// The `2^n` valuations over a signature's atoms, in enumeration order.
/// Indexable and restartable; nothing is materialized up front.
#[derive(Debug, Clone)]
pub struct ValuationSpace {
    atoms: Vec<String>,
    count: u64,
}

impl ValuationSpace {
    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false // 2^n >= 1
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn get(&self, index: u64) -> Option<Valuation> {
        if index >= self.count {
            return None;
        }
        let n = self.atoms.len();
        let mut v = Valuation::new();
        for (j, atom) in self.atoms.iter().enumerate() {
            let bit = (index >> (n - 1 - j)) & 1;
            v.set(atom.clone(), bit == 1);
        }
        Some(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = Valuation> + '_ {
        (0..self.count).map(move |i| self.get(i).expect("index in range"))
    }
}

/// All valuations over `sig`'s propositional atoms, lexicographic by sorted
/// atom name with false < true (first atom most significant).
pub fn enumerate_valuations(
    sig: &crate::formula::Signature,
    caps: &EnumCaps,
) -> Result<ValuationSpace, CapExceeded> {
    let atoms: Vec<String> = sig.props().map(String::from).collect();
    let n = atoms.len() as u64;
    if n > caps.max_atoms as u64 {
        return Err(CapExceeded { quantity: "propositional atoms", required: n, cap: caps.max_atoms as u64 });
    }
    let count = 1u64
        .checked_shl(n as u32)
        .ok_or(CapExceeded { quantity: "propositional atoms", required: n, cap: 63 })?;
    Ok(ValuationSpace { atoms, count })
}

/// The `2^B` structures over a signature at one domain size, where `B` is
/// prop atoms plus `domain_size^arity` summed over predicates.
#[derive(Debug, Clone)]
pub struct StructureSpace {
    domain_size: usize,
    props: Vec<String>,
    preds: Vec<(String, usize)>,
    bits: u32,
    count: u64,
}

impl StructureSpace {
    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false // 2^B >= 1
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn get(&self, index: u64) -> Option<Structure> {
        if index >= self.count {
            return None;
        }
        let mut s = Structure::new(self.domain_size).expect("space has a nonempty domain");
        let mut pos: u32 = 0;
        let bit = |pos: &mut u32| {
            let b = (index >> (self.bits - 1 - *pos)) & 1 == 1;
            *pos += 1;
            b
        };
        for prop in &self.props {
            let b = bit(&mut pos);
            s.set_prop(prop.clone(), b);
        }
        for (name, arity) in &self.preds {
            s.ensure_pred(name.clone(), *arity);
            for tuple in tuples_lex(self.domain_size, *arity) {
                if bit(&mut pos) {
                    s.add_tuple(name.clone(), tuple).expect("enumerated tuples are in range");
                }
            }
        }
        Some(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = Structure> + '_ {
        (0..self.count).map(move |i| self.get(i).expect("index in range"))
    }
}

/// All structures over `sig` with the given domain size, in enumeration
/// order: prop atoms first, then predicates sorted by name, tuples
/// lexicographic, first slot most significant.
pub fn enumerate_structures(
    sig: &crate::formula::Signature,
    domain_size: usize,
    caps: &EnumCaps,
) -> Result<StructureSpace, CapExceeded> {
    assert!(domain_size >= 1, "domains are nonempty");
    let props: Vec<String> = sig.props().map(String::from).collect();
    let preds: Vec<(String, usize)> = sig.preds().map(|(n, a)| (String::from(n), a)).collect();
    let mut bits = props.len() as u64;
    for (_, arity) in &preds {
        let table = (domain_size as u64)
            .checked_pow(*arity as u32)
            .ok_or(CapExceeded { quantity: "table bits", required: u64::MAX, cap: caps.max_table_bits as u64 })?;
        bits = bits
            .checked_add(table)
            .ok_or(CapExceeded { quantity: "table bits", required: u64::MAX, cap: caps.max_table_bits as u64 })?;
    }
    if bits > caps.max_table_bits as u64 {
        return Err(CapExceeded { quantity: "table bits", required: bits, cap: caps.max_table_bits as u64 });
    }
    let count = 1u64
        .checked_shl(bits as u32)
        .ok_or(CapExceeded { quantity: "table bits", required: bits, cap: 63 })?;
    Ok(StructureSpace { domain_size, props, preds, bits: bits as u32, count })
}
