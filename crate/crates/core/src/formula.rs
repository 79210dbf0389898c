//! Formula AST, signatures, well-formedness checking, rendering, and the
//! strict-arrow erasure transform.
//!
//! Two conditionals live side by side in the tree: [`Formula::MaterialImp`]
//! (`->`, truth-functional at a single world) and [`Formula::StrictImp`]
//! (`=>`, read as a law over all worlds). Everything else is classical.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Individual variable. Lowercase identifier; shares the lowercase namespace
/// with propositional atoms, with binding context deciding which is which.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Var {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) const KEYWORDS: [&str; 2] = ["forall", "exists"];

fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

/// True for names the parser would read as a propositional atom or variable.
pub fn is_atom_name(name: &str) -> bool {
    is_ident(name) && name.starts_with(|c: char| c.is_ascii_lowercase())
}

/// True for names the parser would read as a predicate.
pub fn is_predicate_name(name: &str) -> bool {
    is_ident(name) && name.starts_with(|c: char| c.is_ascii_uppercase())
}

/// Declared vocabulary: propositional atoms (lowercase) and predicates
/// (uppercase, arity >= 1). The case split keeps the two namespaces disjoint;
/// 0-ary predicates are not representable, use a propositional atom instead.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    props: BTreeSet<String>,
    preds: BTreeMap<String, usize>,
}

/// Problems building or combining signatures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    BadAtomName(String),
    BadPredicateName(String),
    ZeroArity(String),
    ArityConflict { name: String, first: usize, second: usize },
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::BadAtomName(n) => {
                write!(f, "`{n}` is not a valid propositional atom name")
            }
            SignatureError::BadPredicateName(n) => {
                write!(f, "`{n}` is not a valid predicate name")
            }
            SignatureError::ZeroArity(n) => {
                write!(f, "predicate `{n}` must have arity >= 1")
            }
            SignatureError::ArityConflict { name, first, second } => {
                write!(f, "predicate `{name}` used with arity {first} and arity {second}")
            }
        }
    }
}

impl core::error::Error for SignatureError {}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn declare_prop(&mut self, name: impl Into<String>) -> Result<(), SignatureError> {
        let name = name.into();
        if !is_atom_name(&name) {
            return Err(SignatureError::BadAtomName(name));
        }
        self.props.insert(name);
        Ok(())
    }

    /// Declares `name` with the given arity. Re-declaring with the same arity
    /// is a no-op; a different arity is a conflict.
    pub fn declare_pred(
        &mut self,
        name: impl Into<String>,
        arity: usize,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        if !is_predicate_name(&name) {
            return Err(SignatureError::BadPredicateName(name));
        }
        if arity == 0 {
            return Err(SignatureError::ZeroArity(name));
        }
        match self.preds.get(&name) {
            Some(&a) if a != arity => Err(SignatureError::ArityConflict {
                name,
                first: a,
                second: arity,
            }),
            _ => {
                self.preds.insert(name, arity);
                Ok(())
            }
        }
    }

    // Internal entry point for machine-generated vocabularies (the two-sorted
    // encoding uses names no surface formula can mention).
    pub(crate) fn insert_pred_raw(&mut self, name: impl Into<String>, arity: usize) {
        self.preds.insert(name.into(), arity);
    }

    pub fn has_prop(&self, name: &str) -> bool {
        self.props.contains(name)
    }

    pub fn pred_arity(&self, name: &str) -> Option<usize> {
        self.preds.get(name).copied()
    }

    pub fn props(&self) -> impl Iterator<Item = &str> {
        self.props.iter().map(String::as_str)
    }

    pub fn preds(&self) -> impl Iterator<Item = (&str, usize)> {
        self.preds.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn prop_count(&self) -> usize {
        self.props.len()
    }

    pub fn pred_count(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty() && self.preds.is_empty()
    }

    /// Union of two vocabularies; fails if a predicate is declared with two
    /// different arities.
    pub fn union(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut out = self.clone();
        for name in &other.props {
            out.props.insert(name.clone());
        }
        for (name, &arity) in &other.preds {
            match out.preds.get(name) {
                Some(&a) if a != arity => {
                    return Err(SignatureError::ArityConflict {
                        name: name.clone(),
                        first: a,
                        second: arity,
                    })
                }
                _ => {
                    out.preds.insert(name.clone(), arity);
                }
            }
        }
        Ok(out)
    }
}

/// Formula over propositional atoms, predicate atoms, classical connectives,
/// the two conditionals, and individual quantifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    PropAtom(String),
    PredAtom(String, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `a -> b`: false only when `a` is true and `b` is false, at one world.
    MaterialImp(Box<Formula>, Box<Formula>),
    /// `a => b`: true iff `a -> b` holds at every world of the model.
    StrictImp(Box<Formula>, Box<Formula>),
    /// `a <-> b`: the material biconditional.
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::PropAtom(name.into())
    }

    pub fn pred(name: impl Into<String>, args: Vec<Var>) -> Formula {
        Formula::PredAtom(name.into(), args)
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn imp(self, rhs: Formula) -> Formula {
        Formula::MaterialImp(Box::new(self), Box::new(rhs))
    }

    pub fn strict_imp(self, rhs: Formula) -> Formula {
        Formula::StrictImp(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    pub fn forall(var: Var, body: Formula) -> Formula {
        Formula::Forall(var, Box::new(body))
    }

    pub fn exists(var: Var, body: Formula) -> Formula {
        Formula::Exists(var, Box::new(body))
    }

    /// Variables with at least one occurrence not bound by an enclosing
    /// quantifier.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, free: &mut BTreeSet<Var>) {
            match f {
                Formula::PropAtom(_) => {}
                Formula::PredAtom(_, args) => {
                    for v in args {
                        if !bound.contains(v) {
                            free.insert(v.clone());
                        }
                    }
                }
                Formula::Not(c) => walk(c, bound, free),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::MaterialImp(a, b)
                | Formula::StrictImp(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, bound, free);
                    walk(b, bound, free);
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, free);
                    bound.pop();
                }
            }
        }
        let mut free = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut free);
        free
    }

    /// A sentence is the unit of evaluation: no free variables.
    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn contains_strict(&self) -> bool {
        match self {
            Formula::PropAtom(_) | Formula::PredAtom(_, _) => false,
            Formula::StrictImp(_, _) => true,
            Formula::Not(c) => c.contains_strict(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::MaterialImp(a, b)
            | Formula::Iff(a, b) => a.contains_strict() || b.contains_strict(),
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.contains_strict(),
        }
    }

    pub fn contains_quantifier(&self) -> bool {
        match self {
            Formula::PropAtom(_) | Formula::PredAtom(_, _) => false,
            Formula::Forall(_, _) | Formula::Exists(_, _) => true,
            Formula::Not(c) => c.contains_quantifier(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::MaterialImp(a, b)
            | Formula::StrictImp(a, b)
            | Formula::Iff(a, b) => a.contains_quantifier() || b.contains_quantifier(),
        }
    }

    /// No predicates, no quantifiers, no strict arrow: evaluable on a bare
    /// truth assignment.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::PropAtom(_) => true,
            Formula::PredAtom(_, _) | Formula::StrictImp(_, _) => false,
            Formula::Forall(_, _) | Formula::Exists(_, _) => false,
            Formula::Not(c) => c.is_propositional(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::MaterialImp(a, b)
            | Formula::Iff(a, b) => a.is_propositional() && b.is_propositional(),
        }
    }

    /// Replaces every `=>` by `->`, recursively. This is the fixed-world
    /// (material) reading of a law; everything else is untouched.
    pub fn erase_strict(&self) -> Formula {
        match self {
            Formula::PropAtom(_) | Formula::PredAtom(_, _) => self.clone(),
            Formula::Not(c) => c.erase_strict().negate(),
            Formula::And(a, b) => a.erase_strict().and(b.erase_strict()),
            Formula::Or(a, b) => a.erase_strict().or(b.erase_strict()),
            Formula::MaterialImp(a, b) | Formula::StrictImp(a, b) => {
                a.erase_strict().imp(b.erase_strict())
            }
            Formula::Iff(a, b) => a.erase_strict().iff(b.erase_strict()),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.erase_strict()),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.erase_strict()),
        }
    }

    /// The signature this formula mentions: unbound bare lowercase names as
    /// propositional atoms, uppercase applications as predicates.
    pub fn infer_signature(&self) -> Result<Signature, SignatureError> {
        fn walk(f: &Formula, sig: &mut Signature) -> Result<(), SignatureError> {
            match f {
                Formula::PropAtom(name) => sig.declare_prop(name.clone()),
                Formula::PredAtom(name, args) => sig.declare_pred(name.clone(), args.len()),
                Formula::Not(c) => walk(c, sig),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::MaterialImp(a, b)
                | Formula::StrictImp(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, sig)?;
                    walk(b, sig)
                }
                Formula::Forall(_, body) | Formula::Exists(_, body) => walk(body, sig),
            }
        }
        let mut sig = Signature::new();
        walk(self, &mut sig)?;
        Ok(sig)
    }

    /// All lowercase names occurring in the formula (atoms and variables,
    /// bound or free). Used to keep generated world variables fresh.
    pub(crate) fn lowercase_names(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::PropAtom(name) => {
                    out.insert(name.clone());
                }
                Formula::PredAtom(_, args) => {
                    for v in args {
                        out.insert(v.name().to_owned());
                    }
                }
                Formula::Not(c) => walk(c, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::MaterialImp(a, b)
                | Formula::StrictImp(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    out.insert(v.name().to_owned());
                    walk(body, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// Checks every atom against the signature. Accepts shadowed quantifier
    /// variables but reports them as warnings.
    pub fn well_formed(&self, sig: &Signature) -> Result<Vec<String>, FormulaError> {
        fn walk(
            f: &Formula,
            sig: &Signature,
            bound: &mut Vec<Var>,
            warnings: &mut Vec<String>,
        ) -> Result<(), FormulaError> {
            match f {
                Formula::PropAtom(name) => {
                    if sig.has_prop(name) {
                        Ok(())
                    } else {
                        Err(FormulaError::UndeclaredAtom(name.clone()))
                    }
                }
                Formula::PredAtom(name, args) => match sig.pred_arity(name) {
                    None => Err(FormulaError::UndeclaredAtom(name.clone())),
                    Some(a) if a != args.len() => Err(FormulaError::ArityMismatch {
                        name: name.clone(),
                        declared: a,
                        actual: args.len(),
                    }),
                    Some(_) => Ok(()),
                },
                Formula::Not(c) => walk(c, sig, bound, warnings),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::MaterialImp(a, b)
                | Formula::StrictImp(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, sig, bound, warnings)?;
                    walk(b, sig, bound, warnings)
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    if bound.contains(v) {
                        warnings.push(format!(
                            "quantifier variable `{v}` shadows an enclosing quantifier"
                        ));
                    }
                    bound.push(v.clone());
                    let r = walk(body, sig, bound, warnings);
                    bound.pop();
                    r
                }
            }
        }
        let mut warnings = Vec::new();
        walk(self, sig, &mut Vec::new(), &mut warnings)?;
        Ok(warnings)
    }

    /// Surface-syntax text; `parse(render(f))` yields a structurally
    /// identical tree.
    pub fn render(&self) -> String {
        use alloc::string::ToString;
        self.to_string()
    }
}

/// Well-formedness violations; each names the offending atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaError {
    UndeclaredAtom(String),
    ArityMismatch { name: String, declared: usize, actual: usize },
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::UndeclaredAtom(name) => write!(f, "undeclared atom `{name}`"),
            FormulaError::ArityMismatch { name, declared, actual } => write!(
                f,
                "predicate `{name}` declared with arity {declared} but applied to {actual} argument(s)"
            ),
        }
    }
}

impl core::error::Error for FormulaError {}

// Rendering. Operands of binary connectives are parenthesized unless they are
// atoms or negations; quantifier bodies are parenthesized unless they are
// atoms, negations, or quantifiers (whose scope already runs to the end).
// Negation binds tightest, so its operand needs parentheses unless it is an
// atom or another negation.

fn operand_is_bare(f: &Formula) -> bool {
    matches!(f, Formula::PropAtom(_) | Formula::PredAtom(_, _) | Formula::Not(_))
}

fn body_is_bare(f: &Formula) -> bool {
    operand_is_bare(f) || matches!(f, Formula::Forall(_, _) | Formula::Exists(_, _))
}

fn fmt_operand(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if operand_is_bare(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

fn fmt_body(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if body_is_bare(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

fn fmt_binary(a: &Formula, op: &str, b: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    fmt_operand(a, out)?;
    write!(out, " {op} ")?;
    fmt_operand(b, out)
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::PropAtom(name) => out.write_str(name),
            Formula::PredAtom(name, args) => {
                out.write_str(name)?;
                out.write_str("(")?;
                for (i, v) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(",")?;
                    }
                    write!(out, "{v}")?;
                }
                out.write_str(")")
            }
            Formula::Not(c) => {
                out.write_str("!")?;
                if matches!(**c, Formula::PropAtom(_) | Formula::PredAtom(_, _) | Formula::Not(_))
                {
                    write!(out, "{c}")
                } else {
                    write!(out, "({c})")
                }
            }
            Formula::And(a, b) => fmt_binary(a, "&", b, out),
            Formula::Or(a, b) => fmt_binary(a, "|", b, out),
            Formula::MaterialImp(a, b) => fmt_binary(a, "->", b, out),
            Formula::StrictImp(a, b) => fmt_binary(a, "=>", b, out),
            Formula::Iff(a, b) => fmt_binary(a, "<->", b, out),
            Formula::Forall(v, body) => {
                write!(out, "forall {v}. ")?;
                fmt_body(body, out)
            }
            Formula::Exists(v, body) => {
                write!(out, "exists {v}. ")?;
                fmt_body(body, out)
            }
        }
    }
}
