//! Command-line surface over the core library: parse, evaluate, lift,
//! compare, and classify conditionals. All output is deterministic — stable
//! key order, no timestamps — so identical invocations are byte-identical.
//!
//! Exit codes: 0 = success (including an Equivalent verdict), 1 = a
//! NotEquivalent verdict (`equiv`, or `laws` with a failing law), 2 = usage,
//! parse, world, or cap errors, reported on the error stream.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use lawlike_core::{
    equiv_material_fo, equiv_material_prop, equiv_strict, eval_fo, eval_prop, eval_strict_assert,
    eval_strict_at, law_survival_catalog, lifted_sentence, parse, Bounds, Countermodel,
    EquivError, EvalError, Formula, LawReport, ModelError, ParseError, SearchSpace,
    Signature, SignatureError, StrictMode, Structure, Valuation, Verdict,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "lawlike",
    version,
    about = "Material vs. law-like conditionals: parse, evaluate, lift, and compare formulas",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse formulas and print the tree and inferred signature
    Parse(ParseArgs),
    /// Evaluate a formula materially at one world
    Eval(EvalArgs),
    /// Print the world-lifted form of each formula
    Lift(LiftArgs),
    /// Decide whether two formulas are equivalent
    Equiv(EquivArgs),
    /// Check which classical laws survive the strict reading
    Laws(LawsArgs),
    /// Walk the four motivating verdicts with countermodels
    Demo,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["formula", "file"])))]
struct ParseArgs {
    /// Formula text (quoted)
    formula: Option<String>,
    /// Read one formula per line instead
    #[arg(long, value_name = "FILE")]
    file: Option<PathBuf>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["formula", "file"])))]
struct EvalArgs {
    /// Formula text (quoted)
    formula: Option<String>,
    /// Read one formula per line instead
    #[arg(long, value_name = "FILE")]
    file: Option<PathBuf>,
    /// World as JSON: {"true_atoms": [..], "predicates": {"P": [[0], ..]}, "domain_size": n}
    #[arg(long, value_name = "JSON")]
    world: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["formula", "file"])))]
struct LiftArgs {
    /// Formula text (quoted)
    formula: Option<String>,
    /// Read one formula per line instead
    #[arg(long, value_name = "FILE")]
    file: Option<PathBuf>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EquivArgs {
    /// Left formula (quoted)
    lhs: String,
    /// Right formula (quoted)
    rhs: String,
    /// Reading of the formulas: one world, or every world of a model
    #[arg(long, value_enum, default_value_t = Semantics::Material)]
    semantics: Semantics,
    /// Strict comparison: asserted truth per model, or truth at every world
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Largest individual domain searched (default 3)
    #[arg(long, value_name = "D")]
    max_domain: Option<u32>,
    /// Largest world set searched (strict only, default 4)
    #[arg(long, value_name = "W")]
    max_worlds: Option<u32>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LawsArgs {
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Material,
    Strict,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Assertional,
    Pointwise,
}

/// Anything that aborts a subcommand with exit code 2.
#[derive(Debug)]
enum CliError {
    Parse { context: Option<String>, err: ParseError },
    World(String),
    Model(ModelError),
    Eval(EvalError),
    Equiv(EquivError),
    Signature(SignatureError),
    Io(std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { context: None, err } => write!(f, "{err}"),
            CliError::Parse { context: Some(ctx), err } => write!(f, "{ctx}: {err}"),
            CliError::World(msg) => write!(f, "bad --world value: {msg}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Eval(e) => write!(f, "{e}"),
            CliError::Equiv(e) => write!(f, "{e}"),
            CliError::Signature(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        CliError::Model(e)
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> CliError {
        CliError::Eval(e)
    }
}

impl From<EquivError> for CliError {
    fn from(e: EquivError) -> CliError {
        CliError::Equiv(e)
    }
}

impl From<SignatureError> for CliError {
    fn from(e: SignatureError) -> CliError {
        CliError::Signature(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e)
    }
}

/// Entry point used by both `main` and the tests. Parses `args` (argv[0]
/// included), writes to the given streams, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    let outcome = match cli.command {
        Cmd::Parse(a) => cmd_parse(&a, out),
        Cmd::Eval(a) => cmd_eval(&a, out),
        Cmd::Lift(a) => cmd_lift(&a, out),
        Cmd::Equiv(a) => cmd_equiv(&a, out),
        Cmd::Laws(a) => cmd_laws(&a, out),
        Cmd::Demo => cmd_demo(out),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    };
    let _ = out.flush();
    let _ = err.flush();
    code
}

/// One input formula: the text plus where it came from, for error messages.
struct Input {
    context: Option<String>,
    text: String,
}

fn gather_inputs(formula: &Option<String>, file: &Option<PathBuf>) -> Result<Vec<Input>, CliError> {
    if let Some(text) = formula {
        return Ok(vec![Input { context: None, text: text.clone() }]);
    }
    let path = file.as_ref().expect("clap guarantees one input source");
    let body = std::fs::read_to_string(path)?;
    let mut inputs = Vec::new();
    for (i, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        inputs.push(Input {
            context: Some(format!("{}:{}", path.display(), i + 1)),
            text: line.to_string(),
        });
    }
    if inputs.is_empty() {
        return Err(CliError::Usage(format!("{}: no formulas found", path.display())));
    }
    Ok(inputs)
}

fn parse_input(input: &Input) -> Result<lawlike_core::ParseResult, CliError> {
    parse(&input.text).map_err(|err| CliError::Parse { context: input.context.clone(), err })
}

fn print_json<D: Serialize>(doc: &D, out: &mut dyn Write) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(doc).expect("output documents serialize");
    writeln!(out, "{body}")?;
    Ok(())
}

// ---------------------------------------------------------------- parse ----

#[derive(Serialize)]
struct ParseDoc {
    schema_version: u32,
    command: &'static str,
    formulas: Vec<ParsedEntry>,
}

#[derive(Serialize)]
struct ParsedEntry {
    input: String,
    rendered: String,
    tree: serde_json::Value,
    signature: SigDoc,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct SigDoc {
    props: Vec<String>,
    preds: BTreeMap<String, usize>,
}

impl SigDoc {
    fn from_sig(sig: &Signature) -> SigDoc {
        SigDoc {
            props: sig.props().map(String::from).collect(),
            preds: sig.preds().map(|(n, a)| (String::from(n), a)).collect(),
        }
    }
}

/// Node label for the text tree: the operator symbol, quantifier with its
/// variable, or the atom itself.
fn node_label(f: &Formula) -> String {
    match f {
        Formula::PropAtom(name) => name.clone(),
        Formula::PredAtom(name, args) => {
            let args: Vec<&str> = args.iter().map(|v| v.name()).collect();
            format!("{}({})", name, args.join(", "))
        }
        Formula::Not(_) => "!".to_string(),
        Formula::And(_, _) => "&".to_string(),
        Formula::Or(_, _) => "|".to_string(),
        Formula::MaterialImp(_, _) => "->".to_string(),
        Formula::StrictImp(_, _) => "=>".to_string(),
        Formula::Iff(_, _) => "<->".to_string(),
        Formula::Forall(v, _) => format!("forall {}", v.name()),
        Formula::Exists(v, _) => format!("exists {}", v.name()),
    }
}

fn tree_text(f: &Formula, depth: usize, lines: &mut String) {
    for _ in 0..depth {
        lines.push_str("  ");
    }
    lines.push_str(&node_label(f));
    lines.push('\n');
    match f {
        Formula::PropAtom(_) | Formula::PredAtom(_, _) => {}
        Formula::Not(a) => tree_text(a, depth + 1, lines),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::MaterialImp(a, b)
        | Formula::StrictImp(a, b)
        | Formula::Iff(a, b) => {
            tree_text(a, depth + 1, lines);
            tree_text(b, depth + 1, lines);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => tree_text(body, depth + 1, lines),
    }
}

fn tree_json(f: &Formula) -> serde_json::Value {
    use serde_json::json;
    match f {
        Formula::PropAtom(name) => json!({"node": "atom", "name": name}),
        Formula::PredAtom(name, args) => {
            let args: Vec<&str> = args.iter().map(|v| v.name()).collect();
            json!({"node": "pred", "name": name, "args": args})
        }
        Formula::Not(a) => json!({"node": "not", "child": tree_json(a)}),
        Formula::And(a, b) => json!({"node": "and", "lhs": tree_json(a), "rhs": tree_json(b)}),
        Formula::Or(a, b) => json!({"node": "or", "lhs": tree_json(a), "rhs": tree_json(b)}),
        Formula::MaterialImp(a, b) => {
            json!({"node": "imp", "lhs": tree_json(a), "rhs": tree_json(b)})
        }
        Formula::StrictImp(a, b) => {
            json!({"node": "strict", "lhs": tree_json(a), "rhs": tree_json(b)})
        }
        Formula::Iff(a, b) => json!({"node": "iff", "lhs": tree_json(a), "rhs": tree_json(b)}),
        Formula::Forall(v, body) => {
            json!({"node": "forall", "var": v.name(), "body": tree_json(body)})
        }
        Formula::Exists(v, body) => {
            json!({"node": "exists", "var": v.name(), "body": tree_json(body)})
        }
    }
}

fn signature_text(sig: &Signature) -> String {
    let props: Vec<&str> = sig.props().collect();
    let preds: Vec<String> = sig.preds().map(|(n, a)| format!("{n}/{a}")).collect();
    let props = if props.is_empty() { "(none)".to_string() } else { props.join(", ") };
    let preds = if preds.is_empty() { "(none)".to_string() } else { preds.join(", ") };
    format!("  props: {props}\n  preds: {preds}")
}

fn cmd_parse(a: &ParseArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let inputs = gather_inputs(&a.formula, &a.file)?;
    let mut entries = Vec::new();
    for input in &inputs {
        let parsed = parse_input(input)?;
        entries.push((input, parsed));
    }
    if a.json {
        let doc = ParseDoc {
            schema_version: SCHEMA_VERSION,
            command: "parse",
            formulas: entries
                .iter()
                .map(|(input, p)| ParsedEntry {
                    input: input.text.clone(),
                    rendered: p.formula.render(),
                    tree: tree_json(&p.formula),
                    signature: SigDoc::from_sig(&p.signature),
                    warnings: p.warnings.clone(),
                })
                .collect(),
        };
        print_json(&doc, out)?;
    } else {
        for (i, (_, p)) in entries.iter().enumerate() {
            if i > 0 {
                writeln!(out).map_err(CliError::Io)?;
            }
            let mut tree = String::new();
            tree_text(&p.formula, 1, &mut tree);
            write!(
                out,
                "formula: {}\ntree:\n{}signature:\n{}\n",
                p.formula.render(),
                tree,
                signature_text(&p.signature)
            )?;
            for w in &p.warnings {
                writeln!(out, "warning: {w}")?;
            }
        }
    }
    Ok(0)
}

// ----------------------------------------------------------------- eval ----

/// World input, the same shape `equiv` emits for countermodel worlds, so a
/// countermodel pastes straight back into `eval --world`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldSpec {
    #[serde(default)]
    true_atoms: Vec<String>,
    #[serde(default)]
    predicates: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    domain_size: Option<usize>,
}

/// Builds the structure a formula set is evaluated on: every symbol of `sig`
/// is present (absent atoms are false, absent tables empty), plus whatever
/// extra symbols the spec supplies.
fn build_world(spec: &WorldSpec, sig: &Signature) -> Result<Structure, CliError> {
    let mut s = Structure::new(spec.domain_size.unwrap_or(1))?;
    for prop in sig.props() {
        s.set_prop(prop, spec.true_atoms.iter().any(|a| a == prop));
    }
    for atom in &spec.true_atoms {
        if !sig.has_prop(atom) {
            s.set_prop(atom.clone(), true);
        }
    }
    for (name, arity) in sig.preds() {
        s.ensure_pred(name, arity);
    }
    for (name, tuples) in &spec.predicates {
        match (sig.pred_arity(name), tuples.first()) {
            (Some(_), _) => {}
            (None, Some(first)) => s.ensure_pred(name.clone(), first.len()),
            (None, None) => continue,
        }
        for tuple in tuples {
            s.add_tuple(name.clone(), tuple.clone())?;
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct WorldDoc {
    true_atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicates: Option<BTreeMap<String, Vec<Vec<usize>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain_size: Option<usize>,
}

impl WorldDoc {
    /// `first_order` controls whether the predicate tables and domain size
    /// appear; pure valuations stay minimal.
    fn from_structure(s: &Structure, first_order: bool) -> WorldDoc {
        let true_atoms: Vec<String> =
            s.props().filter(|(_, v)| *v).map(|(n, _)| String::from(n)).collect();
        if !first_order {
            return WorldDoc { true_atoms, predicates: None, domain_size: None };
        }
        let predicates: BTreeMap<String, Vec<Vec<usize>>> = s
            .preds()
            .map(|(n, t)| (String::from(n), t.tuples().map(<[usize]>::to_vec).collect()))
            .collect();
        WorldDoc { true_atoms, predicates: Some(predicates), domain_size: Some(s.domain_size()) }
    }

    fn from_valuation(v: &Valuation) -> WorldDoc {
        WorldDoc {
            true_atoms: v.true_atoms().map(String::from).collect(),
            predicates: None,
            domain_size: None,
        }
    }
}

#[derive(Serialize)]
struct EvalDoc {
    schema_version: u32,
    command: &'static str,
    world: WorldDoc,
    results: Vec<EvalEntry>,
}

#[derive(Serialize)]
struct EvalEntry {
    formula: String,
    value: bool,
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let inputs = gather_inputs(&a.formula, &a.file)?;
    let spec: WorldSpec =
        serde_json::from_str(&a.world).map_err(|e| CliError::World(e.to_string()))?;
    let mut sig = Signature::new();
    let mut formulas = Vec::new();
    for input in &inputs {
        let parsed = parse_input(input)?;
        sig = sig.union(&parsed.signature)?;
        formulas.push(parsed.formula);
    }
    let world = build_world(&spec, &sig)?;
    let mut results = Vec::new();
    for f in &formulas {
        results.push(EvalEntry { formula: f.render(), value: eval_fo(f, &world)? });
    }
    if a.json {
        let doc = EvalDoc {
            schema_version: SCHEMA_VERSION,
            command: "eval",
            world: WorldDoc::from_structure(&world, true),
            results,
        };
        print_json(&doc, out)?;
    } else {
        for entry in &results {
            writeln!(out, "{}", entry.value)?;
        }
    }
    Ok(0)
}

// ----------------------------------------------------------------- lift ----

#[derive(Serialize)]
struct LiftDoc {
    schema_version: u32,
    command: &'static str,
    formulas: Vec<LiftEntry>,
}

#[derive(Serialize)]
struct LiftEntry {
    input: String,
    lifted: String,
}

fn cmd_lift(a: &LiftArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let inputs = gather_inputs(&a.formula, &a.file)?;
    let mut entries = Vec::new();
    for input in &inputs {
        let parsed = parse_input(input)?;
        entries.push(LiftEntry {
            input: input.text.clone(),
            lifted: lifted_sentence(&parsed.formula).render(),
        });
    }
    if a.json {
        let doc = LiftDoc { schema_version: SCHEMA_VERSION, command: "lift", formulas: entries };
        print_json(&doc, out)?;
    } else {
        for entry in &entries {
            writeln!(out, "{}", entry.lifted)?;
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------- equiv ----

#[derive(Serialize)]
struct BoundsDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    max_domain: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_worlds: Option<u32>,
}

#[derive(Serialize)]
struct StatsDoc {
    models_examined: u64,
}

#[derive(Serialize)]
struct CmDoc {
    kind: &'static str,
    atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    world: Option<WorldDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    worlds: Option<Vec<WorldDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distinguishing_world: Option<usize>,
}

#[derive(Serialize)]
struct EquivDoc {
    schema_version: u32,
    command: &'static str,
    lhs: String,
    rhs: String,
    semantics: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<BoundsDoc>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<bool>,
    statistics: StatsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    countermodel: Option<CmDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs_value: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs_value: Option<bool>,
}

/// `{p, q}` for the true atoms, then each predicate table, e.g.
/// `{} P={(1)} Q={(0,1), (1,0)}`.
fn world_text(s: &Structure) -> String {
    let props: Vec<&str> = s.props().filter(|(_, v)| *v).map(|(n, _)| n).collect();
    let mut text = format!("{{{}}}", props.join(", "));
    for (name, table) in s.preds() {
        let tuples: Vec<String> = table
            .tuples()
            .map(|t| {
                let elems: Vec<String> = t.iter().map(usize::to_string).collect();
                format!("({})", elems.join(","))
            })
            .collect();
        text.push_str(&format!(" {}={{{}}}", name, tuples.join(", ")));
    }
    text
}

fn valuation_text(v: &Valuation) -> String {
    let atoms: Vec<&str> = v.true_atoms().collect();
    format!("{{{}}}", atoms.join(", "))
}

/// The `(exact, ...)` / `(bounded, ...)` suffix after EQUIVALENT.
fn search_text(exact: bool, searched: &SearchSpace, examined: u64) -> String {
    match searched {
        SearchSpace::Valuations { atoms } => {
            format!("(exact, {} valuations)", 1u64 << atoms)
        }
        SearchSpace::Structures { max_domain } => {
            format!("(bounded, domain sizes 1..={max_domain}, {examined} structures examined)")
        }
        SearchSpace::KripkeModels { max_domain, max_worlds } => {
            if exact {
                format!("(exact, {examined} models examined)")
            } else {
                format!(
                    "(bounded, domain size <= {max_domain}, worlds <= {max_worlds}, \
                     {examined} models examined)"
                )
            }
        }
    }
}

/// Replay values for a countermodel: what each side evaluates to on it.
fn replay(f: &Formula, g: &Formula, cm: &Countermodel) -> Result<(bool, bool), CliError> {
    Ok(match cm {
        Countermodel::Valuation(v) => (eval_prop(f, v)?, eval_prop(g, v)?),
        Countermodel::Structure(s) => (eval_fo(f, s)?, eval_fo(g, s)?),
        Countermodel::Kripke { model, world: None } => {
            (eval_strict_assert(f, model)?, eval_strict_assert(g, model)?)
        }
        Countermodel::Kripke { model, world: Some(w) } => {
            (eval_strict_at(f, model, *w)?, eval_strict_at(g, model, *w)?)
        }
    })
}

fn countermodel_text(cm: &Countermodel, lhs: bool, rhs: bool) -> String {
    let mut text = String::from("NOT EQUIVALENT\n");
    match cm {
        Countermodel::Valuation(v) => {
            text.push_str(&format!("countermodel (valuation): {}\n", valuation_text(v)));
            text.push_str(&format!("lhs = {lhs}\nrhs = {rhs}\n"));
        }
        Countermodel::Structure(s) => {
            text.push_str(&format!(
                "countermodel (structure, domain size {}): {}\n",
                s.domain_size(),
                world_text(s)
            ));
            text.push_str(&format!("lhs = {lhs}\nrhs = {rhs}\n"));
        }
        Countermodel::Kripke { model, world } => {
            text.push_str(&format!(
                "countermodel (kripke, {} worlds, domain size {}):\n",
                model.world_count(),
                model.domain_size()
            ));
            for (i, s) in model.worlds().iter().enumerate() {
                text.push_str(&format!("  world {}: {}\n", i, world_text(s)));
            }
            match world {
                None => text.push_str(&format!("lhs asserted = {lhs}\nrhs asserted = {rhs}\n")),
                Some(w) => {
                    text.push_str(&format!("distinguishing world: {w}\n"));
                    text.push_str(&format!("lhs at world {w} = {lhs}\nrhs at world {w} = {rhs}\n"));
                }
            }
        }
    }
    text
}

fn countermodel_doc(cm: &Countermodel, sig: &Signature) -> CmDoc {
    let atoms: Vec<String> = sig.props().map(String::from).collect();
    let first_order = sig.pred_count() > 0;
    match cm {
        Countermodel::Valuation(v) => CmDoc {
            kind: "valuation",
            atoms,
            domain_size: None,
            world: Some(WorldDoc::from_valuation(v)),
            worlds: None,
            distinguishing_world: None,
        },
        Countermodel::Structure(s) => CmDoc {
            kind: "structure",
            atoms,
            domain_size: Some(s.domain_size()),
            world: Some(WorldDoc::from_structure(s, true)),
            worlds: None,
            distinguishing_world: None,
        },
        Countermodel::Kripke { model, world } => CmDoc {
            kind: "kripke",
            atoms,
            domain_size: Some(model.domain_size()),
            world: None,
            worlds: Some(
                model
                    .worlds()
                    .iter()
                    .map(|s| WorldDoc::from_structure(s, first_order))
                    .collect(),
            ),
            distinguishing_world: *world,
        },
    }
}

/// The work behind both `equiv` and each `demo` block: runs the comparison
/// and produces the full text block plus the JSON document.
struct EquivOutcome {
    text: String,
    doc: EquivDoc,
    equivalent: bool,
}

fn run_equiv(
    f: &Formula,
    g: &Formula,
    semantics: Semantics,
    mode: Mode,
    bounds: &Bounds,
) -> Result<EquivOutcome, CliError> {
    let sig = f.infer_signature()?.union(&g.infer_signature()?)?;
    let (verdict, semantics_name, mode_name, bounds_doc) = match semantics {
        Semantics::Material => {
            if f.contains_strict() || g.contains_strict() {
                return Err(CliError::Usage(String::from(
                    "formula contains a strict conditional; rerun with --semantics strict",
                )));
            }
            if f.is_propositional() && g.is_propositional() {
                (equiv_material_prop(f, g, &bounds.caps)?, "material", None, None)
            } else {
                (
                    equiv_material_fo(f, g, bounds)?,
                    "material",
                    None,
                    Some(BoundsDoc { max_domain: Some(bounds.max_domain), max_worlds: None }),
                )
            }
        }
        Semantics::Strict => {
            let strict_mode = match mode {
                Mode::Assertional => StrictMode::Assertional,
                Mode::Pointwise => StrictMode::Pointwise,
            };
            (
                equiv_strict(f, g, bounds, strict_mode)?,
                "strict",
                Some(match mode {
                    Mode::Assertional => "assertional",
                    Mode::Pointwise => "pointwise",
                }),
                Some(BoundsDoc {
                    max_domain: Some(bounds.max_domain),
                    max_worlds: Some(bounds.max_worlds),
                }),
            )
        }
    };
    let stats = verdict.stats();
    let outcome = match &verdict {
        Verdict::Equivalent { exact, searched, stats } => EquivOutcome {
            text: format!(
                "EQUIVALENT {}\n",
                search_text(*exact, searched, stats.models_examined)
            ),
            doc: EquivDoc {
                schema_version: SCHEMA_VERSION,
                command: "equiv",
                lhs: f.render(),
                rhs: g.render(),
                semantics: semantics_name,
                mode: mode_name,
                bounds: bounds_doc,
                verdict: "equivalent",
                exact: Some(*exact),
                statistics: StatsDoc { models_examined: stats.models_examined },
                countermodel: None,
                lhs_value: None,
                rhs_value: None,
            },
            equivalent: true,
        },
        Verdict::NotEquivalent { countermodel, .. } => {
            let (lv, rv) = replay(f, g, countermodel)?;
            EquivOutcome {
                text: countermodel_text(countermodel, lv, rv),
                doc: EquivDoc {
                    schema_version: SCHEMA_VERSION,
                    command: "equiv",
                    lhs: f.render(),
                    rhs: g.render(),
                    semantics: semantics_name,
                    mode: mode_name,
                    bounds: bounds_doc,
                    verdict: "not_equivalent",
                    exact: None,
                    statistics: StatsDoc { models_examined: stats.models_examined },
                    countermodel: Some(countermodel_doc(countermodel, &sig)),
                    lhs_value: Some(lv),
                    rhs_value: Some(rv),
                },
                equivalent: false,
            }
        }
    };
    Ok(outcome)
}

fn cmd_equiv(a: &EquivArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.semantics == Semantics::Material {
        if a.mode.is_some() {
            return Err(CliError::Usage(String::from(
                "--mode applies only to --semantics strict",
            )));
        }
        if a.max_worlds.is_some() {
            return Err(CliError::Usage(String::from(
                "--max-worlds applies only to --semantics strict",
            )));
        }
    }
    let f = parse(&a.lhs)
        .map_err(|err| CliError::Parse { context: Some(String::from("lhs")), err })?
        .formula;
    let g = parse(&a.rhs)
        .map_err(|err| CliError::Parse { context: Some(String::from("rhs")), err })?
        .formula;
    let bounds = Bounds {
        max_domain: a.max_domain.unwrap_or(Bounds::default().max_domain),
        max_worlds: a.max_worlds.unwrap_or(Bounds::default().max_worlds),
        ..Bounds::default()
    };
    let outcome =
        run_equiv(&f, &g, a.semantics, a.mode.unwrap_or(Mode::Assertional), &bounds)?;
    if a.json {
        print_json(&outcome.doc, out)?;
    } else {
        write!(out, "{}", outcome.text)?;
    }
    Ok(if outcome.equivalent { 0 } else { 1 })
}

// ----------------------------------------------------------------- laws ----

#[derive(Serialize)]
struct LawsDoc {
    schema_version: u32,
    command: &'static str,
    laws: Vec<LawDoc>,
    all_survive: bool,
}

#[derive(Serialize)]
struct LawDoc {
    name: String,
    lhs: String,
    rhs: String,
    classical: &'static str,
    strict: &'static str,
    survives: bool,
}

fn verdict_word(v: &Verdict) -> &'static str {
    if v.is_equivalent() {
        "equivalent"
    } else {
        "not_equivalent"
    }
}

fn law_doc(r: &LawReport) -> LawDoc {
    LawDoc {
        name: r.name.clone(),
        lhs: r.lhs.render(),
        rhs: r.rhs.render(),
        classical: verdict_word(&r.classical),
        strict: verdict_word(&r.strict),
        survives: r.survives,
    }
}

fn cmd_laws(a: &LawsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let reports = law_survival_catalog(&Bounds::default())?;
    let all_survive = reports.iter().all(|r| r.survives);
    if a.json {
        let doc = LawsDoc {
            schema_version: SCHEMA_VERSION,
            command: "laws",
            laws: reports.iter().map(law_doc).collect(),
            all_survive,
        };
        print_json(&doc, out)?;
    } else {
        writeln!(out, "{:<30}{:<16}{:<16}SURVIVES", "LAW", "CLASSICAL", "STRICT")?;
        for r in &reports {
            let word = |v: &Verdict| if v.is_equivalent() { "equivalent" } else { "not equivalent" };
            writeln!(
                out,
                "{:<30}{:<16}{:<16}{}",
                r.name,
                word(&r.classical),
                word(&r.strict),
                if r.survives { "yes" } else { "no" }
            )?;
        }
    }
    Ok(if all_survive { 0 } else { 1 })
}

// ----------------------------------------------------------------- demo ----

fn cmd_demo(out: &mut dyn Write) -> Result<i32, CliError> {
    let bounds = Bounds::default();
    let block = |title: &str,
                 gloss: Option<&str>,
                 lhs: &str,
                 rhs: &str,
                 semantics: Semantics,
                 note: &str|
     -> Result<String, CliError> {
        let f = parse(lhs).expect("demo formulas parse").formula;
        let g = parse(rhs).expect("demo formulas parse").formula;
        let outcome = run_equiv(&f, &g, semantics, Mode::Assertional, &bounds)?;
        let mut text = format!("{title}\n");
        if let Some(gloss) = gloss {
            text.push_str(&format!("    {gloss}\n"));
        }
        text.push_str(&format!("    lhs: {}\n    rhs: {}\n", f.render(), g.render()));
        for line in outcome.text.lines() {
            text.push_str(&format!("    {line}\n"));
        }
        text.push_str(&format!("    note: {note}\n"));
        Ok(text)
    };
    let blocks = [
        block(
            "[1] splitting a conjunctive antecedent, material reading",
            Some("p: switch A is on   q: switch B is on   r: the light is on"),
            "(p & q) -> r",
            "(p -> r) | (q -> r)",
            Semantics::Material,
            "at a single fixed world both sides are false exactly when p and q \
             hold and r fails, so no valuation separates them.",
        )?,
        block(
            "[2] splitting a conjunctive antecedent, law-like reading",
            None,
            "(p & q) => r",
            "(p => r) | (q => r)",
            Semantics::Strict,
            "no world turns both switches on, so the conjunctive law holds \
             vacuously; but each switch is on somewhere with the light off, so \
             neither disjunct is a law.",
        )?,
        block(
            "[3] universal antecedent, material reading",
            Some("P(x): x is good   r: the world is paradise"),
            "(forall x. P(x)) -> r",
            "exists x. (P(x) -> r)",
            Semantics::Material,
            "if someone is not good they witness the right side vacuously; if \
             everyone is good both sides stand or fall with r.",
        )?,
        block(
            "[4] universal antecedent, law-like reading",
            None,
            "(forall x. P(x)) => r",
            "exists x. (P(x) => r)",
            Semantics::Strict,
            "no world makes everyone good, so the universal law holds; yet each \
             individual is good in some world without paradise, so no single \
             witness works as a law.",
        )?,
    ];
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        write!(out, "{b}")?;
    }
    Ok(0)
}
