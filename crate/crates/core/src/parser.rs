//! Surface-syntax parser.
//!
//! Grammar, loosest to tightest: `<->`/`<=>` (left-associative), `->`/`=>`
//! (right-associative), `|`, `&`, then `!` and the quantifiers. A quantifier
//! body extends as far right as possible, so `forall x. P(x) -> r` binds the
//! whole conditional. `a <=> b` is sugar for `(a => b) & (b => a)` and
//! desugars here, at parse time.
//!
//! Identifier case picks the namespace: lowercase names are propositional
//! atoms or bound variables (binding context decides), uppercase names are
//! predicates. Input is ASCII only.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Signature, SignatureError, Var};

/// Successful parse: the tree, the vocabulary it mentions, and any
/// non-fatal oddities (shadowed quantifier variables, names used both as
/// atom and variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResult {
    pub formula: Formula,
    pub signature: Signature,
    pub warnings: Vec<String>,
}

/// Parse failure with 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    LowerIdent(String),
    UpperIdent(String),
    Forall,
    Exists,
    Bang,
    Amp,
    Pipe,
    Arrow,       // ->
    StrictArrow, // =>
    Iff,         // <->
    StrictIff,   // <=>
    LParen,
    RParen,
    Comma,
    Dot,
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::LowerIdent(s) | TokKind::UpperIdent(s) => write!(f, "`{s}`"),
            TokKind::Forall => f.write_str("`forall`"),
            TokKind::Exists => f.write_str("`exists`"),
            TokKind::Bang => f.write_str("`!`"),
            TokKind::Amp => f.write_str("`&`"),
            TokKind::Pipe => f.write_str("`|`"),
            TokKind::Arrow => f.write_str("`->`"),
            TokKind::StrictArrow => f.write_str("`=>`"),
            TokKind::Iff => f.write_str("`<->`"),
            TokKind::StrictIff => f.write_str("`<=>`"),
            TokKind::LParen => f.write_str("`(`"),
            TokKind::RParen => f.write_str("`)`"),
            TokKind::Comma => f.write_str("`,`"),
            TokKind::Dot => f.write_str("`.`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

fn err(message: impl Into<String>, line: usize, col: usize) -> ParseError {
    ParseError { message: message.into(), line, col }
}

fn lex(input: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = input.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };

        if c.is_ascii_whitespace() {
            bump(&mut chars);
            continue;
        }
        if !c.is_ascii() {
            return Err(err(format!("non-ASCII character `{c}`"), tline, tcol));
        }

        let kind = match c {
            'a'..='z' | 'A'..='Z' | '_' => {
                let lower = c.is_ascii_lowercase();
                if c == '_' {
                    return Err(err("identifiers must start with a letter", tline, tcol));
                }
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                match name.as_str() {
                    "forall" => TokKind::Forall,
                    "exists" => TokKind::Exists,
                    _ if lower => TokKind::LowerIdent(name),
                    _ => TokKind::UpperIdent(name),
                }
            }
            '!' => {
                bump(&mut chars);
                TokKind::Bang
            }
            '&' => {
                bump(&mut chars);
                TokKind::Amp
            }
            '|' => {
                bump(&mut chars);
                TokKind::Pipe
            }
            '(' => {
                bump(&mut chars);
                TokKind::LParen
            }
            ')' => {
                bump(&mut chars);
                TokKind::RParen
            }
            ',' => {
                bump(&mut chars);
                TokKind::Comma
            }
            '.' => {
                bump(&mut chars);
                TokKind::Dot
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    TokKind::Arrow
                } else {
                    return Err(err("expected `->`", tline, tcol));
                }
            }
            '=' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    TokKind::StrictArrow
                } else {
                    return Err(err("expected `=>`", tline, tcol));
                }
            }
            '<' => {
                bump(&mut chars);
                match chars.peek() {
                    Some(&'-') => {
                        bump(&mut chars);
                        if chars.peek() == Some(&'>') {
                            bump(&mut chars);
                            TokKind::Iff
                        } else {
                            return Err(err("expected `<->`", tline, tcol));
                        }
                    }
                    Some(&'=') => {
                        bump(&mut chars);
                        if chars.peek() == Some(&'>') {
                            bump(&mut chars);
                            TokKind::StrictIff
                        } else {
                            return Err(err("expected `<=>`", tline, tcol));
                        }
                    }
                    _ => return Err(err("expected `<->` or `<=>`", tline, tcol)),
                }
            }
            _ => return Err(err(format!("unexpected character `{c}`"), tline, tcol)),
        };
        toks.push(Tok { kind, line: tline, col: tcol });
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    end: (usize, usize),
    sig: Signature,
    scope: Vec<String>,
    quantified: BTreeSet<String>,
    warnings: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> Result<Tok, ParseError> {
        let (line, col) = self.here();
        match self.advance() {
            Some(t) if t.kind == kind => Ok(t),
            Some(t) => Err(err(format!("expected {what}, found {}", t.kind), t.line, t.col)),
            None => Err(err(format!("expected {what}, found end of input"), line, col)),
        }
    }

    fn sig_err(&self, e: SignatureError, line: usize, col: usize) -> ParseError {
        err(format!("{e}"), line, col)
    }

    // iff := imp { ("<->" | "<=>") imp }
    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_imp()?;
        loop {
            match self.peek() {
                Some(TokKind::Iff) => {
                    self.advance();
                    let rhs = self.parse_imp()?;
                    lhs = lhs.iff(rhs);
                }
                Some(TokKind::StrictIff) => {
                    self.advance();
                    let rhs = self.parse_imp()?;
                    lhs = lhs.clone().strict_imp(rhs.clone()).and(rhs.strict_imp(lhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // imp := or [ ("->" | "=>") imp ]   (right-associative)
    fn parse_imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        match self.peek() {
            Some(TokKind::Arrow) => {
                self.advance();
                Ok(lhs.imp(self.parse_imp()?))
            }
            Some(TokKind::StrictArrow) => {
                self.advance();
                Ok(lhs.strict_imp(self.parse_imp()?))
            }
            _ => Ok(lhs),
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&TokKind::Pipe) {
            self.advance();
            lhs = lhs.or(self.parse_and()?);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == Some(&TokKind::Amp) {
            self.advance();
            lhs = lhs.and(self.parse_unary()?);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(TokKind::Bang) => {
                self.advance();
                Ok(self.parse_unary()?.negate())
            }
            Some(TokKind::Forall) | Some(TokKind::Exists) => self.parse_quantified(),
            _ => self.parse_primary(),
        }
    }

    // quantified := ("forall" | "exists") VAR "." formula
    // The body is a full formula: scope runs to the end of the enclosing
    // group.
    fn parse_quantified(&mut self) -> Result<Formula, ParseError> {
        let univ = match self.advance().map(|t| t.kind) {
            Some(TokKind::Forall) => true,
            Some(TokKind::Exists) => false,
            _ => unreachable!("caller checked the quantifier token"),
        };
        let (line, col) = self.here();
        let name = match self.advance() {
            Some(Tok { kind: TokKind::LowerIdent(name), .. }) => name,
            Some(t) => {
                return Err(err(
                    format!("expected a lowercase variable name, found {}", t.kind),
                    t.line,
                    t.col,
                ))
            }
            None => return Err(err("expected a variable name, found end of input", line, col)),
        };
        self.expect(TokKind::Dot, "`.`")?;
        if self.scope.contains(&name) {
            self.warnings
                .push(format!("quantifier variable `{name}` shadows an enclosing quantifier"));
        }
        self.quantified.insert(name.clone());
        self.scope.push(name.clone());
        let body = self.parse_iff();
        self.scope.pop();
        let var = Var::new(name);
        Ok(if univ { Formula::forall(var, body?) } else { Formula::exists(var, body?) })
    }

    fn parse_primary(&mut self) -> Result<Formula, ParseError> {
        let (line, col) = self.here();
        match self.advance() {
            Some(Tok { kind: TokKind::LParen, .. }) => {
                let f = self.parse_iff()?;
                self.expect(TokKind::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok { kind: TokKind::LowerIdent(name), line, col }) => {
                if self.peek() == Some(&TokKind::LParen) {
                    return Err(err(
                        format!("`{name}` is applied to arguments but predicates are uppercase"),
                        line,
                        col,
                    ));
                }
                if self.scope.contains(&name) {
                    return Err(err(
                        format!("bound variable `{name}` used as a propositional atom"),
                        line,
                        col,
                    ));
                }
                self.sig.declare_prop(name.clone()).map_err(|e| self.sig_err(e, line, col))?;
                Ok(Formula::prop(name))
            }
            Some(Tok { kind: TokKind::UpperIdent(name), line, col }) => {
                self.expect(TokKind::LParen, "`(` after predicate name")?;
                let mut args = Vec::new();
                loop {
                    let (aline, acol) = self.here();
                    match self.advance() {
                        Some(Tok { kind: TokKind::LowerIdent(arg), .. }) => {
                            args.push(Var::new(arg));
                        }
                        Some(t) => {
                            return Err(err(
                                format!("expected a variable name, found {}", t.kind),
                                t.line,
                                t.col,
                            ))
                        }
                        None => {
                            return Err(err(
                                "expected a variable name, found end of input",
                                aline,
                                acol,
                            ))
                        }
                    }
                    match self.peek() {
                        Some(TokKind::Comma) => {
                            self.advance();
                        }
                        _ => break,
                    }
                }
                self.expect(TokKind::RParen, "`)`")?;
                self.sig
                    .declare_pred(name.clone(), args.len())
                    .map_err(|e| self.sig_err(e, line, col))?;
                Ok(Formula::pred(name, args))
            }
            Some(t) => Err(err(format!("unexpected token {}", t.kind), t.line, t.col)),
            None => Err(err("unexpected end of input", line, col)),
        }
    }
}

/// Parses one formula, inferring its signature along the way. The whole
/// input must be consumed.
pub fn parse(input: &str) -> Result<ParseResult, ParseError> {
    let toks = lex(input)?;
    let end = input
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        sig: Signature::new(),
        scope: Vec::new(),
        quantified: BTreeSet::new(),
        warnings: Vec::new(),
    };
    let formula = p.parse_iff()?;
    if let Some(t) = p.toks.get(p.pos) {
        return Err(err(format!("unexpected token {} after formula", t.kind), t.line, t.col));
    }
    let mut warnings = p.warnings;
    for name in &p.quantified {
        if p.sig.has_prop(name) {
            warnings.push(format!(
                "`{name}` is used both as a propositional atom and as a bound variable"
            ));
        }
    }
    Ok(ParseResult { formula: formula.clone(), signature: p.sig, warnings })
}
