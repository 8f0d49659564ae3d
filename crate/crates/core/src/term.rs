//! Terms over `{0, 1, -, ^, v, \}`, the ASCII surface syntax with its derived
//! connectives, evaluation on finite algebras and the negative translation.
//!
//! Surface syntax, tightest binding first:
//!
//! | level | operators | meaning |
//! |-------|-----------|---------|
//! | unary | `-t`, `~t`, `!t` | negation, `t \ 0`, `(t \ 0) \ 0` |
//! | product | `s . t`, `s * t` (left assoc.) | Sasaki product, `s ^ (~s v t)` |
//! | meet | `s ^ t` (left assoc.) | |
//! | join | `s v t` (left assoc.) | |
//! | implication | `s \ t`, `s -> t`, `s => t` (non-assoc.) | residual, Sasaki hook, `~s v (s ^ t)` |
//!
//! Derived connectives are expanded while parsing, so a [`Term`] only ever
//! contains the core constructors.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};

/// Core term. Variables are indices into a [`Vars`] namespace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    Var(usize),
    Neg(Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Res(Box<Term>, Box<Term>),
}

/// Variable names in first-occurrence order. Index `i` is the `i`-th
/// variable for evaluation; the name is used only for printing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new() -> Self {
        Vars::default()
    }

    /// Namespace `x1, ..., xk`.
    pub fn numbered(k: usize) -> Self {
        Vars {
            names: (1..=k).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Vars {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// Index of `name`, registering it if new.
    pub fn intern(&mut self, name: &str) -> usize {
        match self.lookup(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn meet(s: Term, t: Term) -> Term {
        Term::Meet(Box::new(s), Box::new(t))
    }

    pub fn join(s: Term, t: Term) -> Term {
        Term::Join(Box::new(s), Box::new(t))
    }

    pub fn res(s: Term, t: Term) -> Term {
        Term::Res(Box::new(s), Box::new(t))
    }

    /// `s . t = s ^ (-s v t)`
    pub fn product(s: Term, t: Term) -> Term {
        Term::meet(s.clone(), Term::join(Term::neg(s), t))
    }

    /// `s -> t = -s v (s ^ t)`
    pub fn hook(s: Term, t: Term) -> Term {
        Term::join(Term::neg(s.clone()), Term::meet(s, t))
    }

    /// `~t = t \ 0`
    pub fn tilde(t: Term) -> Term {
        Term::res(t, Term::Zero)
    }

    /// `!t = ~~t`
    pub fn bar(t: Term) -> Term {
        Term::tilde(Term::tilde(t))
    }

    /// `s * t = s ^ (~s v t)`
    pub fn star(s: Term, t: Term) -> Term {
        Term::meet(s.clone(), Term::join(Term::tilde(s), t))
    }

    /// `s => t = ~s v (s ^ t)`
    pub fn runder(s: Term, t: Term) -> Term {
        Term::join(Term::tilde(s.clone()), Term::meet(s, t))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 0,
            Term::Neg(t) => 1 + t.depth(),
            Term::Meet(s, t) | Term::Join(s, t) | Term::Res(s, t) => 1 + s.depth().max(t.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 1,
            Term::Neg(t) => 1 + t.size(),
            Term::Meet(s, t) | Term::Join(s, t) | Term::Res(s, t) => 1 + s.size() + t.size(),
        }
    }

    pub fn contains_res(&self) -> bool {
        match self {
            Term::Zero | Term::One | Term::Var(_) => false,
            Term::Neg(t) => t.contains_res(),
            Term::Res(..) => true,
            Term::Meet(s, t) | Term::Join(s, t) => s.contains_res() || t.contains_res(),
        }
    }

    /// One more than the largest variable index occurring in the term.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Zero | Term::One => 0,
            Term::Var(i) => i + 1,
            Term::Neg(t) => t.var_bound(),
            Term::Meet(s, t) | Term::Join(s, t) | Term::Res(s, t) => s.var_bound().max(t.var_bound()),
        }
    }

    /// Prints with the core connectives only.
    pub fn display<'a>(&'a self, vars: &'a Vars) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            vars,
            sugar: false,
        }
    }

    /// Prints `t \ 0` as `~t` and `(t \ 0) \ 0` as `!t`. Parses back to the
    /// same term.
    pub fn pretty<'a>(&'a self, vars: &'a Vars) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            vars,
            sugar: true,
        }
    }
}

fn is_tilde(t: &Term) -> bool {
    matches!(t, Term::Res(_, r) if **r == Term::Zero)
}

const LEVEL_IMPL: u8 = 1;
const LEVEL_JOIN: u8 = 2;
const LEVEL_MEET: u8 = 3;
const LEVEL_UNARY: u8 = 5;

pub struct TermDisplay<'a> {
    term: &'a Term,
    vars: &'a Vars,
    sugar: bool,
}

impl TermDisplay<'_> {
    fn level(&self, t: &Term) -> u8 {
        match t {
            Term::Zero | Term::One | Term::Var(_) | Term::Neg(_) => LEVEL_UNARY,
            Term::Res(_, r) if self.sugar && **r == Term::Zero => LEVEL_UNARY,
            Term::Meet(..) => LEVEL_MEET,
            Term::Join(..) => LEVEL_JOIN,
            Term::Res(..) => LEVEL_IMPL,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
        let paren = self.level(t) < min;
        if paren {
            f.write_str("(")?;
        }
        match t {
            Term::Zero => f.write_str("0")?,
            Term::One => f.write_str("1")?,
            Term::Var(i) => f.write_str(self.vars.name(*i))?,
            Term::Neg(s) => {
                f.write_str("-")?;
                self.write(f, s, LEVEL_UNARY)?;
            }
            Term::Res(s, r) if self.sugar && **r == Term::Zero => match &**s {
                Term::Res(inner, r2) if **r2 == Term::Zero && !is_tilde(inner) => {
                    f.write_str("!")?;
                    self.write(f, inner, LEVEL_UNARY)?;
                }
                _ => {
                    f.write_str("~")?;
                    self.write(f, s, LEVEL_UNARY)?;
                }
            },
            Term::Meet(s, r) => {
                self.write(f, s, LEVEL_MEET)?;
                f.write_str(" ^ ")?;
                self.write(f, r, LEVEL_MEET + 1)?;
            }
            Term::Join(s, r) => {
                self.write(f, s, LEVEL_JOIN)?;
                f.write_str(" v ")?;
                self.write(f, r, LEVEL_JOIN + 1)?;
            }
            Term::Res(s, r) => {
                self.write(f, s, LEVEL_IMPL + 1)?;
                f.write_str(" \\ ")?;
                self.write(f, r, LEVEL_IMPL + 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.term, 0)
    }
}

/// `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn var_bound(&self) -> usize {
        self.lhs.var_bound().max(self.rhs.var_bound())
    }

    pub fn contains_res(&self) -> bool {
        self.lhs.contains_res() || self.rhs.contains_res()
    }

    pub fn translate(&self) -> Equation {
        Equation::new(translate(&self.lhs), translate(&self.rhs))
    }

    pub fn display<'a>(&'a self, vars: &'a Vars) -> impl fmt::Display + 'a {
        EquationDisplay {
            eq: self,
            vars,
            sugar: false,
        }
    }

    pub fn pretty<'a>(&'a self, vars: &'a Vars) -> impl fmt::Display + 'a {
        EquationDisplay {
            eq: self,
            vars,
            sugar: true,
        }
    }

    /// Evaluates both sides.
    pub fn evaluate(&self, a: &FiniteAlgebra, env: &[Elem]) -> Result<(Elem, Elem), EvalError> {
        Ok((evaluate(&self.lhs, a, env)?, evaluate(&self.rhs, a, env)?))
    }
}

struct EquationDisplay<'a> {
    eq: &'a Equation,
    vars: &'a Vars,
    sugar: bool,
}

impl fmt::Display for EquationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sugar {
            write!(
                f,
                "{} = {}",
                self.eq.lhs.pretty(self.vars),
                self.eq.rhs.pretty(self.vars)
            )
        } else {
            write!(
                f,
                "{} = {}",
                self.eq.lhs.display(self.vars),
                self.eq.rhs.display(self.vars)
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: unexpected character `{ch}`")]
    BadChar { pos: usize, ch: char },
    #[error("{pos}: expected {expected}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("{pos}: `{op}` is non-associative; add parentheses")]
    NonAssociativeChain { pos: usize, op: &'static str },
    #[error("{pos}: constants are `0` and `1`, found `{text}`")]
    BadConstant { pos: usize, text: String },
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<ParseError> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    Minus,
    Tilde,
    Bang,
    Dot,
    Star,
    Meet,
    Join,
    Backslash,
    Hook,
    Runder,
    Eq,
    Leq,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Minus => "`-`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Star => "`*`".into(),
            Tok::Meet => "`^`".into(),
            Tok::Join => "`v`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Hook => "`->`".into(),
            Tok::Runder => "`=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Leq => "`<=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let single = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '-' if next == Some('>') => {
                out.push((pos, Tok::Hook));
                i += 2;
                continue;
            }
            '=' if next == Some('>') => {
                out.push((pos, Tok::Runder));
                i += 2;
                continue;
            }
            '<' if next == Some('=') => {
                out.push((pos, Tok::Leq));
                i += 2;
                continue;
            }
            '-' => Tok::Minus,
            '~' => Tok::Tilde,
            '!' => Tok::Bang,
            '.' => Tok::Dot,
            '*' => Tok::Star,
            '^' => Tok::Meet,
            '\\' => Tok::Backslash,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                match text.as_str() {
                    "0" => out.push((pos, Tok::Zero)),
                    "1" => out.push((pos, Tok::One)),
                    _ => return Err(ParseError::BadConstant { pos, text }),
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, if word == "v" { Tok::Join } else { Tok::Ident(word) }));
                continue;
            }
            ch => return Err(ParseError::BadChar { pos, ch }),
        };
        out.push((pos, single));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'v> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'v mut Vars,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected {
            pos: self.pos(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn implication(&mut self) -> Result<Term, ParseError> {
        let lhs = self.join()?;
        let op = match self.peek() {
            Tok::Backslash => "\\",
            Tok::Hook => "->",
            Tok::Runder => "=>",
            _ => return Ok(lhs),
        };
        let tok = self.bump();
        let rhs = self.join()?;
        if matches!(self.peek(), Tok::Backslash | Tok::Hook | Tok::Runder) {
            return Err(ParseError::NonAssociativeChain { pos: self.pos(), op });
        }
        Ok(match tok {
            Tok::Backslash => Term::res(lhs, rhs),
            Tok::Hook => Term::hook(lhs, rhs),
            _ => Term::runder(lhs, rhs),
        })
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut t = self.meet()?;
        while *self.peek() == Tok::Join {
            self.bump();
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut t = self.product()?;
        while *self.peek() == Tok::Meet {
            self.bump();
            t = Term::meet(t, self.product()?);
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        loop {
            match self.peek() {
                Tok::Dot => {
                    self.bump();
                    t = Term::product(t, self.unary()?);
                }
                Tok::Star => {
                    self.bump();
                    t = Term::star(t, self.unary()?);
                }
                _ => return Ok(t),
            }
        }
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Term::neg(self.unary()?))
            }
            Tok::Tilde => {
                self.bump();
                Ok(Term::tilde(self.unary()?))
            }
            Tok::Bang => {
                self.bump();
                Ok(Term::bar(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Term::One)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::Var(self.vars.intern(&name)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a term, registering new variables in `vars`.
pub fn parse_with(text: &str, vars: &mut Vars) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        vars,
    };
    let t = p.implication()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term in a fresh namespace.
pub fn parse(text: &str) -> Result<(Term, Vars), ParseError> {
    let mut vars = Vars::new();
    let t = parse_with(text, &mut vars)?;
    Ok((t, vars))
}

/// Parses `s = t`, or `s <= t` which stands for `s ^ t = s`.
pub fn parse_equation_with(text: &str, vars: &mut Vars) -> Result<Equation, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        vars,
    };
    let lhs = p.implication()?;
    let eq = match p.bump() {
        Tok::Eq => Equation::new(lhs, p.implication()?),
        Tok::Leq => {
            let rhs = p.implication()?;
            Equation::new(Term::meet(lhs.clone(), rhs), lhs)
        }
        _ => {
            p.at -= 1;
            return Err(p.unexpected("`=` or `<=`"));
        }
    };
    p.finish()?;
    Ok(eq)
}

pub fn parse_equation(text: &str) -> Result<(Equation, Vars), ParseError> {
    let mut vars = Vars::new();
    let eq = parse_equation_with(text, &mut vars)?;
    Ok((eq, vars))
}

/// Strips a `#` comment and surrounding whitespace.
pub fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// One equation per non-blank line; `#` starts a comment.
pub fn parse_equations_with(text: &str, vars: &mut Vars) -> Result<Vec<Equation>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        let eq = parse_equation_with(body, vars).map_err(|e| ParseError::Line {
            line: i + 1,
            source: Box::new(e),
        })?;
        out.push(eq);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("term uses `\\` but the algebra has no residual table")]
    MissingResidual,
    #[error("variable {0} has no value")]
    UnboundVariable(usize),
}

/// Evaluates `t` with `env[i]` the value of variable `i`.
pub fn evaluate(t: &Term, a: &FiniteAlgebra, env: &[Elem]) -> Result<Elem, EvalError> {
    if t.contains_res() && !a.has_residual() {
        return Err(EvalError::MissingResidual);
    }
    if let Some(i) = (0..t.var_bound()).find(|&i| i >= env.len()) {
        return Err(EvalError::UnboundVariable(i));
    }
    Ok(evaluate_unchecked(t, a, env))
}

/// [`evaluate`] without the residual and variable checks; panics if they fail.
pub fn evaluate_unchecked(t: &Term, a: &FiniteAlgebra, env: &[Elem]) -> Elem {
    match t {
        Term::Zero => a.bottom(),
        Term::One => a.top(),
        Term::Var(i) => env[*i],
        Term::Neg(s) => a.neg(evaluate_unchecked(s, a, env)),
        Term::Meet(s, r) => a.meet(evaluate_unchecked(s, a, env), evaluate_unchecked(r, a, env)),
        Term::Join(s, r) => a.join(evaluate_unchecked(s, a, env), evaluate_unchecked(r, a, env)),
        Term::Res(s, r) => a.res(evaluate_unchecked(s, a, env), evaluate_unchecked(r, a, env)),
    }
}

/// The negative translation: variables go to `!x`, `-s` to `~T(s)`, and
/// `0, 1, ^, v, \` are kept.
pub fn translate(t: &Term) -> Term {
    match t {
        Term::Zero => Term::Zero,
        Term::One => Term::One,
        Term::Var(i) => Term::bar(Term::Var(*i)),
        Term::Neg(s) => Term::tilde(translate(s)),
        Term::Meet(s, r) => Term::meet(translate(s), translate(r)),
        Term::Join(s, r) => Term::join(translate(s), translate(r)),
        Term::Res(s, r) => Term::res(translate(s), translate(r)),
    }
}

pub fn translate_set(eqs: &[Equation]) -> Vec<Equation> {
    eqs.iter().map(Equation::translate).collect()
}

/// Random term of depth at most `max_depth` over `vars` variables. Each node
/// picks uniformly among the seven constructors, and leaves are forced once
/// the depth budget is spent.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, vars: usize) -> Term {
    let choice = if max_depth == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..7)
    };
    match choice {
        0 => Term::Zero,
        1 => Term::One,
        2 => {
            if vars == 0 {
                Term::Zero
            } else {
                Term::Var(rng.gen_range(0..vars))
            }
        }
        3 => Term::neg(random_term(rng, max_depth - 1, vars)),
        4 => Term::meet(
            random_term(rng, max_depth - 1, vars),
            random_term(rng, max_depth - 1, vars),
        ),
        5 => Term::join(
            random_term(rng, max_depth - 1, vars),
            random_term(rng, max_depth - 1, vars),
        ),
        _ => Term::res(
            random_term(rng, max_depth - 1, vars),
            random_term(rng, max_depth - 1, vars),
        ),
    }
}
