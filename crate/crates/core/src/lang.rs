//! Abstract syntax and parser for programs of recursive, parameterless
//! procedures.
//!
//! ```text
//! # one definition per line; a trailing backslash continues a line
//! f = o(b) ? o(a) ; g
//! g = f ; g ; (o(b) ? o(a))
//! ```
//!
//! `;` binds tighter than `?`. Sequencing associates to the right and choice
//! to the left. `o` is reserved for event emission.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::automaton::Automaton;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Emit(String),
    Call(String),
    Seq(Box<Expr>, Box<Expr>),
    Choice(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn emit(symbol: &str) -> Expr {
        Expr::Emit(symbol.to_string())
    }

    pub fn call(name: &str) -> Expr {
        Expr::Call(name.to_string())
    }

    pub fn seq(a: Expr, b: Expr) -> Expr {
        Expr::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Expr, b: Expr) -> Expr {
        Expr::Choice(Box::new(a), Box::new(b))
    }

    /// Calls `f` on each call target, left to right.
    pub fn for_each_call<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Emit(_) => {}
            Expr::Call(g) => f(g),
            Expr::Seq(a, b) | Expr::Choice(a, b) => {
                a.for_each_call(f);
                b.for_each_call(f);
            }
        }
    }

    pub fn for_each_emit<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Emit(a) => f(a),
            Expr::Call(_) => {}
            Expr::Seq(a, b) | Expr::Choice(a, b) => {
                a.for_each_emit(f);
                b.for_each_emit(f);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Emit(_) | Expr::Call(_) => 1,
            Expr::Seq(a, b) | Expr::Choice(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
            if wrap {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Emit(a) => write!(f, "o({a})"),
            Expr::Call(g) => write!(f, "{g}"),
            Expr::Seq(a, b) => {
                paren(f, a, matches!(**a, Expr::Seq(..) | Expr::Choice(..)))?;
                write!(f, " ; ")?;
                paren(f, b, matches!(**b, Expr::Choice(..)))
            }
            Expr::Choice(a, b) => {
                write!(f, "{a} ? ")?;
                paren(f, b, matches!(**b, Expr::Choice(..)))
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LangError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: duplicate procedure `{name}`")]
    DuplicateProcedure { line: usize, col: usize, name: String },
    #[error("program declares no procedures")]
    NoProcedures,
    #[error("undefined procedure {0}")]
    UndefinedProcedure(String),
    #[error("unknown event {0} (not in policy alphabet)")]
    UnknownEvent(String),
}

/// Procedures in declaration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Program {
    procedures: Vec<(String, Expr)>,
    index: HashMap<String, usize>,
}

impl Program {
    /// Fails on duplicate names; call targets are checked by [`Program::validate`].
    pub fn new(procedures: Vec<(String, Expr)>) -> Result<Self, LangError> {
        if procedures.is_empty() {
            return Err(LangError::NoProcedures);
        }
        let mut index = HashMap::new();
        for (i, (name, _)) in procedures.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LangError::DuplicateProcedure { line: 0, col: 0, name: name.clone() });
            }
        }
        Ok(Program { procedures, index })
    }

    pub fn len(&self) -> usize {
        self.procedures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.procedures.is_empty()
    }

    pub fn procedures(&self) -> impl Iterator<Item = (&str, &Expr)> + '_ {
        self.procedures.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.procedures.iter().map(|(n, _)| n.as_str())
    }

    pub fn name(&self, i: usize) -> &str {
        &self.procedures[i].0
    }

    pub fn body_at(&self, i: usize) -> &Expr {
        &self.procedures[i].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn body(&self, name: &str) -> Option<&Expr> {
        self.index_of(name).map(|i| &self.procedures[i].1)
    }

    pub fn first(&self) -> &str {
        &self.procedures[0].0
    }

    /// Every call targets a declared procedure.
    pub fn check_calls(&self) -> Result<(), LangError> {
        let mut missing = None;
        for (_, body) in &self.procedures {
            body.for_each_call(&mut |g| {
                if missing.is_none() && !self.index.contains_key(g) {
                    missing = Some(g.to_string());
                }
            });
        }
        missing.map_or(Ok(()), |g| Err(LangError::UndefinedProcedure(g)))
    }

    /// Well-formed calls and every emitted event in the policy alphabet.
    pub fn validate(&self, aut: &Automaton) -> Result<(), LangError> {
        self.check_calls()?;
        let mut unknown = None;
        for (_, body) in &self.procedures {
            body.for_each_emit(&mut |a| {
                if unknown.is_none() && aut.symbol(a).is_none() {
                    unknown = Some(a.to_string());
                }
            });
        }
        unknown.map_or(Ok(()), |a| Err(LangError::UnknownEvent(a)))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, body) in &self.procedures {
            writeln!(f, "{name} = {body}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Program {
    type Err = LangError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Emit,
    Eq,
    Semi,
    Quest,
    LParen,
    RParen,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Emit => f.write_str("`o`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Quest => f.write_str("`?`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, LangError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let single = match c {
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            '?' => Some(Tok::Quest),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '\n' => Some(Tok::Newline),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: tl, col: tc });
            i += 1;
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '\\' {
            let mut j = i + 1;
            while j < chars.len() && chars[j] != '\n' && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && chars[j] != '\n' {
                return Err(LangError::Syntax { line, col, message: "stray `\\` before end of line".into() });
            }
            i = j + 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if word == "o" { Tok::Emit } else { Tok::Ident(word) };
            out.push(Spanned { tok, line: tl, col: tc });
        } else {
            return Err(LangError::Syntax { line, col, message: format!("unexpected character `{c}`") });
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> LangError {
        let t = &self.toks[self.pos];
        LangError::Syntax { line: t.line, col: t.col, message }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LangError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LangError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected {what}, found {other}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut left = self.seq()?;
        while *self.peek() == Tok::Quest {
            self.bump();
            let right = self.seq()?;
            left = Expr::choice(left, right);
        }
        Ok(left)
    }

    fn seq(&mut self) -> Result<Expr, LangError> {
        let head = self.atom()?;
        if *self.peek() == Tok::Semi {
            self.bump();
            let tail = self.seq()?;
            return Ok(Expr::seq(head, tail));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Expr, LangError> {
        match self.peek().clone() {
            Tok::Emit => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.ident("event symbol")?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Emit(a))
            }
            Tok::Ident(g) => {
                self.bump();
                Ok(Expr::Call(g))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(self.error(format!("expected expression, found {other}"))),
        }
    }
}

pub fn parse_program(text: &str) -> Result<Program, LangError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut procedures: Vec<(String, Expr)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    loop {
        while *p.peek() == Tok::Newline {
            p.bump();
        }
        if *p.peek() == Tok::Eof {
            break;
        }
        let (line, col) = (p.toks[p.pos].line, p.toks[p.pos].col);
        let name = p.ident("procedure name")?;
        if !seen.insert(name.clone()) {
            return Err(LangError::DuplicateProcedure { line, col, name });
        }
        p.expect(Tok::Eq)?;
        let body = p.expr()?;
        match p.peek() {
            Tok::Newline | Tok::Eof => {}
            other => return Err(p.error(format!("expected `;`, `?` or end of line, found {other}"))),
        }
        procedures.push((name, body));
    }
    Program::new(procedures)
}
