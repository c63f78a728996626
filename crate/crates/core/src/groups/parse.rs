//! Presentation source files.
//!
//! ```text
//! raag { a, b, z; a-z, b-z }
//! pres { a, t | t a t^-1 a^-2 } rewriting(recursive) { a a t -> t a; ... }
//! pres { a, t | t a t^-1 a^-2 } affine(a, t, 2)
//! ```
//!
//! Words are juxtaposed factors; a factor is a generator, `[u, v]`, or
//! `(u)`, optionally raised to an integer power. `1` is the empty word.
//! An undeclared identifier made only of single-letter generator names is
//! read letter by letter, so `abAB` style input is not supported but `ab`
//! is. `#` starts a comment.

use std::collections::BTreeSet;

use super::affine::AffineEngine;
use super::presentation::GroupPresentation;
use super::raag::MAX_RAAG_GENERATORS;
use super::rewriting::{ReductionOrder, RewritingSystem, Rule, CONFLUENCE_CHECK_LENGTH};
use super::word::{Letter, Word};
use super::{GroupError, NormalFormEngine};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, GroupError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let n = s.parse::<u64>().map_err(|_| GroupError::Syntax {
                line: l0,
                col: c0,
                msg: format!("integer `{s}` out of range"),
            })?;
            out.push(Token { tok: Tok::Int(n), line: l0, col: c0 });
            continue;
        }
        let sym = if c == '-' && chars.get(i + 1) == Some(&'>') {
            "->"
        } else {
            match c {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                '(' => "(",
                ')' => ")",
                ';' => ";",
                ',' => ",",
                '|' => "|",
                '-' => "-",
                '^' => "^",
                _ => {
                    return Err(GroupError::Syntax { line, col, msg: format!("unexpected character `{c}`") });
                }
            }
        };
        advance(sym.len(), &mut i);
        out.push(Token { tok: Tok::Sym(sym), line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, GroupError> {
        let t = self.peek();
        Err(GroupError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), GroupError> {
        if self.is_sym(s) {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", describe(&self.peek().tok)))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), GroupError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                let t = self.next();
                Ok((s, t.line, t.col))
            }
            other => self.error(format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn generator_list(&mut self) -> Result<(), GroupError> {
        let mut seen = BTreeSet::new();
        loop {
            let (name, line, col) = self.ident()?;
            if !seen.insert(name.clone()) {
                return Err(GroupError::Syntax { line, col, msg: format!("duplicate generator `{name}`") });
            }
            self.names.push(name);
            if self.is_sym(",") {
                self.next();
            } else {
                return Ok(());
            }
        }
    }

    fn lookup(&self, name: &str, line: usize, col: usize) -> Result<Vec<Letter>, GroupError> {
        if let Some(g) = self.names.iter().position(|n| n == name) {
            return Ok(vec![Letter::pos(g)]);
        }
        let split: Option<Vec<Letter>> = name
            .chars()
            .map(|c| {
                let mut buf = [0u8; 4];
                let s: &str = c.encode_utf8(&mut buf);
                self.names.iter().position(|n| n == s).map(Letter::pos)
            })
            .collect();
        split.ok_or_else(|| GroupError::UndeclaredGenerator { name: name.to_string(), line, col })
    }

    fn at_word_end(&self) -> bool {
        match &self.peek().tok {
            Tok::Eof => true,
            Tok::Sym(s) => matches!(*s, "," | "|" | "}" | ";" | "->" | "]" | ")"),
            _ => false,
        }
    }

    fn word(&mut self) -> Result<Word, GroupError> {
        if self.at_word_end() {
            return self.error("expected a word");
        }
        let mut letters = Vec::new();
        while !self.at_word_end() {
            letters.extend(self.factor()?.0);
        }
        Ok(Word(letters))
    }

    fn factor(&mut self) -> Result<Word, GroupError> {
        let t = self.next();
        let base = match t.tok {
            Tok::Ident(name) => Word(self.lookup(&name, t.line, t.col)?),
            Tok::Int(1) => Word::empty(),
            Tok::Sym("[") => {
                let u = self.word()?;
                self.expect_sym(",")?;
                let v = self.word()?;
                self.expect_sym("]")?;
                Word::commutator(&u, &v)
            }
            Tok::Sym("(") => {
                let u = self.word()?;
                self.expect_sym(")")?;
                u
            }
            other => {
                return Err(GroupError::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected a generator, `1`, `[` or `(`, found {}", describe(&other)),
                })
            }
        };
        if !self.is_sym("^") {
            return Ok(base);
        }
        self.next();
        let negative = self.is_sym("-");
        if negative {
            self.next();
        }
        match self.peek().tok {
            Tok::Int(n) if n <= i32::MAX as u64 => {
                self.next();
                let e = if negative { -(n as i64) } else { n as i64 };
                Ok(base.pow(e))
            }
            _ => self.error("expected an exponent"),
        }
    }

    fn word_list(&mut self, end: &str) -> Result<Vec<Word>, GroupError> {
        let mut out = Vec::new();
        if self.is_sym(end) {
            return Ok(out);
        }
        loop {
            out.push(self.word()?);
            if self.is_sym(",") {
                self.next();
            } else {
                return Ok(out);
            }
        }
    }

    fn raag(&mut self) -> Result<GroupPresentation, GroupError> {
        self.expect_sym("{")?;
        self.generator_list()?;
        if self.names.len() > MAX_RAAG_GENERATORS {
            return Err(GroupError::MalformedGraph(format!(
                "{} vertices, at most {MAX_RAAG_GENERATORS} supported",
                self.names.len()
            )));
        }
        let mut edges = Vec::new();
        if self.is_sym(";") {
            self.next();
            while !self.is_sym("}") {
                let (u, l1, c1) = self.ident()?;
                self.expect_sym("-")?;
                let (v, l2, c2) = self.ident()?;
                let find = |n: &str, line, col| {
                    self.names
                        .iter()
                        .position(|x| x == n)
                        .ok_or_else(|| GroupError::UndeclaredGenerator { name: n.to_string(), line, col })
                };
                let (a, b) = (find(&u, l1, c1)?, find(&v, l2, c2)?);
                if a == b {
                    return Err(GroupError::MalformedGraph(format!("loop at `{u}` ({l1}:{c1})")));
                }
                let e = (a.min(b), a.max(b));
                if edges.contains(&e) {
                    return Err(GroupError::MalformedGraph(format!("repeated edge {u}-{v} ({l1}:{c1})")));
                }
                edges.push(e);
                if self.is_sym(",") {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect_sym("}")?;
        Ok(GroupPresentation::raag(std::mem::take(&mut self.names), edges))
    }

    fn pres(&mut self) -> Result<GroupPresentation, GroupError> {
        self.expect_sym("{")?;
        self.generator_list()?;
        self.expect_sym("|")?;
        let relators = self.word_list("}")?;
        self.expect_sym("}")?;
        let n = self.names.len();
        let engine = match self.peek().tok.clone() {
            Tok::Ident(kw) if kw == "rewriting" => {
                self.next();
                let mut order = ReductionOrder::Shortlex;
                if self.is_sym("(") {
                    self.next();
                    let (name, line, col) = self.ident()?;
                    order = match name.as_str() {
                        "shortlex" => ReductionOrder::Shortlex,
                        "recursive" => ReductionOrder::Recursive,
                        _ => {
                            return Err(GroupError::Syntax {
                                line,
                                col,
                                msg: format!("unknown reduction order `{name}`"),
                            })
                        }
                    };
                    self.expect_sym(")")?;
                }
                self.expect_sym("{")?;
                let mut rules = Vec::new();
                while !self.is_sym("}") {
                    let lhs = self.word()?;
                    self.expect_sym("->")?;
                    let rhs = self.word()?;
                    rules.push(Rule { lhs, rhs });
                    if self.is_sym(";") {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect_sym("}")?;
                let sys = RewritingSystem::new(n, rules, order)?;
                sys.check_local_confluence(CONFLUENCE_CHECK_LENGTH)?;
                NormalFormEngine::Rewriting(sys)
            }
            Tok::Ident(kw) if kw == "affine" => {
                self.next();
                self.expect_sym("(")?;
                let (base_line, base_col) = (self.peek().line, self.peek().col);
                let base = self.word()?;
                self.expect_sym(",")?;
                let stable = self.word()?;
                self.expect_sym(",")?;
                let k = match self.peek().tok {
                    Tok::Int(k) if (2..=u32::MAX as u64).contains(&k) => k as u32,
                    _ => return self.error("expected an integer n ≥ 2"),
                };
                self.next();
                self.expect_sym(")")?;
                let (&[b], &[t]) = (base.letters(), stable.letters()) else {
                    return Err(GroupError::Syntax { line: base_line, col: base_col, msg: "expected single generators".into() });
                };
                if b.is_inverse() {
                    return Err(GroupError::Syntax { line: base_line, col: base_col, msg: "the base letter must be a generator".into() });
                }
                NormalFormEngine::Affine(AffineEngine::new(n, b.gen(), t.gen(), t.sign(), k)?)
            }
            _ if relators.is_empty() => {
                return Ok(GroupPresentation::free(std::mem::take(&mut self.names)));
            }
            _ => {
                return Err(GroupError::EngineRejected(
                    "a presentation with relators needs a rewriting system".into(),
                ))
            }
        };
        Ok(GroupPresentation { generators: std::mem::take(&mut self.names), relators, engine })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a presentation. Rewriting systems are checked for local
/// confluence here; relators are checked against the engine when a
/// [`GroupContext`](super::GroupContext) is built.
pub fn parse_presentation(src: &str) -> Result<GroupPresentation, GroupError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, names: Vec::new() };
    let (kw, line, col) = p.ident()?;
    let pres = match kw.as_str() {
        "raag" => p.raag()?,
        "pres" => p.pres()?,
        _ => return Err(GroupError::Syntax { line, col, msg: format!("expected `raag` or `pres`, found `{kw}`") }),
    };
    if p.peek().tok != Tok::Eof {
        return p.error("trailing input");
    }
    Ok(pres)
}

/// Generator names and relators of a presentation, with any engine
/// ignored. Enough for the abelianization.
pub fn parse_relators(src: &str) -> Result<(Vec<String>, Vec<Word>), GroupError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, names: Vec::new() };
    let (kw, line, col) = p.ident()?;
    match kw.as_str() {
        "raag" => {
            let pres = p.raag()?;
            let relators = pres.relators.clone();
            Ok((pres.generators, relators))
        }
        "pres" => {
            p.expect_sym("{")?;
            p.generator_list()?;
            p.expect_sym("|")?;
            let relators = p.word_list("}")?;
            p.expect_sym("}")?;
            Ok((p.names, relators))
        }
        _ => Err(GroupError::Syntax { line, col, msg: format!("expected `raag` or `pres`, found `{kw}`") }),
    }
}

/// Parses a word over the given generator names.
pub fn parse_word(src: &str, names: &[String]) -> Result<Word, GroupError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, names: names.to_vec() };
    let w = p.word()?;
    if p.peek().tok != Tok::Eof {
        return p.error("trailing input");
    }
    Ok(w)
}
