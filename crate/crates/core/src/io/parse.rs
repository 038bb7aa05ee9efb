//! Text syntax for formulas, proofs and linear λ-terms.
//!
//! ```text
//! formula := conj ('->' formula)?          -- right associative
//! conj    := unit ('&' unit)*              -- left associative, binds tighter
//! unit    := IDENT | '(' formula ')'
//!
//! proof   := 'ax' '(' formula ')'
//!          | 'w' '(' formula ',' proof ')'
//!          | ('c' | 'ex') '(' NUMBER ',' proof ')'
//!          | ('andE1' | 'andE2' | 'impI') '(' proof ')'
//!          | ('andI' | 'impE') '(' proof ',' proof ')'
//!
//! term    := ('\' | 'λ') IDENT+ '.' term | app
//! app     := atom+ [('\' | 'λ') ...]       -- application by juxtaposition
//! atom    := IDENT | '(' term ')'
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;

use crate::lambda::Term;
use crate::logic::{Formula, Proof};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn error<T>(&self, message: impl fmt::Display) -> Result<T, ParseError> {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Err(ParseError { line, col, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
            self.error(format!("expected `{tok}`, found {found}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() && c != 'λ' => {}
            Some((_, c)) => return self.error(format!("expected identifier, found `{c}`")),
            None => return self.error("expected identifier, found end of input"),
        }
        let end = chars.find(|(_, c)| !(c.is_alphanumeric() || *c == '_' || *c == '\'')).map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        match rest[..end].parse() {
            Ok(n) => {
                self.pos += end;
                Ok(n)
            }
            Err(_) => self.error("expected a position number"),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}` after end of input")),
        }
    }
}

fn formula(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = conj(cur)?;
    if cur.eat("->") {
        Ok(Formula::imp(lhs, formula(cur)?))
    } else {
        Ok(lhs)
    }
}

fn conj(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut acc = unit(cur)?;
    while cur.eat("&") {
        acc = Formula::and(acc, unit(cur)?);
    }
    Ok(acc)
}

fn unit(cur: &mut Cursor) -> Result<Formula, ParseError> {
    if cur.eat("(") {
        let f = formula(cur)?;
        cur.expect(")")?;
        Ok(f)
    } else {
        Ok(Formula::Atom(cur.ident()?))
    }
}

fn proof(cur: &mut Cursor) -> Result<Proof, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    let name = cur.ident()?;
    cur.expect("(")?;
    let p = match name.as_str() {
        "ax" => Proof::ax(formula(cur)?),
        "w" => {
            let f = formula(cur)?;
            cur.expect(",")?;
            Proof::w(f, proof(cur)?)
        }
        "c" | "ex" => {
            let i = cur.number()?;
            cur.expect(",")?;
            let p = proof(cur)?;
            if name == "c" {
                Proof::c(i, p)
            } else {
                Proof::ex(i, p)
            }
        }
        "andE1" => Proof::and_e1(proof(cur)?),
        "andE2" => Proof::and_e2(proof(cur)?),
        "impI" => Proof::imp_i(proof(cur)?),
        "andI" | "impE" => {
            let p = proof(cur)?;
            cur.expect(",")?;
            let q = proof(cur)?;
            if name == "andI" {
                Proof::and_i(p, q)
            } else {
                Proof::imp_e(p, q)
            }
        }
        other => {
            cur.pos = start;
            return cur.error(format!("unknown rule `{other}`"));
        }
    };
    cur.expect(")")?;
    Ok(p)
}

fn lambda_start(cur: &mut Cursor) -> bool {
    cur.eat("\\") || cur.eat("λ")
}

fn term(cur: &mut Cursor) -> Result<Term, ParseError> {
    if lambda_start(cur) {
        let mut binders = vec![cur.ident()?];
        while cur.peek().is_some_and(|c| c.is_alphabetic() && c != 'λ') {
            binders.push(cur.ident()?);
        }
        cur.expect(".")?;
        let body = term(cur)?;
        return Ok(binders.into_iter().rev().fold(body, |t, x| Term::lam(x, t)));
    }
    let mut acc = atom(cur)?;
    loop {
        match cur.peek() {
            Some('\\' | 'λ') => return Ok(Term::app(acc, term(cur)?)),
            Some(c) if c == '(' || c.is_alphabetic() => acc = Term::app(acc, atom(cur)?),
            _ => return Ok(acc),
        }
    }
}

fn atom(cur: &mut Cursor) -> Result<Term, ParseError> {
    if cur.eat("(") {
        let t = term(cur)?;
        cur.expect(")")?;
        Ok(t)
    } else {
        Ok(Term::var(cur.ident()?))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text);
    let f = formula(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

pub fn parse_proof(text: &str) -> Result<Proof, ParseError> {
    let mut cur = Cursor::new(text);
    let p = proof(&mut cur)?;
    cur.finish()?;
    Ok(p)
}

/// Parses a term. Linearity is not checked here.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(text);
    let t = term(&mut cur)?;
    cur.finish()?;
    Ok(t)
}
