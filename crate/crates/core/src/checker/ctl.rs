//! CTL syntax tree, concrete syntax and parser.
//!
//! ```text
//! imp     := or ( "->" imp )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "!" unary | ("EX"|"EF"|"EG"|"AX"|"AF"|"AG") unary
//!          | ("E"|"A") "[" imp "U" imp "]" | primary
//! primary := "true" | "false" | "at" "(" ID ")" | "in" "(" ID ")" | "(" imp ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::kripke::AtomicProposition;
use crate::coupled::Approach;
use crate::lts::StateId;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ctl {
    True,
    False,
    Atom(AtomicProposition),
    Not(Box<Ctl>),
    And(Box<Ctl>, Box<Ctl>),
    Or(Box<Ctl>, Box<Ctl>),
    Implies(Box<Ctl>, Box<Ctl>),
    EX(Box<Ctl>),
    EF(Box<Ctl>),
    EG(Box<Ctl>),
    EU(Box<Ctl>, Box<Ctl>),
    AX(Box<Ctl>),
    AF(Box<Ctl>),
    AG(Box<Ctl>),
    AU(Box<Ctl>, Box<Ctl>),
}

#[allow(clippy::should_implement_trait)]
impl Ctl {
    pub fn at(state: StateId) -> Ctl {
        Ctl::Atom(AtomicProposition::At(state))
    }

    pub fn within(approach: Approach) -> Ctl {
        Ctl::Atom(AtomicProposition::In(approach))
    }

    pub fn not(f: Ctl) -> Ctl {
        Ctl::Not(Box::new(f))
    }

    pub fn and(f: Ctl, g: Ctl) -> Ctl {
        Ctl::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Ctl, g: Ctl) -> Ctl {
        Ctl::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Ctl, g: Ctl) -> Ctl {
        Ctl::Implies(Box::new(f), Box::new(g))
    }

    pub fn ex(f: Ctl) -> Ctl {
        Ctl::EX(Box::new(f))
    }

    pub fn ef(f: Ctl) -> Ctl {
        Ctl::EF(Box::new(f))
    }

    pub fn eg(f: Ctl) -> Ctl {
        Ctl::EG(Box::new(f))
    }

    pub fn eu(f: Ctl, g: Ctl) -> Ctl {
        Ctl::EU(Box::new(f), Box::new(g))
    }

    pub fn ax(f: Ctl) -> Ctl {
        Ctl::AX(Box::new(f))
    }

    pub fn af(f: Ctl) -> Ctl {
        Ctl::AF(Box::new(f))
    }

    pub fn ag(f: Ctl) -> Ctl {
        Ctl::AG(Box::new(f))
    }

    pub fn au(f: Ctl, g: Ctl) -> Ctl {
        Ctl::AU(Box::new(f), Box::new(g))
    }

    /// Rewrites derived operators into the `{EX, EG, EU}` + boolean core.
    pub fn normalize(&self) -> Ctl {
        use Ctl::*;
        match self {
            True | False | Atom(_) => self.clone(),
            Not(f) => Ctl::not(f.normalize()),
            And(f, g) => Ctl::and(f.normalize(), g.normalize()),
            Or(f, g) => Ctl::or(f.normalize(), g.normalize()),
            Implies(f, g) => Ctl::implies(f.normalize(), g.normalize()),
            EX(f) => Ctl::ex(f.normalize()),
            EG(f) => Ctl::eg(f.normalize()),
            EU(f, g) => Ctl::eu(f.normalize(), g.normalize()),
            EF(g) => Ctl::eu(True, g.normalize()),
            AX(f) => Ctl::not(Ctl::ex(Ctl::not(f.normalize()))),
            AG(f) => Ctl::not(Ctl::eu(True, Ctl::not(f.normalize()))),
            AF(f) => Ctl::not(Ctl::eg(Ctl::not(f.normalize()))),
            AU(f, g) => {
                let (f, g) = (f.normalize(), g.normalize());
                let not_g = Ctl::not(g);
                Ctl::not(Ctl::or(
                    Ctl::eu(not_g.clone(), Ctl::and(Ctl::not(f), not_g.clone())),
                    Ctl::eg(not_g),
                ))
            }
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        use Ctl::*;
        match self {
            True | False | Atom(_) => 0,
            Not(f) | EX(f) | EF(f) | EG(f) | AX(f) | AF(f) | AG(f) => 1 + f.depth(),
            And(f, g) | Or(f, g) | Implies(f, g) | EU(f, g) | AU(f, g) => 1 + f.depth().max(g.depth()),
        }
    }

    pub fn atoms(&self) -> Vec<&AtomicProposition> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a AtomicProposition>) {
        use Ctl::*;
        match self {
            True | False => {}
            Atom(a) => out.push(a),
            Not(f) | EX(f) | EF(f) | EG(f) | AX(f) | AF(f) | AG(f) => f.collect_atoms(out),
            And(f, g) | Or(f, g) | Implies(f, g) | EU(f, g) | AU(f, g) => {
                f.collect_atoms(out);
                g.collect_atoms(out);
            }
        }
    }

    /// Prints with caller-chosen spellings for atoms and constants. Binary
    /// operands that are themselves binary are parenthesized.
    pub fn write_with(
        &self,
        out: &mut dyn fmt::Write,
        atom: &dyn Fn(&AtomicProposition) -> String,
        constants: (&str, &str),
    ) -> fmt::Result {
        use Ctl::*;
        let unary = |out: &mut dyn fmt::Write, op: &str, f: &Ctl| -> fmt::Result {
            write!(out, "{op} ")?;
            f.write_operand(out, atom, constants)
        };
        let binary = |out: &mut dyn fmt::Write, op: &str, f: &Ctl, g: &Ctl| -> fmt::Result {
            f.write_operand(out, atom, constants)?;
            write!(out, " {op} ")?;
            g.write_operand(out, atom, constants)
        };
        let until = |out: &mut dyn fmt::Write, q: &str, f: &Ctl, g: &Ctl| -> fmt::Result {
            write!(out, "{q} [ ")?;
            f.write_with(out, atom, constants)?;
            write!(out, " U ")?;
            g.write_with(out, atom, constants)?;
            write!(out, " ]")
        };
        match self {
            True => out.write_str(constants.0),
            False => out.write_str(constants.1),
            Atom(a) => out.write_str(&atom(a)),
            Not(f) => {
                out.write_str("!")?;
                f.write_operand(out, atom, constants)
            }
            And(f, g) => binary(out, "&", f, g),
            Or(f, g) => binary(out, "|", f, g),
            Implies(f, g) => binary(out, "->", f, g),
            EX(f) => unary(out, "EX", f),
            EF(f) => unary(out, "EF", f),
            EG(f) => unary(out, "EG", f),
            AX(f) => unary(out, "AX", f),
            AF(f) => unary(out, "AF", f),
            AG(f) => unary(out, "AG", f),
            EU(f, g) => until(out, "E", f, g),
            AU(f, g) => until(out, "A", f, g),
        }
    }

    fn write_operand(
        &self,
        out: &mut dyn fmt::Write,
        atom: &dyn Fn(&AtomicProposition) -> String,
        constants: (&str, &str),
    ) -> fmt::Result {
        if matches!(self, Ctl::And(..) | Ctl::Or(..) | Ctl::Implies(..)) {
            out.write_str("(")?;
            self.write_with(out, atom, constants)?;
            out.write_str(")")
        } else {
            self.write_with(out, atom, constants)
        }
    }
}

impl fmt::Display for Ctl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|a| a.to_string(), ("true", "false"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message} (expected {})", expected.join(", "))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::Bang => f.write_str("'!'"),
            Tok::Amp => f.write_str("'&'"),
            Tok::Pipe => f.write_str("'|'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let tok = match c {
            c if c.is_whitespace() => {
                advance(&mut chars);
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '-' => {
                advance(&mut chars);
                if chars.peek() == Some(&'>') {
                    advance(&mut chars);
                    out.push(Spanned {
                        tok: Tok::Arrow,
                        line: l,
                        column: col,
                    });
                    continue;
                }
                return Err(SyntaxError {
                    line: l,
                    column: col,
                    message: "stray '-'".into(),
                    expected: vec!["'->'".into()],
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        advance(&mut chars);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(ident),
                    line: l,
                    column: col,
                });
                continue;
            }
            other => {
                return Err(SyntaxError {
                    line: l,
                    column: col,
                    message: format!("unexpected character {other:?}"),
                    expected: vec!["formula".into()],
                })
            }
        };
        advance(&mut chars);
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const FORMULA_START: &[&str] = &[
    "'!'", "'('", "'true'", "'false'", "'at'", "'in'", "'EX'", "'EF'", "'EG'", "'AX'", "'AF'",
    "'AG'", "'E'", "'A'",
];

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, message: impl Into<String>, expected: &[&str]) -> SyntaxError {
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        SyntaxError {
            line: at.line,
            column: at.column,
            message: message.into(),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok, opener: Option<&Spanned>) -> Result<(), SyntaxError> {
        let next = self.peek().clone();
        if next.tok == tok {
            self.bump();
            return Ok(());
        }
        let want = tok.to_string();
        match (opener, &next.tok) {
            (Some(open), Tok::Eof) => Err(self.error_at(
                open,
                format!("unclosed {}", open.tok),
                &[want.as_str()],
            )),
            _ => Err(self.error_at(&next, format!("unexpected {}", next.tok), &[want.as_str()])),
        }
    }

    fn imp(&mut self) -> Result<Ctl, SyntaxError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Ctl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ctl, SyntaxError> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Pipe {
            self.bump();
            lhs = Ctl::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ctl, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Amp {
            self.bump();
            lhs = Ctl::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ctl, SyntaxError> {
        let next = self.peek().clone();
        match &next.tok {
            Tok::Bang => {
                self.bump();
                Ok(Ctl::not(self.unary()?))
            }
            Tok::Ident(word) => {
                let op: Option<fn(Ctl) -> Ctl> = match word.as_str() {
                    "EX" => Some(Ctl::ex),
                    "EF" => Some(Ctl::ef),
                    "EG" => Some(Ctl::eg),
                    "AX" => Some(Ctl::ax),
                    "AF" => Some(Ctl::af),
                    "AG" => Some(Ctl::ag),
                    _ => None,
                };
                if let Some(op) = op {
                    self.bump();
                    return Ok(op(self.unary()?));
                }
                if word == "E" || word == "A" {
                    let existential = word == "E";
                    self.bump();
                    let open = self.peek().clone();
                    self.expect(Tok::LBrack, None)?;
                    let f = self.imp()?;
                    let u = self.peek().clone();
                    if u.tok != Tok::Ident("U".into()) {
                        return Err(self.error_at(&u, format!("unexpected {}", u.tok), &["'U'"]));
                    }
                    self.bump();
                    let g = self.imp()?;
                    self.expect(Tok::RBrack, Some(&open))?;
                    return Ok(if existential { Ctl::eu(f, g) } else { Ctl::au(f, g) });
                }
                self.primary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Ctl, SyntaxError> {
        let next = self.bump();
        match &next.tok {
            Tok::LParen => {
                let f = self.imp()?;
                self.expect(Tok::RParen, Some(&next))?;
                Ok(f)
            }
            Tok::Ident(w) if w == "true" => Ok(Ctl::True),
            Tok::Ident(w) if w == "false" => Ok(Ctl::False),
            Tok::Ident(w) if w == "at" || w == "in" => {
                let open = self.peek().clone();
                self.expect(Tok::LParen, None)?;
                let name_tok = self.bump();
                let Tok::Ident(name) = &name_tok.tok else {
                    return Err(self.error_at(&name_tok, format!("unexpected {}", name_tok.tok), &["identifier"]));
                };
                let atom = if w == "at" {
                    AtomicProposition::At(StateId::new(name.clone()).expect("lexer yields identifiers"))
                } else {
                    match name.parse::<Approach>() {
                        Ok(a) => AtomicProposition::In(a),
                        Err(_) => {
                            return Err(self.error_at(
                                &name_tok,
                                format!("unknown approach '{name}'"),
                                &["'Detection'", "'Identification'", "'Protection'", "'Removal'"],
                            ))
                        }
                    }
                };
                self.expect(Tok::RParen, Some(&open))?;
                Ok(Ctl::Atom(atom))
            }
            other => Err(self.error_at(&next, format!("unexpected {other}"), FORMULA_START)),
        }
    }
}

/// Parses CTL concrete syntax. Positions are 1-based within `text`.
pub fn parse_ctl(text: &str) -> Result<Ctl, SyntaxError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.imp()?;
    let end = p.peek().clone();
    if end.tok != Tok::Eof {
        return Err(p.error_at(
            &end,
            format!("unexpected {}", end.tok),
            &["'&'", "'|'", "'->'", "end of input"],
        ));
    }
    Ok(f)
}
