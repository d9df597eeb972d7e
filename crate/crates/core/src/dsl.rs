//! Text format for coupled models and their property suites.
//!
//! ```text
//! document  := ( modelStmt | behavior | approach | map | exempt | spec )*
//! modelStmt := "model" ID
//! behavior  := "behavior" ("preventive"|"control") "{" item* "}"
//! item      := "initial" ID | "final" ID+ | "state" ID+ | edge
//! edge      := ID "-" ID "->" ID ( "[" ID "]" )? ( "/" APPROACH )?
//! approach  := "approach" APPROACH "{" ( ("control"|"preventive") ":" ID* )* "}"
//! map       := "map" ID "=>" path ( "," path )*
//! path      := ID ( "-" ID "->" ID )*
//! exempt    := "exempt" ID
//! spec      := "spec" ID "on" ("control"|"preventive") ( "expect" ("holds"|"fails") )? ":" CTL-to-end-of-line
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Every diagnostic
//! carries the 1-based line and column of the offending token.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::checker::{parse_ctl, AtomicProposition, Ctl};
use crate::coupled::{
    AnnotatedBehavior, Annotation, AnnotationError, Approach, ApproachPartition, CoupledModel,
    MappingProcess, Role,
};
use crate::lts::{Behavior, BehaviorError, Label, Path, StateId, Transition};
use crate::report::{Finding, Position, Subject};

/// The flagship model: an antivirus protection service.
pub const ANTIVIRUS_MODEL: &str = include_str!("../models/antivirus.avm");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expectation {
    Holds,
    Fails,
    Unspecified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub formula: Ctl,
    pub target: Role,
    pub expected: Expectation,
}

/// Source positions of model elements, keyed by the subject findings use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    positions: BTreeMap<Subject, Position>,
}

impl SourceMap {
    fn record(&mut self, subject: Subject, pos: Position) {
        self.positions.entry(subject).or_insert(pos);
    }

    pub fn locate(&self, subject: &Subject) -> Option<Position> {
        self.positions.get(subject).copied()
    }

    /// Attaches a position to `finding` when it has none.
    pub fn position(&self, finding: Finding) -> Finding {
        if finding.position.is_some() {
            return finding;
        }
        let pos = self.locate(&finding.subject);
        finding.at(pos)
    }
}

#[derive(Debug, Clone)]
pub struct ModelDocument {
    pub coupled: CoupledModel,
    pub properties: Vec<Property>,
    pub source: SourceMap,
}

impl PartialEq for ModelDocument {
    /// Structural equality; source positions are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.coupled == other.coupled && self.properties == other.properties
    }
}

impl ModelDocument {
    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn properties_on(&self, role: Role) -> impl Iterator<Item = &Property> {
        self.properties.iter().filter(move |p| p.target == role)
    }
}

/// A positioned parse or validation error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelError {
    pub position: Position,
    pub code: &'static str,
    pub message: String,
}

impl ModelError {
    fn new(position: Position, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            position,
            code,
            message: message.into(),
        }
    }

    pub fn to_finding(&self) -> Finding {
        Finding::error(self.code, Subject::Model, self.message.clone()).at(Some(self.position))
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error[{}] {}", self.position, self.code, self.message)
    }
}

impl std::error::Error for ModelError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Minus,
    Arrow,
    FatArrow,
    Comma,
    LBrace,
    RBrace,
    Colon,
    LBrack,
    RBrack,
    Slash,
    /// Raw CTL text following the colon of a `spec` statement.
    Text(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::FatArrow => f.write_str("'=>'"),
            Tok::Comma => f.write_str("','"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Colon => f.write_str("':'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Text(_) => f.write_str("formula text"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Position,
}

const KEYWORDS: &[&str] = &[
    "model", "behavior", "approach", "map", "exempt", "spec", "initial", "final", "state",
];

fn lex(text: &str) -> Result<Vec<Token>, ModelError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    // line of the most recent `spec` keyword still waiting for its colon
    let mut spec_line: Option<usize> = None;
    while i < chars.len() {
        let c = chars[i];
        let pos = Position::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            if word == "spec" {
                spec_line = Some(line);
            }
            out.push(Token {
                tok: Tok::Ident(word),
                pos,
            });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, width) = match (c, two.as_str()) {
            (_, "->") => (Tok::Arrow, 2),
            (_, "=>") => (Tok::FatArrow, 2),
            ('-', _) => (Tok::Minus, 1),
            (',', _) => (Tok::Comma, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (':', _) => (Tok::Colon, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('/', _) => (Tok::Slash, 1),
            (other, _) if other.is_ascii_digit() => {
                return Err(ModelError::new(pos, "syntax", "identifiers must not start with a digit"))
            }
            (other, _) => {
                return Err(ModelError::new(pos, "syntax", format!("unexpected character {other:?}")))
            }
        };
        i += width;
        col += width;
        out.push(Token { tok: tok.clone(), pos });
        if tok == Tok::Colon && spec_line == Some(line) {
            spec_line = None;
            // rest of the line, up to a comment, is CTL text
            let start = i;
            while i < chars.len() && chars[i] != '\n' && chars[i] != '#' {
                i += 1;
            }
            let raw: String = chars[start..i].iter().collect();
            let lead = raw.len() - raw.trim_start().len();
            let text_pos = Position::new(line, col + raw[..lead].chars().count());
            col += i - start;
            out.push(Token {
                tok: Tok::Text(raw.trim().to_string()),
                pos: text_pos,
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Position::new(line, col),
    });
    Ok(out)
}

struct RawEdge {
    transition: Transition,
    annotation: Annotation,
    pos: Position,
}

struct RawBehavior {
    pos: Position,
    initial: Option<(StateId, Position)>,
    finals: Vec<(StateId, Position)>,
    states: Vec<(StateId, Position)>,
    edges: Vec<RawEdge>,
}

struct RawSpec {
    name: String,
    target: Role,
    expected: Expectation,
    text: String,
    pos: Position,
    text_pos: Position,
}

#[derive(Default)]
struct RawDocument {
    name: Option<String>,
    behaviors: BTreeMap<Role, RawBehavior>,
    approaches: Vec<(Approach, Role, StateId, Position)>,
    maps: Vec<(StateId, Vec<Path>, Position)>,
    exempt: Vec<(StateId, Position)>,
    specs: Vec<RawSpec>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ModelError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ModelError {
        let t = self.peek();
        ModelError::new(t.pos, "syntax", format!("expected {expected}, found {}", t.tok))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Position> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == word)
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Position)> {
        match &self.peek().tok {
            Tok::Ident(w) => {
                let w = w.clone();
                Ok((w, self.bump().pos))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn name(&mut self, what: &str) -> PResult<(StateId, Position)> {
        let t = self.peek().clone();
        if let Tok::Ident(w) = &t.tok {
            if KEYWORDS.contains(&w.as_str()) {
                return Err(ModelError::new(t.pos, "syntax", format!("expected {what}, found keyword '{w}'")));
            }
        }
        let (w, pos) = self.ident(what)?;
        Ok((StateId::new(w).expect("lexer yields identifiers"), pos))
    }

    fn label(&mut self) -> PResult<Label> {
        let (w, _) = self.ident("transition label")?;
        Ok(Label::new(w).expect("lexer yields identifiers"))
    }

    fn role(&mut self) -> PResult<(Role, Position)> {
        let (w, pos) = self.ident("'preventive' or 'control'")?;
        w.parse::<Role>()
            .map(|r| (r, pos))
            .map_err(|m| ModelError::new(pos, "syntax", m))
    }

    fn approach(&mut self) -> PResult<(Approach, Position)> {
        let (w, pos) = self.ident("approach name")?;
        w.parse::<Approach>()
            .map(|a| (a, pos))
            .map_err(|e| ModelError::new(pos, "unknown-approach", e.to_string()))
    }

    /// An identifier list that stops before an edge (`ID -`), a section
    /// head (`ID :`), a keyword, or punctuation.
    fn name_list(&mut self) -> PResult<Vec<(StateId, Position)>> {
        let mut out = Vec::new();
        while let Tok::Ident(w) = &self.peek().tok {
            if KEYWORDS.contains(&w.as_str())
                || matches!(self.peek_at(1), Tok::Minus | Tok::Colon)
            {
                break;
            }
            out.push(self.name("state name")?);
        }
        Ok(out)
    }

    fn document(&mut self) -> PResult<RawDocument> {
        let mut doc = RawDocument::default();
        loop {
            let t = self.peek().clone();
            let Tok::Ident(word) = &t.tok else {
                if t.tok == Tok::Eof {
                    return Ok(doc);
                }
                return Err(self.unexpected("a statement"));
            };
            match word.as_str() {
                "model" => {
                    self.bump();
                    let (name, _) = self.ident("model name")?;
                    doc.name = Some(name);
                }
                "behavior" => {
                    self.bump();
                    let (role, _) = self.role()?;
                    let b = self.behavior_block(t.pos)?;
                    if doc.behaviors.insert(role, b).is_some() {
                        return Err(ModelError::new(
                            t.pos,
                            "duplicate-behavior",
                            format!("{role} behavior declared twice"),
                        ));
                    }
                }
                "approach" => {
                    self.bump();
                    let (approach, _) = self.approach()?;
                    self.expect(Tok::LBrace)?;
                    while self.peek().tok != Tok::RBrace {
                        let (role, _) = self.role()?;
                        self.expect(Tok::Colon)?;
                        for (s, pos) in self.name_list()? {
                            doc.approaches.push((approach, role, s, pos));
                        }
                    }
                    self.bump();
                }
                "map" => {
                    self.bump();
                    let (control, pos) = self.name("control state")?;
                    self.expect(Tok::FatArrow)?;
                    let mut paths = vec![self.path()?];
                    while self.peek().tok == Tok::Comma {
                        self.bump();
                        paths.push(self.path()?);
                    }
                    doc.maps.push((control, paths, pos));
                }
                "exempt" => {
                    self.bump();
                    doc.exempt.push(self.name("control state")?);
                }
                "spec" => {
                    self.bump();
                    let (name, _) = self.ident("property name")?;
                    if !self.is_keyword("on") {
                        return Err(self.unexpected("'on'"));
                    }
                    self.bump();
                    let (target, _) = self.role()?;
                    let mut expected = Expectation::Unspecified;
                    if self.is_keyword("expect") {
                        self.bump();
                        let (w, pos) = self.ident("'holds' or 'fails'")?;
                        expected = match w.as_str() {
                            "holds" => Expectation::Holds,
                            "fails" => Expectation::Fails,
                            _ => {
                                return Err(ModelError::new(
                                    pos,
                                    "syntax",
                                    format!("expected 'holds' or 'fails', found '{w}'"),
                                ))
                            }
                        };
                    }
                    self.expect(Tok::Colon)?;
                    let text_tok = self.bump();
                    let Tok::Text(text) = text_tok.tok else {
                        return Err(ModelError::new(text_tok.pos, "syntax", "expected formula text"));
                    };
                    doc.specs.push(RawSpec {
                        name,
                        target,
                        expected,
                        text,
                        pos: t.pos,
                        text_pos: text_tok.pos,
                    });
                }
                _ => return Err(self.unexpected("a statement")),
            }
        }
    }

    fn behavior_block(&mut self, pos: Position) -> PResult<RawBehavior> {
        self.expect(Tok::LBrace)?;
        let mut b = RawBehavior {
            pos,
            initial: None,
            finals: Vec::new(),
            states: Vec::new(),
            edges: Vec::new(),
        };
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::RBrace => {
                    self.bump();
                    return Ok(b);
                }
                Tok::Ident(w) if w == "initial" => {
                    self.bump();
                    let init = self.name("initial state")?;
                    if b.initial.is_some() {
                        return Err(ModelError::new(t.pos, "duplicate-initial", "initial state declared twice"));
                    }
                    b.initial = Some(init);
                }
                Tok::Ident(w) if w == "final" || w == "state" => {
                    let is_final = w == "final";
                    self.bump();
                    let names = self.name_list()?;
                    if names.is_empty() {
                        return Err(self.unexpected("state name"));
                    }
                    if is_final {
                        b.finals.extend(names);
                    } else {
                        b.states.extend(names);
                    }
                }
                Tok::Ident(_) => b.edges.push(self.edge()?),
                _ => return Err(self.unexpected("'initial', 'final', 'state', an edge or '}'")),
            }
        }
    }

    fn edge(&mut self) -> PResult<RawEdge> {
        let (source, pos) = self.name("source state")?;
        self.expect(Tok::Minus)?;
        let label = self.label()?;
        self.expect(Tok::Arrow)?;
        let (target, _) = self.name("target state")?;
        let mut annotation = Annotation::default();
        if self.peek().tok == Tok::LBrack {
            self.bump();
            let (event, _) = self.ident("event name")?;
            annotation.event = Some(event);
            self.expect(Tok::RBrack)?;
        }
        if self.peek().tok == Tok::Slash {
            self.bump();
            annotation.action = Some(self.approach()?.0);
        }
        Ok(RawEdge {
            transition: Transition::new(source, label, target),
            annotation,
            pos,
        })
    }

    fn path(&mut self) -> PResult<Path> {
        let (first, _) = self.name("state name")?;
        let mut states = vec![first];
        let mut labels = Vec::new();
        while self.peek().tok == Tok::Minus {
            self.bump();
            labels.push(self.label()?);
            self.expect(Tok::Arrow)?;
            states.push(self.name("state name")?.0);
        }
        Ok(Path::new(states, labels).expect("one label per step"))
    }
}

fn build_behavior(
    role: Role,
    raw: &RawBehavior,
    source: &mut SourceMap,
    errors: &mut Vec<ModelError>,
) -> Option<AnnotatedBehavior> {
    source.record(Subject::Behavior(role), raw.pos);
    let mut states = Vec::new();
    for (s, pos) in raw.initial.iter().chain(&raw.finals).chain(&raw.states) {
        source.record(Subject::State(role, s.clone()), *pos);
        states.push(s.clone());
    }
    for e in &raw.edges {
        source.record(Subject::Transition(role, e.transition.clone()), e.pos);
    }
    let Some((initial, _)) = raw.initial.clone() else {
        if states.is_empty() {
            errors.push(ModelError::new(raw.pos, "empty-state-set", format!("{role} behavior has no states")));
        } else {
            errors.push(ModelError::new(raw.pos, "missing-initial", format!("{role} behavior has no initial state")));
        }
        return None;
    };
    let labels: Vec<Label> = raw.edges.iter().map(|e| e.transition.label.clone()).collect();
    let base = Behavior::build(
        states,
        initial,
        labels,
        raw.edges.iter().map(|e| e.transition.clone()),
        raw.finals.iter().map(|(s, _)| s.clone()),
    );
    let edge_pos = |t: &Transition, nth: usize| {
        raw.edges
            .iter()
            .filter(|e| &e.transition == t)
            .nth(nth)
            .map(|e| e.pos)
            .unwrap_or(raw.pos)
    };
    let base = match base {
        Ok(b) => b,
        Err(errs) => {
            for e in errs {
                let (pos, code) = match &e {
                    BehaviorError::EmptyStateSet => (raw.pos, "empty-state-set"),
                    BehaviorError::BadInitial(_) => (raw.pos, "bad-initial"),
                    BehaviorError::UnknownFinal(_) => (raw.pos, "unknown-final"),
                    BehaviorError::UnknownState { transition, .. } => (edge_pos(transition, 0), "unknown-state"),
                    BehaviorError::UnknownLabel { transition, .. } => (edge_pos(transition, 0), "unknown-label"),
                    BehaviorError::DuplicateTransition(t) => (edge_pos(t, 1), "duplicate-transition"),
                };
                errors.push(ModelError::new(pos, code, format!("{role} behavior: {e}")));
            }
            return None;
        }
    };
    let events: BTreeSet<String> = raw.edges.iter().filter_map(|e| e.annotation.event.clone()).collect();
    let annotations = raw.edges.iter().map(|e| (e.transition.clone(), e.annotation.clone()));
    match AnnotatedBehavior::new(base, events, annotations) {
        Ok(b) => Some(b),
        Err(errs) => {
            for e in errs {
                let pos = match &e {
                    AnnotationError::UnknownTransition(t) | AnnotationError::UnknownEvent { transition: t, .. } => {
                        edge_pos(t, 0)
                    }
                    AnnotationError::BadEventName(_) => raw.pos,
                };
                errors.push(ModelError::new(pos, "bad-annotation", e.to_string()));
            }
            None
        }
    }
}

/// Parses and fully validates a model document.
pub fn parse_model(text: &str) -> Result<ModelDocument, Vec<ModelError>> {
    let toks = lex(text).map_err(|e| vec![e])?;
    let raw = Parser { toks, pos: 0 }.document().map_err(|e| vec![e])?;
    let end = Position::new(text.lines().count().max(1), 1);

    let mut errors = Vec::new();
    let mut source = SourceMap::default();
    source.record(Subject::Model, Position::new(1, 1));

    let mut behaviors = BTreeMap::new();
    for role in [Role::Preventive, Role::Control] {
        match raw.behaviors.get(&role) {
            Some(rb) => {
                if let Some(b) = build_behavior(role, rb, &mut source, &mut errors) {
                    behaviors.insert(role, b);
                }
            }
            None => errors.push(ModelError::new(end, "missing-behavior", format!("no {role} behavior block"))),
        }
    }

    let mut mapping = MappingProcess::new();
    for (c, paths, pos) in &raw.maps {
        source.record(Subject::MappingEntry(c.clone()), *pos);
        mapping.map(c.clone(), paths.iter().cloned());
    }
    for (c, pos) in &raw.exempt {
        source.record(Subject::Exemption(c.clone()), *pos);
        mapping.exempt(c.clone());
    }
    let mut approaches = ApproachPartition::new();
    for (a, role, s, pos) in &raw.approaches {
        source.record(
            Subject::ApproachMember {
                approach: *a,
                role: *role,
                state: s.clone(),
            },
            *pos,
        );
        approaches.add(*a, *role, s.clone());
    }

    let mut properties = Vec::new();
    let mut names = BTreeSet::new();
    for spec in &raw.specs {
        source.record(Subject::Property(spec.name.clone()), spec.pos);
        if !names.insert(spec.name.clone()) {
            errors.push(ModelError::new(
                spec.pos,
                "duplicate-property",
                format!("property {} declared twice", spec.name),
            ));
            continue;
        }
        let formula = match parse_ctl(&spec.text) {
            Ok(f) => f,
            Err(e) => {
                // formula text sits on a single line
                let pos = Position::new(spec.text_pos.line, spec.text_pos.column + e.column - 1);
                errors.push(ModelError::new(pos, "ctl-syntax", format!("{} (expected {})", e.message, e.expected.join(", "))));
                continue;
            }
        };
        if let Some(b) = behaviors.get(&spec.target) {
            for atom in formula.atoms() {
                if let AtomicProposition::At(s) = atom {
                    if !b.base().contains_state(s) {
                        let offset = spec.text.find(&format!("({s}")).map(|o| o + 1).unwrap_or(0);
                        let pos = Position::new(spec.text_pos.line, spec.text_pos.column + offset);
                        errors.push(ModelError::new(
                            pos,
                            "unknown-atom",
                            format!("property {}: {atom} does not name a {} state", spec.name, spec.target),
                        ));
                    }
                }
            }
        }
        properties.push(Property {
            name: spec.name.clone(),
            formula,
            target: spec.target,
            expected: spec.expected,
        });
    }

    let (Some(preventive), Some(control)) = (behaviors.remove(&Role::Preventive), behaviors.remove(&Role::Control))
    else {
        return Err(errors);
    };
    let name = raw.name.clone().unwrap_or_else(|| "model".to_string());
    let coupled = match CoupledModel::build(preventive, control, mapping, approaches, name) {
        Ok(m) => Some(m),
        Err(errs) => {
            for e in errs {
                let pos = source.locate(&e.subject()).unwrap_or(end);
                errors.push(ModelError::new(pos, e.code(), e.to_string()));
            }
            None
        }
    };
    match coupled {
        Some(coupled) if errors.is_empty() => Ok(ModelDocument {
            coupled,
            properties,
            source,
        }),
        _ => {
            errors.sort_by_key(|e| e.position);
            Err(errors)
        }
    }
}

/// The bundled antivirus model.
pub fn bundled_antivirus() -> ModelDocument {
    parse_model(ANTIVIRUS_MODEL).expect("bundled model is valid")
}

fn render_behavior(out: &mut String, role: Role, b: &AnnotatedBehavior) {
    let base = b.base();
    let _ = writeln!(out, "behavior {role} {{");
    let _ = writeln!(out, "  initial {}", base.initial());
    if !base.finals().is_empty() {
        let finals: Vec<&str> = base.finals().iter().map(StateId::as_str).collect();
        let _ = writeln!(out, "  final {}", finals.join(" "));
    }
    for s in base.states() {
        if s != base.initial() && !base.finals().contains(s) {
            let _ = writeln!(out, "  state {s}");
        }
    }
    for t in base.transitions() {
        let _ = write!(out, "  {t}");
        if let Some(a) = b.annotation(t) {
            if let Some(e) = &a.event {
                let _ = write!(out, " [{e}]");
            }
            if let Some(act) = a.action {
                let _ = write!(out, " /{act}");
            }
        }
        out.push('\n');
    }
    out.push_str("}\n");
}

/// Canonical text form: components sorted by name, properties in document
/// order. `parse_model(&render_model(d))` is structurally equal to `d`.
pub fn render_model(doc: &ModelDocument) -> String {
    let m = &doc.coupled;
    let mut out = String::new();
    let _ = writeln!(out, "model {}", m.name());
    for role in [Role::Preventive, Role::Control] {
        out.push('\n');
        render_behavior(&mut out, role, m.behavior(role));
    }
    for a in Approach::ALL {
        let entry = m.approaches().states(a);
        if entry.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\napproach {a} {{");
        for role in [Role::Control, Role::Preventive] {
            let names: Vec<&str> = entry.of(role).iter().map(StateId::as_str).collect();
            let _ = writeln!(out, "  {role}: {}", names.join(" "));
        }
        out.push_str("}\n");
    }
    if !m.mapping().entries().is_empty() || !m.mapping().exemptions().is_empty() {
        out.push('\n');
    }
    for (c, paths) in m.mapping().entries() {
        let rendered: Vec<String> = paths.iter().map(Path::to_string).collect();
        let _ = writeln!(out, "map {c} => {}", rendered.join(", "));
    }
    for c in m.mapping().exemptions() {
        let _ = writeln!(out, "exempt {c}");
    }
    if !doc.properties.is_empty() {
        out.push('\n');
    }
    for p in &doc.properties {
        let expect = match p.expected {
            Expectation::Holds => " expect holds",
            Expectation::Fails => " expect fails",
            Expectation::Unspecified => "",
        };
        let _ = writeln!(out, "spec {} on {}{expect}: {}", p.name, p.target, p.formula);
    }
    out
}
