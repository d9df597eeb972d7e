//! Labeled transition systems and paths over them.
//!
//! A [`Behavior`] is a finite set of states with a distinguished initial
//! state, a label alphabet and a set of labeled transition triples. All
//! collections are ordered by name so iteration, diagnostics and exports are
//! byte-stable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Lexical check shared by state, label and other identifiers: letters,
/// digits and underscore, not starting with a digit.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}: expected letters, digits or '_' not starting with a digit")]
pub struct NameError(pub String);

macro_rules! identifier_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, NameError> {
                let name = name.into();
                if is_identifier(&name) {
                    Ok(Self(name))
                } else {
                    Err(NameError(name))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::str::FromStr for $name {
            type Err = NameError;
            fn from_str(s: &str) -> Result<Self, NameError> {
                Self::new(s)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

identifier_newtype!(
    /// Name of a state, unique within one behavior.
    StateId
);
identifier_newtype!(
    /// Name of a transition label.
    Label
);

/// A labeled transition `(source, label, target)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: Label,
    pub target: StateId,
}

impl Transition {
    pub fn new(source: StateId, label: Label, target: StateId) -> Self {
        Self {
            source,
            label,
            target,
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.label, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error("behavior has no states")]
    EmptyStateSet,
    #[error("initial state {0} is not a declared state")]
    BadInitial(StateId),
    #[error("final state {0} is not a declared state")]
    UnknownFinal(StateId),
    #[error("unknown state {state} in transition {transition}")]
    UnknownState {
        state: StateId,
        transition: Transition,
    },
    #[error("unknown label {label} in transition {transition}")]
    UnknownLabel { label: Label, transition: Transition },
    #[error("duplicate transition {0}")]
    DuplicateTransition(Transition),
}

/// Errors from queries that name a state which must exist.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown state {0}")]
    UnknownState(StateId),
}

/// A validated labeled transition system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    states: BTreeSet<StateId>,
    initial: StateId,
    labels: BTreeSet<Label>,
    transitions: BTreeSet<Transition>,
    finals: BTreeSet<StateId>,
    successors: BTreeMap<StateId, BTreeSet<(Label, StateId)>>,
}

impl Behavior {
    /// Validates the components and builds a behavior, or returns every
    /// violation found.
    pub fn build(
        states: impl IntoIterator<Item = StateId>,
        initial: StateId,
        labels: impl IntoIterator<Item = Label>,
        transitions: impl IntoIterator<Item = Transition>,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self, Vec<BehaviorError>> {
        let states: BTreeSet<StateId> = states.into_iter().collect();
        let labels: BTreeSet<Label> = labels.into_iter().collect();
        let mut errors = Vec::new();

        if states.is_empty() {
            errors.push(BehaviorError::EmptyStateSet);
        } else if !states.contains(&initial) {
            errors.push(BehaviorError::BadInitial(initial.clone()));
        }

        let mut finals_set = BTreeSet::new();
        for f in finals {
            if !states.contains(&f) && !states.is_empty() {
                errors.push(BehaviorError::UnknownFinal(f.clone()));
            }
            finals_set.insert(f);
        }

        let mut set = BTreeSet::new();
        for t in transitions {
            let mut ok = true;
            for endpoint in [&t.source, &t.target] {
                if !states.contains(endpoint) {
                    ok = false;
                    errors.push(BehaviorError::UnknownState {
                        state: endpoint.clone(),
                        transition: t.clone(),
                    });
                }
            }
            if !labels.contains(&t.label) {
                ok = false;
                errors.push(BehaviorError::UnknownLabel {
                    label: t.label.clone(),
                    transition: t.clone(),
                });
            }
            if ok && set.contains(&t) {
                errors.push(BehaviorError::DuplicateTransition(t));
            } else if ok {
                set.insert(t);
            }
        }

        if !errors.is_empty() {
            return Err(errors);
        }

        let mut successors: BTreeMap<StateId, BTreeSet<(Label, StateId)>> = BTreeMap::new();
        for t in &set {
            successors
                .entry(t.source.clone())
                .or_default()
                .insert((t.label.clone(), t.target.clone()));
        }

        Ok(Self {
            states,
            initial,
            labels,
            transitions: set,
            finals: finals_set,
            successors,
        })
    }

    /// Like [`Behavior::build`] but derives the label set from the transitions.
    pub fn from_transitions(
        states: impl IntoIterator<Item = StateId>,
        initial: StateId,
        transitions: impl IntoIterator<Item = Transition>,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Self, Vec<BehaviorError>> {
        let transitions: Vec<Transition> = transitions.into_iter().collect();
        let labels: Vec<Label> = transitions.iter().map(|t| t.label.clone()).collect();
        Self::build(states, initial, labels, transitions, finals)
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn initial(&self) -> &StateId {
        &self.initial
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn contains_state(&self, s: &StateId) -> bool {
        self.states.contains(s)
    }

    pub fn contains_transition(&self, source: &StateId, label: &Label, target: &StateId) -> bool {
        self.successors
            .get(source)
            .is_some_and(|succ| succ.contains(&(label.clone(), target.clone())))
    }

    /// All `(label, target)` pairs leaving `s`.
    pub fn successors(&self, s: &StateId) -> Result<BTreeSet<(Label, StateId)>, QueryError> {
        if !self.states.contains(s) {
            return Err(QueryError::UnknownState(s.clone()));
        }
        Ok(self.successors.get(s).cloned().unwrap_or_default())
    }

    fn successor_pairs(&self, s: &StateId) -> impl Iterator<Item = &(Label, StateId)> {
        self.successors.get(s).into_iter().flatten()
    }

    /// Target states one step from `s`, without labels.
    pub fn next_states(&self, s: &StateId) -> BTreeSet<&StateId> {
        self.successor_pairs(s).map(|(_, t)| t).collect()
    }

    /// Whether every consecutive `(state, label, state)` triple of `path` is
    /// a transition of this behavior.
    pub fn is_valid_path(&self, path: &Path) -> bool {
        self.first_invalid_step(path).is_none()
    }

    /// The first step of `path` that is not a transition, as a triple, or the
    /// index-0 state wrapped as a self-triple when a degenerate path names an
    /// unknown state.
    pub fn first_invalid_step(&self, path: &Path) -> Option<InvalidStep> {
        if let Some(s) = path.states.iter().find(|s| !self.states.contains(*s)) {
            if path.labels.is_empty() {
                return Some(InvalidStep::UnknownState(s.clone()));
            }
        }
        for (m, label) in path.labels.iter().enumerate() {
            let source = &path.states[m];
            let target = &path.states[m + 1];
            if !self.contains_transition(source, label, target) {
                return Some(InvalidStep::MissingTransition(Transition::new(
                    source.clone(),
                    label.clone(),
                    target.clone(),
                )));
            }
        }
        None
    }

    /// All simple paths (no repeated state) from `from` to `to`, ordered by
    /// label sequence and then by state sequence.
    pub fn enumerate_simple_paths(
        &self,
        from: &StateId,
        to: &StateId,
    ) -> Result<Vec<Path>, QueryError> {
        for s in [from, to] {
            if !self.states.contains(s) {
                return Err(QueryError::UnknownState(s.clone()));
            }
        }
        let mut out = Vec::new();
        let mut states = vec![from.clone()];
        let mut labels = Vec::new();
        let mut on_path: BTreeSet<StateId> = BTreeSet::from([from.clone()]);
        self.dfs_simple(to, &mut states, &mut labels, &mut on_path, &mut out);
        out.sort_by(|a, b| (&a.labels, &a.states).cmp(&(&b.labels, &b.states)));
        Ok(out)
    }

    fn dfs_simple(
        &self,
        to: &StateId,
        states: &mut Vec<StateId>,
        labels: &mut Vec<Label>,
        on_path: &mut BTreeSet<StateId>,
        out: &mut Vec<Path>,
    ) {
        let current = states.last().expect("non-empty").clone();
        if &current == to {
            out.push(Path {
                states: states.clone(),
                labels: labels.clone(),
            });
            return;
        }
        for (label, next) in self.successor_pairs(&current) {
            if on_path.contains(next) {
                continue;
            }
            on_path.insert(next.clone());
            states.push(next.clone());
            labels.push(label.clone());
            self.dfs_simple(to, states, labels, on_path, out);
            labels.pop();
            states.pop();
            on_path.remove(next);
        }
    }

    /// States reachable from the initial state (including it).
    pub fn reachable_states(&self) -> BTreeSet<StateId> {
        self.reachable_from(&self.initial)
    }

    /// States reachable from `start` by zero or more transitions.
    pub fn reachable_from(&self, start: &StateId) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::new();
        if !self.states.contains(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(s) = queue.pop_front() {
            for (_, t) in self.successor_pairs(&s) {
                if seen.insert(t.clone()) {
                    queue.push_back(t.clone());
                }
            }
        }
        seen
    }

    /// Reachable, non-final states without outgoing transitions.
    pub fn find_deadlocks(&self) -> BTreeSet<StateId> {
        self.reachable_states()
            .into_iter()
            .filter(|s| !self.finals.contains(s) && !self.successors.contains_key(s))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidStep {
    UnknownState(StateId),
    MissingTransition(Transition),
}

impl fmt::Display for InvalidStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidStep::UnknownState(s) => write!(f, "unknown state {s}"),
            InvalidStep::MissingTransition(t) => write!(f, "({}, {}, {})", t.source, t.label, t.target),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("a path with {states} states needs {expected} labels, got {labels}", expected = .states.saturating_sub(1))]
pub struct PathShapeError {
    pub states: usize,
    pub labels: usize,
}

/// An alternating sequence of states and labels; a single state is a valid
/// degenerate path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    states: Vec<StateId>,
    labels: Vec<Label>,
}

impl Path {
    pub fn new(states: Vec<StateId>, labels: Vec<Label>) -> Result<Self, PathShapeError> {
        if states.is_empty() || labels.len() + 1 != states.len() {
            return Err(PathShapeError {
                states: states.len(),
                labels: labels.len(),
            });
        }
        Ok(Self { states, labels })
    }

    pub fn single(state: StateId) -> Self {
        Self {
            states: vec![state],
            labels: Vec::new(),
        }
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn first(&self) -> &StateId {
        &self.states[0]
    }

    pub fn last(&self) -> &StateId {
        self.states.last().expect("paths are non-empty")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<&StateId> = self.states.iter().collect();
        set.len() == self.states.len()
    }

    /// Consecutive `(source, label, target)` triples.
    pub fn steps(&self) -> impl Iterator<Item = (&StateId, &Label, &StateId)> {
        self.labels
            .iter()
            .enumerate()
            .map(|(m, l)| (&self.states[m], l, &self.states[m + 1]))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.states[0])?;
        for (m, label) in self.labels.iter().enumerate() {
            write!(f, " -{}-> {}", label, self.states[m + 1])?;
        }
        Ok(())
    }
}
