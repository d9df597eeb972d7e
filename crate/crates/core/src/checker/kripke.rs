use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::coupled::{Approach, ApproachPartition, CoupledModel, Role};
use crate::lts::{Behavior, Label, Path, StateId, Transition};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomicProposition {
    /// The current state is the named state.
    At(StateId),
    /// The current state is covered by the approach.
    In(Approach),
}

impl fmt::Display for AtomicProposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicProposition::At(s) => write!(f, "at({s})"),
            AtomicProposition::In(a) => write!(f, "in({a})"),
        }
    }
}

/// Label attached to self-loops added during totalization.
pub const STUTTER_LABEL: &str = "stutter";
/// Label used for edges of structures built from a bare relation.
pub const STEP_LABEL: &str = "step";

/// A total transition relation over named states with atomic-proposition
/// labeling. States are indexed in name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    states: Vec<StateId>,
    index: BTreeMap<StateId, usize>,
    initial: usize,
    succ: Vec<Vec<usize>>,
    edge_labels: BTreeMap<(usize, usize), Label>,
    labeling: Vec<BTreeSet<AtomicProposition>>,
    totalized: BTreeSet<usize>,
}

impl KripkeStructure {
    /// Erases transition labels, adds a self-loop to every successor-free
    /// state, and labels each state with `at(s)` plus `in(A)` for the
    /// approach covering it in `role`.
    pub fn from_behavior(b: &Behavior, approaches: Option<(&ApproachPartition, Role)>) -> Self {
        let mut labels: BTreeMap<StateId, BTreeSet<AtomicProposition>> = BTreeMap::new();
        if let Some((partition, role)) = approaches {
            for s in b.states() {
                for a in partition.approaches_of(role, s) {
                    labels.entry(s.clone()).or_default().insert(AtomicProposition::In(a));
                }
            }
        }
        let edges = b
            .transitions()
            .iter()
            .map(|t: &Transition| (t.source.clone(), t.target.clone(), t.label.clone()));
        Self::assemble(b.states().iter().cloned(), b.initial().clone(), edges, labels)
    }

    pub fn from_model(m: &CoupledModel, role: Role) -> Self {
        Self::from_behavior(m.behavior(role).base(), Some((m.approaches(), role)))
    }

    /// Builds a structure from an unlabeled relation; states missing from
    /// `extra_labels` get only `at(s)`. Panics if the initial state or a
    /// relation endpoint is not in `states`.
    pub fn from_relation(
        states: impl IntoIterator<Item = StateId>,
        initial: StateId,
        relation: impl IntoIterator<Item = (StateId, StateId)>,
        extra_labels: BTreeMap<StateId, BTreeSet<AtomicProposition>>,
    ) -> Self {
        let step = Label::new(STEP_LABEL).expect("valid label");
        let edges = relation.into_iter().map(|(a, b)| (a, b, step.clone()));
        Self::assemble(states, initial, edges, extra_labels)
    }

    fn assemble(
        states: impl IntoIterator<Item = StateId>,
        initial: StateId,
        edges: impl IntoIterator<Item = (StateId, StateId, Label)>,
        mut extra_labels: BTreeMap<StateId, BTreeSet<AtomicProposition>>,
    ) -> Self {
        let states: Vec<StateId> = states.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index: BTreeMap<StateId, usize> =
            states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let initial = index[&initial];
        let mut succ_sets = vec![BTreeSet::new(); states.len()];
        let mut edge_labels = BTreeMap::new();
        for (a, b, label) in edges {
            let (i, j) = (index[&a], index[&b]);
            succ_sets[i].insert(j);
            // keep the smallest label for each state pair
            edge_labels.entry((i, j)).or_insert(label);
        }
        let mut totalized = BTreeSet::new();
        let stutter = Label::new(STUTTER_LABEL).expect("valid label");
        for (i, set) in succ_sets.iter_mut().enumerate() {
            if set.is_empty() {
                set.insert(i);
                totalized.insert(i);
                edge_labels.insert((i, i), stutter.clone());
            }
        }
        let labeling = states
            .iter()
            .map(|s| {
                let mut set = extra_labels.remove(s).unwrap_or_default();
                set.insert(AtomicProposition::At(s.clone()));
                set
            })
            .collect();
        Self {
            states,
            index,
            initial,
            succ: succ_sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            edge_labels,
            labeling,
            totalized,
        }
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> &StateId {
        &self.states[self.initial]
    }

    pub fn index_of(&self, s: &StateId) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub(crate) fn initial_index(&self) -> usize {
        self.initial
    }

    pub(crate) fn succ_indices(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub(crate) fn labeling_at(&self, i: usize) -> &BTreeSet<AtomicProposition> {
        &self.labeling[i]
    }

    pub fn successors(&self, s: &StateId) -> BTreeSet<StateId> {
        self.index_of(s)
            .map(|i| self.succ[i].iter().map(|&j| self.states[j].clone()).collect())
            .unwrap_or_default()
    }

    /// All `(source, target)` pairs in name order.
    pub fn relation(&self) -> impl Iterator<Item = (&StateId, &StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(move |(i, js)| js.iter().map(move |&j| (&self.states[i], &self.states[j])))
    }

    pub fn labeling(&self, s: &StateId) -> Option<&BTreeSet<AtomicProposition>> {
        self.index_of(s).map(|i| &self.labeling[i])
    }

    /// States that received a self-loop because they had no successor.
    pub fn totalized(&self) -> BTreeSet<StateId> {
        self.totalized.iter().map(|&i| self.states[i].clone()).collect()
    }

    pub fn is_total(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }

    /// The relation as a behavior with one retained label per edge; every
    /// witness path is valid in it.
    pub fn label_erased_behavior(&self) -> Behavior {
        let transitions = self.edge_labels.iter().map(|(&(i, j), l)| {
            Transition::new(self.states[i].clone(), l.clone(), self.states[j].clone())
        });
        Behavior::from_transitions(self.states.iter().cloned(), self.initial().clone(), transitions, [])
            .expect("structure is internally consistent")
    }

    /// Shortest path from the initial state to any state in `targets`.
    pub(crate) fn shortest_path_to(&self, targets: &[bool]) -> Option<Path> {
        let n = self.states.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        let mut hit = None;
        while let Some(i) = queue.pop_front() {
            if targets[i] {
                hit = Some(i);
                break;
            }
            for &j in &self.succ[i] {
                if !seen[j] {
                    seen[j] = true;
                    parent[j] = Some(i);
                    queue.push_back(j);
                }
            }
        }
        let mut chain = vec![hit?];
        while let Some(p) = parent[*chain.last().expect("non-empty")] {
            chain.push(p);
        }
        chain.reverse();
        let states = chain.iter().map(|&i| self.states[i].clone()).collect();
        let labels = chain
            .windows(2)
            .map(|w| self.edge_labels[&(w[0], w[1])].clone())
            .collect();
        Some(Path::new(states, labels).expect("well-shaped"))
    }
}
