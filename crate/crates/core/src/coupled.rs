//! Coupled preventive/control behaviors, the mapping process between them,
//! the four-approach partition, and the cross-behavior consistency checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lts::{is_identifier, Behavior, Path, StateId, Transition};
use crate::report::{CheckReport, Finding, Subject};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Approach {
    Protection,
    Detection,
    Identification,
    Removal,
}

impl Approach {
    pub const ALL: [Approach; 4] = [
        Approach::Protection,
        Approach::Detection,
        Approach::Identification,
        Approach::Removal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Approach::Protection => "Protection",
            Approach::Detection => "Detection",
            Approach::Identification => "Identification",
            Approach::Removal => "Removal",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown approach {0:?}; expected Protection, Detection, Identification or Removal")]
pub struct UnknownApproach(pub String);

impl FromStr for Approach {
    type Err = UnknownApproach;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Approach::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownApproach(s.to_string()))
    }
}

/// Which of the two coupled behaviors something belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Preventive,
    Control,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Preventive => "preventive",
            Role::Control => "control",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preventive" => Ok(Role::Preventive),
            "control" => Ok(Role::Control),
            other => Err(format!("unknown behavior {other:?}; expected preventive or control")),
        }
    }
}

/// The `s[e]/a` annotation of a transition: triggering event and the
/// approach it performs. Either part may be absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Annotation {
    pub event: Option<String>,
    pub action: Option<Approach>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("annotated transition {0} is not part of the behavior")]
    UnknownTransition(Transition),
    #[error("event {event:?} on {transition} is not a declared event")]
    UnknownEvent { event: String, transition: Transition },
    #[error("invalid event name {0:?}")]
    BadEventName(String),
}

/// A behavior whose transitions may carry event/approach annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedBehavior {
    base: Behavior,
    events: BTreeSet<String>,
    annotations: BTreeMap<Transition, Annotation>,
}

pub type PreventiveBehavior = AnnotatedBehavior;
pub type ControlBehavior = AnnotatedBehavior;

impl AnnotatedBehavior {
    pub fn new(
        base: Behavior,
        events: impl IntoIterator<Item = String>,
        annotations: impl IntoIterator<Item = (Transition, Annotation)>,
    ) -> Result<Self, Vec<AnnotationError>> {
        let events: BTreeSet<String> = events.into_iter().collect();
        let mut errors: Vec<AnnotationError> = events
            .iter()
            .filter(|e| !is_identifier(e))
            .map(|e| AnnotationError::BadEventName(e.clone()))
            .collect();
        let mut map = BTreeMap::new();
        for (t, a) in annotations {
            if !base.transitions().contains(&t) {
                errors.push(AnnotationError::UnknownTransition(t.clone()));
            }
            if let Some(e) = &a.event {
                if !events.contains(e) {
                    errors.push(AnnotationError::UnknownEvent {
                        event: e.clone(),
                        transition: t.clone(),
                    });
                }
            }
            if a != Annotation::default() {
                map.insert(t, a);
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(Self {
            base,
            events,
            annotations: map,
        })
    }

    /// An unannotated behavior with no events.
    pub fn plain(base: Behavior) -> Self {
        Self {
            base,
            events: BTreeSet::new(),
            annotations: BTreeMap::new(),
        }
    }

    pub fn base(&self) -> &Behavior {
        &self.base
    }

    pub fn events(&self) -> &BTreeSet<String> {
        &self.events
    }

    pub fn annotations(&self) -> &BTreeMap<Transition, Annotation> {
        &self.annotations
    }

    pub fn annotation(&self, t: &Transition) -> Option<&Annotation> {
        self.annotations.get(t)
    }
}

/// The mapping process: each control state maps to a set of preventive
/// paths, or is explicitly exempt.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingProcess {
    entries: BTreeMap<StateId, BTreeSet<Path>>,
    exempt: BTreeSet<StateId>,
}

impl MappingProcess {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn map(&mut self, control: StateId, paths: impl IntoIterator<Item = Path>) -> &mut Self {
        self.entries.entry(control).or_default().extend(paths);
        self
    }

    pub fn exempt(&mut self, control: StateId) -> &mut Self {
        self.exempt.insert(control);
        self
    }

    pub fn entries(&self) -> &BTreeMap<StateId, BTreeSet<Path>> {
        &self.entries
    }

    pub fn exemptions(&self) -> &BTreeSet<StateId> {
        &self.exempt
    }

    pub fn paths_for(&self, control: &StateId) -> Option<&BTreeSet<Path>> {
        self.entries.get(control)
    }

    pub fn is_exempt(&self, control: &StateId) -> bool {
        self.exempt.contains(control)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApproachStates {
    pub control: BTreeSet<StateId>,
    pub preventive: BTreeSet<StateId>,
}

impl ApproachStates {
    pub fn of(&self, role: Role) -> &BTreeSet<StateId> {
        match role {
            Role::Control => &self.control,
            Role::Preventive => &self.preventive,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.control.is_empty() && self.preventive.is_empty()
    }
}

/// The four approaches, each covering some control and preventive states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApproachPartition {
    entries: BTreeMap<Approach, ApproachStates>,
}

impl ApproachPartition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, approach: Approach, role: Role, state: StateId) -> &mut Self {
        let entry = self.entries.entry(approach).or_default();
        match role {
            Role::Control => entry.control.insert(state),
            Role::Preventive => entry.preventive.insert(state),
        };
        self
    }

    pub fn states(&self, approach: Approach) -> ApproachStates {
        self.entries.get(&approach).cloned().unwrap_or_default()
    }

    pub fn members(&self, approach: Approach, role: Role) -> BTreeSet<StateId> {
        self.entries
            .get(&approach)
            .map(|e| e.of(role).clone())
            .unwrap_or_default()
    }

    /// The approaches covering `state` in `role`, in approach order.
    pub fn approaches_of(&self, role: Role, state: &StateId) -> Vec<Approach> {
        self.entries
            .iter()
            .filter(|(_, e)| e.of(role).contains(state))
            .map(|(a, _)| *a)
            .collect()
    }

    pub fn approach_of(&self, role: Role, state: &StateId) -> Option<Approach> {
        self.approaches_of(role, state).into_iter().next()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoupledError {
    #[error("mapping for {control} names {state}, which is not a preventive state")]
    CrossBehaviorReference { control: StateId, state: StateId },
    #[error("mapping names {0}, which is not a control state")]
    UnknownControlState(StateId),
    #[error("control state {0} is neither mapped nor exempt")]
    PartialMapping(StateId),
    #[error("control state {0} is both mapped and exempt")]
    MappedAndExempt(StateId),
    #[error("{role} state {state} belongs to both {first} and {second}")]
    OverlappingApproach {
        role: Role,
        state: StateId,
        first: Approach,
        second: Approach,
    },
    #[error("approach {approach} names {state}, which is not a {role} state")]
    UnknownApproachState {
        approach: Approach,
        role: Role,
        state: StateId,
    },
}

impl CoupledError {
    pub fn code(&self) -> &'static str {
        match self {
            CoupledError::CrossBehaviorReference { .. } => "cross-behavior-reference",
            CoupledError::UnknownControlState(_) => "unknown-control-state",
            CoupledError::PartialMapping(_) => "partial-mapping",
            CoupledError::MappedAndExempt(_) => "mapped-and-exempt",
            CoupledError::OverlappingApproach { .. } => "overlapping-approach",
            CoupledError::UnknownApproachState { .. } => "unknown-approach-state",
        }
    }

    pub fn subject(&self) -> Subject {
        match self {
            CoupledError::CrossBehaviorReference { control, .. } => Subject::MappingEntry(control.clone()),
            CoupledError::UnknownControlState(s) => Subject::MappingEntry(s.clone()),
            CoupledError::PartialMapping(s) => Subject::State(Role::Control, s.clone()),
            CoupledError::MappedAndExempt(s) => Subject::Exemption(s.clone()),
            CoupledError::OverlappingApproach {
                role,
                state,
                second,
                ..
            } => Subject::ApproachMember {
                approach: *second,
                role: *role,
                state: state.clone(),
            },
            CoupledError::UnknownApproachState {
                approach,
                role,
                state,
            } => Subject::ApproachMember {
                approach: *approach,
                role: *role,
                state: state.clone(),
            },
        }
    }
}

/// A preventive behavior and a control behavior coupled by a mapping process
/// and an approach partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledModel {
    name: String,
    preventive: PreventiveBehavior,
    control: ControlBehavior,
    mapping: MappingProcess,
    approaches: ApproachPartition,
}

impl CoupledModel {
    /// Resolves every state named by the mapping and the approaches against
    /// the right behavior, and checks mapping totality and partition
    /// disjointness. Path validity is left to [`check_mapping`].
    pub fn build(
        preventive: PreventiveBehavior,
        control: ControlBehavior,
        mapping: MappingProcess,
        approaches: ApproachPartition,
        name: impl Into<String>,
    ) -> Result<Self, Vec<CoupledError>> {
        let mut errors = Vec::new();
        let pstates = preventive.base().states();
        let cstates = control.base().states();

        for (c, paths) in &mapping.entries {
            if !cstates.contains(c) {
                errors.push(CoupledError::UnknownControlState(c.clone()));
            }
            let mut reported = BTreeSet::new();
            for s in paths.iter().flat_map(|p| p.states()) {
                if !pstates.contains(s) && reported.insert(s.clone()) {
                    errors.push(CoupledError::CrossBehaviorReference {
                        control: c.clone(),
                        state: s.clone(),
                    });
                }
            }
            if mapping.exempt.contains(c) {
                errors.push(CoupledError::MappedAndExempt(c.clone()));
            }
        }
        for c in &mapping.exempt {
            if !cstates.contains(c) {
                errors.push(CoupledError::UnknownControlState(c.clone()));
            }
        }
        for c in cstates {
            if !mapping.entries.contains_key(c) && !mapping.exempt.contains(c) {
                errors.push(CoupledError::PartialMapping(c.clone()));
            }
        }

        for role in [Role::Control, Role::Preventive] {
            let known = match role {
                Role::Control => cstates,
                Role::Preventive => pstates,
            };
            let mut owner: BTreeMap<&StateId, Approach> = BTreeMap::new();
            for (approach, entry) in &approaches.entries {
                for s in entry.of(role) {
                    if !known.contains(s) {
                        errors.push(CoupledError::UnknownApproachState {
                            approach: *approach,
                            role,
                            state: s.clone(),
                        });
                    }
                    if let Some(first) = owner.insert(s, *approach) {
                        errors.push(CoupledError::OverlappingApproach {
                            role,
                            state: s.clone(),
                            first,
                            second: *approach,
                        });
                    }
                }
            }
        }

        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(Self {
            name: name.into(),
            preventive,
            control,
            mapping,
            approaches,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn preventive(&self) -> &PreventiveBehavior {
        &self.preventive
    }

    pub fn control(&self) -> &ControlBehavior {
        &self.control
    }

    pub fn behavior(&self, role: Role) -> &AnnotatedBehavior {
        match role {
            Role::Preventive => &self.preventive,
            Role::Control => &self.control,
        }
    }

    pub fn mapping(&self) -> &MappingProcess {
        &self.mapping
    }

    pub fn approaches(&self) -> &ApproachPartition {
        &self.approaches
    }

    /// Decomposes the model so a caller can edit one component and rebuild.
    pub fn into_parts(
        self,
    ) -> (
        PreventiveBehavior,
        ControlBehavior,
        MappingProcess,
        ApproachPartition,
        String,
    ) {
        (
            self.preventive,
            self.control,
            self.mapping,
            self.approaches,
            self.name,
        )
    }
}

/// Re-checks every mapped path against the preventive transitions.
pub fn check_mapping(m: &CoupledModel) -> CheckReport {
    let mut report = CheckReport::new("mapping");
    let preventive = m.preventive().base();
    let control = m.control().base();

    for c in control.states() {
        if m.mapping().is_exempt(c) {
            report.push(Finding::info(
                "exempt",
                Subject::Exemption(c.clone()),
                format!("{c} is exempt from mapping"),
            ));
            continue;
        }
        let Some(paths) = m.mapping().paths_for(c) else {
            report.push(Finding::error(
                "unmapped",
                Subject::State(Role::Control, c.clone()),
                format!("{c} is neither mapped nor exempt"),
            ));
            continue;
        };
        let mut invalid = 0;
        for p in paths {
            if let Some(step) = preventive.first_invalid_step(p) {
                invalid += 1;
                report.push(Finding::error(
                    "invalid-path",
                    Subject::MappingEntry(c.clone()),
                    format!("path {p} is not a preventive path; first violating triple {step}"),
                ));
            }
        }
        report.push(Finding::info(
            "mapped",
            Subject::MappingEntry(c.clone()),
            format!("{c} maps to {} path(s), {invalid} invalid", paths.len()),
        ));
    }

    if m.mapping().entries().is_empty() {
        report.push(Finding::warning(
            "fully-exempt",
            Subject::Model,
            "fully exempt mapping",
        ));
    }

    let ci = control.initial();
    if let Some(paths) = m.mapping().paths_for(ci) {
        let pi = preventive.initial();
        for p in paths.iter().filter(|p| p.first() != pi) {
            report.push(Finding::warning(
                "initial-mismatch",
                Subject::MappingEntry(ci.clone()),
                format!("control initial state {ci} maps to {p}, which does not start at preventive initial state {pi}"),
            ));
        }
    }
    report
}

/// `(approach, control state, preventive state)` triples where a state on a
/// mapped path lies outside the control state's approach.
pub fn alignment_violations(m: &CoupledModel) -> Vec<(Approach, StateId, StateId)> {
    let mut out = Vec::new();
    for approach in Approach::ALL {
        let entry = m.approaches().states(approach);
        for c in &entry.control {
            let Some(paths) = m.mapping().paths_for(c) else {
                continue;
            };
            let visited: BTreeSet<&StateId> = paths.iter().flat_map(|p| p.states()).collect();
            for p in visited {
                if !entry.preventive.contains(p) {
                    out.push((approach, c.clone(), p.clone()));
                }
            }
        }
    }
    out
}

pub fn check_approach_alignment(m: &CoupledModel) -> CheckReport {
    let mut report = CheckReport::new("approaches");
    for (approach, c, p) in alignment_violations(m) {
        report.push(Finding::error(
            "approach-violation",
            Subject::MappingEntry(c.clone()),
            format!("({c}, {p}): {c} is in {approach} but {p} is not a {approach} preventive state"),
        ));
    }
    for role in [Role::Control, Role::Preventive] {
        let uncovered: Vec<String> = m
            .behavior(role)
            .base()
            .states()
            .iter()
            .filter(|s| m.approaches().approach_of(role, s).is_none())
            .map(|s| s.to_string())
            .collect();
        if !uncovered.is_empty() {
            report.push(Finding::info(
                "uncovered",
                Subject::Behavior(role),
                format!("{role} states outside every approach: {}", uncovered.join(", ")),
            ));
        }
    }
    report
}

/// Simple control paths from the control initial state to each declared
/// final state.
pub fn control_runs(m: &CoupledModel) -> Vec<Path> {
    let control = m.control().base();
    let mut runs = Vec::new();
    for f in control.finals() {
        runs.extend(
            control
                .enumerate_simple_paths(control.initial(), f)
                .expect("initial and finals are control states"),
        );
    }
    runs
}

/// Fragment stitching along control runs: for each simple control run from
/// the initial state to a final state, the preventive fragments mapped to
/// its (non-exempt) states must chain, each fragment's first state reachable
/// from the previous fragment's last state. Consecutive identical fragments
/// are merged. With several paths per state, some choice must chain.
pub fn check_synchronization(m: &CoupledModel) -> CheckReport {
    let mut report = CheckReport::new("synchronization");
    let preventive = m.preventive().base();
    let control = m.control().base();

    if control.finals().is_empty() {
        report.push(Finding::info(
            "no-finals",
            Subject::Behavior(Role::Control),
            "control behavior declares no final states; nothing to stitch",
        ));
        return report;
    }

    let mut reach_cache: BTreeMap<StateId, BTreeSet<StateId>> = BTreeMap::new();
    let mut reaches = |from: &StateId, to: &StateId| -> bool {
        reach_cache
            .entry(from.clone())
            .or_insert_with(|| preventive.reachable_from(from))
            .contains(to)
    };

    let runs = control_runs(m);
    let mut failures = 0;
    for run in &runs {
        // Feasible fragment choices for the most recent mapped control state.
        let mut feasible: Option<(StateId, BTreeSet<&Path>)> = None;
        for c in run.states() {
            let Some(paths) = m.mapping().paths_for(c) else {
                continue;
            };
            if paths.is_empty() {
                continue;
            }
            let next: BTreeSet<&Path> = match &feasible {
                None => paths.iter().collect(),
                Some((_, prev)) => paths
                    .iter()
                    .filter(|p| prev.contains(p) || prev.iter().any(|q| reaches(q.last(), p.first())))
                    .collect(),
            };
            if next.is_empty() {
                let (prev_state, prev_paths) = feasible.as_ref().expect("non-empty only after first");
                let ends: BTreeSet<String> = prev_paths.iter().map(|q| q.last().to_string()).collect();
                let starts: BTreeSet<String> = paths.iter().map(|p| p.first().to_string()).collect();
                report.push(Finding::error(
                    "stitch-failure",
                    Subject::MappingEntry(c.clone()),
                    format!(
                        "control run {run}: no preventive walk from {{{}}} (end of {prev_state}) to {{{}}} (start of {c})",
                        ends.into_iter().collect::<Vec<_>>().join(", "),
                        starts.into_iter().collect::<Vec<_>>().join(", "),
                    ),
                ));
                failures += 1;
                break;
            }
            feasible = Some((c.clone(), next));
        }
    }
    report.push(Finding::info(
        "runs",
        Subject::Behavior(Role::Control),
        format!("{} control run(s) checked, {failures} failed", runs.len()),
    ));
    report
}
