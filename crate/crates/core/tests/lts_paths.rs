mod common;

use std::collections::BTreeSet;

use avmc::coupled::Role;
use avmc::dsl::bundled_antivirus;
use avmc::lts::{Behavior, QueryError, Transition};
use common::*;
use proptest::prelude::*;

fn control() -> Behavior {
    bundled_antivirus().coupled.behavior(Role::Control).base().clone()
}

#[test]
fn bundled_path_to_done() {
    let c = control();
    let paths = c.enumerate_simple_paths(&sid("NotActivated"), &sid("Done")).unwrap();
    assert_eq!(paths.len(), 1);
    let names: Vec<&str> = paths[0].states().iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["NotActivated", "Activated", "Process", "Recognition", "Done"]);
}

#[test]
fn bundled_paths_to_end() {
    let c = control();
    let paths = c.enumerate_simple_paths(&sid("NotActivated"), &sid("End")).unwrap();
    assert_eq!(paths.len(), 2);
    // ordered by label sequence: `ignore` sorts before `remove`
    assert!(paths[0].states().contains(&sid("Aborted")));
    assert!(paths[1].states().contains(&sid("Done")));
    assert!(paths.iter().all(|p| p.is_simple() && c.is_valid_path(p)));
}

#[test]
fn bundled_successors_and_reachability() {
    let c = control();
    let succ = c.successors(&sid("Recognition")).unwrap();
    let expect: BTreeSet<_> = [("ignore", "Aborted"), ("remove", "Done"), ("rescan", "Process")]
        .into_iter()
        .map(|(l, s)| (lbl(l), sid(s)))
        .collect();
    assert_eq!(succ, expect);
    assert_eq!(c.reachable_states().len(), 7);
    assert!(c.find_deadlocks().is_empty());
    let doc = bundled_antivirus();
    assert!(doc.coupled.preventive().base().find_deadlocks().is_empty());
    assert!(matches!(
        c.successors(&sid("Nowhere")),
        Err(QueryError::UnknownState(_))
    ));
}

#[test]
fn self_path_is_the_single_state() {
    let c = control();
    let paths = c.enumerate_simple_paths(&sid("Process"), &sid("Process")).unwrap();
    assert_eq!(paths.len(), 1);
    assert_eq!(paths[0].len(), 0);
}

#[test]
fn deadlock_detection() {
    let b = Behavior::from_transitions(
        [sid("A"), sid("B"), sid("C"), sid("D")],
        sid("A"),
        [
            Transition::new(sid("A"), lbl("x"), sid("B")),
            Transition::new(sid("A"), lbl("y"), sid("C")),
        ],
        [sid("C")],
    )
    .unwrap();
    // B is stuck and not final; D is stuck but unreachable
    assert_eq!(b.find_deadlocks(), set(&["B"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_matches_naive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random_behavior(&mut r, 6, 0.35);
        for from in b.states() {
            for to in b.states() {
                let fast = b.enumerate_simple_paths(from, to).unwrap();
                prop_assert_eq!(&fast, &naive_simple_paths(&b, from, to));
                for p in &fast {
                    prop_assert!(p.is_simple());
                    prop_assert!(b.is_valid_path(p));
                    prop_assert_eq!(p.first(), from);
                    prop_assert_eq!(p.last(), to);
                }
            }
        }
    }

    #[test]
    fn reachability_matches_relaxation(seed in any::<u64>()) {
        let b = random_behavior(&mut rng(seed), 7, 0.3);
        prop_assert_eq!(b.reachable_states(), naive_reachable(&b));
    }

    #[test]
    fn adding_a_transition_never_shrinks_reachability(seed in any::<u64>(), i in 0usize..7, j in 0usize..7) {
        let b = random_behavior(&mut rng(seed), 7, 0.25);
        let n = b.states().len();
        let extra = Transition::new(state(i % n), lbl("z"), state(j % n));
        let mut transitions: Vec<Transition> = b.transitions().iter().cloned().collect();
        transitions.push(extra);
        let bigger = Behavior::from_transitions(
            b.states().iter().cloned(), b.initial().clone(), transitions, b.finals().iter().cloned(),
        ).unwrap();
        prop_assert!(b.reachable_states().is_subset(&bigger.reachable_states()));
    }

    #[test]
    fn deadlocks_are_reachable_stuck_non_finals(seed in any::<u64>()) {
        let b = random_behavior(&mut rng(seed), 7, 0.2);
        let reach = naive_reachable(&b);
        let expect: BTreeSet<_> = reach
            .into_iter()
            .filter(|s| !b.finals().contains(s) && b.transitions().iter().all(|t| &t.source != s))
            .collect();
        prop_assert_eq!(b.find_deadlocks(), expect);
    }
}
