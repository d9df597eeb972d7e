//! Builds a small behavior by hand and enumerates its simple paths,
//! reachable states and deadlocks.

use avmc::lts::{Behavior, Label, StateId, Transition};

fn s(n: &str) -> StateId {
    StateId::new(n).unwrap()
}

fn t(a: &str, l: &str, b: &str) -> Transition {
    Transition::new(s(a), Label::new(l).unwrap(), s(b))
}

fn main() {
    let b = Behavior::from_transitions(
        ["Idle", "Scan", "Clean", "Report", "Stuck"].map(s),
        s("Idle"),
        [
            t("Idle", "start", "Scan"),
            t("Scan", "found", "Clean"),
            t("Scan", "clear", "Report"),
            t("Clean", "done", "Report"),
            t("Clean", "retry", "Scan"),
            t("Scan", "hang", "Stuck"),
        ],
        [s("Report")],
    )
    .expect("well-formed behavior");

    for p in b.enumerate_simple_paths(&s("Idle"), &s("Report")).unwrap() {
        println!("{p}");
    }
    // the retry loop never shows up: simple paths do not revisit a state

    let reach: Vec<_> = b.reachable_states().into_iter().map(|s| s.to_string()).collect();
    println!("reachable: {}", reach.join(", "));
    println!("deadlocks: {:?}", b.find_deadlocks());

    match Behavior::build([s("A")], s("A"), [], [t("A", "x", "B")], []) {
        Ok(_) => unreachable!(),
        Err(errors) => {
            for e in errors {
                println!("rejected: {e}");
            }
        }
    }
}
