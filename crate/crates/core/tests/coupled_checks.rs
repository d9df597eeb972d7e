mod common;

use avmc::coupled::{
    alignment_violations, check_approach_alignment, check_mapping, check_synchronization, control_runs, Approach,
};
use avmc::dsl::{bundled_antivirus, parse_model, ANTIVIRUS_MODEL};
use common::*;
use proptest::prelude::*;

fn edited(f: impl Fn(&str) -> Option<String>) -> String {
    ANTIVIRUS_MODEL.lines().filter_map(f).map(|l| l + "\n").collect()
}

#[test]
fn bundled_checks_pass() {
    let m = bundled_antivirus().coupled;
    assert!(check_mapping(&m).passed());
    assert!(check_approach_alignment(&m).passed());
    assert!(check_synchronization(&m).passed());
    assert_eq!(control_runs(&m).len(), 2);
}

#[test]
fn moving_a_preventive_state_breaks_alignment() {
    let text = edited(|l| match l {
        "  preventive: CheckCleaningOperations" => None,
        "  preventive: DeliverSafeStatus" => Some("  preventive: DeliverSafeStatus CheckCleaningOperations".into()),
        other => Some(other.into()),
    });
    let m = parse_model(&text).unwrap().coupled;
    assert_eq!(
        alignment_violations(&m),
        vec![(Approach::Identification, sid("Recognition"), sid("CheckCleaningOperations"))]
    );
    let report = check_approach_alignment(&m);
    assert!(!report.passed());
    assert!(report.errors().any(|f| f.detail.starts_with("(Recognition, CheckCleaningOperations)")));
}

#[test]
fn deleting_a_mapped_transition_fails_mapping() {
    let doc = bundled_antivirus();
    let m = &doc.coupled;
    let mapped: Vec<_> = m
        .mapping()
        .entries()
        .values()
        .flatten()
        .flat_map(|p| p.steps().map(|(a, l, b)| (a.clone(), l.clone(), b.clone())).collect::<Vec<_>>())
        .collect();
    for t in m.preventive().base().transitions() {
        let prefix = format!("  {} -{}-> {}", t.source, t.label, t.target);
        let text = edited(|l| (!(l == prefix || l.starts_with(&format!("{prefix} ")))).then(|| l.to_string()));
        let mutant = parse_model(&text).unwrap().coupled;
        assert_eq!(mutant.preventive().base().transitions().len(), 11, "{prefix}");
        let breaks = mapped.contains(&(t.source.clone(), t.label.clone(), t.target.clone()));
        let report = check_mapping(&mutant);
        assert_eq!(!report.passed(), breaks, "deleting {prefix}");
        if breaks {
            let triple = format!("({}, {}, {})", t.source, t.label, t.target);
            assert!(report.errors().all(|f| f.code == "invalid-path" && f.detail.contains(&triple)));
        }
    }
}

#[test]
fn remapped_done_fails_alignment_and_sync() {
    let text = ANTIVIRUS_MODEL.replace("map Done => DeliverSafeStatus", "map Done => RealTimeProtection");
    let m = parse_model(&text).unwrap().coupled;
    assert!(check_mapping(&m).passed());
    assert!(!check_approach_alignment(&m).passed());
    assert!(!check_synchronization(&m).passed());
}

#[test]
fn sync_with_no_finals_is_informational() {
    let text = "behavior preventive {\n initial P\n}\nbehavior control {\n initial C\n}\nmap C => P\n";
    let m = parse_model(text).unwrap().coupled;
    let r = check_synchronization(&m);
    assert!(r.passed());
    assert!(r.findings.iter().any(|f| f.code == "no-finals"));
}

const PREVENTIVE: [&str; 11] = [
    "SystemProtection", "InternetProtection", "WebProtection", "URLDetecting", "PCProtection",
    "RealTimeProtection", "SystemScanner", "DetectingFiles", "CheckCleaningOperations",
    "DeliverSafeStatus", "DeliverUnsafeStatus",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extra_preventive_edges_keep_sync(edges in proptest::collection::vec((0usize..11, 0usize..11), 1..4)) {
        let extra: String = edges
            .iter()
            .map(|&(a, b)| format!("  {} -extra-> {}\n", PREVENTIVE[a], PREVENTIVE[b]))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let text = ANTIVIRUS_MODEL.replace("  # online mode\n", &format!("{extra}  # online mode\n"));
        let m = parse_model(&text).unwrap().coupled;
        prop_assert!(check_synchronization(&m).passed());
        prop_assert!(check_mapping(&m).passed());
    }

    #[test]
    fn checks_are_deterministic_on_random_models(seed in any::<u64>()) {
        let text = random_model_text(&mut rng(seed));
        if let Ok(doc) = parse_model(&text) {
            let m = &doc.coupled;
            prop_assert_eq!(check_mapping(m), check_mapping(m));
            prop_assert_eq!(check_synchronization(m), check_synchronization(m));
            // invalid mapped paths are exactly what check_mapping reports
            let invalid = m.mapping().entries().values().flatten()
                .filter(|p| !m.preventive().base().is_valid_path(p)).count();
            let reported = check_mapping(m).errors().filter(|f| f.code == "invalid-path").count();
            prop_assert_eq!(invalid, reported);
        }
    }
}
