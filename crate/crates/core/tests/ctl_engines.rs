mod common;

use std::collections::BTreeSet;

use avmc::checker::{
    check_explicit, check_symbolic, holds, parse_ctl, witness, AtomicProposition, Ctl, Engine, KripkeStructure,
    Witness,
};
use avmc::coupled::{Approach, Role};
use avmc::dsl::{bundled_antivirus, Expectation};
use common::*;
use proptest::prelude::*;

fn control_kripke() -> KripkeStructure {
    KripkeStructure::from_model(&bundled_antivirus().coupled, Role::Control)
}

fn sat(k: &KripkeStructure, f: &str) -> BTreeSet<avmc::lts::StateId> {
    let f = parse_ctl(f).unwrap();
    let e = check_explicit(k, &f).unwrap();
    assert_eq!(e, check_symbolic(k, &f).unwrap(), "engines disagree on {f}");
    e
}

#[test]
fn bundled_sat_sets() {
    let k = control_kripke();
    assert_eq!(
        sat(&k, "EF at(Done)"),
        set(&["NotActivated", "Activated", "Process", "Recognition", "Done"])
    );
    assert_eq!(sat(&k, "EX at(End)"), set(&["Done", "Aborted", "End"]));
    assert!(!sat(&k, "AF at(Done)").contains(&sid("NotActivated")));
    assert_eq!(sat(&k, "in(Identification)"), set(&["Recognition"]));
}

#[test]
fn bundled_kripke_shape() {
    let k = control_kripke();
    assert!(k.is_total());
    assert_eq!(k.totalized(), set(&["End"]));
    assert!(k
        .labeling(&sid("Recognition"))
        .unwrap()
        .contains(&AtomicProposition::In(Approach::Identification)));
}

#[test]
fn bundled_property_verdicts() {
    let doc = bundled_antivirus();
    for p in &doc.properties {
        let k = KripkeStructure::from_model(&doc.coupled, p.target);
        let e = Engine::Explicit.check(&k, &p.formula).unwrap();
        let s = Engine::Symbolic.check(&k, &p.formula).unwrap();
        assert_eq!(e, s, "{}", p.name);
        let v = e.contains(k.initial());
        match p.expected {
            Expectation::Holds => assert!(v, "{} should hold", p.name),
            Expectation::Fails => assert!(!v, "{} should fail", p.name),
            Expectation::Unspecified => {}
        }
    }
}

#[test]
fn bundled_witness() {
    let k = control_kripke();
    let w = witness(&k, &parse_ctl("EF at(Done)").unwrap()).unwrap();
    let names: Vec<&str> = w.path().unwrap().states().iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["NotActivated", "Activated", "Process", "Recognition", "Done"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_match_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_kripke(&mut r, 8);
        for _ in 0..4 {
            let f = random_ctl(&mut r, k.len(), 4);
            let oracle = ctl_oracle(&k, &f);
            prop_assert_eq!(&check_explicit(&k, &f).unwrap(), &oracle, "explicit on {}", f);
            prop_assert_eq!(&check_symbolic(&k, &f).unwrap(), &oracle, "symbolic on {}", f);
        }
    }

    #[test]
    fn dualities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_kripke(&mut r, 8);
        let f = random_ctl(&mut r, k.len(), 3);
        let nf = Ctl::not(f.clone());
        let pairs = [
            (Ctl::ag(f.clone()), Ctl::not(Ctl::ef(nf.clone()))),
            (Ctl::af(f.clone()), Ctl::not(Ctl::eg(nf.clone()))),
            (Ctl::ax(f.clone()), Ctl::not(Ctl::ex(nf.clone()))),
            (Ctl::ef(f.clone()), Ctl::eu(Ctl::True, f.clone())),
        ];
        for (a, b) in pairs {
            prop_assert_eq!(check_explicit(&k, &a).unwrap(), check_explicit(&k, &b).unwrap());
            prop_assert_eq!(check_symbolic(&k, &a).unwrap(), check_symbolic(&k, &b).unwrap());
        }
        prop_assert_eq!(check_explicit(&k, &f.normalize()).unwrap(), check_explicit(&k, &f).unwrap());
    }

    #[test]
    fn witnesses_are_valid(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_kripke(&mut r, 8);
        let g = random_ctl(&mut r, k.len(), 2);
        let relation = k.label_erased_behavior();
        let gs = check_explicit(&k, &g).unwrap();
        for f in [Ctl::ef(g.clone()), Ctl::ag(g.clone())] {
            let is_ef = matches!(f, Ctl::EF(_));
            match witness(&k, &f).unwrap() {
                Witness::Found(p) => {
                    prop_assert_eq!(p.first(), k.initial());
                    prop_assert!(relation.is_valid_path(&p));
                    prop_assert_eq!(gs.contains(p.last()), is_ef);
                    // shortest: no earlier state already meets the target
                    for s in &p.states()[..p.states().len() - 1] {
                        prop_assert_eq!(gs.contains(s), !is_ef);
                    }
                    prop_assert_eq!(holds(&k, &f).unwrap(), is_ef);
                }
                Witness::None => prop_assert_eq!(holds(&k, &f).unwrap(), !is_ef),
                Witness::Unsupported => prop_assert!(false, "EF/AG must be supported"),
            }
        }
    }

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_ctl(&mut r, 5, 4);
        prop_assert_eq!(parse_ctl(&f.to_string()).unwrap(), f);
    }
}
