mod common;

use avmc::dsl::{bundled_antivirus, parse_model, render_model};
use avmc::report::Position;
use common::*;
use proptest::prelude::*;

#[test]
fn bundled_round_trip() {
    let doc = bundled_antivirus();
    let text = render_model(&doc);
    let again = parse_model(&text).unwrap();
    assert_eq!(again, doc);
    assert_eq!(render_model(&again), text);
}

#[test]
fn corpus_round_trips() {
    for entry in std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/models/mutants")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        // two mutants are rejected at build time; the rest must round-trip
        if let Ok(doc) = parse_model(&text) {
            assert_eq!(parse_model(&render_model(&doc)).unwrap(), doc, "{}", path.display());
        }
    }
}

#[test]
fn diagnostics_carry_positions() {
    let errs = parse_model("behavior control {\n  initial A\n  A -go-> B\n}\n").unwrap_err();
    assert!(errs.iter().any(|e| e.code == "unknown-state" && e.position == Position { line: 3, column: 3 }));
    let errs = parse_model("behavior control {\n  initial A\n  A -> B\n}\n").unwrap_err();
    assert_eq!(errs[0].code, "syntax");
    assert_eq!(errs[0].position, Position { line: 3, column: 5 });
    let text = "behavior preventive {\n initial P\n}\nbehavior control {\n initial C\n}\nmap C => P\nspec s on control: EF at(C\n";
    let errs = parse_model(text).unwrap_err();
    assert_eq!(errs[0].code, "ctl-syntax");
    assert_eq!(errs[0].position.line, 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_models_round_trip(seed in any::<u64>()) {
        let text = random_model_text(&mut rng(seed));
        let doc = parse_model(&text).map_err(|e| TestCaseError::fail(format!("{e:?}\n{text}")))?;
        let rendered = render_model(&doc);
        let again = parse_model(&rendered).unwrap();
        prop_assert_eq!(&again, &doc);
        prop_assert_eq!(render_model(&again), rendered);
    }
}
