//! Checks CTL formulas on the bundled control behavior with both engines,
//! prints sat-sets, witnesses and a fixpoint trace.
//!
//! ```text
//! cargo run --example ctl_engines -- "AG (at(Process) -> EF at(End))"
//! ```

use avmc::checker::{fixpoint_iterates, parse_ctl, witness, Engine, KripkeStructure, Witness};
use avmc::coupled::Role;
use avmc::dsl::bundled_antivirus;

fn main() {
    let doc = bundled_antivirus();
    let k = KripkeStructure::from_model(&doc.coupled, Role::Control);
    println!("Kripke structure: {} states, totalized {:?}", k.len(), k.totalized());

    let mut formulas: Vec<String> = std::env::args().skip(1).collect();
    if formulas.is_empty() {
        formulas = ["EF at(Done)", "AF at(Done)", "EX at(End)", "AG !at(Aborted)", "E [!in(Removal) U at(Aborted)]"]
            .map(String::from)
            .to_vec();
    }

    for text in &formulas {
        let f = match parse_ctl(text) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("{text}: {e}");
                continue;
            }
        };
        let explicit = Engine::Explicit.check(&k, &f).expect("atoms name control states");
        let symbolic = Engine::Symbolic.check(&k, &f).expect("atoms name control states");
        assert_eq!(explicit, symbolic);
        let verdict = if explicit.contains(k.initial()) { "holds" } else { "fails" };
        let names: Vec<_> = explicit.iter().map(|s| s.as_str()).collect();
        println!("\n{f}: {verdict}\n  sat: {{{}}}", names.join(", "));
        match witness(&k, &f).unwrap() {
            Witness::Found(p) => println!("  witness: {p}"),
            Witness::None => println!("  witness: none exists"),
            Witness::Unsupported => {}
        }
    }

    let f = parse_ctl("EF at(Done)").unwrap();
    println!("\nleast fixpoint for {f}:");
    for (i, step) in fixpoint_iterates(&k, &f).unwrap().unwrap().iter().enumerate() {
        let names: Vec<_> = step.iter().map(|s| s.as_str()).collect();
        println!("  Z{i} = {{{}}}", names.join(", "));
    }
}
