//! Parses a model written inline, shows positioned diagnostics for a broken
//! one, and prints the canonical rendering.

use avmc::dsl::{parse_model, render_model};

const MODEL: &str = "
model door
behavior preventive {
  initial Locked
  final Open
  state Checked
  Locked -badge-> Checked [badge]/Identification
  Checked -unlock-> Open /Removal
}
behavior control {
  initial Waiting
  final Done
  Waiting -swipe-> Done
}
approach Identification {
  control: Waiting
  preventive: Checked
}
map Waiting => Locked -badge-> Checked
map Done => Open
spec opens on preventive expect holds: EF at(Open)
";

fn main() {
    let doc = parse_model(MODEL).expect("model parses");
    println!("{}", render_model(&doc));

    let broken = MODEL.replace("Checked -unlock-> Open", "Checked -unlock-> Opened").replace("EF at(Open)", "EF (at(Open)");
    match parse_model(&broken) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(errors) => {
            for e in errors {
                println!("{}", e.to_finding());
            }
        }
    }
}
