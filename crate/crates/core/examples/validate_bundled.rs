//! Runs the three structural checks on the bundled antivirus model.
//!
//! ```text
//! cargo run --example validate_bundled
//! ```

use avmc::coupled::{check_approach_alignment, check_mapping, check_synchronization, control_runs};
use avmc::dsl::bundled_antivirus;

fn main() {
    let doc = bundled_antivirus();
    let m = &doc.coupled;
    println!(
        "model {}: {} preventive states, {} control states",
        m.name(),
        m.preventive().base().states().len(),
        m.control().base().states().len()
    );

    for report in [check_mapping(m), check_approach_alignment(m), check_synchronization(m)] {
        println!("\n{}: {}", report.check, report.status());
        for f in &report.findings {
            println!("  {}", doc.source.position(f.clone()));
        }
    }

    println!("\ncontrol runs stitched:");
    for run in control_runs(m) {
        println!("  {run}");
    }
}
