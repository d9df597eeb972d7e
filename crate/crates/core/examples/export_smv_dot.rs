//! Writes SMV and DOT for both bundled behaviors into a directory
//! (default `target/avmc-export`).

use std::path::PathBuf;

use avmc::coupled::Role;
use avmc::dsl::bundled_antivirus;
use avmc::export::{model_to_dot, to_smv};

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("target/avmc-export"));
    std::fs::create_dir_all(&dir)?;
    let doc = bundled_antivirus();
    for role in [Role::Preventive, Role::Control] {
        let smv = to_smv(&doc, role).expect("bundled names do not collide").text;
        let smv_path = dir.join(format!("antivirus_{role}.smv"));
        std::fs::write(&smv_path, &smv)?;
        let dot_path = dir.join(format!("antivirus_{role}.dot"));
        std::fs::write(&dot_path, model_to_dot(&doc, role))?;
        println!("{} ({} SPEC lines), {}", smv_path.display(), smv.matches("\nSPEC ").count(), dot_path.display());
    }
    println!("\nrender with: dot -Tsvg {}/antivirus_control.dot -o control.svg", dir.display());
    println!("check with:  NuSMV {}/antivirus_control.smv", dir.display());
    Ok(())
}
