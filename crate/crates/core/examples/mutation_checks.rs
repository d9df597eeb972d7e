//! Runs `validate` and `check` on every model under `models/` and prints
//! which diagnostics each mutant triggers.

use std::path::PathBuf;

use avmc::cli::{cmd_check, cmd_validate, EngineChoice, OutputFormat};

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models");
    let mut files = vec![root.join("antivirus.avm")];
    let mut mutants: Vec<_> = std::fs::read_dir(root.join("mutants"))
        .expect("mutant corpus")
        .map(|e| e.unwrap().path())
        .collect();
    mutants.sort();
    files.extend(mutants);

    for file in files {
        let name = file.file_stem().unwrap().to_string_lossy().into_owned();
        let validate = cmd_validate(&file, true);
        let check = cmd_check(&file, EngineChoice::Both);
        println!("== {name}: validate exit {}, check exit {}", validate.exit_code(), check.exit_code());
        let mut errors: Vec<String> = validate
            .findings()
            .chain(check.findings())
            .filter(|f| f.severity == avmc::report::Severity::Error)
            .map(|f| f.to_string())
            .collect();
        errors.dedup();
        for e in errors {
            println!("  {e}");
        }
    }

    println!("\nstructured form of one report:");
    let report = cmd_validate(&root.join("mutants/remapped_done.avm"), true);
    print!("{}", report.render(OutputFormat::Structured, true));
}
