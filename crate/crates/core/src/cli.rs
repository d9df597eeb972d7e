//! Command-line front end: `validate`, `check`, `paths`, `export`, `info`.
//!
//! Exit codes: 0 success, 1 model/property/engine failure, 2 I/O or usage
//! error.

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::checker::{self, Ctl, Engine, KripkeStructure, Witness};
use crate::coupled::{check_approach_alignment, check_mapping, check_synchronization, Role};
use crate::dsl::{self, Expectation, ModelDocument};
use crate::export;
use crate::lts::{Path, StateId};
use crate::report::{CheckReport, Finding, Position, Severity, Subject};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Explicit,
    Symbolic,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Smv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BehaviorArg {
    Preventive,
    Control,
}

impl From<BehaviorArg> for Role {
    fn from(b: BehaviorArg) -> Role {
        match b {
            BehaviorArg::Preventive => Role::Preventive,
            BehaviorArg::Control => Role::Control,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "avmc", version, about = "Validate and model-check coupled behavioral models")]
pub struct Cli {
    /// Report format (give before the subcommand)
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Suppress info-level findings
    #[arg(long)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural validation plus mapping, approach and synchronization checks
    Validate {
        file: PathBuf,
        /// Skip the synchronization (fragment stitching) check
        #[arg(long)]
        no_sync: bool,
    },
    /// Evaluate every spec of the model
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        engine: EngineChoice,
    },
    /// List simple paths between two states of one behavior
    Paths {
        file: PathBuf,
        #[arg(long, value_enum)]
        behavior: BehaviorArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Write SMV or DOT for one behavior
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, value_enum, default_value = "control")]
        target: BehaviorArg,
        /// Output file; standard output when absent
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print state, transition, mapping and approach counts
    Info { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: String,
    pub target: Role,
    pub holds: bool,
    pub witness: Option<Path>,
    pub witness_note: Option<&'static str>,
    pub matches_expectation: Option<bool>,
    pub position: Option<Position>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Finding(Finding),
    Property(PropertyResult),
    /// `key: value` summary line.
    Summary(String, String),
    Path(Path),
    /// Exported text written to standard output.
    Output(String),
    /// Per-check status, e.g. `("mapping", "pass")`.
    Checks(Vec<(&'static str, &'static str)>),
    /// State and transition counts per behavior.
    Counts(Vec<(Role, usize, usize)>),
}

/// Everything a command reports, in output order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub entries: Vec<Entry>,
    /// Set when the command failed on I/O or usage rather than on the model.
    pub usage_error: bool,
}

impl RunReport {
    fn finding(&mut self, f: Finding) {
        self.entries.push(Entry::Finding(f));
    }

    fn summary(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push(Entry::Summary(key.into(), value.into()));
    }

    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Finding(f) => Some(f),
            _ => None,
        })
    }

    pub fn property_results(&self) -> impl Iterator<Item = &PropertyResult> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Property(p) => Some(p),
            _ => None,
        })
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Path(p) => Some(p),
            _ => None,
        })
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.entries.iter().find_map(|e| match e {
            Entry::Summary(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn check_status(&self, check: &str) -> Option<&'static str> {
        self.entries.iter().find_map(|e| match e {
            Entry::Checks(cs) => cs.iter().find(|(c, _)| *c == check).map(|(_, s)| *s),
            _ => None,
        })
    }

    pub fn has_errors(&self) -> bool {
        self.findings().any(|f| f.severity == Severity::Error)
    }

    pub fn exit_code(&self) -> i32 {
        if self.usage_error {
            EXIT_USAGE
        } else if self.has_errors() || self.property_results().any(|p| p.matches_expectation == Some(false)) {
            EXIT_FAILURE
        } else {
            EXIT_OK
        }
    }

    pub fn render(&self, format: OutputFormat, quiet: bool) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if quiet && matches!(e, Entry::Finding(f) if f.severity == Severity::Info) {
                continue;
            }
            match format {
                OutputFormat::Text => out.push_str(&render_text(e)),
                OutputFormat::Structured => {
                    out.push_str(&render_json(e).to_string());
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn render_text(e: &Entry) -> String {
    match e {
        Entry::Finding(f) => format!("{f}\n"),
        Entry::Summary(k, v) => format!("{k}: {v}\n"),
        Entry::Path(p) => format!("  {p}\n"),
        Entry::Output(text) => text.clone(),
        Entry::Checks(cs) => {
            let parts: Vec<String> = cs.iter().map(|(c, s)| format!("{c}: {s}")).collect();
            format!("{}\n", parts.join(", "))
        }
        Entry::Counts(cs) => {
            let parts: Vec<String> = cs
                .iter()
                .map(|(r, s, t)| format!("{r}: {s} states / {t} transitions"))
                .collect();
            format!("{}\n", parts.join("; "))
        }
        Entry::Property(p) => {
            let mut line = format!("{} [{}]: {}", p.name, p.target, verdict(p.holds));
            match p.matches_expectation {
                Some(true) => line.push_str(" (as expected)"),
                Some(false) => line.push_str(&format!(" (expected {})", verdict(!p.holds))),
                None => {}
            }
            if let Some(w) = &p.witness {
                line.push_str(&format!("\n  witness: {w}"));
            } else if let Some(note) = p.witness_note {
                line.push_str(&format!("\n  witness: {note}"));
            }
            line.push('\n');
            line
        }
    }
}

fn render_json(e: &Entry) -> serde_json::Value {
    match e {
        Entry::Finding(f) => f.to_json(),
        Entry::Summary(k, v) => json!({ "kind": "summary", "key": k, "value": v }),
        Entry::Path(p) => json!({
            "kind": "path",
            "states": p.states().iter().map(StateId::as_str).collect::<Vec<_>>(),
            "labels": p.labels().iter().map(|l| l.as_str()).collect::<Vec<_>>(),
        }),
        Entry::Output(text) => json!({ "kind": "output", "text": text }),
        Entry::Counts(cs) => {
            let mut v = json!({ "kind": "counts" });
            for (r, s, t) in cs {
                v[r.as_str()] = json!({ "states": s, "transitions": t });
            }
            v
        }
        Entry::Checks(cs) => {
            let mut v = json!({ "kind": "checks" });
            for (c, s) in cs {
                v[*c] = json!(s);
            }
            v
        }
        Entry::Property(p) => json!({
            "kind": "property",
            "name": p.name,
            "target": p.target.as_str(),
            "verdict": verdict(p.holds),
            "matches_expectation": p.matches_expectation,
            "witness": p.witness.as_ref().map(|w| w.to_string()),
            "witness_note": p.witness_note,
            "line": p.position.map(|p| p.line),
            "column": p.position.map(|p| p.column),
        }),
    }
}

/// Reads and parses a model file; failures are recorded in `report`.
fn load(file: &FsPath, report: &mut RunReport) -> Option<ModelDocument> {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            report.finding(Finding::error("io", Subject::Model, format!("{}: {e}", file.display())));
            report.usage_error = true;
            return None;
        }
    };
    match dsl::parse_model(&text) {
        Ok(doc) => Some(doc),
        Err(errors) => {
            for e in errors {
                report.finding(e.to_finding());
            }
            None
        }
    }
}

fn absorb(report: &mut RunReport, doc: &ModelDocument, check: CheckReport) -> &'static str {
    let status = check.status();
    for f in check.findings {
        report.finding(doc.source.position(f));
    }
    status
}

pub fn cmd_validate(file: &FsPath, sync: bool) -> RunReport {
    let mut report = RunReport::default();
    let Some(doc) = load(file, &mut report) else {
        return report;
    };
    validate_document(&doc, sync, &mut report);
    report
}

/// Runs every structural check on a parsed document.
pub fn validate_document(doc: &ModelDocument, sync: bool, report: &mut RunReport) {
    let m = &doc.coupled;
    for role in [Role::Preventive, Role::Control] {
        for s in m.behavior(role).base().find_deadlocks() {
            let f = Finding::error(
                "deadlock",
                Subject::State(role, s.clone()),
                format!("{s} is reachable, has no outgoing transition and is not final"),
            );
            report.finding(doc.source.position(f));
        }
    }
    let mapping = absorb(report, doc, check_mapping(m));
    let approaches = absorb(report, doc, check_approach_alignment(m));
    let synchronization = if sync {
        absorb(report, doc, check_synchronization(m))
    } else {
        "skipped"
    };
    report.entries.push(Entry::Checks(vec![
        ("mapping", mapping),
        ("approaches", approaches),
        ("synchronization", synchronization),
    ]));
}

pub fn cmd_check(file: &FsPath, engine: EngineChoice) -> RunReport {
    let mut report = RunReport::default();
    let Some(doc) = load(file, &mut report) else {
        return report;
    };
    check_document(&doc, engine, &mut report);
    report
}

fn evaluate(engine: Engine, k: &KripkeStructure, f: &Ctl) -> Result<bool, checker::CheckError> {
    match engine {
        Engine::Explicit => checker::holds(k, f),
        Engine::Symbolic => checker::holds_symbolic(k, f),
    }
}

/// Evaluates every property of `doc` on its target behavior.
pub fn check_document(doc: &ModelDocument, engine: EngineChoice, report: &mut RunReport) {
    let m = &doc.coupled;
    let kripke = [Role::Preventive, Role::Control].map(|r| KripkeStructure::from_model(m, r));
    let engines: &[Engine] = match engine {
        EngineChoice::Explicit => &[Engine::Explicit],
        EngineChoice::Symbolic => &[Engine::Symbolic],
        EngineChoice::Both => &[Engine::Explicit, Engine::Symbolic],
    };
    let (mut held, mut failed, mut mismatched) = (0, 0, 0);
    for p in &doc.properties {
        let k = &kripke[p.target as usize];
        let subject = Subject::Property(p.name.clone());
        let position = doc.source.locate(&subject);
        let mut verdicts = Vec::new();
        for &e in engines {
            match evaluate(e, k, &p.formula) {
                Ok(v) => verdicts.push((e, v)),
                Err(err) => {
                    report.finding(Finding::error("check", subject.clone(), err.to_string()).at(position));
                }
            }
        }
        let Some(&(_, holds)) = verdicts.first() else {
            continue;
        };
        if engine == EngineChoice::Both {
            // whole sat-sets must agree, not just the initial-state verdict
            let explicit = checker::check_explicit(k, &p.formula);
            let symbolic = checker::check_symbolic(k, &p.formula);
            if explicit != symbolic || verdicts.iter().any(|&(_, v)| v != holds) {
                report.finding(
                    Finding::error(
                        "engine-disagreement",
                        subject.clone(),
                        format!("explicit and symbolic engines disagree on {}", p.formula),
                    )
                    .at(position),
                );
            }
        }
        let (witness, witness_note) = match &p.formula {
            Ctl::EF(_) | Ctl::AG(_) => match checker::witness(k, &p.formula) {
                Ok(Witness::Found(path)) => (Some(path), None),
                _ => (None, None),
            },
            _ => (None, Some("unsupported for this formula shape")),
        };
        let matches_expectation = match p.expected {
            Expectation::Holds => Some(holds),
            Expectation::Fails => Some(!holds),
            Expectation::Unspecified => None,
        };
        if holds {
            held += 1;
        } else {
            failed += 1;
        }
        if matches_expectation == Some(false) {
            mismatched += 1;
        }
        report.entries.push(Entry::Property(PropertyResult {
            name: p.name.clone(),
            target: p.target,
            holds,
            witness,
            witness_note,
            matches_expectation,
            position,
        }));
        if matches_expectation == Some(false) {
            report.finding(
                Finding::error(
                    "expectation-mismatch",
                    subject,
                    format!("{} {} but was declared to {}", p.formula, verdict(holds), verdict(!holds).trim_end_matches('s')),
                )
                .at(position),
            );
        }
    }
    let names: Vec<&str> = engines.iter().map(|e| e.as_str()).collect();
    report.summary(
        "properties",
        format!(
            "{} checked ({}), {held} hold, {failed} fail, {mismatched} unexpected",
            doc.properties.len(),
            names.join("+")
        ),
    );
}

fn parse_state(name: &str, role: Role, doc: &ModelDocument, report: &mut RunReport) -> Option<StateId> {
    match StateId::new(name) {
        Ok(s) if doc.coupled.behavior(role).base().contains_state(&s) => Some(s),
        _ => {
            report.finding(Finding::error(
                "unknown-state",
                Subject::Behavior(role),
                format!("{name} is not a {role} state"),
            ));
            report.usage_error = true;
            None
        }
    }
}

pub fn cmd_paths(file: &FsPath, behavior: Role, from: &str, to: &str) -> RunReport {
    let mut report = RunReport::default();
    let Some(doc) = load(file, &mut report) else {
        return report;
    };
    let (Some(from), Some(to)) = (
        parse_state(from, behavior, &doc, &mut report),
        parse_state(to, behavior, &doc, &mut report),
    ) else {
        return report;
    };
    let paths = doc
        .coupled
        .behavior(behavior)
        .base()
        .enumerate_simple_paths(&from, &to)
        .expect("states checked above");
    report.summary("paths", format!("{} simple path(s) from {from} to {to} in {behavior}", paths.len()));
    report.entries.extend(paths.into_iter().map(Entry::Path));
    report
}

/// Renders the export text for one behavior.
pub fn export_text(doc: &ModelDocument, format: ExportFormat, target: Role) -> Result<String, export::ExportError> {
    match format {
        ExportFormat::Smv => export::to_smv(doc, target).map(|p| p.text),
        ExportFormat::Dot => Ok(export::model_to_dot(doc, target)),
    }
}

pub fn cmd_export(file: &FsPath, format: ExportFormat, target: Role, output: Option<&FsPath>) -> RunReport {
    let mut report = RunReport::default();
    let Some(doc) = load(file, &mut report) else {
        return report;
    };
    let text = match export_text(&doc, format, target) {
        Ok(t) => t,
        Err(e) => {
            report.finding(Finding::error("name-collision", Subject::Behavior(target), e.to_string()));
            return report;
        }
    };
    match output {
        None => report.entries.push(Entry::Output(text)),
        Some(path) => match fs::write(path, &text) {
            Ok(()) => report.summary("written", path.display().to_string()),
            Err(e) => {
                report.finding(Finding::error("io", Subject::Model, format!("{}: {e}", path.display())));
                report.usage_error = true;
            }
        },
    }
    report
}

pub fn cmd_info(file: &FsPath) -> RunReport {
    let mut report = RunReport::default();
    let Some(doc) = load(file, &mut report) else {
        return report;
    };
    let m = &doc.coupled;
    let counts = [Role::Preventive, Role::Control]
        .iter()
        .map(|&r| {
            let b = m.behavior(r).base();
            (r, b.states().len(), b.transitions().len())
        })
        .collect();
    report.summary("model", m.name());
    report.entries.push(Entry::Counts(counts));
    report.summary(
        "mapping",
        format!(
            "{} entries / {} exempt",
            m.mapping().entries().len(),
            m.mapping().exemptions().len()
        ),
    );
    let used = crate::coupled::Approach::ALL
        .iter()
        .filter(|&&a| !m.approaches().states(a).is_empty())
        .count();
    report.summary("approaches", used.to_string());
    report.summary("properties", doc.properties.len().to_string());
    report
}

pub fn execute(cli: &Cli) -> RunReport {
    match &cli.command {
        Command::Validate { file, no_sync } => cmd_validate(file, !no_sync),
        Command::Check { file, engine } => cmd_check(file, *engine),
        Command::Paths {
            file,
            behavior,
            from,
            to,
        } => cmd_paths(file, (*behavior).into(), from, to),
        Command::Export {
            file,
            format,
            target,
            output,
        } => cmd_export(file, *format, (*target).into(), output.as_deref()),
        Command::Info { file } => cmd_info(file),
    }
}

/// Parses `args` (program name first), runs the command, writes the report
/// to `out` and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let report = execute(&cli);
    let _ = out.write_all(report.render(cli.format, cli.quiet).as_bytes());
    report.exit_code()
}
