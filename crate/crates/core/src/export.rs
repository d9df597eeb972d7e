//! SMV and DOT emitters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::checker::{AtomicProposition, KripkeStructure};
use crate::coupled::{Approach, ApproachPartition, Role};
use crate::dsl::ModelDocument;
use crate::lts::{Behavior, StateId};

/// Words NuSMV reserves; a state with one of these names is suffixed `_`.
const SMV_RESERVED: &[&str] = &[
    "MODULE", "DEFINE", "MDEFINE", "CONSTANTS", "VAR", "IVAR", "FROZENVAR", "INIT", "TRANS",
    "INVAR", "SPEC", "CTLSPEC", "LTLSPEC", "PSLSPEC", "COMPUTE", "NAME", "INVARSPEC", "FAIRNESS",
    "JUSTICE", "COMPASSION", "ISA", "ASSIGN", "CONSTRAINT", "SIMPWFF", "CTLWFF", "LTLWFF",
    "PSLWFF", "COMPWFF", "IN", "MIN", "MAX", "MIRROR", "PRED", "PREDICATES", "process", "array",
    "of", "boolean", "integer", "real", "word", "word1", "bool", "signed", "unsigned", "extend",
    "resize", "sizeof", "uwconst", "swconst", "EX", "AX", "EF", "AF", "EG", "AG", "E", "F", "O",
    "G", "H", "X", "Y", "Z", "A", "U", "S", "V", "T", "BU", "EBF", "ABF", "EBG", "ABG", "case",
    "esac", "mod", "next", "init", "union", "in", "xor", "xnor", "self", "TRUE", "FALSE", "count",
    "abs", "max", "min", "toint", "floor", "state",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("SMV identifier {identifier} is produced by both {first} and {second}")]
    NameCollision {
        identifier: String,
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmvProgram {
    pub text: String,
}

fn smv_state_name(s: &StateId) -> String {
    if SMV_RESERVED.contains(&s.as_str()) {
        format!("{s}_")
    } else {
        s.to_string()
    }
}

fn smv_atom(a: &AtomicProposition) -> String {
    match a {
        AtomicProposition::At(s) => format!("at_{s}"),
        AtomicProposition::In(a) => format!("in_{a}"),
    }
}

/// Renders one behavior of `doc` as a NuSMV `main` module, with a `SPEC`
/// line for every property targeting it.
pub fn to_smv(doc: &ModelDocument, target: Role) -> Result<SmvProgram, ExportError> {
    let m = &doc.coupled;
    let b = m.behavior(target).base();
    let k = KripkeStructure::from_behavior(b, Some((m.approaches(), target)));

    // every identifier the program introduces, with what produced it
    let mut idents: BTreeMap<String, String> = BTreeMap::new();
    let mut claim = |ident: String, origin: String| -> Result<String, ExportError> {
        if let Some(first) = idents.get(&ident) {
            return Err(ExportError::NameCollision {
                identifier: ident,
                first: first.clone(),
                second: origin,
            });
        }
        idents.insert(ident.clone(), origin);
        Ok(ident)
    };
    claim("state".into(), "the state variable".into())?;
    let mut names: BTreeMap<&StateId, String> = BTreeMap::new();
    for s in b.states() {
        names.insert(s, claim(smv_state_name(s), format!("state {s}"))?);
    }
    for s in b.states() {
        claim(smv_atom(&AtomicProposition::At(s.clone())), format!("at({s})"))?;
    }
    for a in Approach::ALL {
        claim(smv_atom(&AtomicProposition::In(a)), format!("in({a})"))?;
    }

    let mut out = String::new();
    let _ = writeln!(out, "-- {} behavior of model {}", target, m.name());
    out.push_str("MODULE main\n");
    let enumeration: Vec<&str> = names.values().map(String::as_str).collect();
    let _ = writeln!(out, "VAR\n  state : {{{}}};", enumeration.join(", "));
    out.push_str("ASSIGN\n");
    let _ = writeln!(out, "  init(state) := {};", names[b.initial()]);
    out.push_str("  next(state) :=\n    case\n");
    for s in b.states() {
        let succ: Vec<&str> = k.successors(s).iter().map(|t| names[t].as_str()).collect();
        let _ = writeln!(out, "      state = {} : {{{}}};", names[s], succ.join(", "));
    }
    out.push_str("    esac;\n");
    out.push_str("DEFINE\n");
    for s in b.states() {
        let _ = writeln!(out, "  at_{s} := state = {};", names[s]);
    }
    for a in Approach::ALL {
        let members = m.approaches().members(a, target);
        let rhs = if members.is_empty() {
            "FALSE".to_string()
        } else {
            members
                .iter()
                .map(|s| format!("at_{s}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        let _ = writeln!(out, "  in_{a} := {rhs};");
    }
    for p in doc.properties_on(target) {
        let mut spec = String::new();
        let _ = p.formula.write_with(&mut spec, &smv_atom, ("TRUE", "FALSE"));
        let _ = writeln!(out, "-- {}", p.name);
        let _ = writeln!(out, "SPEC {spec}");
    }
    Ok(SmvProgram { text: out })
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One DOT digraph: the initial state is bold, finals are double circles,
/// edges carry transition labels, and approaches become clusters.
pub fn to_dot(b: &Behavior, approaches: Option<(&ApproachPartition, Role)>, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", dot_id(name));
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    let node = |s: &StateId| {
        let mut attrs = Vec::new();
        if b.finals().contains(s) {
            attrs.push("shape=doublecircle");
        }
        if s == b.initial() {
            attrs.push("style=bold");
        }
        if attrs.is_empty() {
            format!("{};", dot_id(s.as_str()))
        } else {
            format!("{} [{}];", dot_id(s.as_str()), attrs.join(", "))
        }
    };
    let mut clustered: BTreeSet<&StateId> = BTreeSet::new();
    if let Some((partition, role)) = approaches {
        for a in Approach::ALL {
            let members = partition.members(a, role);
            let members: Vec<&StateId> = b.states().iter().filter(|s| members.contains(*s)).collect();
            if members.is_empty() {
                continue;
            }
            let _ = writeln!(out, "  subgraph {} {{", dot_id(&format!("cluster_{a}")));
            let _ = writeln!(out, "    label={};", dot_id(a.as_str()));
            for s in members {
                let _ = writeln!(out, "    {}", node(s));
                clustered.insert(s);
            }
            out.push_str("  }\n");
        }
    }
    for s in b.states().iter().filter(|s| !clustered.contains(s)) {
        let _ = writeln!(out, "  {}", node(s));
    }
    for t in b.transitions() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_id(t.source.as_str()),
            dot_id(t.target.as_str()),
            dot_id(t.label.as_str())
        );
    }
    out.push_str("}\n");
    out
}

/// DOT for one behavior of a model document, with its approach clusters.
pub fn model_to_dot(doc: &ModelDocument, target: Role) -> String {
    let m = &doc.coupled;
    to_dot(
        m.behavior(target).base(),
        Some((m.approaches(), target)),
        &format!("{}_{}", m.name(), target),
    )
}
