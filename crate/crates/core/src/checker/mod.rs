//! Kripke conversion and CTL model checking, explicit-state and symbolic.

mod ctl;
mod explicit;
mod kripke;
mod symbolic;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use ctl::{parse_ctl, Ctl, SyntaxError};
pub use explicit::{check_explicit, fixpoint_iterates};
pub use kripke::{AtomicProposition, KripkeStructure, STEP_LABEL, STUTTER_LABEL};
pub use symbolic::check_symbolic;

use crate::bdd::BddError;
use crate::lts::{Path, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unknown atom {0}")]
    UnknownAtom(AtomicProposition),
    #[error("symbolic engine: {0}")]
    Bdd(#[from] BddError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Explicit,
    Symbolic,
}

impl Engine {
    pub fn check(self, k: &KripkeStructure, f: &Ctl) -> Result<BTreeSet<StateId>, CheckError> {
        match self {
            Engine::Explicit => check_explicit(k, f),
            Engine::Symbolic => check_symbolic(k, f),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Explicit => "explicit",
            Engine::Symbolic => "symbolic",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explicit" => Ok(Engine::Explicit),
            "symbolic" => Ok(Engine::Symbolic),
            other => Err(format!("unknown engine {other:?}")),
        }
    }
}

/// Whether the initial state satisfies `f`.
pub fn holds(k: &KripkeStructure, f: &Ctl) -> Result<bool, CheckError> {
    Ok(explicit::eval_bits(k, f)?[k.initial_index()])
}

/// Like [`holds`] but through the symbolic engine.
pub fn holds_symbolic(k: &KripkeStructure, f: &Ctl) -> Result<bool, CheckError> {
    Ok(symbolic::eval_bits(k, f)?[k.initial_index()])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A path from the initial state; for `EF g` it ends in a `g`-state,
    /// for a failing `AG g` it ends in a `!g`-state.
    Found(Path),
    /// The formula has a supported shape but no such path exists.
    None,
    /// Only `EF g` and `AG g` are supported.
    Unsupported,
}

impl Witness {
    pub fn path(&self) -> Option<&Path> {
        match self {
            Witness::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Shortest witness path for `EF g`, or counterexample path for `AG g`.
pub fn witness(k: &KripkeStructure, f: &Ctl) -> Result<Witness, CheckError> {
    let targets = match f {
        Ctl::EF(g) => explicit::eval_bits(k, g)?,
        Ctl::AG(g) => explicit::eval_bits(k, g)?.into_iter().map(|b| !b).collect(),
        other => {
            explicit::validate_atoms(k, other)?;
            return Ok(Witness::Unsupported);
        }
    };
    Ok(match k.shortest_path_to(&targets) {
        Some(p) => Witness::Found(p),
        None => Witness::None,
    })
}
