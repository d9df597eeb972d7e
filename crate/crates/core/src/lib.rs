//! Verification toolkit for coupled behavioral models.
//!
//! A model couples a *preventive* behavior (the security rules) with a
//! *control* behavior (the execution flow), links them with a mapping from
//! control states to preventive paths, and partitions states of both into
//! four approaches: Protection, Detection, Identification and Removal.
//!
//! - [`lts`]: labeled transition systems, paths, reachability, deadlocks.
//! - [`coupled`]: the coupled model and its mapping, alignment and
//!   synchronization checks.
//! - [`bdd`]: reduced ordered BDDs.
//! - [`checker`]: Kripke conversion and CTL checking, explicit and symbolic.
//! - [`dsl`]: the `.avm` text format and the bundled antivirus model.
//! - [`export`]: SMV and DOT output.
//! - [`cli`]: the `avmc` command line.

pub mod bdd;
pub mod checker;
pub mod cli;
pub mod coupled;
pub mod dsl;
pub mod export;
pub mod lts;
pub mod report;
