//! Explicit-state CTL evaluation over boolean state vectors.

use std::collections::BTreeSet;

use super::ctl::Ctl;
use super::kripke::{AtomicProposition, KripkeStructure};
use super::CheckError;
use crate::lts::StateId;

pub(crate) type Bits = Vec<bool>;

pub(crate) fn validate_atoms(k: &KripkeStructure, f: &Ctl) -> Result<(), CheckError> {
    for atom in f.atoms() {
        if let AtomicProposition::At(s) = atom {
            if k.index_of(s).is_none() {
                return Err(CheckError::UnknownAtom(atom.clone()));
            }
        }
    }
    Ok(())
}

pub(crate) fn to_set(k: &KripkeStructure, bits: &[bool]) -> BTreeSet<StateId> {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| k.states()[i].clone())
        .collect()
}

struct Explicit<'a> {
    k: &'a KripkeStructure,
    trace: Option<Vec<Bits>>,
}

impl Explicit<'_> {
    fn pre_exists(&self, target: &[bool]) -> Bits {
        (0..self.k.len())
            .map(|i| self.k.succ_indices(i).iter().any(|&j| target[j]))
            .collect()
    }

    fn record(&mut self, z: &Bits) {
        if let Some(t) = self.trace.as_mut() {
            t.push(z.clone());
        }
    }

    fn eval(&mut self, f: &Ctl) -> Bits {
        let n = self.k.len();
        match f {
            Ctl::True => vec![true; n],
            Ctl::False => vec![false; n],
            Ctl::Atom(a) => (0..n).map(|i| self.k.labeling_at(i).contains(a)).collect(),
            Ctl::Not(g) => self.eval(g).into_iter().map(|b| !b).collect(),
            Ctl::And(g, h) => zip(&self.eval(g), &self.eval(h), |a, b| a && b),
            Ctl::Or(g, h) => zip(&self.eval(g), &self.eval(h), |a, b| a || b),
            Ctl::Implies(g, h) => zip(&self.eval(g), &self.eval(h), |a, b| !a || b),
            Ctl::EX(g) => {
                let s = self.eval(g);
                self.pre_exists(&s)
            }
            Ctl::EU(g, h) => {
                let (sg, sh) = (self.eval(g), self.eval(h));
                // least fixpoint from the empty set
                let mut z = vec![false; n];
                self.record(&z);
                loop {
                    let pre = self.pre_exists(&z);
                    let next: Bits = (0..n).map(|i| sh[i] || (sg[i] && pre[i])).collect();
                    if next == z {
                        return z;
                    }
                    z = next;
                    self.record(&z);
                }
            }
            Ctl::EG(g) => {
                let sg = self.eval(g);
                // greatest fixpoint from all states
                let mut z = vec![true; n];
                self.record(&z);
                loop {
                    let pre = self.pre_exists(&z);
                    let next: Bits = (0..n).map(|i| sg[i] && pre[i]).collect();
                    if next == z {
                        return z;
                    }
                    z = next;
                    self.record(&z);
                }
            }
            derived => {
                let core = derived.normalize();
                self.eval(&core)
            }
        }
    }
}

fn zip(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Bits {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

pub(crate) fn eval_bits(k: &KripkeStructure, f: &Ctl) -> Result<Bits, CheckError> {
    validate_atoms(k, f)?;
    Ok(Explicit { k, trace: None }.eval(&f.normalize()))
}

/// States satisfying `f`, by fixpoint iteration on explicit state sets.
pub fn check_explicit(k: &KripkeStructure, f: &Ctl) -> Result<BTreeSet<StateId>, CheckError> {
    Ok(to_set(k, &eval_bits(k, f)?))
}

/// Iterates of the outermost fixpoint when `f` normalizes to an `EU` or `EG`
/// at the top, starting with the initial approximation. Inner fixpoints are
/// evaluated without tracing.
pub fn fixpoint_iterates(k: &KripkeStructure, f: &Ctl) -> Result<Option<Vec<BTreeSet<StateId>>>, CheckError> {
    validate_atoms(k, f)?;
    let core = f.normalize();
    let (Ctl::EU(..) | Ctl::EG(_)) = &core else {
        return Ok(None);
    };
    let mut inner = Explicit { k, trace: None };
    let rebuilt = match &core {
        Ctl::EU(g, h) => {
            let (sg, sh) = (inner.eval(g), inner.eval(h));
            Ctl::eu(bits_formula(k, &sg), bits_formula(k, &sh))
        }
        Ctl::EG(g) => Ctl::eg(bits_formula(k, &inner.eval(g))),
        _ => unreachable!(),
    };
    let mut outer = Explicit {
        k,
        trace: Some(Vec::new()),
    };
    outer.eval(&rebuilt);
    Ok(outer.trace.map(|t| t.iter().map(|z| to_set(k, z)).collect()))
}

/// A disjunction of `at` atoms denoting exactly the given states.
fn bits_formula(k: &KripkeStructure, bits: &[bool]) -> Ctl {
    to_set(k, bits)
        .into_iter()
        .map(Ctl::at)
        .reduce(Ctl::or)
        .unwrap_or(Ctl::False)
}
