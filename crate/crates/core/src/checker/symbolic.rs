//! BDD-based CTL evaluation.
//!
//! State `i` (in name order) is encoded in `bits` boolean variables; bit `j`
//! of the current state is variable `2j` and of the next state `2j + 1`, so
//! current and next copies are interleaved in the order. Codes `>= |S|` are
//! unused and never appear in the relation or in any state set.

use std::collections::BTreeSet;

use super::ctl::Ctl;
use super::explicit::{to_set, validate_atoms};
use super::kripke::KripkeStructure;
use super::CheckError;
use crate::bdd::{BddError, BddManager, BddRef, BddVar};
use crate::lts::StateId;

pub(crate) struct Encoding {
    pub mgr: BddManager,
    bits: u32,
    /// Characteristic function of valid current-state codes.
    valid: BddRef,
    relation: BddRef,
    next_vars: Vec<BddVar>,
    cur_to_next: Vec<(BddVar, BddVar)>,
}

fn cur(j: u32) -> BddVar {
    BddVar(2 * j)
}

fn next(j: u32) -> BddVar {
    BddVar(2 * j + 1)
}

impl Encoding {
    pub fn new(k: &KripkeStructure) -> Result<Self, BddError> {
        let n = k.len().max(1);
        let bits = usize::BITS - (n - 1).leading_zeros();
        let bits = bits.max(1);
        let mut mgr = BddManager::new(2 * bits);
        let mut valid = mgr.ff();
        let mut cur_codes = Vec::with_capacity(k.len());
        let mut next_codes = Vec::with_capacity(k.len());
        for i in 0..k.len() {
            let c = Self::code(&mut mgr, bits, i, cur)?;
            valid = mgr.or(valid, c)?;
            cur_codes.push(c);
            next_codes.push(Self::code(&mut mgr, bits, i, next)?);
        }
        let mut relation = mgr.ff();
        for (i, &from) in cur_codes.iter().enumerate() {
            for &j in k.succ_indices(i) {
                let edge = mgr.and(from, next_codes[j])?;
                relation = mgr.or(relation, edge)?;
            }
        }
        Ok(Self {
            mgr,
            bits,
            valid,
            relation,
            next_vars: (0..bits).map(next).collect(),
            cur_to_next: (0..bits).map(|j| (cur(j), next(j))).collect(),
        })
    }

    fn code(mgr: &mut BddManager, bits: u32, i: usize, var: fn(u32) -> BddVar) -> Result<BddRef, BddError> {
        let mut f = mgr.tt();
        for j in 0..bits {
            let lit = if (i >> j) & 1 == 1 {
                mgr.var(var(j))?
            } else {
                mgr.nvar(var(j))?
            };
            f = mgr.and(f, lit)?;
        }
        Ok(f)
    }

    pub fn state(&mut self, i: usize) -> Result<BddRef, BddError> {
        Self::code(&mut self.mgr, self.bits, i, cur)
    }

    /// Relational preimage: states with some successor in `set`.
    pub fn pre_exists(&mut self, set: BddRef) -> Result<BddRef, BddError> {
        let shifted = self.mgr.rename(set, &self.cur_to_next)?;
        let conj = self.mgr.and(self.relation, shifted)?;
        self.mgr.exists(conj, &self.next_vars)
    }

    pub fn decode(&self, k: &KripkeStructure, set: BddRef) -> Result<Vec<bool>, BddError> {
        let mut out = Vec::with_capacity(k.len());
        for i in 0..k.len() {
            let assignment: Vec<bool> = (0..2 * self.bits)
                .map(|v| v % 2 == 0 && (i >> (v / 2)) & 1 == 1)
                .collect();
            out.push(self.mgr.eval(set, &assignment)?);
        }
        Ok(out)
    }

    fn eval(&mut self, k: &KripkeStructure, f: &Ctl) -> Result<BddRef, BddError> {
        Ok(match f {
            Ctl::True => self.valid,
            Ctl::False => self.mgr.ff(),
            Ctl::Atom(a) => {
                let mut set = self.mgr.ff();
                for i in 0..k.len() {
                    if k.labeling_at(i).contains(a) {
                        let s = self.state(i)?;
                        set = self.mgr.or(set, s)?;
                    }
                }
                set
            }
            Ctl::Not(g) => {
                let sg = self.eval(k, g)?;
                let neg = self.mgr.not(sg)?;
                self.mgr.and(self.valid, neg)?
            }
            Ctl::And(g, h) => {
                let (a, b) = (self.eval(k, g)?, self.eval(k, h)?);
                self.mgr.and(a, b)?
            }
            Ctl::Or(g, h) => {
                let (a, b) = (self.eval(k, g)?, self.eval(k, h)?);
                self.mgr.or(a, b)?
            }
            Ctl::Implies(g, h) => {
                let (a, b) = (self.eval(k, g)?, self.eval(k, h)?);
                let imp = self.mgr.implies(a, b)?;
                self.mgr.and(self.valid, imp)?
            }
            Ctl::EX(g) => {
                let sg = self.eval(k, g)?;
                self.pre_exists(sg)?
            }
            Ctl::EU(g, h) => {
                let (sg, sh) = (self.eval(k, g)?, self.eval(k, h)?);
                let mut z = self.mgr.ff();
                loop {
                    let pre = self.pre_exists(z)?;
                    let step = self.mgr.and(sg, pre)?;
                    let next = self.mgr.or(sh, step)?;
                    if next == z {
                        break z;
                    }
                    z = next;
                }
            }
            Ctl::EG(g) => {
                let sg = self.eval(k, g)?;
                let mut z = self.valid;
                loop {
                    let pre = self.pre_exists(z)?;
                    let next = self.mgr.and(sg, pre)?;
                    if next == z {
                        break z;
                    }
                    z = next;
                }
            }
            derived => {
                let core = derived.normalize();
                self.eval(k, &core)?
            }
        })
    }
}

pub(crate) fn eval_bits(k: &KripkeStructure, f: &Ctl) -> Result<Vec<bool>, CheckError> {
    validate_atoms(k, f)?;
    let mut enc = Encoding::new(k)?;
    let set = enc.eval(k, &f.normalize())?;
    Ok(enc.decode(k, set)?)
}

/// States satisfying `f`, computed with a private [`BddManager`].
pub fn check_symbolic(k: &KripkeStructure, f: &Ctl) -> Result<BTreeSet<StateId>, CheckError> {
    Ok(to_set(k, &eval_bits(k, f)?))
}
