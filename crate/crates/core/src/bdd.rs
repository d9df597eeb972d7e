//! Reduced ordered binary decision diagrams.
//!
//! A [`BddManager`] owns every node in a hash-consed arena. Nodes are never
//! freed; a manager is dropped whole. Variable order is static: variable `i`
//! is tested before variable `j` whenever `i < j`. No complement edges.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

static NEXT_MANAGER: AtomicU32 = AtomicU32::new(0);

const TERMINAL_VAR: u32 = u32::MAX;
const FALSE_INDEX: u32 = 0;
const TRUE_INDEX: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BddVar(pub u32);

impl BddVar {
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Handle to a node of one manager. Two handles from the same manager are
/// equal iff they denote the same boolean function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BddRef {
    manager: u32,
    index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BddError {
    #[error("variable {var} out of range (manager has {count} variables)")]
    VarOutOfRange { var: u32, count: u32 },
    #[error("handle belongs to a different manager")]
    ManagerMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum BinOp {
    And,
    Or,
    Xor,
    Implies,
}

/// Binary connectives accepted by [`BddManager::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    And,
    Or,
    Xor,
    Implies,
}

impl From<Op> for BinOp {
    fn from(op: Op) -> Self {
        match op {
            Op::And => BinOp::And,
            Op::Or => BinOp::Or,
            Op::Xor => BinOp::Xor,
            Op::Implies => BinOp::Implies,
        }
    }
}

impl BinOp {
    fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Xor => a != b,
            BinOp::Implies => !a || b,
        }
    }

    fn commutative(self) -> bool {
        !matches!(self, BinOp::Implies)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: u32,
    high: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    Binary(BinOp, u32, u32),
    Not(u32),
    Ite(u32, u32, u32),
}

/// A structural problem found by [`BddManager::check_invariants`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Redundant { node: u32 },
    Duplicate { node: u32, other: u32 },
    Misordered { node: u32, child: u32 },
}

pub struct BddManager {
    id: u32,
    var_count: u32,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    cache: HashMap<CacheKey, u32>,
}

impl BddManager {
    pub fn new(var_count: u32) -> Self {
        let terminal = |v| Node {
            var: TERMINAL_VAR,
            low: v,
            high: v,
        };
        Self {
            id: NEXT_MANAGER.fetch_add(1, Ordering::Relaxed),
            var_count,
            nodes: vec![terminal(FALSE_INDEX), terminal(TRUE_INDEX)],
            unique: HashMap::new(),
            cache: HashMap::new(),
        }
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    /// Number of nodes allocated, terminals included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn handle(&self, index: u32) -> BddRef {
        BddRef {
            manager: self.id,
            index,
        }
    }

    fn own(&self, f: BddRef) -> Result<u32, BddError> {
        if f.manager == self.id {
            Ok(f.index)
        } else {
            Err(BddError::ManagerMismatch)
        }
    }

    fn check_var(&self, v: BddVar) -> Result<(), BddError> {
        if v.0 < self.var_count {
            Ok(())
        } else {
            Err(BddError::VarOutOfRange {
                var: v.0,
                count: self.var_count,
            })
        }
    }

    pub fn constant(&self, value: bool) -> BddRef {
        self.handle(if value { TRUE_INDEX } else { FALSE_INDEX })
    }

    pub fn tt(&self) -> BddRef {
        self.constant(true)
    }

    pub fn ff(&self) -> BddRef {
        self.constant(false)
    }

    pub fn var(&mut self, v: BddVar) -> Result<BddRef, BddError> {
        self.check_var(v)?;
        let i = self.mk(v.0, FALSE_INDEX, TRUE_INDEX);
        Ok(self.handle(i))
    }

    /// Negated projection `!v`.
    pub fn nvar(&mut self, v: BddVar) -> Result<BddRef, BddError> {
        self.check_var(v)?;
        let i = self.mk(v.0, TRUE_INDEX, FALSE_INDEX);
        Ok(self.handle(i))
    }

    pub fn is_false(&self, f: BddRef) -> bool {
        f.manager == self.id && f.index == FALSE_INDEX
    }

    pub fn is_true(&self, f: BddRef) -> bool {
        f.manager == self.id && f.index == TRUE_INDEX
    }

    fn mk(&mut self, var: u32, low: u32, high: u32) -> u32 {
        if low == high {
            return low;
        }
        let node = Node { var, low, high };
        if let Some(&i) = self.unique.get(&node) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, i);
        i
    }

    fn var_of(&self, i: u32) -> u32 {
        self.nodes[i as usize].var
    }

    /// Cofactors of `i` with respect to variable `var` (which must not
    /// exceed the top variable of `i`).
    fn cofactors(&self, i: u32, var: u32) -> (u32, u32) {
        let n = self.nodes[i as usize];
        if n.var == var {
            (n.low, n.high)
        } else {
            (i, i)
        }
    }

    pub fn apply(&mut self, op: Op, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        let (a, b) = (self.own(f)?, self.own(g)?);
        let r = self.apply_rec(op.into(), a, b);
        Ok(self.handle(r))
    }

    pub fn and(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(Op::And, f, g)
    }

    pub fn or(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(Op::Or, f, g)
    }

    pub fn xor(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(Op::Xor, f, g)
    }

    pub fn implies(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(Op::Implies, f, g)
    }

    fn apply_rec(&mut self, op: BinOp, a: u32, b: u32) -> u32 {
        if a <= TRUE_INDEX && b <= TRUE_INDEX {
            return op.eval(a == TRUE_INDEX, b == TRUE_INDEX) as u32;
        }
        match (op, a, b) {
            (BinOp::And, FALSE_INDEX, _) | (BinOp::And, _, FALSE_INDEX) => return FALSE_INDEX,
            (BinOp::And, TRUE_INDEX, x) | (BinOp::And, x, TRUE_INDEX) => return x,
            (BinOp::Or, TRUE_INDEX, _) | (BinOp::Or, _, TRUE_INDEX) => return TRUE_INDEX,
            (BinOp::Or, FALSE_INDEX, x) | (BinOp::Or, x, FALSE_INDEX) => return x,
            (BinOp::Xor, FALSE_INDEX, x) | (BinOp::Xor, x, FALSE_INDEX) => return x,
            (BinOp::Implies, FALSE_INDEX, _) | (BinOp::Implies, _, TRUE_INDEX) => return TRUE_INDEX,
            (BinOp::Implies, TRUE_INDEX, x) => return x,
            _ => {}
        }
        if a == b {
            match op {
                BinOp::And | BinOp::Or => return a,
                BinOp::Xor => return FALSE_INDEX,
                BinOp::Implies => return TRUE_INDEX,
            }
        }
        let (a, b) = if op.commutative() && a > b { (b, a) } else { (a, b) };
        let key = CacheKey::Binary(op, a, b);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let top = self.var_of(a).min(self.var_of(b));
        let (a0, a1) = self.cofactors(a, top);
        let (b0, b1) = self.cofactors(b, top);
        let low = self.apply_rec(op, a0, b0);
        let high = self.apply_rec(op, a1, b1);
        let r = self.mk(top, low, high);
        self.cache.insert(key, r);
        r
    }

    pub fn not(&mut self, f: BddRef) -> Result<BddRef, BddError> {
        let a = self.own(f)?;
        let r = self.not_rec(a);
        Ok(self.handle(r))
    }

    fn not_rec(&mut self, a: u32) -> u32 {
        if a <= TRUE_INDEX {
            return 1 - a;
        }
        let key = CacheKey::Not(a);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let n = self.nodes[a as usize];
        let low = self.not_rec(n.low);
        let high = self.not_rec(n.high);
        let r = self.mk(n.var, low, high);
        self.cache.insert(key, r);
        r
    }

    /// If-then-else: `(f & g) | (!f & h)`.
    pub fn ite(&mut self, f: BddRef, g: BddRef, h: BddRef) -> Result<BddRef, BddError> {
        let (a, b, c) = (self.own(f)?, self.own(g)?, self.own(h)?);
        let r = self.ite_rec(a, b, c);
        Ok(self.handle(r))
    }

    fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> u32 {
        if f == TRUE_INDEX {
            return g;
        }
        if f == FALSE_INDEX {
            return h;
        }
        if g == h {
            return g;
        }
        if g == TRUE_INDEX && h == FALSE_INDEX {
            return f;
        }
        let key = CacheKey::Ite(f, g, h);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let top = self.var_of(f).min(self.var_of(g)).min(self.var_of(h));
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let (h0, h1) = self.cofactors(h, top);
        let low = self.ite_rec(f0, g0, h0);
        let high = self.ite_rec(f1, g1, h1);
        let r = self.mk(top, low, high);
        self.cache.insert(key, r);
        r
    }

    /// Cofactor `f[v := value]`.
    pub fn restrict(&mut self, f: BddRef, v: BddVar, value: bool) -> Result<BddRef, BddError> {
        let a = self.own(f)?;
        self.check_var(v)?;
        let mut memo = HashMap::new();
        let r = self.restrict_rec(a, v.0, value, &mut memo);
        Ok(self.handle(r))
    }

    fn restrict_rec(&mut self, a: u32, var: u32, value: bool, memo: &mut HashMap<u32, u32>) -> u32 {
        let n = self.nodes[a as usize];
        if n.var > var {
            return a;
        }
        if n.var == var {
            return if value { n.high } else { n.low };
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let low = self.restrict_rec(n.low, var, value, memo);
        let high = self.restrict_rec(n.high, var, value, memo);
        let r = self.mk(n.var, low, high);
        memo.insert(a, r);
        r
    }

    /// Existential quantification over `vars`.
    pub fn exists(&mut self, f: BddRef, vars: &[BddVar]) -> Result<BddRef, BddError> {
        let a = self.own(f)?;
        for &v in vars {
            self.check_var(v)?;
        }
        let set: BTreeSet<u32> = vars.iter().map(|v| v.0).collect();
        let mut memo = HashMap::new();
        let r = self.exists_rec(a, &set, &mut memo);
        Ok(self.handle(r))
    }

    fn exists_rec(&mut self, a: u32, vars: &BTreeSet<u32>, memo: &mut HashMap<u32, u32>) -> u32 {
        if a <= TRUE_INDEX {
            return a;
        }
        let n = self.nodes[a as usize];
        match vars.iter().next_back() {
            Some(&last) if n.var <= last => {}
            _ => return a,
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let low = self.exists_rec(n.low, vars, memo);
        let high = self.exists_rec(n.high, vars, memo);
        let r = if vars.contains(&n.var) {
            self.apply_rec(BinOp::Or, low, high)
        } else {
            self.mk(n.var, low, high)
        };
        memo.insert(a, r);
        r
    }

    /// Substitutes variables according to `pairs` (`from -> to`). Each
    /// source variable is replaced by the projection of its target.
    pub fn rename(&mut self, f: BddRef, pairs: &[(BddVar, BddVar)]) -> Result<BddRef, BddError> {
        let a = self.own(f)?;
        let mut map = HashMap::new();
        for &(from, to) in pairs {
            self.check_var(from)?;
            self.check_var(to)?;
            map.insert(from.0, to.0);
        }
        let mut memo = HashMap::new();
        let r = self.rename_rec(a, &map, &mut memo);
        Ok(self.handle(r))
    }

    fn rename_rec(&mut self, a: u32, map: &HashMap<u32, u32>, memo: &mut HashMap<u32, u32>) -> u32 {
        if a <= TRUE_INDEX {
            return a;
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        let low = self.rename_rec(n.low, map, memo);
        let high = self.rename_rec(n.high, map, memo);
        let var = map.get(&n.var).copied().unwrap_or(n.var);
        let proj = self.mk(var, FALSE_INDEX, TRUE_INDEX);
        let r = self.ite_rec(proj, high, low);
        memo.insert(a, r);
        r
    }

    /// Evaluates `f` under `assignment[i]` for variable `i`; missing
    /// entries read as false.
    pub fn eval(&self, f: BddRef, assignment: &[bool]) -> Result<bool, BddError> {
        let mut i = self.own(f)?;
        while i > TRUE_INDEX {
            let n = self.nodes[i as usize];
            let bit = assignment.get(n.var as usize).copied().unwrap_or(false);
            i = if bit { n.high } else { n.low };
        }
        Ok(i == TRUE_INDEX)
    }

    /// Highest variable index tested in `f`, if any.
    pub fn max_var(&self, f: BddRef) -> Result<Option<u32>, BddError> {
        let root = self.own(f)?;
        Ok(self.reachable(root).into_iter().filter(|&i| i > TRUE_INDEX).map(|i| self.var_of(i)).max())
    }

    fn reachable(&self, root: u32) -> BTreeSet<u32> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            if !seen.insert(i) || i <= TRUE_INDEX {
                continue;
            }
            let n = self.nodes[i as usize];
            stack.push(n.low);
            stack.push(n.high);
        }
        seen
    }

    /// Number of decision (non-terminal) nodes reachable from `f`.
    pub fn size(&self, f: BddRef) -> Result<usize, BddError> {
        let root = self.own(f)?;
        Ok(self.reachable(root).into_iter().filter(|&i| i > TRUE_INDEX).count())
    }

    /// Number of satisfying assignments over variables `0..n_vars`.
    pub fn sat_count(&self, f: BddRef, n_vars: u32) -> Result<u128, BddError> {
        let root = self.own(f)?;
        if let Some(top) = self.max_var(f)? {
            if top >= n_vars {
                return Err(BddError::VarOutOfRange { var: top, count: n_vars });
            }
        }
        if n_vars > 127 {
            return Err(BddError::VarOutOfRange { var: n_vars - 1, count: 127 });
        }
        let mut memo = HashMap::new();
        let level = |s: &Self, i: u32| if i <= TRUE_INDEX { n_vars } else { s.var_of(i) };
        // count(i) = satisfying assignments of the variables from level(i) on.
        fn count(
            s: &BddManager,
            i: u32,
            level: &dyn Fn(&BddManager, u32) -> u32,
            memo: &mut HashMap<u32, u128>,
        ) -> u128 {
            if i == FALSE_INDEX {
                return 0;
            }
            if i == TRUE_INDEX {
                return 1;
            }
            if let Some(&c) = memo.get(&i) {
                return c;
            }
            let n = s.nodes[i as usize];
            let lo = count(s, n.low, level, memo) << (level(s, n.low) - n.var - 1);
            let hi = count(s, n.high, level, memo) << (level(s, n.high) - n.var - 1);
            memo.insert(i, lo + hi);
            lo + hi
        }
        Ok(count(self, root, &level, &mut memo) << level(self, root))
    }

    /// Some satisfying assignment over all manager variables (untested
    /// variables set to false), or `None` for the constant false.
    pub fn pick_one(&self, f: BddRef) -> Result<Option<Vec<bool>>, BddError> {
        let mut i = self.own(f)?;
        if i == FALSE_INDEX {
            return Ok(None);
        }
        let mut out = vec![false; self.var_count as usize];
        while i > TRUE_INDEX {
            let n = self.nodes[i as usize];
            if n.low != FALSE_INDEX {
                i = n.low;
            } else {
                out[n.var as usize] = true;
                i = n.high;
            }
        }
        Ok(Some(out))
    }

    /// Scans every node for reducedness, uniqueness and ordering.
    pub fn check_invariants(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen: HashMap<Node, u32> = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate().skip(2) {
            let i = i as u32;
            if n.low == n.high {
                out.push(Violation::Redundant { node: i });
            }
            if let Some(&other) = seen.get(n) {
                out.push(Violation::Duplicate { node: i, other });
            } else {
                seen.insert(*n, i);
            }
            for child in [n.low, n.high] {
                if self.var_of(child) <= n.var {
                    out.push(Violation::Misordered { node: i, child });
                }
            }
        }
        if self.unique.len() != self.nodes.len() - 2 {
            out.push(Violation::Duplicate {
                node: self.nodes.len() as u32,
                other: self.unique.len() as u32,
            });
        }
        out
    }

    /// Debug rendering of `f` in the DOT language.
    pub fn to_dot(&self, f: BddRef, var_names: Option<&[String]>) -> Result<String, BddError> {
        let root = self.own(f)?;
        let name = |v: u32| match var_names.and_then(|n| n.get(v as usize)) {
            Some(n) => n.clone(),
            None => format!("x{v}"),
        };
        let mut out = String::from("digraph bdd {\n");
        let nodes = self.reachable(root);
        for &i in &nodes {
            match i {
                FALSE_INDEX => out.push_str("  n0 [shape=box, label=\"0\"];\n"),
                TRUE_INDEX => out.push_str("  n1 [shape=box, label=\"1\"];\n"),
                _ => {
                    let n = self.nodes[i as usize];
                    let _ = writeln!(out, "  n{i} [shape=circle, label=\"{}\"];", name(n.var));
                }
            }
        }
        for &i in nodes.iter().filter(|&&i| i > TRUE_INDEX) {
            let n = self.nodes[i as usize];
            let _ = writeln!(out, "  n{i} -> n{} [style=dashed];", n.low);
            let _ = writeln!(out, "  n{i} -> n{};", n.high);
        }
        out.push_str("}\n");
        Ok(out)
    }
}
