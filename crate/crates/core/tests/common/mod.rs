//! Seeded generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use avmc::bdd::{BddError, BddManager, BddRef, BddVar};
use avmc::checker::{AtomicProposition, Ctl, KripkeStructure};
use avmc::coupled::Approach;
use avmc::lts::{Behavior, Label, Path, StateId, Transition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sid(name: &str) -> StateId {
    StateId::new(name).unwrap()
}

pub fn lbl(name: &str) -> Label {
    Label::new(name).unwrap()
}

pub fn state(i: usize) -> StateId {
    StateId::new(format!("S{i}")).unwrap()
}

pub fn set(names: &[&str]) -> BTreeSet<StateId> {
    names.iter().map(|n| sid(n)).collect()
}

// ---------------------------------------------------------------- behaviors

/// Random behavior over `S0..S{n-1}` with `1..=max_states` states, labels
/// drawn from `a`, `b`, `c`, and edge density around `density`.
pub fn random_behavior(rng: &mut impl Rng, max_states: usize, density: f64) -> Behavior {
    let n = rng.gen_range(1..=max_states);
    let labels = ["a", "b", "c"];
    let mut transitions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in labels {
                if rng.gen_bool(density / labels.len() as f64) {
                    transitions.push(Transition::new(state(i), lbl(l), state(j)));
                }
            }
        }
    }
    let finals: Vec<StateId> = (0..n).filter(|_| rng.gen_bool(0.2)).map(state).collect();
    Behavior::from_transitions((0..n).map(state), state(0), transitions, finals).unwrap()
}

/// Every simple path from `from` to `to`, found by trying each ordering of
/// each subset of the other states and each label choice per step.
pub fn naive_simple_paths(b: &Behavior, from: &StateId, to: &StateId) -> Vec<Path> {
    let others: Vec<&StateId> = b.states().iter().filter(|s| *s != from).collect();
    let mut out = Vec::new();
    let mut seqs: Vec<Vec<StateId>> = vec![vec![from.clone()]];
    // grow all repetition-free state sequences starting at `from`
    let mut frontier = seqs.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for seq in &frontier {
            for s in &others {
                if !seq.contains(s) {
                    let mut longer = seq.clone();
                    longer.push((*s).clone());
                    next.push(longer);
                }
            }
        }
        seqs.extend(next.iter().cloned());
        frontier = next;
    }
    for seq in seqs {
        if seq.last() != Some(to) {
            continue;
        }
        // a path that reaches `to` early is not a separate path ending at `to`
        if seq[..seq.len() - 1].contains(to) {
            continue;
        }
        let mut label_choices: Vec<Vec<Label>> = vec![vec![]];
        for w in seq.windows(2) {
            let ls: Vec<Label> = b
                .labels()
                .iter()
                .filter(|l| b.contains_transition(&w[0], l, &w[1]))
                .cloned()
                .collect();
            label_choices = label_choices
                .into_iter()
                .flat_map(|prefix| {
                    ls.iter().map(move |l| {
                        let mut p = prefix.clone();
                        p.push(l.clone());
                        p
                    })
                })
                .collect();
        }
        for labels in label_choices {
            out.push(Path::new(seq.clone(), labels).unwrap());
        }
    }
    out.sort_by(|a, b| (a.labels(), a.states()).cmp(&(b.labels(), b.states())));
    out
}

/// Reachability by repeated relaxation over the transition list.
pub fn naive_reachable(b: &Behavior) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([b.initial().clone()]);
    loop {
        let before = seen.len();
        for t in b.transitions() {
            if seen.contains(&t.source) {
                seen.insert(t.target.clone());
            }
        }
        if seen.len() == before {
            return seen;
        }
    }
}

// ---------------------------------------------------------------- BDD

#[derive(Debug, Clone)]
pub enum BoolExpr {
    Const(bool),
    Var(u32),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
    Ite(Box<BoolExpr>, Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn eval(&self, a: &[bool]) -> bool {
        match self {
            BoolExpr::Const(c) => *c,
            BoolExpr::Var(v) => a[*v as usize],
            BoolExpr::Not(f) => !f.eval(a),
            BoolExpr::And(f, g) => f.eval(a) && g.eval(a),
            BoolExpr::Or(f, g) => f.eval(a) || g.eval(a),
            BoolExpr::Xor(f, g) => f.eval(a) != g.eval(a),
            BoolExpr::Implies(f, g) => !f.eval(a) || g.eval(a),
            BoolExpr::Ite(c, t, e) => {
                if c.eval(a) {
                    t.eval(a)
                } else {
                    e.eval(a)
                }
            }
        }
    }

    pub fn build(&self, m: &mut BddManager) -> Result<BddRef, BddError> {
        Ok(match self {
            BoolExpr::Const(c) => m.constant(*c),
            BoolExpr::Var(v) => m.var(BddVar(*v))?,
            BoolExpr::Not(f) => {
                let f = f.build(m)?;
                m.not(f)?
            }
            BoolExpr::And(f, g) => {
                let (f, g) = (f.build(m)?, g.build(m)?);
                m.and(f, g)?
            }
            BoolExpr::Or(f, g) => {
                let (f, g) = (f.build(m)?, g.build(m)?);
                m.or(f, g)?
            }
            BoolExpr::Xor(f, g) => {
                let (f, g) = (f.build(m)?, g.build(m)?);
                m.xor(f, g)?
            }
            BoolExpr::Implies(f, g) => {
                let (f, g) = (f.build(m)?, g.build(m)?);
                m.implies(f, g)?
            }
            BoolExpr::Ite(c, t, e) => {
                let (c, t, e) = (c.build(m)?, t.build(m)?, e.build(m)?);
                m.ite(c, t, e)?
            }
        })
    }

    /// Truth table as a bit vector: bit `i` is the value under the
    /// assignment whose variable `v` is bit `v` of `i`.
    pub fn truth_table(&self, n_vars: u32) -> Vec<bool> {
        (0..1u64 << n_vars).map(|i| self.eval(&assignment(i, n_vars))).collect()
    }
}

pub fn assignment(i: u64, n_vars: u32) -> Vec<bool> {
    (0..n_vars).map(|v| i >> v & 1 == 1).collect()
}

pub fn random_bool_expr(rng: &mut impl Rng, n_vars: u32, depth: u32) -> BoolExpr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.1) {
            BoolExpr::Const(rng.gen())
        } else {
            BoolExpr::Var(rng.gen_range(0..n_vars))
        };
    }
    let op = rng.gen_range(0..7);
    let mut sub = || Box::new(random_bool_expr(rng, n_vars, depth - 1));
    match op {
        0 => BoolExpr::Not(sub()),
        1 => BoolExpr::And(sub(), sub()),
        2 => BoolExpr::Or(sub(), sub()),
        3 => BoolExpr::Xor(sub(), sub()),
        4 => BoolExpr::Implies(sub(), sub()),
        5 => BoolExpr::Ite(sub(), sub(), sub()),
        _ => BoolExpr::Not(sub()),
    }
}

// ---------------------------------------------------------------- Kripke / CTL

/// Random structure with `1..=max_states` states; some states get no
/// successors (and are totalized), some carry `in(A)` labels.
pub fn random_kripke(rng: &mut impl Rng, max_states: usize) -> KripkeStructure {
    let n = rng.gen_range(1..=max_states);
    let density = rng.gen_range(0.1..0.5);
    let mut relation = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                relation.push((state(i), state(j)));
            }
        }
    }
    let mut labels: BTreeMap<StateId, BTreeSet<AtomicProposition>> = BTreeMap::new();
    for i in 0..n {
        if let Some(a) = Approach::ALL.choose(rng) {
            if rng.gen_bool(0.5) {
                labels.entry(state(i)).or_default().insert(AtomicProposition::In(*a));
            }
        }
    }
    let initial = state(rng.gen_range(0..n));
    KripkeStructure::from_relation((0..n).map(state), initial, relation, labels)
}

pub fn random_atom(rng: &mut impl Rng, n_states: usize) -> Ctl {
    if rng.gen_bool(0.7) {
        Ctl::at(state(rng.gen_range(0..n_states)))
    } else {
        Ctl::within(*Approach::ALL.choose(rng).unwrap())
    }
}

/// Random formula of depth at most `depth` over atoms of `n_states` states.
pub fn random_ctl(rng: &mut impl Rng, n_states: usize, depth: usize) -> Ctl {
    if depth <= 1 || rng.gen_bool(0.15) {
        return match rng.gen_range(0..10) {
            0 => Ctl::True,
            1 => Ctl::False,
            _ => random_atom(rng, n_states),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..14) {
        0 => Ctl::not(random_ctl(rng, n_states, d)),
        1 => Ctl::and(random_ctl(rng, n_states, d), random_ctl(rng, n_states, d)),
        2 => Ctl::or(random_ctl(rng, n_states, d), random_ctl(rng, n_states, d)),
        3 => Ctl::implies(random_ctl(rng, n_states, d), random_ctl(rng, n_states, d)),
        4 => Ctl::ex(random_ctl(rng, n_states, d)),
        5 => Ctl::ef(random_ctl(rng, n_states, d)),
        6 => Ctl::eg(random_ctl(rng, n_states, d)),
        7 => Ctl::eu(random_ctl(rng, n_states, d), random_ctl(rng, n_states, d)),
        8 => Ctl::ax(random_ctl(rng, n_states, d)),
        9 => Ctl::af(random_ctl(rng, n_states, d)),
        10 => Ctl::ag(random_ctl(rng, n_states, d)),
        11 => Ctl::au(random_ctl(rng, n_states, d), random_ctl(rng, n_states, d)),
        _ => random_atom(rng, n_states),
    }
}

/// CTL semantics computed directly from the definitions on the un-normalized
/// formula, with graph searches instead of fixpoint iteration.
pub fn ctl_oracle(k: &KripkeStructure, f: &Ctl) -> BTreeSet<StateId> {
    let all: BTreeSet<StateId> = k.states().iter().cloned().collect();
    let succ = |s: &StateId| k.successors(s);
    match f {
        Ctl::True => all,
        Ctl::False => BTreeSet::new(),
        Ctl::Atom(a) => all
            .into_iter()
            .filter(|s| k.labeling(s).unwrap().contains(a))
            .collect(),
        Ctl::Not(g) => all.difference(&ctl_oracle(k, g)).cloned().collect(),
        Ctl::And(g, h) => ctl_oracle(k, g).intersection(&ctl_oracle(k, h)).cloned().collect(),
        Ctl::Or(g, h) => ctl_oracle(k, g).union(&ctl_oracle(k, h)).cloned().collect(),
        Ctl::Implies(g, h) => ctl_oracle(k, &Ctl::or(Ctl::not((**g).clone()), (**h).clone())),
        Ctl::EX(g) => {
            let sg = ctl_oracle(k, g);
            all.into_iter().filter(|s| succ(s).iter().any(|t| sg.contains(t))).collect()
        }
        Ctl::AX(g) => {
            let sg = ctl_oracle(k, g);
            all.into_iter().filter(|s| succ(s).iter().all(|t| sg.contains(t))).collect()
        }
        Ctl::EF(g) => ctl_oracle(k, &Ctl::eu(Ctl::True, (**g).clone())),
        Ctl::EU(g, h) => {
            // s satisfies E[g U h] iff some h-state is reachable through g-states
            let (sg, sh) = (ctl_oracle(k, g), ctl_oracle(k, h));
            all.into_iter()
                .filter(|s| {
                    let mut stack = vec![s.clone()];
                    let mut seen = BTreeSet::new();
                    while let Some(x) = stack.pop() {
                        if sh.contains(&x) {
                            return true;
                        }
                        if !sg.contains(&x) || !seen.insert(x.clone()) {
                            continue;
                        }
                        stack.extend(succ(&x));
                    }
                    false
                })
                .collect()
        }
        Ctl::EG(g) => {
            // g-path from s into a cycle lying entirely inside g-states
            let sg = ctl_oracle(k, g);
            let within = |start: &StateId| -> BTreeSet<StateId> {
                let mut seen = BTreeSet::new();
                let mut stack: Vec<StateId> = succ(start).into_iter().filter(|t| sg.contains(t)).collect();
                while let Some(x) = stack.pop() {
                    if seen.insert(x.clone()) {
                        stack.extend(succ(&x).into_iter().filter(|t| sg.contains(t)));
                    }
                }
                seen
            };
            let on_cycle: BTreeSet<StateId> = sg.iter().filter(|s| within(s).contains(*s)).cloned().collect();
            sg.iter()
                .filter(|s| on_cycle.contains(*s) || within(s).iter().any(|t| on_cycle.contains(t)))
                .cloned()
                .collect()
        }
        Ctl::AF(g) => ctl_oracle(k, &Ctl::not(Ctl::eg(Ctl::not((**g).clone())))),
        Ctl::AG(g) => ctl_oracle(k, &Ctl::not(Ctl::ef(Ctl::not((**g).clone())))),
        Ctl::AU(g, h) => {
            // A[g U h] = !(E[!h U (!g & !h)] | EG !h)
            let (g, h) = ((**g).clone(), (**h).clone());
            let bad = Ctl::or(
                Ctl::eu(Ctl::not(h.clone()), Ctl::and(Ctl::not(g), Ctl::not(h.clone()))),
                Ctl::eg(Ctl::not(h)),
            );
            ctl_oracle(k, &Ctl::not(bad))
        }
    }
}

// ---------------------------------------------------------------- model text

/// Random well-formed `.avm` source: two small behaviors, a total mapping
/// (each control state mapped to a preventive path or exempt), disjoint
/// approaches, and a few specs. Mapped paths need not be valid.
pub fn random_model_text(rng: &mut impl Rng) -> String {
    let np = rng.gen_range(1..=5);
    let nc = rng.gen_range(1..=5);
    let p = |i: usize| format!("P{i}");
    let c = |i: usize| format!("C{i}");
    let mut out = format!("model m{}\n", rng.gen_range(0..100));
    for (role, n, name) in [("preventive", np, &p as &dyn Fn(usize) -> String), ("control", nc, &c)] {
        out.push_str(&format!("behavior {role} {{\n  initial {}\n", name(0)));
        let finals: Vec<String> = (1..n).filter(|_| rng.gen_bool(0.3)).map(name).collect();
        if !finals.is_empty() {
            out.push_str(&format!("  final {}\n", finals.join(" ")));
        }
        if n > 1 {
            let rest: Vec<String> = (1..n).map(name).filter(|s| !finals.contains(s)).collect();
            if !rest.is_empty() {
                out.push_str(&format!("  state {}\n", rest.join(" ")));
            }
        }
        let mut seen = BTreeSet::new();
        for _ in 0..rng.gen_range(0..2 * n) {
            let (a, b, l) = (rng.gen_range(0..n), rng.gen_range(0..n), ["go", "stop", "next"].choose(rng).unwrap());
            if !seen.insert((a, b, *l)) {
                continue;
            }
            out.push_str(&format!("  {} -{l}-> {}", name(a), name(b)));
            if rng.gen_bool(0.3) {
                out.push_str(&format!(" [ev{}]", rng.gen_range(0..3)));
            }
            if rng.gen_bool(0.3) {
                out.push_str(&format!(" /{}", Approach::ALL.choose(rng).unwrap()));
            }
            out.push('\n');
        }
        out.push_str("}\n");
    }
    let mut used: BTreeSet<String> = BTreeSet::new();
    for a in Approach::ALL {
        let mut lines = Vec::new();
        for (role, n, prefix) in [("control", nc, "C"), ("preventive", np, "P")] {
            let members: Vec<String> = (0..n)
                .map(|i| format!("{prefix}{i}"))
                .filter(|s| !used.contains(s) && rng.gen_bool(0.25))
                .collect();
            used.extend(members.iter().cloned());
            if !members.is_empty() {
                lines.push(format!("  {role}: {}\n", members.join(" ")));
            }
        }
        if !lines.is_empty() {
            out.push_str(&format!("approach {a} {{\n{}}}\n", lines.concat()));
        }
    }
    for i in 0..nc {
        if rng.gen_bool(0.2) {
            out.push_str(&format!("exempt {}\n", c(i)));
            continue;
        }
        let mut paths = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let mut path = p(rng.gen_range(0..np));
            for _ in 0..rng.gen_range(0..3) {
                path.push_str(&format!(" -go-> {}", p(rng.gen_range(0..np))));
            }
            paths.push(path);
        }
        out.push_str(&format!("map {} => {}\n", c(i), paths.join(", ")));
    }
    for i in 0..rng.gen_range(0..3) {
        let (role, n) = if rng.gen_bool(0.5) { ("control", nc) } else { ("preventive", np) };
        let f = random_ctl(rng, n, 3).to_string();
        let f = f.replace("at(S", if role == "control" { "at(C" } else { "at(P" });
        let expect = ["", " expect holds", " expect fails"].choose(rng).unwrap();
        out.push_str(&format!("spec s{i} on {role}{expect}: {f}\n"));
    }
    out
}
