// SPDX-License-Identifier: Apache-2.0

//! Normalization and join-tree planning.
//!
//! A query is first normalized so that equations are terminal-free and
//! free of the degenerate shapes that force variables to ε. The equations
//! must then form an acyclic hypergraph (the weak join tree); each equation
//! is decomposed into binary atoms so that the variables shared along weak
//! edges stay together, and the per-equation trees are glued along those
//! edges. Regular constraints hang off any node that holds their variable.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::decompose::{decompose_atom_with_constraints, is_acyclic_vars, terminal_free_core};
use crate::jointree::{gyo, verify_join_tree, JoinTree};
use crate::model::{BinEq, FcCq, Item, ModelError, Regex, RegularConstraint, Var};
use crate::names::NameGen;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicReason {
    #[error("the equations do not form an acyclic hypergraph")]
    WeaklyCyclic,
    #[error("the right-hand side of equation {0} is a cyclic pattern")]
    CyclicPattern(usize),
    #[error("equations {0} and {1} share more than three variables")]
    TooManyShared(usize, usize),
    #[error("equations {0} and {1} share three variables but one of them is longer than a binary atom")]
    SharedTripleTooLong(usize, usize),
    #[error("equation {0} has no decomposition keeping its shared variables together")]
    NoConstrainedDecomposition(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("query is not acyclic: {0}")]
    Cyclic(CyclicReason),
    #[error("invalid query: {0}")]
    Model(#[from] ModelError),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

/// A query whose equations are terminal-free; constraints carry the
/// terminal blocks and the variables forced to ε.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizedQuery {
    pub head: Vec<Var>,
    pub equations: Vec<(Var, Vec<Var>)>,
    pub constraints: Vec<RegularConstraint>,
    pub trace: Vec<String>,
}

impl NormalizedQuery {
    pub fn to_fccq(&self) -> FcCq {
        use crate::model::{Pattern, WordEquation};
        FcCq {
            head: self.head.clone(),
            equations: self
                .equations
                .iter()
                .map(|(l, r)| WordEquation::new(*l, Pattern::from_vars(r)))
                .collect(),
            constraints: self.constraints.clone(),
        }
    }
}

fn show_eq(lhs: Var, rhs: &[Var]) -> String {
    BinEq::new(lhs, rhs.to_vec()).to_string()
}

fn eps(var: Var) -> RegularConstraint {
    RegularConstraint { var, regex: Regex::Epsilon }
}

const DEDUP_ROUNDS: usize = 64;

pub fn normalize(q: &FcCq) -> Result<NormalizedQuery, ModelError> {
    q.validate()?;
    let mut gen = NameGen::avoiding(q.vars());
    let mut out = NormalizedQuery { head: q.head.clone(), constraints: q.constraints.clone(), ..Default::default() };

    for eq in &q.equations {
        if eq.rhs.is_empty() {
            out.trace.push(format!("{} = '' becomes {} in ''", eq.lhs, eq.lhs));
            out.constraints.push(eps(eq.lhs));
            continue;
        }
        if eq.rhs.0.iter().any(|i| matches!(i, Item::Sym(_))) {
            let (core, blocks) = terminal_free_core(&eq.rhs, &mut gen);
            for (z, word) in blocks {
                out.trace.push(format!("terminal block '{}' becomes {z}", String::from_utf8_lossy(&word)));
                out.constraints.push(RegularConstraint { var: z, regex: Regex::word(&word) });
            }
            out.equations.push((eq.lhs, core));
        } else {
            out.equations.push((eq.lhs, eq.rhs.var_seq().unwrap()));
        }
    }

    for k in 0..out.equations.len() {
        let (x, rhs) = out.equations[k].clone();
        let count = rhs.iter().filter(|&&v| v == x).count();
        if count > 0 {
            let others: BTreeSet<Var> = rhs.iter().copied().filter(|&v| v != x).collect();
            out.constraints.extend(others.iter().map(|&v| eps(v)));
            if count >= 2 {
                out.constraints.push(eps(x));
            }
            let z = gen.fresh("z");
            out.trace.push(format!("{} becomes {}", show_eq(x, &rhs), show_eq(x, &[z])));
            out.equations[k] = (x, vec![z]);
            continue;
        }
        if x != Var::UNIVERSE {
            let count = rhs.iter().filter(|v| v.is_universe()).count();
            if count > 0 {
                let others: BTreeSet<Var> = rhs.iter().copied().filter(|v| !v.is_universe()).collect();
                out.constraints.extend(others.iter().map(|&v| eps(v)));
                if count >= 2 {
                    out.constraints.push(eps(Var::UNIVERSE));
                }
                out.trace.push(format!("{} becomes {}", show_eq(x, &rhs), show_eq(Var::UNIVERSE, &[x])));
                out.equations[k] = (Var::UNIVERSE, vec![x]);
            }
        }
    }

    for _ in 0..DEDUP_ROUNDS {
        let mut changed = false;
        let mut first: HashMap<Vec<Var>, usize> = HashMap::new();
        let mut k = 0;
        while k < out.equations.len() {
            let (x, rhs) = out.equations[k].clone();
            match first.get(&rhs) {
                None => {
                    first.insert(rhs, k);
                    k += 1;
                }
                Some(&j) => {
                    let y = out.equations[j].0;
                    changed = true;
                    if y == x {
                        out.trace.push(format!("duplicate {} dropped", show_eq(x, &rhs)));
                        out.equations.remove(k);
                        continue;
                    }
                    let new = if x.is_universe() {
                        (x, vec![y])
                    } else if y.is_universe() {
                        (y, vec![x])
                    } else {
                        (x, vec![y])
                    };
                    out.trace.push(format!("{} becomes {}", show_eq(x, &rhs), show_eq(new.0, &new.1)));
                    out.equations[k] = new;
                    k += 1;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanAtom {
    Eq(BinEq),
    Constraint(RegularConstraint),
}

impl PlanAtom {
    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            PlanAtom::Eq(e) => e.vars(),
            PlanAtom::Constraint(c) => [c.var].into_iter().collect(),
        }
    }
}

impl fmt::Display for PlanAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanAtom::Eq(e) => write!(f, "{e}"),
            PlanAtom::Constraint(c) => {
                write!(f, "{} in /{}/", c.var, crate::syntax::print_regex(&c.regex, None))
            }
        }
    }
}

/// Which normalized equation or constraint a plan atom came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Equation(usize),
    Constraint(usize),
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub head: Vec<Var>,
    pub atoms: Vec<PlanAtom>,
    pub origins: Vec<Origin>,
    /// Join tree over `atoms`; node `i` is atom `i`.
    pub tree: JoinTree,
    pub normalized: NormalizedQuery,
    /// Variables introduced by decomposition.
    pub introduced: BTreeSet<Var>,
}

/// Builds a join tree over binary atoms, or explains why the query is not
/// acyclic.
pub fn plan(q: &FcCq) -> Result<Plan, PlanError> {
    let nq = normalize(q)?;
    plan_normalized(nq)
}

fn strip(s: BTreeSet<Var>) -> BTreeSet<Var> {
    s.into_iter().filter(|v| !v.is_universe()).collect()
}

pub fn plan_normalized(nq: NormalizedQuery) -> Result<Plan, PlanError> {
    let cyclic = |r| Err(PlanError::Cyclic(r));
    let eq_sets: Vec<BTreeSet<Var>> = nq
        .equations
        .iter()
        .map(|(l, r)| strip(r.iter().copied().chain([*l]).collect()))
        .collect();
    let m = nq.equations.len();

    let weak = if m == 0 {
        JoinTree { vars: vec![], edges: vec![] }
    } else {
        match gyo(&eq_sets) {
            Ok(t) => t,
            Err(_) => return cyclic(CyclicReason::WeaklyCyclic),
        }
    };
    for (i, (_, rhs)) in nq.equations.iter().enumerate() {
        if !is_acyclic_vars(rhs) {
            return cyclic(CyclicReason::CyclicPattern(i));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let shared = eq_sets[i].intersection(&eq_sets[j]).count();
            if shared > 3 {
                return cyclic(CyclicReason::TooManyShared(i, j));
            }
            let long = |k: usize| 1 + nq.equations[k].1.len() > 3;
            if shared == 3 && (long(i) || long(j)) {
                return cyclic(CyclicReason::SharedTripleTooLong(i, j));
            }
        }
    }

    let mut pairs: Vec<Vec<(Var, Var)>> = vec![Vec::new(); m];
    for &(a, b) in &weak.edges {
        let label: Vec<Var> = eq_sets[a].intersection(&eq_sets[b]).copied().collect();
        if let [x, y] = label[..] {
            for k in [a, b] {
                if !pairs[k].contains(&(x, y)) {
                    pairs[k].push((x, y));
                }
            }
        }
    }

    let mut gen = NameGen::avoiding(nq.to_fccq().vars());
    let mut atoms: Vec<PlanAtom> = Vec::new();
    let mut origins = Vec::new();
    let mut edges = Vec::new();
    let mut blocks: Vec<std::ops::Range<usize>> = Vec::new();
    let mut introduced = BTreeSet::new();
    for (i, (lhs, rhs)) in nq.equations.iter().enumerate() {
        let start = atoms.len();
        if rhs.len() <= 2 {
            atoms.push(PlanAtom::Eq(BinEq::new(*lhs, rhs.clone())));
            origins.push(Origin::Equation(i));
        } else {
            let d = decompose_atom_with_constraints(*lhs, rhs, &pairs[i], &mut gen)
                .map_err(|_| PlanError::Cyclic(CyclicReason::NoConstrainedDecomposition(i)))?;
            let local = gyo(&d.atom_var_sets()).map_err(|_| {
                PlanError::InvariantViolation(format!("decomposition of equation {i} is not acyclic"))
            })?;
            edges.extend(local.edges.iter().map(|&(a, b)| (a + start, b + start)));
            introduced.extend(d.introduced.iter().copied());
            for e in d.equations {
                atoms.push(PlanAtom::Eq(e));
                origins.push(Origin::Equation(i));
            }
        }
        blocks.push(start..atoms.len());
    }
    let node_vars = |atoms: &[PlanAtom], k: usize| strip(atoms[k].vars());
    for &(a, b) in &weak.edges {
        let label: BTreeSet<Var> = eq_sets[a].intersection(&eq_sets[b]).copied().collect();
        let find = |r: &std::ops::Range<usize>| r.clone().find(|&k| label.is_subset(&node_vars(&atoms, k)));
        match (find(&blocks[a]), find(&blocks[b])) {
            (Some(x), Some(y)) => edges.push((x, y)),
            _ => {
                return Err(PlanError::InvariantViolation(format!(
                    "no atoms of equations {a} and {b} hold their shared variables"
                )))
            }
        }
    }

    let mut holder: BTreeMap<Var, usize> = BTreeMap::new();
    for (ci, c) in nq.constraints.iter().enumerate() {
        let me = atoms.len();
        let target = if c.var.is_universe() {
            (me > 0).then_some(0)
        } else {
            (0..me).find(|&k| atoms[k].vars().contains(&c.var) && !matches!(atoms[k], PlanAtom::Constraint(_)))
                .or_else(|| holder.get(&c.var).copied())
                .or((me > 0).then_some(0))
        };
        atoms.push(PlanAtom::Constraint(c.clone()));
        origins.push(Origin::Constraint(ci));
        holder.entry(c.var).or_insert(me);
        if let Some(t) = target {
            edges.push((me, t));
        }
    }

    let tree = JoinTree { vars: (0..atoms.len()).map(|k| node_vars(&atoms, k)).collect(), edges };
    if !verify_join_tree(&tree) {
        return Err(PlanError::InvariantViolation("assembled tree is not a join tree".into()));
    }
    Ok(Plan { head: nq.head.clone(), atoms, origins, tree, normalized: nq, introduced })
}

/// Whether the planner finds a join tree for `q`.
pub fn is_acyclic_query(q: &FcCq) -> Result<bool, PlanError> {
    match plan(q) {
        Ok(_) => Ok(true),
        Err(PlanError::Cyclic(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The plan tree with all atoms of the same origin merged: node count and
/// the distinct edges between origins.
pub fn skeleton_of(p: &Plan) -> (Vec<Origin>, BTreeSet<(Origin, Origin)>) {
    let mut nodes: Vec<Origin> = Vec::new();
    for o in &p.origins {
        if !nodes.contains(o) {
            nodes.push(*o);
        }
    }
    let edges = p
        .tree
        .edges
        .iter()
        .filter_map(|&(a, b)| {
            let (x, y) = (p.origins[a], p.origins[b]);
            (x != y).then(|| (x.min(y), x.max(y)))
        })
        .collect();
    (nodes, edges)
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.normalized.trace {
            writeln!(f, "normalize: {t}")?;
        }
        for (i, a) in self.atoms.iter().enumerate() {
            let o = match self.origins[i] {
                Origin::Equation(k) => format!("eq {k}"),
                Origin::Constraint(k) => format!("constraint {k}"),
            };
            writeln!(f, "node {i}: {a}    [{o}]")?;
        }
        for (a, b) in &self.tree.edges {
            writeln!(f, "edge {a} - {b}")?;
        }
        Ok(())
    }
}
