// SPDX-License-Identifier: Apache-2.0

//! Relations over factor ids, semi-join reduction and enumeration.
//!
//! Every variable ranges over the distinct factors of the word. Each plan
//! atom is materialized as a relation over its variables (the universe
//! variable is pinned to the whole word and not stored), the join tree is
//! fully reduced, and results are produced by backtracking along the tree.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::index::{FactorId, IndexError, WordIndex};
use crate::model::{Alphabet, BinEq, FcCq, RegularConstraint, Var};
use crate::names::NameGen;
use crate::planner::{normalize, plan, Plan, PlanAtom, PlanError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("query has regular constraints")]
    HasConstraints,
    #[error("query is not Boolean")]
    NotBoolean,
}

/// A set of rows over factor ids, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    schema: Vec<Var>,
    data: Vec<FactorId>,
    len: usize,
}

impl Relation {
    /// Rows are sorted and deduplicated.
    pub fn from_rows<I: IntoIterator<Item = Vec<FactorId>>>(schema: Vec<Var>, rows: I) -> Relation {
        let mut rows: Vec<Vec<FactorId>> = rows.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == schema.len()));
        rows.sort_unstable();
        rows.dedup();
        let len = rows.len();
        Relation { schema, data: rows.concat(), len }
    }

    fn from_flat(schema: Vec<Var>, data: Vec<FactorId>, len: usize) -> Relation {
        Relation { schema, data, len }
    }

    pub fn schema(&self) -> &[Var] {
        &self.schema
    }

    pub fn arity(&self) -> usize {
        self.schema.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn row(&self, i: usize) -> &[FactorId] {
        let a = self.arity();
        &self.data[i * a..(i + 1) * a]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FactorId]> + '_ {
        (0..self.len).map(move |i| self.row(i))
    }

    pub fn column(&self, v: Var) -> Option<usize> {
        self.schema.iter().position(|&s| s == v)
    }

    pub fn to_set(&self) -> BTreeSet<Vec<FactorId>> {
        self.rows().map(<[FactorId]>::to_vec).collect()
    }

    fn key(row: &[FactorId], cols: &[usize]) -> Vec<FactorId> {
        cols.iter().map(|&c| row[c]).collect()
    }

    /// Rows of `self` that agree with some row of `other` on the shared
    /// variables.
    pub fn semijoin(&self, other: &Relation) -> Relation {
        let shared: Vec<Var> = self.schema.iter().copied().filter(|v| other.schema.contains(v)).collect();
        if shared.is_empty() {
            return if other.is_empty() {
                Relation::from_flat(self.schema.clone(), Vec::new(), 0)
            } else {
                self.clone()
            };
        }
        let mine: Vec<usize> = shared.iter().map(|&v| self.column(v).unwrap()).collect();
        let theirs: Vec<usize> = shared.iter().map(|&v| other.column(v).unwrap()).collect();
        let keys: HashSet<Vec<FactorId>> = other.rows().map(|r| Relation::key(r, &theirs)).collect();
        let mut data = Vec::new();
        let mut len = 0;
        for r in self.rows() {
            if keys.contains(&Relation::key(r, &mine)) {
                data.extend_from_slice(r);
                len += 1;
            }
        }
        Relation::from_flat(self.schema.clone(), data, len)
    }

    pub fn project(&self, vars: &[Var]) -> Relation {
        let cols: Vec<usize> = vars.iter().map(|&v| self.column(v).expect("projection onto unknown variable")).collect();
        Relation::from_rows(vars.to_vec(), self.rows().map(|r| Relation::key(r, &cols)))
    }
}

/// Current candidate values per variable.
struct Domains {
    full: FixedBitSet,
    whole: FixedBitSet,
    map: HashMap<Var, FixedBitSet>,
}

impl Domains {
    fn new(ix: &WordIndex) -> Domains {
        let n = ix.factor_count();
        let mut full = FixedBitSet::with_capacity(n);
        full.insert_range(..);
        let mut whole = FixedBitSet::with_capacity(n);
        whole.insert(ix.whole() as usize);
        Domains { full, whole, map: HashMap::new() }
    }

    fn get(&self, v: Var) -> &FixedBitSet {
        if v.is_universe() {
            return &self.whole;
        }
        self.map.get(&v).unwrap_or(&self.full)
    }

    fn restrict(&mut self, v: Var, to: &FixedBitSet) {
        if v.is_universe() {
            self.whole.intersect_with(to);
            return;
        }
        let full = &self.full;
        self.map.entry(v).or_insert_with(|| full.clone()).intersect_with(to);
    }
}

fn singleton_capacity(ix: &WordIndex) -> FixedBitSet {
    FixedBitSet::with_capacity(ix.factor_count())
}

/// Distinct non-universe variables of an atom in order of occurrence.
fn schema_of(vars: &[Var]) -> Vec<Var> {
    let mut s = Vec::new();
    for &v in vars {
        if !v.is_universe() && !s.contains(&v) {
            s.push(v);
        }
    }
    s
}

fn split_cost(ix: &WordIndex, dom: &FixedBitSet) -> u64 {
    dom.ones().map(|z| ix.factor_len(z as FactorId) as u64 + 1).sum()
}

/// `concat_id` walks the bytes of its right operand.
fn pair_cost(ix: &WordIndex, dx: &FixedBitSet, dy: &FixedBitSet) -> u64 {
    (dx.count_ones(..) as u64).saturating_mul(split_cost(ix, dy))
}

/// Columns a node shares with its parent, and its rows grouped by them.
type Link = (Vec<Var>, HashMap<Vec<FactorId>, Vec<usize>>);

/// Materializes `eq` under the current domains.
fn materialize_eq(ix: &WordIndex, eq: &BinEq, d: &Domains) -> Relation {
    let occ: Vec<Var> = std::iter::once(eq.lhs).chain(eq.rhs.iter().copied()).collect();
    let schema = schema_of(&occ);
    let slot: Vec<Option<usize>> =
        occ.iter().map(|&v| if v.is_universe() { None } else { schema.iter().position(|&s| s == v) }).collect();
    let mut data = Vec::new();
    let mut len = 0;
    let mut row = vec![0; schema.len()];
    let mut emit = |values: &[FactorId]| {
        let mut seen = vec![false; schema.len()];
        for (k, &val) in values.iter().enumerate() {
            match slot[k] {
                None => {
                    if val != ix.whole() {
                        return;
                    }
                }
                Some(s) => {
                    if seen[s] && row[s] != val {
                        return;
                    }
                    seen[s] = true;
                    row[s] = val;
                }
            }
        }
        data.extend_from_slice(&row);
        len += 1;
    };
    let dz = d.get(eq.lhs);
    match eq.rhs.as_slice() {
        [] => {
            if dz.contains(0) {
                emit(&[0]);
            }
        }
        [x] => {
            let mut both = dz.clone();
            both.intersect_with(d.get(*x));
            for v in both.ones() {
                emit(&[v as FactorId, v as FactorId]);
            }
        }
        [x, y] if x == y && !x.is_universe() => {
            // A square only splits in the middle.
            let dx = d.get(*x);
            for z in dz.ones() {
                let span = ix.canonical_span(z as FactorId);
                let l = span.len();
                if l % 2 == 1 {
                    continue;
                }
                let (p, s) = (ix.id_at(span.start - 1, l / 2), ix.id_at(span.start - 1 + l / 2, l / 2));
                if p == s && dx.contains(p as usize) {
                    emit(&[z as FactorId, p, s]);
                }
            }
        }
        [x, y] => {
            let (dx, dy) = (d.get(*x), d.get(*y));
            let a = split_cost(ix, dz);
            let b = pair_cost(ix, dx, dy);
            if a <= b {
                for z in dz.ones() {
                    for (p, s) in ix.splits(z as FactorId) {
                        if dx.contains(p as usize) && dy.contains(s as usize) {
                            emit(&[z as FactorId, p, s]);
                        }
                    }
                }
            } else {
                for p in dx.ones() {
                    for s in dy.ones() {
                        if let Some(z) = ix.concat_id(p as FactorId, s as FactorId) {
                            if dz.contains(z as usize) {
                                emit(&[z, p as FactorId, s as FactorId]);
                            }
                        }
                    }
                }
            }
        }
        rhs => {
            // Longer right-hand sides only come from hand-built atoms.
            fn go(
                ix: &WordIndex,
                start: usize,
                end: usize,
                rest: &[Var],
                d: &Domains,
                vals: &mut Vec<FactorId>,
                emit: &mut dyn FnMut(&[FactorId]),
            ) {
                let Some((&v, tail)) = rest.split_first() else {
                    if start == end {
                        emit(vals);
                    }
                    return;
                };
                let hi = if tail.is_empty() { end } else { end.max(start) };
                let lo = if tail.is_empty() { end } else { start };
                for cut in lo..=hi {
                    let id = ix.id_at(start, cut - start);
                    if d.get(v).contains(id as usize) {
                        vals.push(id);
                        go(ix, cut, end, tail, d, vals, emit);
                        vals.pop();
                    }
                }
            }
            for z in dz.ones() {
                let span = ix.canonical_span(z as FactorId);
                let mut vals = vec![z as FactorId];
                go(ix, span.start - 1, span.end - 1, rhs, d, &mut vals, &mut emit);
            }
        }
    }
    Relation::from_flat(schema, data, len)
}

fn tighten(ix: &WordIndex, rel: &Relation, d: &mut Domains) {
    for (c, &v) in rel.schema().iter().enumerate() {
        let mut seen = singleton_capacity(ix);
        for r in rel.rows() {
            seen.insert(r[c] as usize);
        }
        d.restrict(v, &seen);
    }
}

fn constraint_members(ix: &WordIndex, c: &RegularConstraint) -> FixedBitSet {
    ix.regex_members(&c.regex)
}

/// Materializes all atoms. Constraints narrow the domains first; equations
/// are then built cheapest first, each one narrowing the domains of its
/// variables for the rest.
pub fn materialize(atoms: &[PlanAtom], ix: &WordIndex) -> Vec<Relation> {
    let mut d = Domains::new(ix);
    for a in atoms {
        if let PlanAtom::Constraint(c) = a {
            d.restrict(c.var, &constraint_members(ix, c));
        }
    }
    let mut rels: Vec<Option<Relation>> = vec![None; atoms.len()];
    let mut pending: Vec<usize> = (0..atoms.len()).filter(|&i| matches!(atoms[i], PlanAtom::Eq(_))).collect();
    while !pending.is_empty() {
        let cost = |i: usize| -> u64 {
            let PlanAtom::Eq(e) = &atoms[i] else { unreachable!() };
            let dz = d.get(e.lhs);
            match e.rhs.as_slice() {
                [x] => dz.count_ones(..).min(d.get(*x).count_ones(..)) as u64,
                [x, y] if x == y && !x.is_universe() => dz.count_ones(..) as u64,
                [x, y] => split_cost(ix, dz).min(pair_cost(ix, d.get(*x), d.get(*y))),
                _ => split_cost(ix, dz).saturating_mul(ix.len() as u64 + 1),
            }
        };
        let (k, &i) = pending.iter().enumerate().min_by_key(|(_, &i)| cost(i)).unwrap();
        pending.swap_remove(k);
        let PlanAtom::Eq(e) = &atoms[i] else { unreachable!() };
        let rel = materialize_eq(ix, e, &d);
        tighten(ix, &rel, &mut d);
        rels[i] = Some(rel);
    }
    for (i, a) in atoms.iter().enumerate() {
        if let PlanAtom::Constraint(c) = a {
            rels[i] = Some(if c.var.is_universe() {
                let ok = d.get(c.var).contains(ix.whole() as usize);
                Relation::from_flat(vec![], vec![], ok as usize)
            } else {
                let dom = d.get(c.var);
                Relation::from_flat(vec![c.var], dom.ones().map(|v| v as FactorId).collect(), dom.count_ones(..))
            });
        }
    }
    rels.into_iter().map(Option::unwrap).collect()
}

/// Materializes a single atom over all factors.
pub fn materialize_atom(atom: &PlanAtom, ix: &WordIndex) -> Relation {
    materialize(std::slice::from_ref(atom), ix).pop().unwrap()
}

/// Bottom-up semi-join pass towards node 0; returns the BFS order.
fn bottom_up(plan: &Plan, rels: &mut [Relation]) -> Vec<usize> {
    if rels.is_empty() {
        return Vec::new();
    }
    let (parent, order) = plan.tree.rooted(0);
    for &n in order.iter().rev() {
        if let Some(p) = parent[n] {
            rels[p] = rels[p].semijoin(&rels[n]);
        }
    }
    order
}

/// Full reduction: bottom-up, then top-down.
pub fn reduce(plan: &Plan, ix: &WordIndex) -> Vec<Relation> {
    let mut rels = materialize(&plan.atoms, ix);
    if rels.is_empty() {
        return rels;
    }
    bottom_up(plan, &mut rels);
    let (parent, order) = plan.tree.rooted(0);
    for &n in &order {
        if let Some(p) = parent[n] {
            rels[n] = rels[n].semijoin(&rels[p]);
        }
    }
    rels
}

/// Boolean evaluation: true iff the root is non-empty after the bottom-up
/// pass.
pub fn model_check(plan: &Plan, ix: &WordIndex) -> bool {
    let mut rels = materialize(&plan.atoms, ix);
    if rels.is_empty() {
        return true;
    }
    bottom_up(plan, &mut rels);
    !rels[0].is_empty()
}

/// Calls `f` once per distinct head assignment, in no particular order.
pub fn enumerate<F>(plan: &Plan, ix: &WordIndex, mut f: F)
where
    F: FnMut(&[FactorId]) -> ControlFlow<()>,
{
    let rels = reduce(plan, ix);
    if rels.iter().any(Relation::is_empty) {
        return;
    }
    if rels.is_empty() {
        let _ = f(&[]);
        return;
    }
    let head: BTreeSet<Var> = plan.head.iter().copied().collect();
    let (parent, order) = plan.tree.rooted(0);
    let n = rels.len();
    // Nodes whose subtree mentions a head variable.
    let mut needed = vec![false; n];
    for &v in order.iter().rev() {
        if rels[v].schema().iter().any(|x| head.contains(x)) {
            needed[v] = true;
        }
        if needed[v] {
            if let Some(p) = parent[v] {
                needed[p] = true;
            }
        }
    }
    let order: Vec<usize> = order.into_iter().filter(|&v| needed[v]).collect();
    let mut keep: Vec<Vec<Var>> = vec![Vec::new(); n];
    for &v in &order {
        let mut vars: Vec<Var> = Vec::new();
        for &x in rels[v].schema() {
            let shared_with_tree = order.iter().any(|&o| {
                o != v && (parent[o] == Some(v) || parent[v] == Some(o)) && rels[o].schema().contains(&x)
            });
            if head.contains(&x) || shared_with_tree {
                vars.push(x);
            }
        }
        keep[v] = vars;
    }
    let proj: HashMap<usize, Relation> = order.iter().map(|&v| (v, rels[v].project(&keep[v]))).collect();
    // Per node: columns shared with the parent, and rows grouped by them.
    let mut link: HashMap<usize, Link> = HashMap::new();
    for &v in &order {
        let Some(p) = parent[v] else { continue };
        let shared: Vec<Var> = keep[v].iter().copied().filter(|x| keep[p].contains(x)).collect();
        let cols: Vec<usize> = shared.iter().map(|&x| proj[&v].column(x).unwrap()).collect();
        let mut groups: HashMap<Vec<FactorId>, Vec<usize>> = HashMap::new();
        for (i, r) in proj[&v].rows().enumerate() {
            groups.entry(Relation::key(r, &cols)).or_default().push(i);
        }
        link.insert(v, (shared, groups));
    }

    struct State<'a, F> {
        order: &'a [usize],
        proj: &'a HashMap<usize, Relation>,
        link: &'a HashMap<usize, Link>,
        head: &'a [Var],
        assign: HashMap<Var, FactorId>,
        seen: HashSet<Vec<FactorId>>,
        f: F,
    }
    fn step<F: FnMut(&[FactorId]) -> ControlFlow<()>>(s: &mut State<'_, F>, k: usize) -> ControlFlow<()> {
        if k == s.order.len() {
            let t: Vec<FactorId> = s.head.iter().map(|v| s.assign[v]).collect();
            if s.seen.insert(t.clone()) {
                return (s.f)(&t);
            }
            return ControlFlow::Continue(());
        }
        let v = s.order[k];
        let rel = &s.proj[&v];
        let rows: Vec<usize> = match s.link.get(&v) {
            None => (0..rel.len()).collect(),
            Some((shared, groups)) => {
                let key: Vec<FactorId> = shared.iter().map(|x| s.assign[x]).collect();
                groups.get(&key).cloned().unwrap_or_default()
            }
        };
        for i in rows {
            let row = rel.row(i);
            let mut added = Vec::new();
            for (c, &x) in rel.schema().iter().enumerate() {
                if let std::collections::hash_map::Entry::Vacant(e) = s.assign.entry(x) {
                    e.insert(row[c]);
                    added.push(x);
                }
            }
            let r = step(s, k + 1);
            for x in added {
                s.assign.remove(&x);
            }
            r?;
        }
        ControlFlow::Continue(())
    }
    if order.is_empty() {
        let _ = f(&[]);
        return;
    }
    let mut st = State {
        order: &order,
        proj: &proj,
        link: &link,
        head: &plan.head,
        assign: HashMap::new(),
        seen: HashSet::new(),
        f: &mut f,
    };
    let _ = step(&mut st, 0);
}

/// All head assignments as words.
pub fn answers(plan: &Plan, ix: &WordIndex) -> BTreeSet<Vec<Vec<u8>>> {
    let mut out = BTreeSet::new();
    enumerate(plan, ix, |t| {
        out.insert(t.iter().map(|&id| ix.bytes(id).to_vec()).collect());
        ControlFlow::Continue(())
    });
    out
}

/// Plans `q` and evaluates it on `w`; fails if the query is not acyclic.
pub fn evaluate(q: &FcCq, w: &[u8]) -> Result<BTreeSet<Vec<Vec<u8>>>, EvalError> {
    let p = plan(q)?;
    Ok(answers(&p, &WordIndex::build(w)))
}

/// Left-deep binary atoms for an arbitrary (possibly cyclic) query.
fn binarize(q: &FcCq) -> Result<Vec<PlanAtom>, EvalError> {
    let nq = normalize(q).map_err(PlanError::from)?;
    let mut gen = NameGen::avoiding(nq.to_fccq().vars());
    let mut atoms = Vec::new();
    for (lhs, rhs) in &nq.equations {
        if rhs.len() <= 2 {
            atoms.push(PlanAtom::Eq(BinEq::new(*lhs, rhs.clone())));
            continue;
        }
        let mut acc = rhs[0];
        for (k, &v) in rhs.iter().enumerate().skip(1) {
            let z = if k + 1 == rhs.len() { *lhs } else { gen.fresh("t") };
            atoms.push(PlanAtom::Eq(BinEq::new(z, vec![acc, v])));
            acc = z;
        }
    }
    atoms.extend(nq.constraints.iter().cloned().map(PlanAtom::Constraint));
    Ok(atoms)
}

/// Backtracking join over materialized binary atoms; works for cyclic
/// queries, with no polynomial bound.
pub fn enumerate_general<F>(q: &FcCq, ix: &WordIndex, mut f: F) -> Result<(), EvalError>
where
    F: FnMut(&[FactorId]) -> ControlFlow<()>,
{
    q.validate().map_err(PlanError::from)?;
    let atoms = binarize(q)?;
    let rels = materialize(&atoms, ix);
    if rels.iter().any(Relation::is_empty) {
        return Ok(());
    }
    let mut order: Vec<usize> = Vec::new();
    let mut bound: BTreeSet<Var> = BTreeSet::new();
    let mut left: Vec<usize> = (0..rels.len()).collect();
    while !left.is_empty() {
        let (k, &i) = left
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| {
                let b = rels[i].schema().iter().filter(|v| bound.contains(v)).count();
                (b, std::cmp::Reverse(rels[i].len()))
            })
            .unwrap();
        left.swap_remove(k);
        bound.extend(rels[i].schema().iter().copied());
        order.push(i);
    }
    let mut known: BTreeSet<Var> = BTreeSet::new();
    let mut plans = Vec::new();
    for &i in &order {
        let shared: Vec<Var> = rels[i].schema().iter().copied().filter(|v| known.contains(v)).collect();
        let cols: Vec<usize> = shared.iter().map(|&v| rels[i].column(v).unwrap()).collect();
        let mut groups: HashMap<Vec<FactorId>, Vec<usize>> = HashMap::new();
        for (r, row) in rels[i].rows().enumerate() {
            groups.entry(Relation::key(row, &cols)).or_default().push(r);
        }
        known.extend(rels[i].schema().iter().copied());
        plans.push((i, shared, groups));
    }
    #[allow(clippy::type_complexity)]
    fn go(
        k: usize,
        plans: &[(usize, Vec<Var>, HashMap<Vec<FactorId>, Vec<usize>>)],
        rels: &[Relation],
        head: &[Var],
        assign: &mut HashMap<Var, FactorId>,
        seen: &mut HashSet<Vec<FactorId>>,
        f: &mut dyn FnMut(&[FactorId]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if k == plans.len() {
            let t: Vec<FactorId> = head.iter().map(|v| assign[v]).collect();
            if seen.insert(t.clone()) {
                return f(&t);
            }
            return ControlFlow::Continue(());
        }
        let (i, shared, groups) = &plans[k];
        let key: Vec<FactorId> = shared.iter().map(|v| assign[v]).collect();
        let Some(rows) = groups.get(&key) else { return ControlFlow::Continue(()) };
        for &r in rows {
            let row = rels[*i].row(r);
            let mut added = Vec::new();
            for (c, &x) in rels[*i].schema().iter().enumerate() {
                if let std::collections::hash_map::Entry::Vacant(e) = assign.entry(x) {
                    e.insert(row[c]);
                    added.push(x);
                }
            }
            let res = go(k + 1, plans, rels, head, assign, seen, f);
            for x in added {
                assign.remove(&x);
            }
            res?;
        }
        ControlFlow::Continue(())
    }
    let _ = go(0, &plans, &rels, &q.head, &mut HashMap::new(), &mut HashSet::new(), &mut f);
    Ok(())
}

/// Evaluates any query: acyclic ones through the join tree, others through
/// the backtracking join.
pub fn evaluate_any(q: &FcCq, w: &[u8]) -> Result<BTreeSet<Vec<Vec<u8>>>, EvalError> {
    match plan(q) {
        Ok(p) => Ok(answers(&p, &WordIndex::build(w))),
        Err(PlanError::Cyclic(_)) => {
            let ix = WordIndex::build(w);
            let mut out = BTreeSet::new();
            enumerate_general(q, &ix, |t| {
                out.insert(t.iter().map(|&id| ix.bytes(id).to_vec()).collect());
                ControlFlow::Continue(())
            })?;
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn is_member(q: &FcCq, w: &[u8]) -> Result<bool, EvalError> {
    Ok(!evaluate_any(q, w)?.is_empty())
}

/// Universality of a Boolean query without regular constraints: its
/// language is everything iff it contains ε and some single letter.
pub fn check_universality(q: &FcCq, alphabet: &Alphabet) -> Result<bool, EvalError> {
    if !q.constraints.is_empty() {
        return Err(EvalError::HasConstraints);
    }
    if !q.is_boolean() {
        return Err(EvalError::NotBoolean);
    }
    if !is_member(q, b"")? {
        return Ok(false);
    }
    for &a in alphabet.symbols() {
        if is_member(q, &[a])? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Searches words up to length `max_len` for one with more than `k`
/// distinct head assignments. `None` means no counterexample up to that
/// length.
pub fn find_ambiguity_witness(
    q: &FcCq,
    k: usize,
    max_len: usize,
    alphabet: &Alphabet,
) -> Result<Option<(Vec<u8>, usize)>, EvalError> {
    let syms = alphabet.symbols();
    let mut w: Vec<u8> = Vec::new();
    let mut digits: Vec<usize> = Vec::new();
    loop {
        let n = evaluate_any(q, &w)?.len();
        if n > k {
            return Ok(Some((w, n)));
        }
        // Next word in length-lexicographic order.
        let mut i = digits.len();
        loop {
            if i == 0 {
                if digits.len() == max_len || syms.is_empty() {
                    return Ok(None);
                }
                digits = vec![0; digits.len() + 1];
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < syms.len() {
                break;
            }
            digits[i] = 0;
        }
        w = digits.iter().map(|&d| syms[d]).collect();
    }
}

pub fn check_k_ambiguous_bounded(q: &FcCq, k: usize, max_len: usize, alphabet: &Alphabet) -> Result<bool, EvalError> {
    Ok(find_ambiguity_witness(q, k, max_len, alphabet)?.is_none())
}

/// One JSON object mapping each head variable to its word and canonical
/// span.
pub fn tuple_json(head: &[Var], tuple: &[FactorId], ix: &WordIndex) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (v, &id) in head.iter().zip(tuple) {
        let s = ix.canonical_span(id);
        m.insert(
            v.name(),
            serde_json::json!({
                "word": String::from_utf8_lossy(ix.bytes(id)),
                "span": [s.start, s.end],
            }),
        );
    }
    serde_json::Value::Object(m)
}
