// SPDX-License-Identifier: Apache-2.0

//! Acyclicity of patterns and acyclic decompositions.
//!
//! A terminal-free pattern is split into binary (or k-ary) concatenations;
//! each distinct sub-bracketing becomes a fresh variable. The search works
//! on factor contents: intervals with equal content behave identically, so
//! every per-interval table is kept per distinct content.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::jointree::gyo;
use crate::model::{BinEq, Bracketing, Item, Pattern, TwoFcCq, Var};
use crate::names::NameGen;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("pattern contains terminal symbols")]
    NotTerminalFree,
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("pattern is cyclic")]
    Cyclic,
    #[error("pattern has no localized {0}-ary decomposition")]
    NotKLocal(usize),
    #[error("no acyclic bracketing satisfies the pair constraints")]
    Impossible,
    #[error("derivation found but no consistent bracketing was extracted within budget")]
    ExtractionFailed,
}

fn terminal_free(alpha: &Pattern) -> Result<Vec<Var>, DecomposeError> {
    let vars = alpha.var_seq().ok_or(DecomposeError::NotTerminalFree)?;
    if vars.is_empty() {
        return Err(DecomposeError::EmptyPattern);
    }
    Ok(vars)
}

/// Content ids, variable sets and derivation edges of one pattern.
struct Derivation {
    alpha: Vec<Var>,
    /// `cid[l][i]`: content id of `alpha[i..i+l]`.
    cid: Vec<Vec<u32>>,
    /// First occurrence of each content as (start, length).
    rep: Vec<(usize, usize)>,
    vars: Vec<FixedBitSet>,
    in_v: Vec<bool>,
    /// Per content: edges given as the lengths of the children.
    edges: Vec<Vec<Vec<usize>>>,
    /// Per content: contents of all children over all of its edges.
    child_contents: Vec<BTreeSet<u32>>,
}

impl Derivation {
    fn new(alpha: &[Var]) -> Derivation {
        let n = alpha.len();
        let mut var_ix: HashMap<Var, usize> = HashMap::new();
        for &v in alpha {
            let k = var_ix.len();
            var_ix.entry(v).or_insert(k);
        }
        let nvars = var_ix.len();
        let mut cid: Vec<Vec<u32>> = vec![Vec::new()];
        let mut rep = Vec::new();
        let mut vars: Vec<FixedBitSet> = Vec::new();
        let mut table: HashMap<(u32, usize), u32> = HashMap::new();
        for l in 1..=n {
            let mut row = Vec::with_capacity(n + 1 - l);
            for i in 0..=n - l {
                let last = var_ix[&alpha[i + l - 1]];
                let prefix = if l == 1 { u32::MAX } else { cid[l - 1][i] };
                let id = *table.entry((prefix, last)).or_insert_with(|| {
                    rep.push((i, l));
                    let mut set = if l == 1 {
                        FixedBitSet::with_capacity(nvars)
                    } else {
                        vars[prefix as usize].clone()
                    };
                    set.insert(last);
                    vars.push(set);
                    (rep.len() - 1) as u32
                });
                row.push(id);
            }
            cid.push(row);
        }
        let m = rep.len();
        Derivation {
            alpha: alpha.to_vec(),
            cid,
            rep,
            vars,
            in_v: vec![false; m],
            edges: vec![Vec::new(); m],
            child_contents: vec![BTreeSet::new(); m],
        }
    }

    fn len_of(&self, c: u32) -> usize {
        self.rep[c as usize].1
    }

    fn root(&self) -> u32 {
        self.cid[self.alpha.len()][0]
    }

    /// Contents of the children of content `c` under the given lengths.
    fn children(&self, c: u32, lens: &[usize]) -> Vec<u32> {
        let mut at = self.rep[c as usize].0;
        lens.iter()
            .map(|&l| {
                let id = self.cid[l][at];
                at += l;
                id
            })
            .collect()
    }

    fn disjoint(&self, a: u32, b: u32) -> bool {
        self.vars[a as usize].is_disjoint(&self.vars[b as usize])
    }

    /// Equal content, disjoint variables, or one side already occurs as a
    /// child of the other.
    fn compatible(&self, a: u32, b: u32) -> bool {
        a == b
            || self.disjoint(a, b)
            || self.child_contents[a as usize].contains(&b)
            || self.child_contents[b as usize].contains(&a)
    }

    fn add_edge(&mut self, c: u32, lens: Vec<usize>) {
        let kids = self.children(c, &lens);
        self.child_contents[c as usize].extend(kids);
        self.edges[c as usize].push(lens);
        self.in_v[c as usize] = true;
    }

    /// Contents of length `l`, each once, in order of first occurrence.
    fn contents_of_len(&self, l: usize) -> Vec<u32> {
        let n = self.alpha.len();
        (0..=n - l).map(|i| self.cid[l][i]).filter(|&c| self.rep[c as usize].0 <= n && self.rep[c as usize].1 == l).fold(
            Vec::new(),
            |mut acc, c| {
                if !acc.contains(&c) {
                    acc.push(c);
                }
                acc
            },
        )
    }

    fn var_at(&self, c: u32) -> Var {
        self.alpha[self.rep[c as usize].0]
    }

    fn var_set(&self, c: u32) -> BTreeSet<Var> {
        let (s, l) = self.rep[c as usize];
        self.alpha[s..s + l].iter().copied().collect()
    }
}

/// The fixed-point loop for binary bracketings. With `pairs`, seeding and
/// growth are restricted so that every constrained variable ends up next to
/// its partner.
fn binary_derivation(alpha: &[Var], pairs: Option<&[(Var, Var)]>) -> Derivation {
    let mut d = Derivation::new(alpha);
    let n = alpha.len();
    let in_pairs: BTreeSet<Var> = pairs.unwrap_or(&[]).iter().flat_map(|&(a, b)| [a, b]).collect();
    let pair_sets: Vec<BTreeSet<Var>> =
        pairs.unwrap_or(&[]).iter().map(|&(a, b)| [a, b].into_iter().collect()).collect();
    for c in d.contents_of_len(1) {
        d.in_v[c as usize] = true;
    }
    // Matches a single constrained variable `x` with a neighbour whose
    // variable set is exactly one of the pairs of `x`.
    let extra_check = |d: &Derivation, left: u32, right: u32| -> bool {
        if d.len_of(left) == 1 && in_pairs.contains(&d.var_at(left)) {
            let x = d.var_at(left);
            let vs = d.var_set(right);
            return pair_sets.iter().any(|p| p.contains(&x) && *p == vs);
        }
        if d.len_of(right) == 1 && in_pairs.contains(&d.var_at(right)) {
            let y = d.var_at(right);
            let vs = d.var_set(left);
            return pair_sets.iter().any(|p| p.contains(&y) && *p == vs);
        }
        true
    };
    for l in 2..=n {
        for c in d.contents_of_len(l) {
            let start = d.rep[c as usize].0;
            for a in 1..l {
                let left = d.cid[a][start];
                let right = d.cid[l - a][start + a];
                if !d.in_v[left as usize] || !d.in_v[right as usize] {
                    continue;
                }
                let ok = if l == 2 && pairs.is_some() {
                    let (x, y) = (d.var_at(left), d.var_at(right));
                    let both: BTreeSet<Var> = [x, y].into_iter().collect();
                    pair_sets.contains(&both) || (!in_pairs.contains(&x) && !in_pairs.contains(&y))
                } else {
                    d.compatible(left, right) && (pairs.is_none() || extra_check(&d, left, right))
                };
                if ok {
                    d.add_edge(c, vec![a, l - a]);
                }
            }
        }
    }
    d
}

/// The k-ary loop: every split into 2..=k parts whose parts are pairwise
/// compatible is an edge. Unit splits of short intervals come first.
fn kary_derivation(alpha: &[Var], k: usize) -> Derivation {
    let mut d = Derivation::new(alpha);
    let n = alpha.len();
    for c in d.contents_of_len(1) {
        d.in_v[c as usize] = true;
    }
    for l in 2..=n {
        for c in d.contents_of_len(l) {
            let start = d.rep[c as usize].0;
            let mut found: Vec<Vec<usize>> = Vec::new();
            if l <= k {
                found.push(vec![1; l]);
            }
            let mut lens = Vec::new();
            splits_into(&d, start, l, k, &mut lens, &mut found);
            for lens in found {
                if d.edges[c as usize].contains(&lens) {
                    continue;
                }
                let kids = d.children(c, &lens);
                let ok = (0..kids.len())
                    .all(|p| (p + 1..kids.len()).all(|q| d.compatible(kids[p], kids[q])));
                if ok {
                    d.add_edge(c, lens);
                }
            }
        }
    }
    d
}

/// Splits of `alpha[start..start+rest]` into at most `k - lens.len()` parts
/// (at least two overall) whose parts are all derivable.
fn splits_into(
    d: &Derivation,
    start: usize,
    rest: usize,
    k: usize,
    lens: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if rest == 0 {
        if lens.len() >= 2 {
            out.push(lens.clone());
        }
        return;
    }
    if lens.len() == k {
        return;
    }
    let max = if lens.is_empty() { rest - 1 } else { rest };
    for l in 1..=max {
        if d.in_v[d.cid[l][start] as usize] {
            lens.push(l);
            splits_into(d, start + l, rest - l, k, lens, out);
            lens.pop();
        }
    }
}

/// Chooses one edge per content so that every chosen edge is justified by
/// the edges chosen for its children.
struct Extractor<'a> {
    d: &'a Derivation,
    chosen: Vec<Option<usize>>,
    log: Vec<u32>,
    budget: usize,
}

struct OutOfBudget;

const EXTRACTION_BUDGET: usize = 200_000;

impl<'a> Extractor<'a> {
    fn new(d: &'a Derivation) -> Extractor<'a> {
        Extractor { d, chosen: vec![None; d.rep.len()], log: Vec::new(), budget: EXTRACTION_BUDGET }
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let c = self.log.pop().unwrap();
            self.chosen[c as usize] = None;
        }
    }

    /// Satisfies every pending `(content, required children)` obligation,
    /// backtracking over earlier choices when a later one fails.
    fn solve(&mut self, pending: &mut Vec<(u32, Vec<u32>)>) -> Result<bool, OutOfBudget> {
        if self.budget == 0 {
            return Err(OutOfBudget);
        }
        self.budget -= 1;
        let d = self.d;
        let Some((c, reqs)) = pending.pop() else {
            return Ok(true);
        };
        let ok = if d.len_of(c) == 1 {
            reqs.is_empty() && self.solve(pending)?
        } else if let Some(e) = self.chosen[c as usize] {
            let kids = d.children(c, &d.edges[c as usize][e]);
            reqs.iter().all(|r| kids.contains(r)) && self.solve(pending)?
        } else {
            self.try_edges(c, &reqs, pending)?
        };
        pending.push((c, reqs));
        Ok(ok)
    }

    fn try_edges(&mut self, c: u32, reqs: &[u32], pending: &mut Vec<(u32, Vec<u32>)>) -> Result<bool, OutOfBudget> {
        let d = self.d;
        for e in 0..d.edges[c as usize].len() {
            let kids = d.children(c, &d.edges[c as usize][e]);
            if !reqs.iter().all(|r| kids.contains(r)) {
                continue;
            }
            // Each pair that is neither equal nor disjoint needs one side to
            // contain the other as a child.
            let mut choices: Vec<Vec<(u32, u32)>> = Vec::new();
            for p in 0..kids.len() {
                for q in p + 1..kids.len() {
                    let (a, b) = (kids[p], kids[q]);
                    if a == b || d.disjoint(a, b) {
                        continue;
                    }
                    let mut opts = Vec::new();
                    if d.child_contents[a as usize].contains(&b) {
                        opts.push((a, b));
                    }
                    if d.child_contents[b as usize].contains(&a) {
                        opts.push((b, a));
                    }
                    if !choices.contains(&opts) {
                        choices.push(opts);
                    }
                }
            }
            if choices.iter().any(|o| o.is_empty()) {
                continue;
            }
            let mut pick = vec![0usize; choices.len()];
            loop {
                let mut needs: Vec<(u32, Vec<u32>)> = Vec::new();
                for &kid in &kids {
                    if !needs.iter().any(|(k, _)| *k == kid) {
                        needs.push((kid, Vec::new()));
                    }
                }
                for (opts, &i) in choices.iter().zip(&pick) {
                    let (holder, inner) = opts[i];
                    let entry = needs.iter_mut().find(|(k, _)| *k == holder).unwrap();
                    if !entry.1.contains(&inner) {
                        entry.1.push(inner);
                    }
                }
                let mark = self.log.len();
                self.chosen[c as usize] = Some(e);
                self.log.push(c);
                let depth = pending.len();
                pending.extend(needs.into_iter().rev());
                let ok = self.solve(pending);
                pending.truncate(depth);
                if ok? {
                    return Ok(true);
                }
                self.undo(mark);
                let mut i = 0;
                loop {
                    if i == pick.len() {
                        break;
                    }
                    pick[i] += 1;
                    if pick[i] < choices[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == pick.len() {
                    break;
                }
            }
        }
        Ok(false)
    }

    fn build(&self, c: u32, start: usize) -> Bracketing {
        let d = self.d;
        if d.len_of(c) == 1 {
            return Bracketing::Leaf(d.alpha[start]);
        }
        let lens = &d.edges[c as usize][self.chosen[c as usize].expect("chosen")];
        let mut at = start;
        let mut kids = Vec::with_capacity(lens.len());
        for &l in lens {
            kids.push(self.build(d.cid[l][at], at));
            at += l;
        }
        Bracketing::Node(kids)
    }
}

fn extract(d: &Derivation) -> Result<Option<Bracketing>, DecomposeError> {
    let root = d.root();
    if !d.in_v[root as usize] {
        return Ok(None);
    }
    let mut ex = Extractor::new(d);
    match ex.solve(&mut vec![(root, Vec::new())]) {
        Ok(true) => Ok(Some(ex.build(root, 0))),
        Ok(false) | Err(OutOfBudget) => Err(DecomposeError::ExtractionFailed),
    }
}

/// Decides acyclicity of a terminal-free pattern.
pub fn is_acyclic_pattern(alpha: &Pattern) -> Result<bool, DecomposeError> {
    Ok(is_acyclic_vars(&terminal_free(alpha)?))
}

pub fn is_acyclic_vars(vars: &[Var]) -> bool {
    if vars.is_empty() {
        return true;
    }
    let d = binary_derivation(vars, None);
    d.in_v[d.root() as usize]
}

/// An acyclic binary bracketing of `vars`, if one exists.
pub fn find_acyclic_bracketing(vars: &[Var]) -> Result<Option<Bracketing>, DecomposeError> {
    if vars.is_empty() {
        return Err(DecomposeError::EmptyPattern);
    }
    extract(&binary_derivation(vars, None))
}

pub fn find_acyclic_decomposition(alpha: &Pattern, root: Var) -> Result<TwoFcCq, DecomposeError> {
    let vars = terminal_free(alpha)?;
    let b = find_acyclic_bracketing(&vars)?.ok_or(DecomposeError::Cyclic)?;
    Ok(decompose_bracketing(&b, root))
}

/// Pairs as sorted, distinct unordered pairs.
fn unordered(pairs: &[(Var, Var)]) -> Vec<(Var, Var)> {
    let set: BTreeSet<(Var, Var)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    set.into_iter().collect()
}

/// An acyclic bracketing in which `x` and `y` are siblings for every pair.
pub fn constrained_acyclic_bracketing(
    vars: &[Var],
    pairs: &[(Var, Var)],
) -> Result<Bracketing, DecomposeError> {
    if vars.is_empty() {
        return Err(DecomposeError::EmptyPattern);
    }
    let pairs = &unordered(pairs);
    if pairs.iter().any(|(a, b)| a == b || !vars.contains(a) || !vars.contains(b)) {
        return Err(DecomposeError::Impossible);
    }
    if pairs.is_empty() {
        return find_acyclic_bracketing(vars)?.ok_or(DecomposeError::Impossible);
    }
    let d = binary_derivation(vars, Some(pairs));
    let b = extract(&d)?.ok_or(DecomposeError::Impossible)?;
    if pairs.iter().all(|&(x, y)| b.has_adjacent_pair(x, y)) {
        Ok(b)
    } else {
        Err(DecomposeError::Impossible)
    }
}

/// A bracketing of `rhs` for the equation `lhs = rhs` whose decomposition
/// puts both variables of every pair into one atom.
pub fn atom_bracketing(lhs: Var, rhs: &[Var], pairs: &[(Var, Var)]) -> Result<Bracketing, DecomposeError> {
    let pairs = &unordered(pairs);
    if rhs.len() <= 2 {
        // One bracketing, one atom: every pair must lie inside it.
        if rhs.is_empty() || pairs.iter().any(|(a, b)| ![a, b].iter().all(|v| **v == lhs || rhs.contains(v))) {
            return Err(DecomposeError::Impossible);
        }
        let leaves: Vec<Bracketing> = rhs.iter().map(|&v| Bracketing::Leaf(v)).collect();
        return Ok(if leaves.len() == 1 { leaves[0].clone() } else { Bracketing::node(leaves) });
    }
    let with_lhs: Vec<Var> = pairs
        .iter()
        .filter_map(|&(a, b)| if a == lhs { Some(b) } else if b == lhs { Some(a) } else { None })
        .collect();
    let others: Vec<(Var, Var)> = pairs.iter().copied().filter(|&(a, b)| a != lhs && b != lhs).collect();
    match with_lhs.as_slice() {
        [] => constrained_acyclic_bracketing(rhs, &others),
        [y] => {
            let y = *y;
            let lead = rhs.iter().take_while(|&&v| v == y).count();
            if lead == rhs.len() {
                if !others.is_empty() {
                    return Err(DecomposeError::Impossible);
                }
                let mut t = Bracketing::Leaf(y);
                for _ in 1..rhs.len() {
                    t = Bracketing::pair(t, Bracketing::Leaf(y));
                }
                return Ok(t);
            }
            let trail = rhs.iter().rev().take_while(|&&v| v == y).count();
            let beta = &rhs[lead..rhs.len() - trail];
            if lead + trail == 0 || beta.contains(&y) {
                return Err(DecomposeError::Impossible);
            }
            let mut inner = Vec::new();
            for &(a, b) in &others {
                if a == y || b == y {
                    let partner = if a == y { b } else { a };
                    if beta != [partner] {
                        return Err(DecomposeError::Impossible);
                    }
                } else {
                    inner.push((a, b));
                }
            }
            let mut t = constrained_acyclic_bracketing(beta, &inner)?;
            for _ in 0..lead {
                t = Bracketing::pair(Bracketing::Leaf(y), t);
            }
            for _ in 0..trail {
                t = Bracketing::pair(t, Bracketing::Leaf(y));
            }
            Ok(t)
        }
        _ => Err(DecomposeError::Impossible),
    }
}

/// Decomposes `lhs = rhs` so that each pair shares an atom; the result is
/// checked with GYO.
pub fn decompose_atom_with_constraints(
    lhs: Var,
    rhs: &[Var],
    pairs: &[(Var, Var)],
    gen: &mut NameGen,
) -> Result<TwoFcCq, DecomposeError> {
    let b = atom_bracketing(lhs, rhs, pairs)?;
    let q = decompose_bracketing_with(&b, lhs, gen);
    let sets = q.atom_var_sets();
    for &(x, y) in pairs {
        if !sets.iter().any(|s| s.contains(&x) && s.contains(&y)) {
            return Err(DecomposeError::Impossible);
        }
    }
    if gyo(&sets).is_err() {
        return Err(DecomposeError::Impossible);
    }
    Ok(q)
}

/// Names every distinct sub-bracketing, innermost first. The outermost
/// bracketing is named `root`; a single leaf gives the copy `root = x`.
pub fn decompose_bracketing(b: &Bracketing, root: Var) -> TwoFcCq {
    let mut gen = NameGen::avoiding(b.flatten().into_iter().chain([root]));
    decompose_bracketing_with(b, root, &mut gen)
}

pub fn decompose_bracketing_with(b: &Bracketing, root: Var, gen: &mut NameGen) -> TwoFcCq {
    fn go(
        b: &Bracketing,
        top: bool,
        root: Var,
        gen: &mut NameGen,
        names: &mut HashMap<Bracketing, Var>,
        q: &mut TwoFcCq,
    ) -> Var {
        match b {
            Bracketing::Leaf(x) if top => {
                q.equations.push(BinEq::new(root, vec![*x]));
                root
            }
            Bracketing::Leaf(x) => *x,
            Bracketing::Node(cs) => {
                if !top {
                    if let Some(&z) = names.get(b) {
                        return z;
                    }
                }
                let rhs: Vec<Var> = cs.iter().map(|c| go(c, false, root, gen, names, q)).collect();
                let z = if top { root } else { gen.fresh("z") };
                if !top {
                    names.insert(b.clone(), z);
                    q.introduced.insert(z);
                }
                q.equations.push(BinEq::new(z, rhs));
                z
            }
        }
    }
    for v in b.flatten() {
        gen.reserve(v);
    }
    gen.reserve(root);
    let mut q = TwoFcCq::default();
    go(b, true, root, gen, &mut HashMap::new(), &mut q);
    q
}

/// A localized bracketing with nodes of arity at most `k`.
pub fn k_ary_local_bracketing(vars: &[Var], k: usize) -> Result<Bracketing, DecomposeError> {
    if vars.is_empty() {
        return Err(DecomposeError::EmptyPattern);
    }
    if vars.len() == 1 {
        return Ok(Bracketing::Leaf(vars[0]));
    }
    let k = k.max(2);
    extract(&kary_derivation(vars, k))?.ok_or(DecomposeError::NotKLocal(k))
}

pub fn k_ary_local_decomposition(alpha: &Pattern, k: usize, root: Var) -> Result<TwoFcCq, DecomposeError> {
    let vars = terminal_free(alpha)?;
    Ok(decompose_bracketing(&k_ary_local_bracketing(&vars, k)?, root))
}

/// Replaces every maximal terminal block by a fresh variable.
pub fn terminal_free_core(alpha: &Pattern, gen: &mut NameGen) -> (Vec<Var>, Vec<(Var, Vec<u8>)>) {
    for v in alpha.vars() {
        gen.reserve(v);
    }
    let mut core = Vec::new();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < alpha.0.len() {
        match alpha.0[i] {
            Item::Var(v) => {
                core.push(v);
                i += 1;
            }
            Item::Sym(_) => {
                let mut word = Vec::new();
                while let Some(Item::Sym(b)) = alpha.0.get(i) {
                    word.push(*b);
                    i += 1;
                }
                let z = gen.fresh("z");
                core.push(z);
                blocks.push((z, word));
            }
        }
    }
    (core, blocks)
}

/// The concatenation tree of a bracketing: the bracketing tree labelled by
/// the decomposition, with repeated sub-bracketings cut back to a leaf
/// everywhere except at their deepest (then leftmost) occurrence.
#[derive(Clone, Debug)]
pub struct ConcatTree {
    pub labels: Vec<Var>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

pub fn concat_tree(b: &Bracketing) -> ConcatTree {
    struct Raw {
        label: Var,
        internal: bool,
        depth: usize,
        kids: Vec<usize>,
    }
    fn walk(
        b: &Bracketing,
        depth: usize,
        gen: &mut NameGen,
        names: &mut HashMap<Bracketing, Var>,
        raw: &mut Vec<Raw>,
    ) -> usize {
        let me = raw.len();
        match b {
            Bracketing::Leaf(x) => {
                raw.push(Raw { label: *x, internal: false, depth, kids: vec![] });
            }
            Bracketing::Node(cs) => {
                let label = if depth == 0 {
                    Var::UNIVERSE
                } else {
                    *names.entry(b.clone()).or_insert_with(|| gen.fresh("z"))
                };
                raw.push(Raw { label, internal: true, depth, kids: vec![] });
                for c in cs {
                    let k = walk(c, depth + 1, gen, names, raw);
                    raw[me].kids.push(k);
                }
            }
        }
        me
    }
    let mut gen = NameGen::avoiding(b.flatten());
    let mut raw = Vec::new();
    walk(b, 0, &mut gen, &mut HashMap::new(), &mut raw);

    let mut keep: HashMap<Var, usize> = HashMap::new();
    for (i, r) in raw.iter().enumerate() {
        if r.internal {
            let e = keep.entry(r.label).or_insert(i);
            if raw[*e].depth < r.depth {
                *e = i;
            }
        }
    }
    let mut t = ConcatTree { labels: Vec::new(), parent: Vec::new(), children: Vec::new() };
    let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
    while let Some((ri, parent)) = stack.pop() {
        let me = t.labels.len();
        t.labels.push(raw[ri].label);
        t.parent.push(parent);
        t.children.push(Vec::new());
        if let Some(p) = parent {
            t.children[p].push(me);
        }
        let expand = raw[ri].internal && keep[&raw[ri].label] == ri;
        if expand {
            for &k in raw[ri].kids.iter().rev() {
                stack.push((k, Some(me)));
            }
        }
    }
    for c in t.children.iter_mut() {
        c.sort_unstable();
    }
    t
}

impl ConcatTree {
    /// Nodes with a child labelled `x`.
    pub fn parents_of(&self, x: Var) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.children[i].iter().any(|&c| self.labels[c] == x)).collect()
    }

    /// The `x`-parents induce a connected subtree.
    pub fn is_localized(&self, x: Var) -> bool {
        let s = self.parents_of(x);
        if s.is_empty() {
            return true;
        }
        let inside = |i: usize| s.binary_search(&i).is_ok();
        let edges = s.iter().filter(|&&i| self.parent[i].is_some_and(inside)).count();
        edges + 1 == s.len()
    }

    pub fn is_localized_everywhere(&self) -> bool {
        let labels: BTreeSet<Var> = self.labels.iter().copied().collect();
        labels.into_iter().all(|x| self.is_localized(x))
    }
}

/// Acyclicity of one binary bracketing via localization of its
/// concatenation tree.
pub fn is_acyclic_bracketing(b: &Bracketing) -> bool {
    concat_tree(b).is_localized_everywhere()
}
