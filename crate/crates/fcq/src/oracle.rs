// SPDX-License-Identifier: Apache-2.0

//! Slow reference implementations, written straight from the definitions.
//!
//! Nothing here uses the factor index, the decomposer, the planner or the
//! evaluator. Only the model types, the GYO reduction and the NFA are shared.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::automata::{Label, Nfa};
use crate::jointree::gyo;
use crate::model::{Alphabet, Bracketing, FcCq, Item, Pattern, RegexFormula, SercqAst, Var};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("pattern of length {0} is too long for exhaustive bracketing")]
pub struct TooLarge(pub usize);

/// Longest pattern `brute_acyclic` accepts.
pub const MAX_BRUTE_PATTERN: usize = 12;

fn distinct_factors(w: &[u8]) -> Vec<Vec<u8>> {
    let mut s: BTreeSet<Vec<u8>> = BTreeSet::new();
    for i in 0..=w.len() {
        for j in i..=w.len() {
            s.insert(w[i..j].to_vec());
        }
    }
    s.into_iter().collect()
}

fn is_factor(w: &[u8], f: &[u8]) -> bool {
    f.is_empty() || w.windows(f.len()).any(|x| x == f)
}

/// All extensions of `sigma` that make `items` spell `target`.
fn pattern_matches(
    items: &[Item],
    target: &[u8],
    sigma: &mut HashMap<Var, Vec<u8>>,
    erasing: bool,
    out: &mut Vec<HashMap<Var, Vec<u8>>>,
) {
    let Some((first, rest)) = items.split_first() else {
        if target.is_empty() {
            out.push(sigma.clone());
        }
        return;
    };
    match first {
        Item::Sym(b) => {
            if target.first() == Some(b) {
                pattern_matches(rest, &target[1..], sigma, erasing, out);
            }
        }
        Item::Var(v) => {
            if let Some(val) = sigma.get(v) {
                if target.starts_with(val) {
                    let l = val.len();
                    pattern_matches(rest, &target[l..], sigma, erasing, out);
                }
                return;
            }
            let min = if erasing { 0 } else { 1 };
            for l in min..=target.len() {
                sigma.insert(*v, target[..l].to_vec());
                pattern_matches(rest, &target[l..], sigma, erasing, out);
                sigma.remove(v);
            }
        }
    }
}

/// Is there a substitution `σ` with `σ(α) = w`?
pub fn brute_pattern_member(alpha: &Pattern, w: &[u8], erasing: bool) -> bool {
    let mut out = Vec::new();
    pattern_matches(&alpha.0, w, &mut HashMap::new(), erasing, &mut out);
    !out.is_empty()
}

/// `⟦q⟧(w)` as the set of head tuples, each component the assigned word.
pub fn brute_evaluate(q: &FcCq, w: &[u8]) -> BTreeSet<Vec<Vec<u8>>> {
    let factors = distinct_factors(w);
    let nfas: Vec<(Var, Nfa)> = q.constraints.iter().map(|c| (c.var, Nfa::from_regex(&c.regex))).collect();
    let mut sigma = HashMap::new();
    sigma.insert(Var::UNIVERSE, w.to_vec());
    let mut out = BTreeSet::new();
    let mut done = vec![false; q.equations.len()];
    solve_equations(q, w, &factors, &nfas, &mut sigma, &mut done, &mut out);
    out
}

fn solve_equations(
    q: &FcCq,
    w: &[u8],
    factors: &[Vec<u8>],
    nfas: &[(Var, Nfa)],
    sigma: &mut HashMap<Var, Vec<u8>>,
    done: &mut Vec<bool>,
    out: &mut BTreeSet<Vec<Vec<u8>>>,
) {
    let open: Vec<usize> = (0..q.equations.len()).filter(|&i| !done[i]).collect();
    if open.is_empty() {
        let rest: Vec<Var> = q.vars().into_iter().filter(|v| !sigma.contains_key(v)).collect();
        assign_free(q, factors, nfas, &rest, sigma, out);
        return;
    }
    let pick = open.iter().copied().find(|&i| sigma.contains_key(&q.equations[i].lhs));
    let i = pick.unwrap_or(open[0]);
    let eq = &q.equations[i];
    done[i] = true;
    let lhs_values: Vec<Vec<u8>> = match sigma.get(&eq.lhs) {
        Some(v) => vec![v.clone()],
        None => {
            let rhs_known = eq.rhs.vars().iter().all(|v| sigma.contains_key(v));
            if rhs_known {
                let val = crate::model::apply_substitution(&eq.rhs, sigma).unwrap();
                if is_factor(w, &val) {
                    vec![val]
                } else {
                    vec![]
                }
            } else {
                factors.to_vec()
            }
        }
    };
    let fresh_lhs = !sigma.contains_key(&eq.lhs);
    for val in lhs_values {
        if fresh_lhs {
            sigma.insert(eq.lhs, val.clone());
        }
        let mut exts = Vec::new();
        pattern_matches(&eq.rhs.0, &val, sigma, true, &mut exts);
        for ext in exts {
            let mut next = ext;
            solve_equations(q, w, factors, nfas, &mut next, done, out);
        }
        if fresh_lhs {
            sigma.remove(&eq.lhs);
        }
    }
    done[i] = false;
}

fn assign_free(
    q: &FcCq,
    factors: &[Vec<u8>],
    nfas: &[(Var, Nfa)],
    rest: &[Var],
    sigma: &mut HashMap<Var, Vec<u8>>,
    out: &mut BTreeSet<Vec<Vec<u8>>>,
) {
    if let Some((v, more)) = rest.split_first() {
        for f in factors {
            sigma.insert(*v, f.clone());
            assign_free(q, factors, nfas, more, sigma, out);
        }
        sigma.remove(v);
        return;
    }
    if nfas.iter().all(|(v, nfa)| nfa.accepts(&sigma[v])) {
        out.insert(q.head.iter().map(|h| sigma[h].clone()).collect());
    }
}

/// Every binary bracketing of a terminal-free pattern.
pub fn all_bracketings(vars: &[Var]) -> Vec<Bracketing> {
    if vars.len() == 1 {
        return vec![Bracketing::Leaf(vars[0])];
    }
    let mut out = Vec::new();
    for cut in 1..vars.len() {
        let left = all_bracketings(&vars[..cut]);
        let right = all_bracketings(&vars[cut..]);
        for l in &left {
            for r in &right {
                out.push(Bracketing::pair(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Variable sets of the decomposition of `b`: one atom per distinct
/// sub-bracketing, the outermost one named `u`.
pub fn bracketing_atoms(b: &Bracketing) -> Vec<BTreeSet<Var>> {
    fn name(
        b: &Bracketing,
        top: bool,
        names: &mut HashMap<Bracketing, Var>,
        atoms: &mut Vec<BTreeSet<Var>>,
    ) -> Var {
        match b {
            Bracketing::Leaf(x) if !top => *x,
            Bracketing::Leaf(x) => {
                atoms.push([Var::UNIVERSE, *x].into_iter().collect());
                Var::UNIVERSE
            }
            Bracketing::Node(cs) => {
                if let Some(v) = names.get(b) {
                    return *v;
                }
                let mut atom: BTreeSet<Var> = cs.iter().map(|c| name(c, false, names, atoms)).collect();
                let me = if top { Var::UNIVERSE } else { Var::new(&format!("@{}", names.len() + 1)) };
                atom.insert(me);
                names.insert(b.clone(), me);
                atoms.push(atom);
                me
            }
        }
    }
    let mut atoms = Vec::new();
    name(b, true, &mut HashMap::new(), &mut atoms);
    atoms
}

pub fn brute_bracketing_acyclic(b: &Bracketing) -> bool {
    gyo(&bracketing_atoms(b)).is_ok()
}

/// True iff some bracketing of `vars` has an acyclic decomposition.
pub fn brute_acyclic(vars: &[Var]) -> Result<bool, TooLarge> {
    if vars.len() > MAX_BRUTE_PATTERN {
        return Err(TooLarge(vars.len()));
    }
    Ok(all_bracketings(vars).iter().any(brute_bracketing_acyclic))
}

/// Whether the conjunction of terminal-free equations `lhs = rhs` has some
/// choice of bracketings, one per equation, whose joint decomposition is
/// acyclic. Introduced variables are never shared between equations.
pub fn brute_query_acyclic(equations: &[(Var, Vec<Var>)]) -> bool {
    let per_eq: Vec<Vec<Vec<BTreeSet<Var>>>> = equations
        .iter()
        .enumerate()
        .map(|(k, (lhs, rhs))| {
            all_bracketings(rhs)
                .iter()
                .map(|b| {
                    let tag = Var::new(&format!("@q{k}"));
                    bracketing_atoms(b)
                        .into_iter()
                        .map(|atom| {
                            atom.into_iter()
                                .map(|v| {
                                    if v == Var::UNIVERSE {
                                        *lhs
                                    } else if v.name().starts_with('@') {
                                        Var::new(&format!("{}{}", tag.name(), v.name()))
                                    } else {
                                        v
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; per_eq.len()];
    loop {
        let atoms: Vec<BTreeSet<Var>> =
            choice.iter().enumerate().flat_map(|(k, &c)| per_eq[k][c].iter().cloned()).collect();
        if atoms.is_empty() || gyo(&atoms).is_ok() {
            return true;
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < per_eq[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Is `w` accepted when the markers of `spans` are inserted, in some order
/// per position, into `w`?
fn accepts_marked(nfa: &Nfa, w: &[u8], spans: &[(Var, (usize, usize))]) -> bool {
    let n = w.len();
    let mut cur = nfa.initial();
    for p in 1..=n + 1 {
        let mut markers: Vec<Label> = Vec::new();
        for &(x, (s, e)) in spans {
            if s == p {
                markers.push(Label::Open(x));
            }
            if e == p {
                markers.push(Label::Close(x));
            }
        }
        if !markers.is_empty() {
            let full = (1u32 << markers.len()) - 1;
            let mut seen: BTreeSet<(usize, u32)> = cur.iter().map(|&s| (s, 0)).collect();
            let mut stack: Vec<(usize, u32)> = seen.iter().copied().collect();
            while let Some((s, mask)) = stack.pop() {
                for (k, &m) in markers.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        continue;
                    }
                    let mut next = nfa.step(&[s], m);
                    nfa.closure(&mut next);
                    for t in next {
                        if seen.insert((t, mask | (1 << k))) {
                            stack.push((t, mask | (1 << k)));
                        }
                    }
                }
            }
            cur = seen.into_iter().filter(|&(_, m)| m == full).map(|(s, _)| s).collect();
            cur.sort_unstable();
            cur.dedup();
        }
        if p <= n {
            cur = nfa.step(&cur, Label::Sym(w[p - 1]));
            nfa.closure(&mut cur);
        }
        if cur.is_empty() {
            return false;
        }
    }
    nfa.is_accepting(&cur)
}

type SpanTuple = HashMap<Var, (usize, usize)>;

fn formula_tuples(f: &RegexFormula, w: &[u8]) -> Vec<SpanTuple> {
    let mut vars = f.bound_vars();
    vars.dedup();
    let nfa = Nfa::from_formula(f);
    let n = w.len();
    let spans: Vec<(usize, usize)> = (1..=n + 1).flat_map(|i| (i..=n + 1).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; vars.len()];
    loop {
        let assignment: Vec<(Var, (usize, usize))> =
            vars.iter().zip(&choice).map(|(&v, &c)| (v, spans[c])).collect();
        if accepts_marked(&nfa, w, &assignment) {
            out.push(assignment.into_iter().collect());
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < spans.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `P(w)` for a spanner expression, as tuples of 1-based half-open spans in
/// projection order.
pub fn brute_sercq_evaluate(p: &SercqAst, w: &[u8]) -> BTreeSet<Vec<(usize, usize)>> {
    let mut joined: Vec<SpanTuple> = vec![HashMap::new()];
    for f in &p.formulas {
        let rel = formula_tuples(f, w);
        let mut next = Vec::new();
        for a in &joined {
            for b in &rel {
                if b.iter().all(|(v, s)| a.get(v).is_none_or(|t| t == s)) {
                    let mut m = a.clone();
                    m.extend(b.iter().map(|(v, s)| (*v, *s)));
                    next.push(m);
                }
            }
        }
        joined = next;
    }
    let content = |s: (usize, usize)| &w[s.0 - 1..s.1 - 1];
    joined
        .into_iter()
        .filter(|t| p.equalities.iter().all(|(x, y)| content(t[x]) == content(t[y])))
        .map(|t| p.projection.iter().map(|v| t[v]).collect())
        .collect()
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alphabet {
                let mut v: Vec<u8> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Does every word of length at most `max_len` satisfy `q`?
pub fn brute_universal_up_to(q: &FcCq, alphabet: &Alphabet, max_len: usize) -> bool {
    words_up_to(alphabet.symbols(), max_len).iter().all(|w| !brute_evaluate(q, w).is_empty())
}
