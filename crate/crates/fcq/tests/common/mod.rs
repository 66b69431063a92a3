// SPDX-License-Identifier: Apache-2.0

//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use fcq::{Alphabet, FcCq, Item, Pattern, Regex, RegexFormula, RegularConstraint, SercqAst, Var, WordEquation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ab() -> Alphabet {
    Alphabet::new(b"ab").unwrap()
}

pub fn xs(n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::new(&format!("x{i}"))).collect()
}

/// Terminal-free pattern over `x1..x{max_vars}`.
pub fn pattern_vars<R: Rng>(r: &mut R, max_len: usize, max_vars: usize) -> Vec<Var> {
    let pool = xs(max_vars);
    let len = r.gen_range(1..=max_len);
    (0..len).map(|_| *pool.choose(r).unwrap()).collect()
}

/// Every word over `x1..x{n}` of length `len`.
pub fn all_patterns(len: usize, n: usize) -> Vec<Vec<Var>> {
    let pool = xs(n);
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n);
        for p in &out {
            for &v in &pool {
                let mut q: Vec<Var> = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn word<R: Rng>(r: &mut R, max_len: usize) -> Vec<u8> {
    let len = r.gen_range(0..=max_len);
    (0..len).map(|_| if r.gen_bool(0.5) { b'a' } else { b'b' }).collect()
}

/// Small regex over {a, b}.
pub fn regex<R: Rng>(r: &mut R, depth: usize) -> Regex {
    let leaf = |r: &mut R| match r.gen_range(0..6) {
        0 => Regex::Epsilon,
        1 | 2 => Regex::Literal(b'a'),
        3 => Regex::Literal(b'b'),
        _ => Regex::star(Regex::any(&ab())),
    };
    if depth == 0 {
        return leaf(r);
    }
    match r.gen_range(0..5) {
        0 => Regex::union(regex(r, depth - 1), regex(r, depth - 1)),
        1 | 2 => Regex::concat(regex(r, depth - 1), regex(r, depth - 1)),
        3 => Regex::star(regex(r, depth - 1)),
        _ => leaf(r),
    }
}

fn rhs<R: Rng>(r: &mut R, pool: &[Var], min: usize, max: usize, p_terminal: f64) -> Pattern {
    let len = r.gen_range(min..=max);
    Pattern(
        (0..len)
            .map(|_| {
                if r.gen_bool(p_terminal) {
                    Item::Sym(if r.gen_bool(0.5) { b'a' } else { b'b' })
                } else {
                    Item::Var(*pool.choose(r).unwrap())
                }
            })
            .collect(),
    )
}

fn body_vars(q: &FcCq) -> Vec<Var> {
    q.vars().into_iter().filter(|v| !v.is_universe()).collect()
}

/// Query with up to three equations (rhs length at most five), up to two
/// regular constraints and a random head.
pub fn query<R: Rng>(r: &mut R) -> FcCq {
    let pool: Vec<Var> = ["x", "y", "z", "w"].iter().map(|s| Var::new(s)).collect();
    let mut q = FcCq::default();
    let n = r.gen_range(1..=3);
    for i in 0..n {
        let lhs = if i == 0 || r.gen_bool(0.2) { Var::UNIVERSE } else { *pool.choose(r).unwrap() };
        q.equations.push(WordEquation::new(lhs, rhs(r, &pool, 1, 5, 0.25)));
    }
    let vars = body_vars(&q);
    if !vars.is_empty() {
        for _ in 0..r.gen_range(0..=2) {
            q.constraints.push(RegularConstraint { var: *vars.choose(r).unwrap(), regex: regex(r, 2) });
        }
        let k = r.gen_range(0..=vars.len().min(2));
        q.head = vars.choose_multiple(r, k).copied().collect();
    }
    q
}

/// Boolean query without regular constraints.
pub fn pure_boolean_query<R: Rng>(r: &mut R) -> FcCq {
    let pool: Vec<Var> = ["x", "y", "z"].iter().map(|s| Var::new(s)).collect();
    let mut q = FcCq::default();
    let n = r.gen_range(1..=3);
    // Terminals rule out universality, so keep them rare.
    let p_terminal = if r.gen_bool(0.5) { 0.0 } else { 0.2 };
    for i in 0..n {
        let lhs = if i == 0 || r.gen_bool(0.3) { Var::UNIVERSE } else { *pool.choose(r).unwrap() };
        q.equations.push(WordEquation::new(lhs, rhs(r, &pool, 0, 4, p_terminal)));
    }
    q
}

/// `β1 · x{β2} · β3` with variable-free `β`s.
fn single_binding<R: Rng>(r: &mut R, x: Var) -> RegexFormula {
    let side = |r: &mut R| {
        if r.gen_bool(0.5) {
            RegexFormula::from_regex(&Regex::star(Regex::any(&ab())))
        } else {
            RegexFormula::from_regex(&regex(r, 2))
        }
    };
    let b1 = side(r);
    let b2 = RegexFormula::from_regex(&regex(r, 2));
    let b3 = side(r);
    RegexFormula::concat(RegexFormula::concat(b1, RegexFormula::bind(x, b2)), b3)
}

/// Spanner expression in which every formula binds exactly one variable.
pub fn pseudo_acyclic_sercq<R: Rng>(r: &mut R) -> SercqAst {
    let pool: Vec<Var> = ["x", "y", "z"].iter().map(|s| Var::new(s)).collect();
    let mut p = SercqAst::default();
    for _ in 0..r.gen_range(1..=3) {
        let x = *pool.choose(r).unwrap();
        p.formulas.push(single_binding(r, x));
    }
    let bound = p.svars();
    if bound.len() >= 2 && r.gen_bool(0.5) {
        let pair: Vec<Var> = bound.choose_multiple(r, 2).copied().collect();
        p.equalities.push((pair[0], pair[1]));
    }
    let k = r.gen_range(1..=bound.len());
    p.projection = bound.choose_multiple(r, k).copied().collect();
    p
}

/// Pattern of exactly `len` variables drawn from `x1..x{n}`.
pub fn pattern_vars_exact<R: Rng>(r: &mut R, len: usize, n: usize) -> Vec<Var> {
    let pool = xs(n);
    (0..len).map(|_| *pool.choose(r).unwrap()).collect()
}

/// One representative per renaming class of patterns of length `len` over at
/// most `n` variables: variables appear in order of first occurrence.
pub fn canonical_patterns(len: usize, n: usize) -> Vec<Vec<Var>> {
    let pool = xs(n);
    let mut out = Vec::new();
    fn go(len: usize, pool: &[Var], used: usize, cur: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for (i, &v) in pool.iter().enumerate().take((used + 1).min(pool.len())) {
            cur.push(v);
            go(len, pool, used.max(i + 1), cur, out);
            cur.pop();
        }
    }
    go(len, &pool, 0, &mut Vec::new(), &mut out);
    out
}

/// Spanner expression whose formulas are concatenations of variable-free
/// regexes and bindings, each variable bound at most once per formula.
pub fn sercq<R: Rng>(r: &mut R) -> SercqAst {
    let pool: Vec<Var> = ["x", "y", "z"].iter().map(|s| Var::new(s)).collect();
    let mut p = SercqAst::default();
    for _ in 0..r.gen_range(1..=2) {
        let mut f = RegexFormula::from_regex(&regex(r, 1));
        let mut free = pool.clone();
        free.shuffle(r);
        for x in free.into_iter().take(r.gen_range(0..=2)) {
            let bound = RegexFormula::bind(x, RegexFormula::from_regex(&regex(r, 1)));
            f = RegexFormula::concat(f, bound);
            f = RegexFormula::concat(f, RegexFormula::from_regex(&regex(r, 1)));
        }
        p.formulas.push(f);
    }
    let bound = p.svars();
    if bound.len() >= 2 && r.gen_bool(0.3) {
        let pair: Vec<Var> = bound.choose_multiple(r, 2).copied().collect();
        p.equalities.push((pair[0], pair[1]));
    }
    let k = r.gen_range(0..=bound.len());
    p.projection = bound.choose_multiple(r, k).copied().collect();
    p
}
