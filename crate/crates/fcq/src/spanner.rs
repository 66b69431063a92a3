// SPDX-License-Identifier: Apache-2.0

//! Conversions between spanner expressions and queries.
//!
//! A span `<i,j>` of variable `x` is encoded by two word variables: `x^P`
//! holds the prefix `w[1..i-1]` and `x^C` the content `w[i..j-1]`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::model::{
    Alphabet, FcCq, Item, Pattern, Regex, RegexFormula, RegularConstraint, SercqAst, Var, WordEquation,
};
use crate::names::NameGen;
use crate::syntax::check_formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpannerError {
    #[error("formula {0} is not synchronized or not functional: {1}")]
    Malformed(usize, String),
    #[error("formula {0} does not bind exactly one variable around a variable-free body")]
    NotPseudoAcyclic(usize),
    #[error("variable `{0}` is used but never bound")]
    Unbound(String),
}

pub fn prefix_var(x: Var) -> Var {
    Var::new(&format!("{x}^P"))
}

pub fn content_var(x: Var) -> Var {
    Var::new(&format!("{x}^C"))
}

pub fn suffix_var(x: Var) -> Var {
    Var::new(&format!("{x}^S"))
}

fn check(p: &SercqAst) -> Result<(), SpannerError> {
    for (i, f) in p.formulas.iter().enumerate() {
        check_formula(f).map_err(|(_, m)| SpannerError::Malformed(i, m))?;
    }
    let bound = p.svars();
    for &v in p.projection.iter().chain(p.equalities.iter().flat_map(|(a, b)| [a, b])) {
        if !bound.contains(&v) {
            return Err(SpannerError::Unbound(v.name()));
        }
    }
    Ok(())
}

/// Parse tree of a formula: concatenations with a variable on some side,
/// bindings, and variable-free leaves.
enum Node {
    Concat(usize, usize),
    Bind(Var, usize),
    Leaf(Regex),
}

fn build_tree(f: &RegexFormula, nodes: &mut Vec<Node>) -> usize {
    if let Some(r) = f.to_regex() {
        nodes.push(Node::Leaf(r));
        return nodes.len() - 1;
    }
    match f {
        RegexFormula::Concat(a, b) => {
            let l = build_tree(a, nodes);
            let r = build_tree(b, nodes);
            nodes.push(Node::Concat(l, r));
        }
        RegexFormula::Bind(x, a) => {
            let c = build_tree(a, nodes);
            nodes.push(Node::Bind(*x, c));
        }
        // Unions and stars never contain bindings in a checked formula.
        _ => unreachable!("binding under union or star"),
    }
    nodes.len() - 1
}

/// Realizes a spanner expression as a query over prefix and content
/// variables.
pub fn sercq_to_fccq(p: &SercqAst) -> Result<FcCq, SpannerError> {
    check(p)?;
    let mut gen = NameGen::new();
    for x in p.svars() {
        for v in [x, prefix_var(x), content_var(x)] {
            gen.reserve(v);
        }
    }
    let mut q = FcCq::default();
    for f in &p.formulas {
        let mut nodes = Vec::new();
        let root = build_tree(f, &mut nodes);
        if let Node::Leaf(r) = &nodes[root] {
            q.constraints.push(RegularConstraint { var: Var::UNIVERSE, regex: r.clone() });
            continue;
        }
        // Node variables in breadth-first order; bindings use x^C.
        let mut var_of: HashMap<usize, Var> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        while let Some(n) = queue.pop_front() {
            order.push(n);
            let v = match nodes[n] {
                Node::Bind(x, c) => {
                    queue.push_back(c);
                    content_var(x)
                }
                Node::Concat(l, r) => {
                    queue.extend([l, r]);
                    gen.fresh("v")
                }
                Node::Leaf(_) => gen.fresh("v"),
            };
            var_of.insert(n, v);
        }
        // Prefix patterns, top-down.
        let mut prefix: HashMap<usize, Vec<Var>> = HashMap::from([(root, Vec::new())]);
        for &n in &order {
            let pn = prefix[&n].clone();
            match nodes[n] {
                Node::Concat(l, r) => {
                    prefix.insert(l, pn.clone());
                    let mut pr = pn;
                    pr.push(var_of[&l]);
                    prefix.insert(r, pr);
                }
                Node::Bind(_, c) => {
                    prefix.insert(c, pn);
                }
                Node::Leaf(_) => {}
            }
        }
        q.equations.push(WordEquation::new(Var::UNIVERSE, Pattern::from_vars(&[var_of[&root]])));
        for &n in &order {
            let v = var_of[&n];
            match &nodes[n] {
                Node::Concat(l, r) => {
                    q.equations.push(WordEquation::new(v, Pattern::from_vars(&[var_of[l], var_of[r]])))
                }
                Node::Bind(x, c) => {
                    q.equations.push(WordEquation::new(v, Pattern::from_vars(&[var_of[c]])));
                    q.equations.push(WordEquation::new(prefix_var(*x), Pattern::from_vars(&prefix[&n])));
                }
                Node::Leaf(r) => q.constraints.push(RegularConstraint { var: v, regex: r.clone() }),
            }
        }
    }
    for &(x, y) in &p.equalities {
        q.equations.push(WordEquation::new(content_var(x), Pattern::from_vars(&[content_var(y)])));
    }
    q.head = p.projection.iter().flat_map(|&x| [prefix_var(x), content_var(x)]).collect();
    Ok(q)
}

/// Rewrites `q` so that every equation has `u` on the left and not on the
/// right. Forced-empty variables become `x in ''` constraints.
pub fn structured_normal_form(q: &FcCq) -> FcCq {
    let mut gen = NameGen::avoiding(q.vars());
    let mut out = FcCq { head: q.head.clone(), equations: Vec::new(), constraints: q.constraints.clone() };
    let eps = |v: Var| RegularConstraint { var: v, regex: Regex::Epsilon };
    for eq in &q.equations {
        let n_u = eq.rhs.count(Var::UNIVERSE);
        if n_u > 0 {
            // x = β1 u β2 forces x = u and β1 β2 = ε.
            for v in eq.rhs.vars() {
                if !v.is_universe() {
                    out.constraints.push(eps(v));
                }
            }
            if eq.rhs.0.iter().any(|i| matches!(i, Item::Sym(_))) {
                out.constraints.push(RegularConstraint { var: Var::UNIVERSE, regex: Regex::Empty });
            }
            if n_u >= 2 {
                out.constraints.push(eps(Var::UNIVERSE));
            }
            if !eq.lhs.is_universe() {
                out.equations.push(WordEquation::new(Var::UNIVERSE, Pattern::from_vars(&[eq.lhs])));
            }
            continue;
        }
        if eq.lhs.is_universe() {
            out.equations.push(eq.clone());
            continue;
        }
        let p = gen.fresh("p");
        let s = gen.fresh("s");
        out.equations.push(WordEquation::new(Var::UNIVERSE, Pattern::from_vars(&[p, eq.lhs, s])));
        let mut items = vec![Item::Var(p)];
        items.extend(eq.rhs.0.iter().copied());
        items.push(Item::Var(s));
        out.equations.push(WordEquation::new(Var::UNIVERSE, Pattern(items)));
    }
    out
}

fn sigma_star(alphabet: &Alphabet) -> RegexFormula {
    RegexFormula::Star(Box::new(RegexFormula::from_regex(&Regex::any(alphabet))))
}

/// A spanner expression whose span contents are the solutions of `q`.
pub fn fccq_to_sercq(q: &FcCq, alphabet: &Alphabet) -> SercqAst {
    let snf = structured_normal_form(q);
    let mut gen = NameGen::avoiding(snf.vars());
    let mut bound: Vec<Var> = Vec::new();
    let mut out = SercqAst { projection: q.head.clone(), ..Default::default() };
    let mut copies: HashMap<Var, usize> = HashMap::new();
    let mut bind = |x: Var, body: RegexFormula, bound: &mut Vec<Var>, eqs: &mut Vec<(Var, Var)>| {
        if bound.contains(&x) {
            let k = copies.entry(x).or_insert(1);
            *k += 1;
            let copy = gen.fresh_like(&format!("{x}_{k}"));
            eqs.push((x, copy));
            RegexFormula::bind(copy, body)
        } else {
            bound.push(x);
            RegexFormula::bind(x, body)
        }
    };
    for eq in &snf.equations {
        let mut f = RegexFormula::Epsilon;
        for (k, item) in eq.rhs.0.iter().enumerate() {
            let part = match *item {
                Item::Sym(b) => RegexFormula::Literal(b),
                Item::Var(x) => bind(x, sigma_star(alphabet), &mut bound, &mut out.equalities),
            };
            f = if k == 0 { part } else { RegexFormula::concat(f, part) };
        }
        out.formulas.push(f);
    }
    for c in &snf.constraints {
        if c.var.is_universe() {
            out.formulas.push(RegexFormula::from_regex(&c.regex));
            continue;
        }
        let inner = bind(c.var, RegexFormula::from_regex(&c.regex), &mut bound, &mut out.equalities);
        out.formulas.push(RegexFormula::concat(RegexFormula::concat(sigma_star(alphabet), inner), sigma_star(alphabet)));
    }
    out
}

/// Splits `β1 · x{β2} · β3`; `None` unless exactly one binding with a
/// variable-free body.
fn split_single_binding(f: &RegexFormula) -> Option<(Regex, Var, Regex, Regex)> {
    fn cat(a: Regex, b: Regex) -> Regex {
        match (a, b) {
            (Regex::Epsilon, b) => b,
            (a, Regex::Epsilon) => a,
            (a, b) => Regex::concat(a, b),
        }
    }
    match f {
        RegexFormula::Bind(x, body) => Some((Regex::Epsilon, *x, body.to_regex()?, Regex::Epsilon)),
        RegexFormula::Concat(a, b) => match (a.has_vars(), b.has_vars()) {
            (true, false) => {
                let (p, x, c, s) = split_single_binding(a)?;
                Some((p, x, c, cat(s, b.to_regex()?)))
            }
            (false, true) => {
                let (p, x, c, s) = split_single_binding(b)?;
                Some((cat(a.to_regex()?, p), x, c, s))
            }
            _ => None,
        },
        _ => None,
    }
}

pub fn is_pseudo_acyclic(p: &SercqAst) -> bool {
    p.formulas.iter().all(|f| f.bound_vars().len() == 1 && split_single_binding(f).is_some())
}

fn find(parent: &mut BTreeMap<Var, Var>, x: Var) -> Var {
    let p = *parent.entry(x).or_insert(x);
    if p == x {
        return x;
    }
    let r = find(parent, p);
    parent.insert(x, r);
    r
}

/// An acyclic query for a spanner expression in which every formula binds
/// one variable.
pub fn pseudo_acyclic_to_acyclic_fccq(p: &SercqAst) -> Result<FcCq, SpannerError> {
    check(p)?;
    let mut parts = Vec::new();
    for (i, f) in p.formulas.iter().enumerate() {
        if f.bound_vars().len() != 1 {
            return Err(SpannerError::NotPseudoAcyclic(i));
        }
        parts.push(split_single_binding(f).ok_or(SpannerError::NotPseudoAcyclic(i))?);
    }
    let svars = p.svars();
    let mut gen = NameGen::new();
    for &x in &svars {
        for v in [x, prefix_var(x), content_var(x), suffix_var(x)] {
            gen.reserve(v);
        }
    }
    let mut q = FcCq::default();
    for &x in &svars {
        let z = gen.fresh("z");
        q.equations.push(WordEquation::new(Var::UNIVERSE, Pattern::from_vars(&[prefix_var(x), z])));
        q.equations.push(WordEquation::new(z, Pattern::from_vars(&[content_var(x), suffix_var(x)])));
    }
    for (b1, x, b2, b3) in parts {
        q.constraints.push(RegularConstraint { var: prefix_var(x), regex: b1 });
        q.constraints.push(RegularConstraint { var: content_var(x), regex: b2 });
        q.constraints.push(RegularConstraint { var: suffix_var(x), regex: b3 });
    }
    let mut parent = BTreeMap::new();
    for &(x, y) in &p.equalities {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent.insert(rx, ry);
            q.equations.push(WordEquation::new(content_var(x), Pattern::from_vars(&[content_var(y)])));
        }
    }
    q.head = p.projection.iter().flat_map(|&x| [prefix_var(x), content_var(x)]).collect();
    Ok(q)
}

/// Maps spanner results (spans in projection order) to the word tuples of
/// the realizing query (`x^P`, `x^C` per projected variable).
pub fn spans_to_words(spans: &[(usize, usize)], w: &[u8]) -> Vec<Vec<u8>> {
    spans
        .iter()
        .flat_map(|&(i, j)| [w[..i - 1].to_vec(), w[i - 1..j - 1].to_vec()])
        .collect()
}
