// SPDX-License-Identifier: Apache-2.0

//! Domain types shared by the whole pipeline.
//!
//! Variables are interned process-wide, so a [`Var`] is a `Copy` integer and
//! two variables are equal exactly when their names are equal. The name `u`
//! is reserved for the universe variable, which always denotes the input word.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("variable `{0}` has no value in the substitution")]
    UnboundVariable(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("head variable `{0}` does not occur in the body")]
    HeadNotBound(String),
    #[error("the universe variable cannot appear in the head")]
    UniverseInHead,
}

struct Interner {
    names: Vec<Box<str>>,
    ids: HashMap<Box<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static CELL: OnceLock<RwLock<Interner>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut ids = HashMap::new();
        ids.insert(Box::from(UNIVERSE_NAME), 0);
        RwLock::new(Interner { names: vec![Box::from(UNIVERSE_NAME)], ids })
    })
}

/// Reserved spelling of the universe variable.
pub const UNIVERSE_NAME: &str = "u";

/// An interned variable name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub const UNIVERSE: Var = Var(0);

    pub fn new(name: &str) -> Var {
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Var(id);
        }
        let mut guard = interner().write().unwrap();
        if let Some(&id) = guard.ids.get(name) {
            return Var(id);
        }
        let id = guard.names.len() as u32;
        guard.names.push(Box::from(name));
        guard.ids.insert(Box::from(name), id);
        Var(id)
    }

    /// Looks a name up without interning it.
    pub fn existing(name: &str) -> Option<Var> {
        interner().read().unwrap().ids.get(name).map(|&id| Var(id))
    }

    pub fn name(self) -> String {
        interner().read().unwrap().names[self.0 as usize].to_string()
    }

    pub fn is_universe(self) -> bool {
        self == Var::UNIVERSE
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Bytes that the query grammar uses as punctuation and therefore can never
/// be terminal symbols.
pub const RESERVED: &[u8] = b"'\"()|*+#.,=/{}\\%:;[]";

/// The terminal alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(bytes: &[u8]) -> Result<Alphabet, ModelError> {
        let mut symbols: Vec<u8> = bytes.to_vec();
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(ModelError::InvalidAlphabet("alphabet is empty".into()));
        }
        for &b in &symbols {
            if !b.is_ascii_graphic() || RESERVED.contains(&b) {
                return Err(ModelError::InvalidAlphabet(format!(
                    "byte {:?} is reserved or not printable",
                    b as char
                )));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn contains(&self, b: u8) -> bool {
        self.symbols.binary_search(&b).is_ok()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn first(&self) -> u8 {
        self.symbols[0]
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet { symbols: (b'a'..=b'z').collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Sym(u8),
    Var(Var),
}

/// A word over terminals and variables; the empty pattern is ε.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pattern(pub Vec<Item>);

impl Pattern {
    pub fn from_vars(vars: &[Var]) -> Pattern {
        Pattern(vars.iter().map(|&v| Item::Var(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        vars_of(self)
    }

    pub fn is_terminal_free(&self) -> bool {
        self.0.iter().all(|it| matches!(it, Item::Var(_)))
    }

    /// The variables of a terminal-free pattern, in order.
    pub fn var_seq(&self) -> Option<Vec<Var>> {
        self.0
            .iter()
            .map(|it| match it {
                Item::Var(v) => Some(*v),
                Item::Sym(_) => None,
            })
            .collect()
    }

    pub fn count(&self, v: Var) -> usize {
        self.0.iter().filter(|it| **it == Item::Var(v)).count()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("''");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            if !first {
                f.write_str(".")?;
            }
            first = false;
            match self.0[i] {
                Item::Var(v) => {
                    write!(f, "{v}")?;
                    i += 1;
                }
                Item::Sym(_) => {
                    f.write_str("'")?;
                    while let Some(Item::Sym(b)) = self.0.get(i) {
                        write!(f, "{}", *b as char)?;
                        i += 1;
                    }
                    f.write_str("'")?;
                }
            }
        }
        Ok(())
    }
}

pub fn vars_of(p: &Pattern) -> BTreeSet<Var> {
    p.0.iter()
        .filter_map(|it| match it {
            Item::Var(v) => Some(*v),
            Item::Sym(_) => None,
        })
        .collect()
}

/// Applies a substitution: terminals stay, variables are replaced.
pub fn apply_substitution(
    p: &Pattern,
    sigma: &HashMap<Var, Vec<u8>>,
) -> Result<Vec<u8>, ModelError> {
    let mut out = Vec::new();
    for it in &p.0 {
        match it {
            Item::Sym(b) => out.push(*b),
            Item::Var(v) => match sigma.get(v) {
                Some(word) => out.extend_from_slice(word),
                None => return Err(ModelError::UnboundVariable(v.name())),
            },
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(u8),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    /// `r+` as `r·r*`.
    pub fn plus(a: Regex) -> Regex {
        Regex::concat(a.clone(), Regex::star(a))
    }

    /// A word as a left-nested concatenation of literals; ε when empty.
    pub fn word(w: &[u8]) -> Regex {
        let mut it = w.iter();
        match it.next() {
            None => Regex::Epsilon,
            Some(&b) => it.fold(Regex::Literal(b), |acc, &c| Regex::concat(acc, Regex::Literal(c))),
        }
    }

    /// Σ as a left-nested union.
    pub fn any(alphabet: &Alphabet) -> Regex {
        let mut it = alphabet.symbols().iter();
        let first = Regex::Literal(*it.next().expect("alphabet is non-empty"));
        it.fold(first, |acc, &c| Regex::union(acc, Regex::Literal(c)))
    }

    pub fn symbols(&self, out: &mut BTreeSet<u8>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Literal(b) => {
                out.insert(*b);
            }
            Regex::Union(a, b) | Regex::Concat(a, b) => {
                a.symbols(out);
                b.symbols(out);
            }
            Regex::Star(a) => a.symbols(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Literal(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
        }
    }
}

/// A regular expression that may bind span variables, `x{γ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegexFormula {
    Empty,
    Epsilon,
    Literal(u8),
    Union(Box<RegexFormula>, Box<RegexFormula>),
    Concat(Box<RegexFormula>, Box<RegexFormula>),
    Star(Box<RegexFormula>),
    Bind(Var, Box<RegexFormula>),
}

impl RegexFormula {
    pub fn concat(a: RegexFormula, b: RegexFormula) -> RegexFormula {
        RegexFormula::Concat(Box::new(a), Box::new(b))
    }

    pub fn bind(x: Var, a: RegexFormula) -> RegexFormula {
        RegexFormula::Bind(x, Box::new(a))
    }

    pub fn from_regex(r: &Regex) -> RegexFormula {
        match r {
            Regex::Empty => RegexFormula::Empty,
            Regex::Epsilon => RegexFormula::Epsilon,
            Regex::Literal(b) => RegexFormula::Literal(*b),
            Regex::Union(a, b) => RegexFormula::Union(
                Box::new(RegexFormula::from_regex(a)),
                Box::new(RegexFormula::from_regex(b)),
            ),
            Regex::Concat(a, b) => RegexFormula::concat(RegexFormula::from_regex(a), RegexFormula::from_regex(b)),
            Regex::Star(a) => RegexFormula::Star(Box::new(RegexFormula::from_regex(a))),
        }
    }

    /// The plain regex, if no variable is bound anywhere.
    pub fn to_regex(&self) -> Option<Regex> {
        Some(match self {
            RegexFormula::Empty => Regex::Empty,
            RegexFormula::Epsilon => Regex::Epsilon,
            RegexFormula::Literal(b) => Regex::Literal(*b),
            RegexFormula::Union(a, b) => Regex::union(a.to_regex()?, b.to_regex()?),
            RegexFormula::Concat(a, b) => Regex::concat(a.to_regex()?, b.to_regex()?),
            RegexFormula::Star(a) => Regex::star(a.to_regex()?),
            RegexFormula::Bind(..) => return None,
        })
    }

    /// Bound variables in left-to-right order (with repeats).
    pub fn bound_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<Var>) {
        match self {
            RegexFormula::Empty | RegexFormula::Epsilon | RegexFormula::Literal(_) => {}
            RegexFormula::Union(a, b) | RegexFormula::Concat(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            RegexFormula::Star(a) => a.collect_bound(out),
            RegexFormula::Bind(x, a) => {
                out.push(*x);
                a.collect_bound(out);
            }
        }
    }

    pub fn has_vars(&self) -> bool {
        !self.bound_vars().is_empty()
    }
}

/// `π_Y ζ=_{x1,y1} ... (γ1 ⋈ ... ⋈ γk)` over synchronized, functional formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SercqAst {
    pub projection: Vec<Var>,
    pub equalities: Vec<(Var, Var)>,
    pub formulas: Vec<RegexFormula>,
}

impl SercqAst {
    /// Every span variable bound by some formula, in first-occurrence order.
    pub fn svars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for f in &self.formulas {
            for v in f.bound_vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordEquation {
    pub lhs: Var,
    pub rhs: Pattern,
}

impl WordEquation {
    pub fn new(lhs: Var, rhs: Pattern) -> WordEquation {
        WordEquation { lhs, rhs }
    }

    /// Variables of both sides, the universe variable included.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = self.rhs.vars();
        s.insert(self.lhs);
        s
    }
}

impl fmt::Display for WordEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularConstraint {
    pub var: Var,
    pub regex: Regex,
}

/// A conjunctive query over word equations and regular constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FcCq {
    pub head: Vec<Var>,
    pub equations: Vec<WordEquation>,
    pub constraints: Vec<RegularConstraint>,
}

impl FcCq {
    /// All variables of the body, including `u` if it occurs.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for eq in &self.equations {
            s.extend(eq.vars());
        }
        for c in &self.constraints {
            s.insert(c.var);
        }
        s
    }

    pub fn is_boolean(&self) -> bool {
        self.head.is_empty()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let body = self.vars();
        for &h in &self.head {
            if h.is_universe() {
                return Err(ModelError::UniverseInHead);
            }
            if !body.contains(&h) {
                return Err(ModelError::HeadNotBound(h.name()));
            }
        }
        Ok(())
    }
}

/// A (binary or k-ary) bracketing of a terminal-free pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracketing {
    Leaf(Var),
    Node(Vec<Bracketing>),
}

impl Bracketing {
    pub fn node(children: Vec<Bracketing>) -> Bracketing {
        Bracketing::Node(children)
    }

    pub fn pair(a: Bracketing, b: Bracketing) -> Bracketing {
        Bracketing::Node(vec![a, b])
    }

    /// The underlying pattern.
    pub fn flatten(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<Var>) {
        match self {
            Bracketing::Leaf(v) => out.push(*v),
            Bracketing::Node(cs) => cs.iter().for_each(|c| c.flatten_into(out)),
        }
    }

    pub fn is_binary(&self) -> bool {
        match self {
            Bracketing::Leaf(_) => true,
            Bracketing::Node(cs) => cs.len() == 2 && cs.iter().all(Bracketing::is_binary),
        }
    }

    /// True if `(a·b)` or `(b·a)` occurs as a sub-bracketing.
    pub fn has_adjacent_pair(&self, a: Var, b: Var) -> bool {
        match self {
            Bracketing::Leaf(_) => false,
            Bracketing::Node(cs) => {
                if let [Bracketing::Leaf(x), Bracketing::Leaf(y)] = cs.as_slice() {
                    if (*x == a && *y == b) || (*x == b && *y == a) {
                        return true;
                    }
                }
                cs.iter().any(|c| c.has_adjacent_pair(a, b))
            }
        }
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::Leaf(v) => write!(f, "{v}"),
            Bracketing::Node(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An equation whose right-hand side is a short sequence of variables
/// (length 2 for binary decompositions, 1 for copy equations, up to k).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinEq {
    pub lhs: Var,
    pub rhs: Vec<Var>,
}

impl BinEq {
    pub fn new(lhs: Var, rhs: Vec<Var>) -> BinEq {
        BinEq { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s: BTreeSet<Var> = self.rhs.iter().copied().collect();
        s.insert(self.lhs);
        s
    }
}

impl fmt::Display for BinEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.lhs)?;
        for (i, v) in self.rhs.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A query whose equations all have short right-hand sides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoFcCq {
    pub head: Vec<Var>,
    pub equations: Vec<BinEq>,
    pub constraints: Vec<RegularConstraint>,
    pub introduced: BTreeSet<Var>,
}

impl TwoFcCq {
    /// Back-substitutes introduced variables starting from `root`.
    pub fn expand(&self, root: Var) -> Vec<Var> {
        let defs: HashMap<Var, &BinEq> = self
            .equations
            .iter()
            .filter(|e| self.introduced.contains(&e.lhs) || e.lhs == root)
            .map(|e| (e.lhs, e))
            .collect();
        let mut out = Vec::new();
        let mut stack = vec![root];
        let mut first = true;
        while let Some(v) = stack.pop() {
            let expandable = first || self.introduced.contains(&v);
            first = false;
            match defs.get(&v) {
                Some(eq) if expandable => stack.extend(eq.rhs.iter().rev()),
                _ => out.push(v),
            }
        }
        out
    }

    pub fn to_fccq(&self) -> FcCq {
        FcCq {
            head: self.head.clone(),
            equations: self
                .equations
                .iter()
                .map(|e| WordEquation::new(e.lhs, Pattern::from_vars(&e.rhs)))
                .collect(),
            constraints: self.constraints.clone(),
        }
    }

    /// Variable sets of the equations with `u` removed.
    pub fn atom_var_sets(&self) -> Vec<BTreeSet<Var>> {
        self.equations.iter().map(|e| e.vars()).collect()
    }
}

impl fmt::Display for TwoFcCq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.equations.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(items: &[&str]) -> Pattern {
        Pattern(
            items
                .iter()
                .flat_map(|s| {
                    if let Some(lit) = s.strip_prefix('\'') {
                        lit.bytes().map(Item::Sym).collect::<Vec<_>>()
                    } else {
                        vec![Item::Var(Var::new(s))]
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn vars_of_examples() {
        let p = pat(&["'ab", "x", "'ba", "x", "y", "x"]);
        let expected: BTreeSet<Var> = [Var::new("x"), Var::new("y")].into_iter().collect();
        assert_eq!(vars_of(&p), expected);
        assert!(vars_of(&Pattern::default()).is_empty());
        assert!(vars_of(&pat(&["'abba"])).is_empty());
    }

    #[test]
    fn substitution_examples() {
        let x = Var::new("x");
        let y = Var::new("y");
        let p = pat(&["'ab", "x", "'ba", "x", "y", "x"]);
        let sigma: HashMap<Var, Vec<u8>> = [(x, b"aa".to_vec()), (y, vec![])].into();
        assert_eq!(apply_substitution(&p, &sigma).unwrap(), b"abaabaaaaa");
        let eps: HashMap<Var, Vec<u8>> = [(x, vec![])].into();
        assert_eq!(apply_substitution(&pat(&["x"]), &eps).unwrap(), b"");
        let ab: HashMap<Var, Vec<u8>> = [(x, b"ab".to_vec())].into();
        assert_eq!(apply_substitution(&pat(&["x", "x"]), &ab).unwrap(), b"abab");
        assert_eq!(
            apply_substitution(&pat(&["y"]), &ab),
            Err(ModelError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn interning_is_stable() {
        assert_eq!(Var::new("u"), Var::UNIVERSE);
        assert_eq!(Var::new("alpha_1"), Var::new("alpha_1"));
        assert_ne!(Var::new("alpha_1"), Var::new("alpha_2"));
        assert_eq!(Var::new("alpha_1").name(), "alpha_1");
    }

    #[test]
    fn alphabet_rejects_metacharacters() {
        assert!(Alphabet::new(b"ab").is_ok());
        assert!(Alphabet::new(b"a|").is_err());
        assert!(Alphabet::new(b"").is_err());
        assert!(Alphabet::new(b"a b").is_err());
        assert_eq!(Alphabet::new(b"bab").unwrap().symbols(), b"ab");
    }

    #[test]
    fn head_validation() {
        let x = Var::new("x");
        let q = FcCq {
            head: vec![x],
            equations: vec![WordEquation::new(Var::UNIVERSE, pat(&["x"]))],
            constraints: vec![],
        };
        assert!(q.validate().is_ok());
        let bad = FcCq { head: vec![Var::new("nowhere")], ..q.clone() };
        assert!(matches!(bad.validate(), Err(ModelError::HeadNotBound(_))));
        let uni = FcCq { head: vec![Var::UNIVERSE], ..q };
        assert_eq!(uni.validate(), Err(ModelError::UniverseInHead));
    }

    #[test]
    fn expand_reverses_decomposition() {
        let [x1, x2, z1, z2] = ["x1", "x2", "z1", "z2"].map(Var::new);
        let q = TwoFcCq {
            head: vec![],
            equations: vec![
                BinEq::new(z1, vec![x1, x2]),
                BinEq::new(z2, vec![z1, x1]),
                BinEq::new(Var::UNIVERSE, vec![z2, z1]),
            ],
            constraints: vec![],
            introduced: [z1, z2].into_iter().collect(),
        };
        assert_eq!(q.expand(Var::UNIVERSE), vec![x1, x2, x1, x1, x2]);
    }

    #[test]
    fn pattern_display_groups_terminals() {
        assert_eq!(pat(&["'ab", "x", "'b"]).to_string(), "'ab'.x.'b'");
        assert_eq!(Pattern::default().to_string(), "''");
    }
}
