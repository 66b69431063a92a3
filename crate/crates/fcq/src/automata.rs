// SPDX-License-Identifier: Apache-2.0

//! Thompson NFAs with subset simulation, plus a lazily built DFA over bytes.
//!
//! Transitions are labelled by a terminal or by a variable marker, so the
//! same construction serves plain regexes and regex formulas (ref-words).

use std::collections::HashMap;

use crate::model::{Regex, RegexFormula, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Sym(u8),
    Open(Var),
    Close(Var),
}

#[derive(Clone, Debug)]
pub struct Nfa {
    pub start: usize,
    pub accept: usize,
    eps: Vec<Vec<usize>>,
    trans: Vec<Vec<(Label, usize)>>,
}

impl Nfa {
    fn empty() -> Nfa {
        Nfa { start: 0, accept: 0, eps: Vec::new(), trans: Vec::new() }
    }

    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.trans.push(Vec::new());
        self.eps.len() - 1
    }

    pub fn from_regex(r: &Regex) -> Nfa {
        Nfa::from_formula(&RegexFormula::from_regex(r))
    }

    pub fn from_formula(r: &RegexFormula) -> Nfa {
        let mut nfa = Nfa::empty();
        let (s, a) = nfa.build(r);
        nfa.start = s;
        nfa.accept = a;
        nfa
    }

    fn build(&mut self, r: &RegexFormula) -> (usize, usize) {
        let s = self.state();
        let a = self.state();
        match r {
            RegexFormula::Empty => {}
            RegexFormula::Epsilon => self.eps[s].push(a),
            RegexFormula::Literal(b) => self.trans[s].push((Label::Sym(*b), a)),
            RegexFormula::Union(l, r) => {
                let (ls, la) = self.build(l);
                let (rs, ra) = self.build(r);
                self.eps[s].extend([ls, rs]);
                self.eps[la].push(a);
                self.eps[ra].push(a);
            }
            RegexFormula::Concat(l, r) => {
                let (ls, la) = self.build(l);
                let (rs, ra) = self.build(r);
                self.eps[s].push(ls);
                self.eps[la].push(rs);
                self.eps[ra].push(a);
            }
            RegexFormula::Star(inner) => {
                let (is, ia) = self.build(inner);
                self.eps[s].extend([is, a]);
                self.eps[ia].extend([is, a]);
            }
            RegexFormula::Bind(x, inner) => {
                let (is, ia) = self.build(inner);
                let open = self.state();
                self.eps[s].push(open);
                self.trans[open].push((Label::Open(*x), is));
                self.trans[ia].push((Label::Close(*x), a));
            }
        }
        (s, a)
    }

    pub fn num_states(&self) -> usize {
        self.eps.len()
    }

    /// Extends `set` (a sorted, deduplicated state list) by ε-moves.
    pub fn closure(&self, set: &mut Vec<usize>) {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = Vec::new();
        for &s in set.iter() {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        set.clear();
        set.extend((0..self.num_states()).filter(|&s| seen[s]));
    }

    /// States reachable by one `label` move from `set`, before closure.
    pub fn step(&self, set: &[usize], label: Label) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|&s| self.trans[s].iter().filter(move |(l, _)| *l == label).map(|&(_, t)| t))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn initial(&self) -> Vec<usize> {
        let mut set = vec![self.start];
        self.closure(&mut set);
        set
    }

    pub fn is_accepting(&self, set: &[usize]) -> bool {
        set.binary_search(&self.accept).is_ok()
    }

    /// Subset simulation over a plain word.
    pub fn accepts(&self, word: &[u8]) -> bool {
        let mut cur = self.initial();
        for &b in word {
            cur = self.step(&cur, Label::Sym(b));
            if cur.is_empty() {
                return false;
            }
            self.closure(&mut cur);
        }
        self.is_accepting(&cur)
    }
}

/// Subset construction performed on demand and memoised.
#[derive(Debug)]
pub struct LazyDfa {
    nfa: Nfa,
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, u32>,
    accepting: Vec<bool>,
    table: Vec<[u32; 256]>,
}

const UNKNOWN: u32 = u32::MAX;

impl LazyDfa {
    /// State 0 is the dead state, state 1 the initial state.
    pub fn new(nfa: Nfa) -> LazyDfa {
        let mut dfa = LazyDfa {
            nfa,
            states: Vec::new(),
            index: HashMap::new(),
            accepting: Vec::new(),
            table: Vec::new(),
        };
        dfa.intern(Vec::new());
        let init = dfa.nfa.initial();
        dfa.intern(init);
        dfa
    }

    pub fn from_regex(r: &Regex) -> LazyDfa {
        LazyDfa::new(Nfa::from_regex(r))
    }

    fn intern(&mut self, set: Vec<usize>) -> u32 {
        if let Some(&id) = self.index.get(&set) {
            return id;
        }
        let id = self.states.len() as u32;
        self.accepting.push(self.nfa.is_accepting(&set));
        let mut row = [UNKNOWN; 256];
        if set.is_empty() {
            row = [0; 256];
        }
        self.table.push(row);
        self.index.insert(set.clone(), id);
        self.states.push(set);
        id
    }

    pub const DEAD: u32 = 0;
    pub const START: u32 = 1;

    pub fn next(&mut self, state: u32, b: u8) -> u32 {
        let t = self.table[state as usize][b as usize];
        if t != UNKNOWN {
            return t;
        }
        let mut set = self.nfa.step(&self.states[state as usize], Label::Sym(b));
        self.nfa.closure(&mut set);
        let id = self.intern(set);
        self.table[state as usize][b as usize] = id;
        id
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    pub fn accepts(&mut self, word: &[u8]) -> bool {
        let mut s = LazyDfa::START;
        for &b in word {
            s = self.next(s, b);
            if s == LazyDfa::DEAD {
                return false;
            }
        }
        self.is_accepting(s)
    }
}
