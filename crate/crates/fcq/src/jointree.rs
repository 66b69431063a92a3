// SPDX-License-Identifier: Apache-2.0

//! Join trees, the GYO reduction and a direct checker for the
//! connectedness condition.
//!
//! The universe variable is a constant: it is dropped from every node before
//! any check.

use std::collections::{BTreeSet, VecDeque};

use crate::model::Var;

/// A tree whose node `i` stands for atom `i` of some query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    pub vars: Vec<BTreeSet<Var>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic;

impl JoinTree {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vars.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Parent pointers and a BFS order from `root`.
    pub fn rooted(&self, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let adj = self.neighbours();
        let mut parent = vec![None; self.vars.len()];
        let mut seen = vec![false; self.vars.len()];
        let mut order = Vec::with_capacity(self.vars.len());
        let mut queue = VecDeque::new();
        if !self.vars.is_empty() {
            seen[root] = true;
            queue.push_back(root);
        }
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    parent[m] = Some(n);
                    queue.push_back(m);
                }
            }
        }
        (parent, order)
    }
}

fn strip_universe(s: &BTreeSet<Var>) -> BTreeSet<Var> {
    s.iter().copied().filter(|v| !v.is_universe()).collect()
}

/// GYO reduction.
///
/// Repeatedly marks every variable that occurs in exactly one unmarked node,
/// then absorbs one unmarked node whose unmarked variables are contained in
/// those of another unmarked node (least index first, into the least
/// eligible absorber). Succeeds iff a single unmarked node remains.
pub fn gyo(atoms: &[BTreeSet<Var>]) -> Result<JoinTree, Cyclic> {
    let vars: Vec<BTreeSet<Var>> = atoms.iter().map(strip_universe).collect();
    let n = vars.len();
    if n == 0 {
        return Err(Cyclic);
    }
    let mut alive = vec![true; n];
    let mut live_vars = vars.clone();
    let mut edges = Vec::new();
    let mut remaining = n;
    loop {
        let mut changed = false;

        let mut counts: std::collections::HashMap<Var, usize> = Default::default();
        for (i, s) in live_vars.iter().enumerate() {
            if alive[i] {
                for v in s {
                    *counts.entry(*v).or_default() += 1;
                }
            }
        }
        for (i, s) in live_vars.iter_mut().enumerate() {
            if alive[i] {
                let before = s.len();
                s.retain(|v| counts[v] > 1);
                changed |= s.len() != before;
            }
        }

        if remaining > 1 {
            'absorb: for i in 0..n {
                if !alive[i] {
                    continue;
                }
                for j in 0..n {
                    if j != i && alive[j] && live_vars[i].is_subset(&live_vars[j]) {
                        alive[i] = false;
                        remaining -= 1;
                        edges.push((i, j));
                        changed = true;
                        break 'absorb;
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }
    if remaining == 1 {
        Ok(JoinTree { vars, edges })
    } else {
        Err(Cyclic)
    }
}

/// True iff `t` is a tree and, for every variable other than `u`, the nodes
/// containing it induce a connected subtree.
pub fn verify_join_tree(t: &JoinTree) -> bool {
    let n = t.vars.len();
    if n == 0 {
        return true;
    }
    if t.edges.len() != n - 1 {
        return false;
    }
    let (_, order) = t.rooted(0);
    if order.len() != n {
        return false;
    }
    let all: BTreeSet<Var> = t.vars.iter().flatten().copied().collect();
    let adj = t.neighbours();
    for x in all.into_iter().filter(|v| !v.is_universe()) {
        let holders: Vec<usize> = (0..n).filter(|&i| t.vars[i].contains(&x)).collect();
        let mut seen = vec![false; n];
        let mut stack = vec![holders[0]];
        seen[holders[0]] = true;
        let mut reached = 0;
        while let Some(a) = stack.pop() {
            reached += 1;
            for &b in &adj[a] {
                if !seen[b] && t.vars[b].contains(&x) {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if reached != holders.len() {
            return false;
        }
    }
    true
}
