// SPDX-License-Identifier: Apache-2.0

//! Fresh variable names that never collide with names already in use.

use std::collections::{HashMap, HashSet};

use crate::model::{Var, UNIVERSE_NAME};

#[derive(Clone, Debug, Default)]
pub struct NameGen {
    used: HashSet<String>,
    next: HashMap<String, usize>,
}

impl NameGen {
    pub fn new() -> NameGen {
        let mut g = NameGen::default();
        g.used.insert(UNIVERSE_NAME.to_string());
        g
    }

    pub fn avoiding<I: IntoIterator<Item = Var>>(vars: I) -> NameGen {
        let mut g = NameGen::new();
        for v in vars {
            g.reserve(v);
        }
        g
    }

    pub fn reserve(&mut self, v: Var) {
        self.used.insert(v.name());
    }

    /// `prefix1`, `prefix2`, ... skipping anything already taken.
    pub fn fresh(&mut self, prefix: &str) -> Var {
        let n = self.next.entry(prefix.to_string()).or_insert(1);
        loop {
            let name = format!("{prefix}{n}");
            *n += 1;
            if self.used.insert(name.clone()) {
                return Var::new(&name);
            }
        }
    }

    /// `base` itself if free, otherwise `base_2`, `base_3`, ...
    pub fn fresh_like(&mut self, base: &str) -> Var {
        if self.used.insert(base.to_string()) {
            return Var::new(base);
        }
        let mut k = 2;
        loop {
            let name = format!("{base}_{k}");
            if self.used.insert(name.clone()) {
                return Var::new(&name);
            }
            k += 1;
        }
    }
}
