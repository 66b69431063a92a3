// SPDX-License-Identifier: Apache-2.0

//! Ids for the distinct factors of the input word.
//!
//! Factor ids are built length by length: the id of `w[i..i+l]` is looked up
//! from the pair (id of `w[i..i+l-1]`, `w[i+l-1]`). The resulting table has
//! one entry per (start, length), so it takes quadratic space. Id 0 is ε.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::automata::LazyDfa;
use crate::model::{Alphabet, Regex};

pub type FactorId = u32;

pub const EPSILON: FactorId = 0;

/// A 1-based half-open span `⟨start, end⟩` denoting `w[start..end-1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("span <{0},{1}> is not a span of a word of length {2}")]
    InvalidSpan(usize, usize, usize),
    #[error("byte {0:?} at position {1} is not in the alphabet")]
    OutsideAlphabet(char, usize),
}

#[derive(Clone, Debug)]
pub struct WordIndex {
    word: Vec<u8>,
    /// `levels[l][i]` is the id of `w[i..i+l]` (0-based start).
    levels: Vec<Vec<FactorId>>,
    /// Canonical occurrence of each id as (0-based start, length).
    canon: Vec<(u32, u32)>,
    /// `(id, b) -> id` of the factor extended by one byte.
    ext: HashMap<(FactorId, u8), FactorId>,
}

impl WordIndex {
    pub fn build(word: &[u8]) -> WordIndex {
        let n = word.len();
        let mut levels = Vec::with_capacity(n + 1);
        levels.push(vec![EPSILON; n + 1]);
        let mut canon = vec![(0u32, 0u32)];
        let mut ext: HashMap<(FactorId, u8), FactorId> = HashMap::new();
        for l in 1..=n {
            let prev = &levels[l - 1];
            let mut cur = Vec::with_capacity(n + 1 - l);
            for i in 0..=n - l {
                let key = (prev[i], word[i + l - 1]);
                let id = *ext.entry(key).or_insert_with(|| {
                    canon.push((i as u32, l as u32));
                    (canon.len() - 1) as FactorId
                });
                cur.push(id);
            }
            levels.push(cur);
        }
        WordIndex { word: word.to_vec(), levels, canon, ext }
    }

    /// Builds the index after checking every byte against `alphabet`.
    pub fn build_checked(word: &[u8], alphabet: &Alphabet) -> Result<WordIndex, IndexError> {
        if let Some(p) = word.iter().position(|&b| !alphabet.contains(b)) {
            return Err(IndexError::OutsideAlphabet(word[p] as char, p + 1));
        }
        Ok(WordIndex::build(word))
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn factor_count(&self) -> usize {
        self.canon.len()
    }

    /// Id of the whole word.
    pub fn whole(&self) -> FactorId {
        self.levels[self.word.len()][0]
    }

    /// Id of `w[start..start+len]` with a 0-based start; no bounds recovery.
    #[inline]
    pub fn id_at(&self, start: usize, len: usize) -> FactorId {
        self.levels[len][start]
    }

    pub fn factor_id(&self, s: Span) -> Result<FactorId, IndexError> {
        let n = self.word.len();
        if s.start < 1 || s.start > s.end || s.end > n + 1 {
            return Err(IndexError::InvalidSpan(s.start, s.end, n));
        }
        Ok(self.id_at(s.start - 1, s.end - s.start))
    }

    pub fn canonical_span(&self, id: FactorId) -> Span {
        let (s, l) = self.canon[id as usize];
        if l == 0 {
            return Span::new(1, 1);
        }
        Span::new(s as usize + 1, (s + l) as usize + 1)
    }

    pub fn factor_len(&self, id: FactorId) -> usize {
        self.canon[id as usize].1 as usize
    }

    pub fn bytes(&self, id: FactorId) -> &[u8] {
        let (s, l) = self.canon[id as usize];
        &self.word[s as usize..(s + l) as usize]
    }

    /// The id of an arbitrary byte string, if it is a factor.
    pub fn lookup(&self, bytes: &[u8]) -> Option<FactorId> {
        self.extend(EPSILON, bytes)
    }

    fn extend(&self, mut id: FactorId, bytes: &[u8]) -> Option<FactorId> {
        for &b in bytes {
            id = *self.ext.get(&(id, b))?;
        }
        Some(id)
    }

    /// Id of `word(a)·word(b)`, or `None` if that word is not a factor.
    pub fn concat_id(&self, a: FactorId, b: FactorId) -> Option<FactorId> {
        if b == EPSILON {
            return Some(a);
        }
        if a == EPSILON {
            return Some(b);
        }
        if self.factor_len(a) + self.factor_len(b) > self.word.len() {
            return None;
        }
        self.extend(a, self.bytes(b))
    }

    /// All `(z, x, y)` with `word(z) = word(x)·word(y)`, each exactly once.
    pub fn concat_triples(&self) -> impl Iterator<Item = (FactorId, FactorId, FactorId)> + '_ {
        (0..self.canon.len() as FactorId).flat_map(move |z| self.splits(z).map(move |(x, y)| (z, x, y)))
    }

    /// All `(x, y)` with `word(x)·word(y) = word(z)`.
    pub fn splits(&self, z: FactorId) -> impl Iterator<Item = (FactorId, FactorId)> + '_ {
        let (s, l) = self.canon[z as usize];
        let (s, l) = (s as usize, l as usize);
        (0..=l).map(move |k| (self.id_at(s, k), self.id_at(s + k, l - k)))
    }

    /// Ids of the factors in `L(r)`, as a bitset over all ids.
    pub fn regex_members(&self, r: &Regex) -> FixedBitSet {
        let mut dfa = LazyDfa::from_regex(r);
        let n = self.word.len();
        let mut out = FixedBitSet::with_capacity(self.canon.len());
        if dfa.is_accepting(LazyDfa::START) {
            out.insert(EPSILON as usize);
        }
        for i in 0..n {
            let mut s = LazyDfa::START;
            for j in i..n {
                s = dfa.next(s, self.word[j]);
                if s == LazyDfa::DEAD {
                    break;
                }
                if dfa.is_accepting(s) {
                    out.insert(self.id_at(i, j + 1 - i) as usize);
                }
            }
        }
        out
    }

    /// Total number of (factor, split point) pairs, i.e. the size of the
    /// full concatenation relation.
    pub fn total_splits(&self) -> u64 {
        self.canon.iter().map(|&(_, l)| l as u64 + 1).sum()
    }
}
