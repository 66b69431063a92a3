// SPDX-License-Identifier: Apache-2.0

//! Pattern decomposition checked against exhaustive bracketing search.

mod common;

use std::collections::BTreeSet;

use fcq::decompose::{
    concat_tree, decompose_atom_with_constraints, decompose_bracketing, find_acyclic_bracketing, find_acyclic_decomposition,
    is_acyclic_bracketing, is_acyclic_vars, k_ary_local_bracketing, DecomposeError,
};
use fcq::jointree::gyo;
use fcq::names::NameGen;
use fcq::oracle::{all_bracketings, brute_acyclic, brute_bracketing_acyclic};
use fcq::{Bracketing, Pattern, Var};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn localization_gyo_and_oracle_agree_up_to_four_variables() {
    let mut checked = 0;
    for len in 1..=7 {
        for alpha in common::canonical_patterns(len, 4) {
            for b in all_bracketings(&alpha) {
                let gyo_ok = gyo(&decompose_bracketing(&b, Var::UNIVERSE).atom_var_sets()).is_ok();
                assert_eq!(is_acyclic_bracketing(&b), gyo_ok, "{b}");
                assert_eq!(brute_bracketing_acyclic(&b), gyo_ok, "{b}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50_000);
}

#[test]
fn every_short_pattern_matches_the_oracle() {
    for len in 1..=7 {
        for alpha in common::canonical_patterns(len, 4) {
            assert_eq!(is_acyclic_vars(&alpha), brute_acyclic(&alpha).unwrap(), "{}", Pattern::from_vars(&alpha));
        }
    }
    for alpha in common::canonical_patterns(8, 3) {
        assert_eq!(is_acyclic_vars(&alpha), brute_acyclic(&alpha).unwrap(), "{}", Pattern::from_vars(&alpha));
    }
}

#[test]
fn extraction_succeeds_whenever_the_derivation_does() {
    for len in 1..=9 {
        for alpha in common::canonical_patterns(len, 4) {
            let shown = Pattern::from_vars(&alpha);
            match find_acyclic_bracketing(&alpha) {
                Ok(Some(b)) => {
                    assert!(is_acyclic_vars(&alpha), "{shown}");
                    assert_eq!(b.flatten(), alpha);
                    assert!(gyo(&decompose_bracketing(&b, Var::UNIVERSE).atom_var_sets()).is_ok(), "{b}");
                }
                Ok(None) => assert!(!is_acyclic_vars(&alpha), "{shown}"),
                Err(e) => panic!("{e:?} for {shown}"),
            }
        }
    }
}

/// All bracketings of `vars` whose inner nodes have between 2 and `k`
/// children.
fn k_bracketings(vars: &[Var], k: usize) -> Vec<Bracketing> {
    if vars.len() == 1 {
        return vec![Bracketing::Leaf(vars[0])];
    }
    let mut out = Vec::new();
    // Split into `parts` consecutive non-empty pieces.
    fn pieces(vars: &[Var], parts: usize, k: usize, acc: &mut Vec<Vec<Bracketing>>, out: &mut Vec<Bracketing>) {
        if parts == 0 {
            if vars.is_empty() {
                let mut idx = vec![0; acc.len()];
                loop {
                    out.push(Bracketing::node(idx.iter().zip(acc.iter()).map(|(&i, c)| c[i].clone()).collect()));
                    let mut p = 0;
                    while p < idx.len() {
                        idx[p] += 1;
                        if idx[p] < acc[p].len() {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                    if p == idx.len() {
                        break;
                    }
                }
            }
            return;
        }
        for cut in 1..=vars.len().saturating_sub(parts - 1) {
            acc.push(k_bracketings(&vars[..cut], k));
            pieces(&vars[cut..], parts - 1, k, acc, out);
            acc.pop();
        }
    }
    for parts in 2..=k.min(vars.len()) {
        pieces(vars, parts, k, &mut Vec::new(), &mut out);
    }
    out
}

#[test]
fn k_ary_locality_matches_exhaustive_search() {
    for k in 3..=4 {
        for len in 1..=6 {
            for alpha in common::canonical_patterns(len, 3) {
                let exists = k_bracketings(&alpha, k).iter().any(|b| concat_tree(b).is_localized_everywhere());
                let found = k_ary_local_bracketing(&alpha, k);
                assert_eq!(found.is_ok(), exists, "k = {k}, {}", Pattern::from_vars(&alpha));
                if let Ok(b) = found {
                    assert_eq!(b.flatten(), alpha);
                    assert!(concat_tree(&b).is_localized_everywhere(), "{b}");
                }
            }
        }
    }
}

#[test]
fn short_patterns_are_k_local() {
    let mut r = common::rng(3);
    for _ in 0..200 {
        let alpha = common::pattern_vars(&mut r, 5, 4);
        assert!(k_ary_local_bracketing(&alpha, alpha.len().max(2)).is_ok(), "{}", Pattern::from_vars(&alpha));
    }
}

/// Some bracketing of `rhs` decomposes `lhs = rhs` into an acyclic query
/// with every pair inside one atom.
fn brute_constrained(lhs: Var, rhs: &[Var], pairs: &[(Var, Var)]) -> bool {
    all_bracketings(rhs).iter().any(|b| {
        let sets = decompose_bracketing(b, lhs).atom_var_sets();
        pairs.iter().all(|&(x, y)| sets.iter().any(|s| s.contains(&x) && s.contains(&y))) && gyo(&sets).is_ok()
    })
}

proptest! {
    #[test]
    fn acyclic_decompositions_expand_back(seed in any::<u64>()) {
        let alpha = common::pattern_vars(&mut common::rng(seed), 10, 4);
        match find_acyclic_decomposition(&Pattern::from_vars(&alpha), Var::UNIVERSE) {
            Ok(d) => {
                prop_assert_eq!(d.expand(Var::UNIVERSE), alpha);
                prop_assert!(gyo(&d.atom_var_sets()).is_ok());
            }
            Err(DecomposeError::Cyclic) => prop_assert!(!is_acyclic_vars(&alpha)),
            Err(e) => prop_assert!(false, "{:?} for {}", e, Pattern::from_vars(&alpha)),
        }
    }

    #[test]
    fn constrained_decomposition_matches_exhaustive_search(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let alpha = common::pattern_vars(&mut r, 6, 4);
        let lhs = Var::new("y0");
        let mut vars: Vec<Var> = alpha.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        vars.push(lhs);
        let mut pairs = Vec::new();
        for _ in 0..r.gen_range(0..=2) {
            let two: Vec<Var> = vars.choose_multiple(&mut r, 2).copied().collect();
            if two.len() == 2 {
                pairs.push((two[0], two[1]));
            }
        }
        let got = decompose_atom_with_constraints(lhs, &alpha, &pairs, &mut NameGen::avoiding(vars.clone()));
        let shown = format!("{lhs} = {} with {pairs:?}", Pattern::from_vars(&alpha));
        prop_assert_eq!(got.is_ok(), brute_constrained(lhs, &alpha, &pairs), "{}", shown);
        if let Ok(d) = got {
            prop_assert_eq!(d.expand(lhs), alpha);
            let sets = d.atom_var_sets();
            for (x, y) in pairs {
                prop_assert!(sets.iter().any(|s| s.contains(&x) && s.contains(&y)), "{}", shown);
            }
        }
    }
}
