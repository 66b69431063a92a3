// SPDX-License-Identifier: Apache-2.0

//! Decompose a bracketing into binary equations, then let the search pick an
//! acyclic bracketing of the same pattern and decompose that one.

use fcq::decompose::{concat_tree, decompose_bracketing, find_acyclic_decomposition};
use fcq::jointree::gyo;
use fcq::{Bracketing, Pattern, Var};

fn main() {
    let x = |n: &str| Bracketing::Leaf(Var::new(n));
    let pair = Bracketing::pair;
    // (((x1 x2) x1) (x1 x2))
    let b = pair(pair(pair(x("x1"), x("x2")), x("x1")), pair(x("x1"), x("x2")));
    let d = decompose_bracketing(&b, Var::UNIVERSE);
    println!("bracketing {b}");
    println!("{d}");
    let acyclic = gyo(&d.atom_var_sets()).is_ok();
    let localized = concat_tree(&b).is_localized_everywhere();
    println!("GYO: {acyclic}, localized: {localized}");

    let alpha = Pattern::from_vars(&b.flatten());
    match find_acyclic_decomposition(&alpha, Var::UNIVERSE) {
        Ok(d) => println!("\nacyclic decomposition of {alpha}:\n{d}"),
        Err(e) => println!("\n{alpha}: {e}"),
    }
}
