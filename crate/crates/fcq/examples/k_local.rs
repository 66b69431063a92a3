// SPDX-License-Identifier: Apache-2.0

//! Smallest k for which a pattern has a localized k-ary bracketing.

use fcq::decompose::k_ary_local_bracketing;
use fcq::syntax::parse_pattern;
use fcq::Alphabet;

fn main() {
    for text in ["x1x2x1x3x1", "x1x2x3x1x2x3", "xyzxzy"] {
        let vars = parse_pattern(text, &Alphabet::default()).unwrap().var_seq().unwrap();
        for k in 2..=vars.len().max(2) {
            if let Ok(b) = k_ary_local_bracketing(&vars, k) {
                println!("{text}: {k}-local via {b}");
                break;
            }
        }
    }
}
