// SPDX-License-Identifier: Apache-2.0

//! Decide acyclicity of a few terminal-free patterns and print a witness
//! bracketing for the acyclic ones.
//!
//! cargo run --example pattern_acyclicity [PATTERN...]

use fcq::decompose::find_acyclic_bracketing;
use fcq::syntax::parse_pattern;
use fcq::Alphabet;

fn main() {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = ["x1x2x1x3x1", "x1x2x3x1", "xyxzyz", "xxyxx"].map(String::from).to_vec();
    }
    for text in &args {
        let vars = match parse_pattern(text, &Alphabet::default()).map(|p| p.var_seq()) {
            Ok(Some(v)) => v,
            Ok(None) => {
                eprintln!("{text}: not terminal-free");
                continue;
            }
            Err(e) => {
                eprintln!("{text}: {e}");
                continue;
            }
        };
        match find_acyclic_bracketing(&vars) {
            Ok(Some(b)) => println!("{text}: acyclic, e.g. {b}"),
            Ok(None) => println!("{text}: cyclic"),
            Err(e) => println!("{text}: {e}"),
        }
    }
}
