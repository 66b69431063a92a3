// SPDX-License-Identifier: Apache-2.0

//! Universality of Boolean queries and bounded search for ambiguity.

use fcq::eval::{check_universality, find_ambiguity_witness};
use fcq::syntax::parse_query;
use fcq::Alphabet;

fn main() {
    let sigma = Alphabet::new(b"ab").unwrap();
    for text in ["ans() :- u = x.y", "ans() :- u = x.x", "ans() :- u = x.'a'.y"] {
        let q = parse_query(text, &sigma).unwrap();
        println!("{text}: universal = {}", check_universality(&q, &sigma).unwrap());
    }
    let q = parse_query("ans(x) :- u = x.y.x", &sigma).unwrap();
    match find_ambiguity_witness(&q, 2, 8, &sigma).unwrap() {
        Some((w, n)) => println!("ans(x) :- u = x.y.x has {n} answers on {}", String::from_utf8_lossy(&w)),
        None => println!("at most 2 answers on every word up to length 8"),
    }
}
