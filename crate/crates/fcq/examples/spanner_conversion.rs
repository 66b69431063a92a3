// SPDX-License-Identifier: Apache-2.0

//! Spanner expressions as queries: the general parse-tree encoding, the
//! acyclic encoding for one binding per formula, and the way back.

use fcq::eval::evaluate;
use fcq::oracle::brute_sercq_evaluate;
use fcq::spanner::{fccq_to_sercq, pseudo_acyclic_to_acyclic_fccq, sercq_to_fccq, spans_to_words};
use fcq::syntax::{parse_query, parse_sercq, print_query, print_sercq};
use fcq::Alphabet;

fn main() {
    let sigma = Alphabet::new(b"ab").unwrap();
    let p = parse_sercq("pi{x} eq{x,y} ((S* . x{a+} . b . S*) join (S* . b . y{a+} . S*))", &sigma).unwrap();
    println!("spanner:  {}", print_sercq(&p, Some(&sigma)));
    println!("general:  {}", print_query(&sercq_to_fccq(&p).unwrap()));
    let q = pseudo_acyclic_to_acyclic_fccq(&p).unwrap();
    println!("acyclic:  {}", print_query(&q));

    let w = b"aabaab";
    for t in brute_sercq_evaluate(&p, w) {
        println!("span {t:?} -> {:?}", spans_to_words(&t, w).iter().map(|v| String::from_utf8_lossy(v)).collect::<Vec<_>>());
    }
    println!("engine answers: {}", evaluate(&q, w).unwrap().len());

    let back = parse_query("ans(x) :- u = x.'a'.x", &sigma).unwrap();
    println!("\nquery:    {}", print_query(&back));
    println!("spanner:  {}", print_sercq(&fccq_to_sercq(&back, &sigma), Some(&sigma)));
}
