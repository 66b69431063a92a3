// SPDX-License-Identifier: Apache-2.0

//! Model checking and enumeration over one word.
//!
//! cargo run --example evaluate [WORD]

use std::ops::ControlFlow;

use fcq::eval::{enumerate, model_check, tuple_json};
use fcq::index::WordIndex;
use fcq::planner::plan;
use fcq::syntax::parse_query;
use fcq::Alphabet;

fn main() {
    let w = std::env::args().nth(1).unwrap_or_else(|| "abaabab".into());
    let sigma = Alphabet::new(b"ab").unwrap();
    let q = parse_query("ans(x, y) :- u = x.y.x, y in /a*b/", &sigma).unwrap();
    let p = plan(&q).expect("acyclic");
    let ix = WordIndex::build_checked(w.as_bytes(), &sigma).expect("word over {a, b}");
    println!("{} distinct factors of {w}", ix.factor_count());
    println!("satisfied: {}", model_check(&p, &ix));
    enumerate(&p, &ix, |t| {
        println!("{}", tuple_json(&p.head, t, &ix));
        ControlFlow::Continue(())
    });
}
