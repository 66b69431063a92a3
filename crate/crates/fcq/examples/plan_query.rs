// SPDX-License-Identifier: Apache-2.0

//! Normalize a query, build its join tree and print both, or explain why
//! the query is cyclic.

use fcq::planner::plan;
use fcq::syntax::parse_query;
use fcq::Alphabet;

fn main() {
    let sigma = Alphabet::new(b"ab").unwrap();
    for text in [
        "ans(x, z) :- u = x.y.x, y = z.'b'.z, z in /a*/",
        "ans() :- x1 = y1.y2.y3, x2 = y2.y3.y3.y4",
        "ans() :- x1 = y1.y2.y3, x2 = y1.y4.y3",
    ] {
        println!("{text}");
        match plan(&parse_query(text, &sigma).unwrap()) {
            Ok(p) => println!("{p}"),
            Err(e) => println!("  {e}\n"),
        }
    }
}
