// SPDX-License-Identifier: Apache-2.0

//! Conjunctive queries over word equations and regular constraints.
//!
//! A query such as `ans(x) :- u = x.'b'.y, y = z.x, z in /a+/` is evaluated
//! over the factors of an input word `u`. The crate decides whether a query
//! is acyclic once its word equations are split into binary concatenations,
//! builds a join tree for it, and evaluates it with semi-join reduction.
//!
//! Pipeline:
//!
//! * [`syntax`] parses and prints queries, regexes and spanner expressions.
//! * [`index`] assigns ids to the distinct factors of the input word.
//! * [`decompose`] decides pattern acyclicity and builds decompositions.
//! * [`planner`] normalizes a query and assembles a join tree.
//! * [`eval`] materializes relations and runs the join.
//! * [`spanner`] converts between spanner expressions and queries.
//! * [`oracle`] holds slow reference implementations used by the tests.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod automata;
pub mod cli;
pub mod decompose;
pub mod eval;
pub mod index;
pub mod jointree;
pub mod model;
pub mod names;
pub mod oracle;
pub mod planner;
pub mod spanner;
pub mod syntax;

pub use model::{
    Alphabet, BinEq, Bracketing, FcCq, Item, Pattern, Regex, RegexFormula, RegularConstraint,
    SercqAst, TwoFcCq, Var, WordEquation,
};
