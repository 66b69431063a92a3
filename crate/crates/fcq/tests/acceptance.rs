// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Time budgets are wall-clock and apply to the test profile.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fcq::decompose::{
    concat_tree, decompose_bracketing, find_acyclic_bracketing, is_acyclic_bracketing, is_acyclic_pattern,
    is_acyclic_vars,
};
use fcq::eval::{answers, check_universality, evaluate_any, model_check, Relation};
use fcq::index::WordIndex;
use fcq::jointree::{gyo, verify_join_tree};
use fcq::oracle::{
    all_bracketings, brute_acyclic, brute_bracketing_acyclic, brute_evaluate, brute_pattern_member,
    brute_sercq_evaluate, brute_universal_up_to,
};
use fcq::planner::{plan, skeleton_of, PlanError};
use fcq::spanner::{pseudo_acyclic_to_acyclic_fccq, spans_to_words};
use fcq::syntax::{parse_pattern, parse_query};
use fcq::{Alphabet, BinEq, Bracketing, FcCq, Pattern, TwoFcCq, Var};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const BUDGET_CYCPAT: Duration = Duration::from_secs(1);
const BUDGET_LOCALIZED: Duration = Duration::from_secs(60);
const BUDGET_END_TO_END: Duration = Duration::from_secs(300);
const BUDGET_LONG_PATTERN: Duration = Duration::from_secs(10);
const BUDGET_LONG_WORD: Duration = Duration::from_secs(30);

const SEED: u64 = 0x5eed_f00d;

fn v(name: &str) -> Var {
    Var::new(name)
}

fn leaf(name: &str) -> Bracketing {
    Bracketing::Leaf(v(name))
}

fn pair(a: Bracketing, b: Bracketing) -> Bracketing {
    Bracketing::pair(a, b)
}

fn node(cs: Vec<Bracketing>) -> Bracketing {
    Bracketing::node(cs)
}

fn vars_of(text: &str) -> Vec<Var> {
    parse_pattern(text, &Alphabet::default()).unwrap().var_seq().unwrap()
}

fn query(text: &str) -> FcCq {
    parse_query(text, &common::ab()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:.2?}, budget {budget:?}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fcq::cli::run(std::iter::once("fcq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn cycpat() -> Outcome {
    let start = Instant::now();
    let (_, out) = cli(&["pattern", "acyclic", "x1x2x1x3x1"]);
    ensure(out.trim() == "cyclic", || format!("x1x2x1x3x1 reported {:?}", out.trim()))?;
    let all = all_bracketings(&vars_of("x1x2x1x3x1"));
    ensure(all.len() == 14, || format!("{} bracketings", all.len()))?;
    for b in &all {
        ensure(!brute_bracketing_acyclic(b), || format!("{b} is acyclic"))?;
        ensure(!is_acyclic_bracketing(b), || format!("{b} reported localized"))?;
    }

    let (_, out) = cli(&["pattern", "acyclic", "x1x2x3x1"]);
    ensure(out.starts_with("acyclic"), || format!("x1x2x3x1 reported {:?}", out.trim()))?;
    let witness = find_acyclic_bracketing(&vars_of("x1x2x3x1")).unwrap().ok_or("no witness")?;
    let d = decompose_bracketing(&witness, Var::UNIVERSE);
    let tree = gyo(&d.atom_var_sets()).map_err(|_| format!("witness {witness} fails GYO"))?;
    ensure(verify_join_tree(&tree), || "witness join tree invalid".into())?;

    let b = pair(pair(leaf("x1"), leaf("x2")), pair(leaf("x3"), leaf("x1")));
    ensure(!is_acyclic_bracketing(&b) && !brute_bracketing_acyclic(&b), || format!("{b} reported acyclic"))?;
    within(start, BUDGET_CYCPAT)?;
    Ok(format!("14/14 bracketings cyclic, witness {witness}"))
}

fn localized_iff_gyo() -> Outcome {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut patterns = 0usize;
    // Both sides are invariant under renaming variables, so one pattern per
    // renaming class covers every pattern.
    for len in 1..=7 {
        for alpha in common::canonical_patterns(len, 3) {
            patterns += 1;
            for b in all_bracketings(&alpha) {
                let gyo_ok = gyo(&decompose_bracketing(&b, Var::UNIVERSE).atom_var_sets()).is_ok();
                let localized = concat_tree(&b).is_localized_everywhere();
                ensure(gyo_ok == localized, || format!("{b}: gyo {gyo_ok}, localized {localized}"))?;
                checked += 1;
            }
        }
    }
    within(start, BUDGET_LOCALIZED)?;
    Ok(format!("{patterns} patterns up to renaming, {checked} bracketings, 0 mismatches"))
}

fn algorithm_vs_oracle() -> Outcome {
    let mut r = common::rng(SEED);
    let mut acyclic = 0;
    for _ in 0..1000 {
        let alpha = common::pattern_vars(&mut r, 8, 4);
        let fast = is_acyclic_vars(&alpha);
        let slow = brute_acyclic(&alpha).map_err(|e| format!("oracle refused {e:?}"))?;
        let shown = Pattern::from_vars(&alpha);
        ensure(fast == slow, || format!("{shown}: algorithm {fast}, oracle {slow}"))?;
        ensure(is_acyclic_pattern(&shown) == Ok(fast), || format!("{shown}: entry points disagree"))?;
        acyclic += usize::from(fast);
    }
    Ok(format!("1000 patterns ({acyclic} acyclic), 0 mismatches"))
}

/// Equation shapes keyed by the structure of the introduced variables, so
/// two decompositions compare equal up to renaming of those variables.
fn shape(d: &TwoFcCq) -> BTreeMap<String, usize> {
    let defs: BTreeMap<Var, &BinEq> = d.equations.iter().map(|e| (e.lhs, e)).collect();
    fn term(x: Var, d: &TwoFcCq, defs: &BTreeMap<Var, &BinEq>) -> String {
        match defs.get(&x) {
            Some(e) if d.introduced.contains(&x) => {
                let parts: Vec<String> = e.rhs.iter().map(|&y| term(y, d, defs)).collect();
                format!("({})", parts.join("."))
            }
            _ => x.name(),
        }
    }
    let mut out = BTreeMap::new();
    for e in &d.equations {
        let parts: Vec<String> = e.rhs.iter().map(|&y| term(y, d, &defs)).collect();
        let lhs = if d.introduced.contains(&e.lhs) { "_".to_string() } else { e.lhs.name() };
        *out.entry(format!("{lhs} = {}", parts.join("."))).or_insert(0) += 1;
    }
    out
}

fn printed(eqs: &[(&str, &[&str])]) -> TwoFcCq {
    let mut d = TwoFcCq::default();
    for (lhs, rhs) in eqs {
        let lhs = if *lhs == "u" { Var::UNIVERSE } else { v(lhs) };
        if !lhs.is_universe() {
            d.introduced.insert(lhs);
        }
        d.equations.push(BinEq::new(lhs, rhs.iter().map(|s| v(s)).collect()));
    }
    d
}

fn goldens() -> Outcome {
    let x = |i: usize| leaf(&format!("x{i}"));
    let b = pair(pair(pair(x(1), x(2)), x(1)), pair(x(1), x(2)));
    let got = decompose_bracketing(&b, Var::UNIVERSE);
    let want = printed(&[("z1", &["x1", "x2"]), ("z2", &["z1", "x1"]), ("u", &["z2", "z1"])]);
    ensure(shape(&got) == shape(&want), || format!("binary golden got\n{got}"))?;
    ensure(got.expand(Var::UNIVERSE) == b.flatten(), || "binary golden does not expand back".into())?;

    let b = pair(
        node(vec![node(vec![x(1), x(2), x(3)]), node(vec![x(4), x(2), x(4)]), node(vec![x(1), x(2)]), node(vec![x(5), x(5)])]),
        node(vec![x(1), x(2)]),
    );
    let got = decompose_bracketing(&b, Var::UNIVERSE);
    let want = printed(&[
        ("z1", &["x1", "x2", "x3"]),
        ("z2", &["x4", "x2", "x4"]),
        ("z3", &["x1", "x2"]),
        ("z4", &["x5", "x5"]),
        ("z5", &["z1", "z2", "z3", "z4"]),
        ("u", &["z5", "z3"]),
    ]);
    ensure(shape(&got) == shape(&want), || format!("4-ary golden got\n{got}"))?;
    ensure(got.expand(Var::UNIVERSE) == b.flatten(), || "4-ary golden does not expand back".into())?;
    Ok("binary and 4-ary decompositions match".into())
}

fn planner_examples() -> Outcome {
    match plan(&query("ans() :- x1 = y1.y2.y3, x2 = y1.y4.y3")) {
        Err(PlanError::Cyclic(_)) => {}
        other => return Err(format!("cyclic example planned as {other:?}")),
    }
    for text in ["ans() :- x1 = y1.y2.y3, x2 = y2.y3.y3.y4", "ans() :- x1 = x2.x3.x2, x2 = x4.x4.x5"] {
        let p = plan(&query(text)).map_err(|e| format!("{text}: {e}"))?;
        let (nodes, edges) = skeleton_of(&p);
        ensure(nodes.len() == 2 && edges.len() == 1, || format!("{text}: skeleton {nodes:?} {edges:?}"))?;
    }
    Ok("cyclic example rejected, two skeletons are single edges".into())
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let mut r = common::rng(SEED ^ 6);
    let (mut queries, mut tried, mut runs, mut nonempty) = (0, 0, 0, 0);
    while queries < 500 {
        tried += 1;
        ensure(tried < 200_000, || format!("only {queries} acyclic queries generated"))?;
        let q = common::query(&mut r);
        if q.validate().is_err() {
            continue;
        }
        let Ok(p) = plan(&q) else { continue };
        queries += 1;
        for _ in 0..4 {
            let w = common::word(&mut r, 10);
            let ix = WordIndex::build(&w);
            let got = answers(&p, &ix);
            let want = brute_evaluate(&q, &w);
            ensure(got == want, || {
                format!("{} on {:?}: engine {got:?}, oracle {want:?}", fcq::syntax::print_query(&q), String::from_utf8_lossy(&w))
            })?;
            ensure(model_check(&p, &ix) == !want.is_empty(), || format!("model check disagrees on {q:?}"))?;
            runs += 1;
            nonempty += usize::from(!want.is_empty());
        }
    }
    within(start, BUDGET_END_TO_END)?;
    Ok(format!("{queries} queries, {runs} runs ({nonempty} non-empty), 0 mismatches"))
}

fn membership() -> Outcome {
    let w = b"abaabaaaaa";
    let q = query("ans(x, y) :- u = 'ab'.x.'ba'.x.y.x");
    let engine = match plan(&q) {
        Ok(p) => answers(&p, &WordIndex::build(w)),
        Err(PlanError::Cyclic(_)) => evaluate_any(&q, w).map_err(|e| e.to_string())?,
        Err(e) => return Err(e.to_string()),
    };
    let expected = vec![b"aa".to_vec(), Vec::new()];
    ensure(engine.contains(&expected), || format!("engine answers {engine:?}"))?;
    ensure(engine == brute_evaluate(&q, w), || "engine and oracle differ".into())?;
    let alpha = parse_pattern("'ab' x 'ba' x y x", &common::ab()).unwrap();
    ensure(brute_pattern_member(&alpha, w, true), || "oracle rejects the word".into())?;
    Ok("x = aa, y = ε found by engine and oracle".into())
}

fn semijoin() -> Outcome {
    let a = |i: u32| i;
    let r = Relation::from_rows(
        vec![v("x"), v("y")],
        [vec![a(1), a(2)], vec![a(3), a(4)], vec![a(1), a(4)], vec![a(2), a(1)]],
    );
    let s = Relation::from_rows(vec![v("y"), v("z")], [vec![a(3), a(5)], vec![a(2), a(2)], vec![a(4), a(5)]]);
    let got = r.semijoin(&s).to_set();
    let want: BTreeSet<Vec<u32>> = [vec![1, 2], vec![3, 4], vec![1, 4]].into_iter().collect();
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("R ⋉ S = {(a1,a2), (a3,a4), (a1,a4)}".into())
}

fn spanner_realization() -> Outcome {
    let mut r = common::rng(SEED ^ 9);
    let (mut runs, mut tuples) = (0, 0);
    for _ in 0..100 {
        let p = common::pseudo_acyclic_sercq(&mut r);
        let q = pseudo_acyclic_to_acyclic_fccq(&p).map_err(|e| format!("{p:?}: {e}"))?;
        let pl = plan(&q).map_err(|e| format!("{}: {e}", fcq::syntax::print_query(&q)))?;
        for _ in 0..3 {
            let w = common::word(&mut r, 8);
            let spans = brute_sercq_evaluate(&p, &w);
            let mapped: BTreeSet<Vec<Vec<u8>>> = spans.iter().map(|t| spans_to_words(t, &w)).collect();
            ensure(mapped.len() == spans.len(), || "span encoding is not injective".into())?;
            let got = answers(&pl, &WordIndex::build(&w));
            ensure(got == mapped, || {
                format!("{} on {:?}: engine {got:?}, oracle {mapped:?}", fcq::syntax::print_sercq(&p, None), String::from_utf8_lossy(&w))
            })?;
            runs += 1;
            tuples += spans.len();
        }
    }
    Ok(format!("100 expressions, {runs} runs, {tuples} tuples, 0 mismatches"))
}

fn universality() -> Outcome {
    let mut r = common::rng(SEED ^ 10);
    let sigma = common::ab();
    let mut universal = 0;
    for _ in 0..200 {
        let q = common::pure_boolean_query(&mut r);
        let fast = check_universality(&q, &sigma).map_err(|e| e.to_string())?;
        let slow = brute_universal_up_to(&q, &sigma, 4);
        ensure(fast == slow, || format!("{}: check {fast}, sweep {slow}", fcq::syntax::print_query(&q)))?;
        universal += usize::from(fast);
    }
    Ok(format!("200 queries ({universal} universal), 0 mismatches"))
}

fn performance() -> Outcome {
    let start = Instant::now();
    let mut r = common::rng(SEED ^ 11);
    let alpha = Pattern::from_vars(&common::pattern_vars_exact(&mut r, 60, 6));
    let acyclic = is_acyclic_pattern(&alpha).map_err(|e| e.to_string())?;
    let alpha2 = Pattern::from_vars(&common::pattern_vars_exact(&mut r, 60, 2));
    is_acyclic_pattern(&alpha2).map_err(|e| e.to_string())?;
    let periodic = Pattern::from_vars(&vars_of(&"x1x2x3".repeat(20)));
    ensure(is_acyclic_pattern(&periodic) == Ok(true), || "(x1x2x3)^20 reported cyclic".into())?;
    let t1 = start.elapsed();
    within(start, BUDGET_LONG_PATTERN)?;

    let start = Instant::now();
    let mut w = Vec::new();
    let z: Vec<u8> = (0..25).map(|i| if i % 3 == 0 { b'b' } else { b'a' }).collect();
    let x: Vec<u8> = (0..975).map(|i| if i % 7 == 0 { b'b' } else { b'a' }).collect();
    w.extend(&x);
    w.extend(&z);
    w.extend(&z);
    w.extend(&x);
    let q = query("ans() :- u = x.y.x, y = z.z");
    let p = plan(&q).map_err(|e| e.to_string())?;
    let truth = model_check(&p, &WordIndex::build(&w));
    ensure(w.len() == 2000 && truth, || "model check returned false".into())?;
    let t2 = start.elapsed();
    within(start, BUDGET_LONG_WORD)?;
    Ok(format!("|α| = 60 ({}) in {t1:.2?}, |w| = {} in {t2:.2?}", if acyclic { "acyclic" } else { "cyclic" }, w.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("cyclic pattern x1x2x1x3x1", cycpat),
        ("localization matches GYO", localized_iff_gyo),
        ("acyclicity vs oracle", algorithm_vs_oracle),
        ("decomposition goldens", goldens),
        ("planner examples", planner_examples),
        ("end-to-end vs oracle", end_to_end),
        ("pattern membership", membership),
        ("semi-join table", semijoin),
        ("spanner realization", spanner_realization),
        ("universality", universality),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
