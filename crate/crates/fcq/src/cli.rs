// SPDX-License-Identifier: Apache-2.0

//! The `fcq` command line.
//!
//! Exit codes: 0 success / true / non-empty, 1 false / empty / cyclic,
//! 2 usage or parse error, 3 internal invariant violation or oracle
//! disagreement. Data goes to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::decompose::{
    decompose_bracketing, find_acyclic_bracketing, k_ary_local_bracketing, DecomposeError,
};
use crate::eval::{enumerate, model_check, tuple_json};
use crate::index::WordIndex;
use crate::model::{Alphabet, FcCq, Var};
use crate::oracle::brute_evaluate;
use crate::planner::{plan, Plan, PlanError};
use crate::spanner::{fccq_to_sercq, is_pseudo_acyclic, pseudo_acyclic_to_acyclic_fccq, sercq_to_fccq};
use crate::syntax::{parse_pattern, parse_query, parse_sercq, print_query_with, print_sercq};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Words longer than this are not cross-checked with `--oracle`.
const ORACLE_MAX_WORD: usize = 14;

#[derive(Parser, Debug)]
#[command(name = "fcq", version, about = "Acyclic conjunctive queries over word equations")]
struct Cli {
    /// Terminal alphabet, e.g. `ab`.
    #[arg(long, global = true, default_value = "abcdefghijklmnopqrstuvwxyz")]
    alphabet: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide whether the word satisfies a Boolean reading of the query.
    Check {
        query: PathBuf,
        /// Word file, or `-` for stdin.
        word: PathBuf,
        /// Cross-check against the brute-force evaluator.
        #[arg(long)]
        oracle: bool,
        /// Print the plan to stderr.
        #[arg(long)]
        explain: bool,
        /// Fail instead of falling back when the query is cyclic.
        #[arg(long)]
        require_acyclic: bool,
    },
    /// Print all head assignments.
    Enum {
        query: PathBuf,
        word: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        /// JSON lines with word and canonical span per variable.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        require_acyclic: bool,
    },
    /// Pattern acyclicity and decompositions.
    Pattern {
        #[arg(value_enum)]
        mode: PatternMode,
        pattern: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Convert between spanner expressions and queries.
    Convert {
        #[arg(value_enum)]
        direction: Direction,
        input: PathBuf,
        output: PathBuf,
        /// For spanner input with one binding per formula: emit the acyclic
        /// encoding.
        #[arg(long)]
        acyclic: bool,
    },
    /// Print the normalized query and its join tree.
    Plan { query: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PatternMode {
    Acyclic,
    Decompose,
    KLocal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    #[value(name = "sercq2fc")]
    SercqToFc,
    #[value(name = "fc2sercq")]
    FcToSercq,
}

struct Failure(i32, String);

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Reads a word; one trailing newline is dropped.
fn read_word(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut w = read_text(path)?.into_bytes();
    if w.last() == Some(&b'\n') {
        w.pop();
        if w.last() == Some(&b'\r') {
            w.pop();
        }
    }
    Ok(w)
}

fn load_query(path: &Path, alphabet: &Alphabet) -> Result<FcCq, Failure> {
    let text = read_text(path)?;
    let q = parse_query(&text, alphabet).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    q.validate().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(q)
}

fn index_for(w: &[u8], alphabet: &Alphabet) -> Result<WordIndex, Failure> {
    WordIndex::build_checked(w, alphabet).map_err(|e| usage(format!("word: {e}")))
}

/// Plans the query; `Ok(None)` means cyclic and a fallback is allowed.
fn plan_or_fallback(q: &FcCq, require_acyclic: bool, err: &mut dyn Write) -> Result<Option<Plan>, Failure> {
    match plan(q) {
        Ok(p) => Ok(Some(p)),
        Err(PlanError::Cyclic(r)) if require_acyclic => Err(Failure(EXIT_NEGATIVE, format!("query is cyclic: {r}"))),
        Err(PlanError::Cyclic(r)) => {
            let _ = writeln!(err, "warning: query is cyclic ({r}); using the brute-force evaluator");
            Ok(None)
        }
        Err(PlanError::Model(e)) => Err(usage(e.to_string())),
        Err(e @ PlanError::InvariantViolation(_)) => Err(Failure(EXIT_INTERNAL, e.to_string())),
    }
}

fn word_tuples(set: &std::collections::BTreeSet<Vec<Vec<u8>>>) -> Vec<Vec<Vec<u8>>> {
    set.iter().cloned().collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    alphabet: &Alphabet,
    query: &Path,
    word: &Path,
    oracle: bool,
    explain: bool,
    require_acyclic: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let q = load_query(query, alphabet)?;
    let w = read_word(word)?;
    let ix = index_for(&w, alphabet)?;
    let Some(p) = plan_or_fallback(&q, require_acyclic, err)? else {
        let truth = !brute_evaluate(&q, &w).is_empty();
        let _ = writeln!(out, "{truth}");
        return Ok(if truth { EXIT_OK } else { EXIT_NEGATIVE });
    };
    if explain {
        let _ = write!(err, "{p}");
    }
    let truth = model_check(&p, &ix);
    if oracle {
        if w.len() > ORACLE_MAX_WORD {
            let _ = writeln!(err, "warning: word longer than {ORACLE_MAX_WORD}; oracle check skipped");
        } else {
            let expected = !brute_evaluate(&q, &w).is_empty();
            if expected != truth {
                return Err(Failure(EXIT_INTERNAL, format!("engine says {truth}, oracle says {expected}")));
            }
        }
    }
    let _ = writeln!(out, "{truth}");
    Ok(if truth { EXIT_OK } else { EXIT_NEGATIVE })
}

fn print_tuple(out: &mut dyn Write, head: &[Var], tuple: &[Vec<u8>], spans: Option<serde_json::Value>) {
    match spans {
        Some(v) => {
            let _ = writeln!(out, "{v}");
        }
        None => {
            let parts: Vec<String> = head
                .iter()
                .zip(tuple)
                .map(|(v, w)| format!("{v}={:?}", String::from_utf8_lossy(w)))
                .collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_enum(
    alphabet: &Alphabet,
    query: &Path,
    word: &Path,
    limit: Option<usize>,
    json: bool,
    oracle: bool,
    require_acyclic: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let q = load_query(query, alphabet)?;
    let w = read_word(word)?;
    let ix = index_for(&w, alphabet)?;
    let limit = limit.unwrap_or(usize::MAX);
    let json_of = |t: &[Vec<u8>]| {
        let ids: Vec<u32> = t.iter().map(|b| ix.lookup(b).expect("answer is a factor")).collect();
        tuple_json(&q.head, &ids, &ix)
    };
    let Some(p) = plan_or_fallback(&q, require_acyclic, err)? else {
        let all = word_tuples(&brute_evaluate(&q, &w));
        for t in all.iter().take(limit) {
            print_tuple(out, &q.head, t, json.then(|| json_of(t)));
        }
        return Ok(if all.is_empty() { EXIT_NEGATIVE } else { EXIT_OK });
    };
    let mut found = std::collections::BTreeSet::new();
    let mut printed = 0usize;
    let full = oracle && w.len() <= ORACLE_MAX_WORD;
    enumerate(&p, &ix, |t| {
        let words: Vec<Vec<u8>> = t.iter().map(|&id| ix.bytes(id).to_vec()).collect();
        if printed < limit {
            let spans = json.then(|| tuple_json(&q.head, t, &ix));
            print_tuple(out, &q.head, &words, spans);
            printed += 1;
        }
        found.insert(words);
        if printed >= limit && !full {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if oracle {
        if !full {
            let _ = writeln!(err, "warning: word longer than {ORACLE_MAX_WORD}; oracle check skipped");
        } else {
            let expected = brute_evaluate(&q, &w);
            if expected != found {
                return Err(Failure(
                    EXIT_INTERNAL,
                    format!("engine found {} tuples, oracle {}", found.len(), expected.len()),
                ));
            }
        }
    }
    Ok(if found.is_empty() { EXIT_NEGATIVE } else { EXIT_OK })
}

fn cmd_pattern(alphabet: &Alphabet, mode: PatternMode, text: &str, k: usize, out: &mut dyn Write) -> CmdResult {
    let alpha = parse_pattern(text, alphabet).map_err(|e| usage(format!("pattern: {e}")))?;
    let vars = alpha.var_seq().ok_or_else(|| usage("pattern must be terminal-free"))?;
    if vars.is_empty() {
        return Err(usage("pattern is empty"));
    }
    let fail = |e: DecomposeError| match e {
        DecomposeError::ExtractionFailed => Failure(EXIT_INTERNAL, e.to_string()),
        _ => usage(e.to_string()),
    };
    match mode {
        PatternMode::Acyclic | PatternMode::Decompose => match find_acyclic_bracketing(&vars).map_err(fail)? {
            None => {
                let _ = writeln!(out, "cyclic");
                Ok(EXIT_NEGATIVE)
            }
            Some(b) => {
                if matches!(mode, PatternMode::Acyclic) {
                    let _ = writeln!(out, "acyclic {b}");
                } else {
                    for e in decompose_bracketing(&b, Var::UNIVERSE).equations {
                        let _ = writeln!(out, "{e}");
                    }
                }
                Ok(EXIT_OK)
            }
        },
        PatternMode::KLocal => match k_ary_local_bracketing(&vars, k) {
            Ok(b) => {
                for e in decompose_bracketing(&b, Var::UNIVERSE).equations {
                    let _ = writeln!(out, "{e}");
                }
                Ok(EXIT_OK)
            }
            Err(DecomposeError::NotKLocal(_)) => {
                let _ = writeln!(out, "not {k}-local");
                Ok(EXIT_NEGATIVE)
            }
            Err(e) => Err(fail(e)),
        },
    }
}

fn cmd_convert(
    alphabet: &Alphabet,
    direction: Direction,
    input: &Path,
    output: &Path,
    acyclic: bool,
    err: &mut dyn Write,
) -> CmdResult {
    let text = read_text(input)?;
    let rendered = match direction {
        Direction::SercqToFc => {
            let p = parse_sercq(&text, alphabet).map_err(|e| usage(format!("{}: {e}", input.display())))?;
            let q = if acyclic {
                if !is_pseudo_acyclic(&p) {
                    return Err(usage("--acyclic needs exactly one binding per formula"));
                }
                pseudo_acyclic_to_acyclic_fccq(&p)
            } else {
                sercq_to_fccq(&p)
            }
            .map_err(|e| usage(e.to_string()))?;
            if acyclic && plan(&q).is_err() {
                return Err(Failure(EXIT_INTERNAL, "acyclic encoding was rejected by the planner".into()));
            }
            print_query_with(&q, Some(alphabet))
        }
        Direction::FcToSercq => {
            if acyclic {
                let _ = writeln!(err, "warning: --acyclic only applies to sercq2fc");
            }
            let q = load_query(input, alphabet)?;
            print_sercq(&fccq_to_sercq(&q, alphabet), Some(alphabet))
        }
    };
    std::fs::write(output, rendered + "\n").map_err(|e| usage(format!("{}: {e}", output.display())))?;
    Ok(EXIT_OK)
}

fn cmd_plan(alphabet: &Alphabet, query: &Path, out: &mut dyn Write) -> CmdResult {
    let q = load_query(query, alphabet)?;
    match plan(&q) {
        Ok(p) => {
            let _ = write!(out, "{p}");
            Ok(EXIT_OK)
        }
        Err(PlanError::Cyclic(r)) => {
            let _ = writeln!(out, "cyclic: {r}");
            Ok(EXIT_NEGATIVE)
        }
        Err(PlanError::Model(e)) => Err(usage(e.to_string())),
        Err(e) => Err(Failure(EXIT_INTERNAL, e.to_string())),
    }
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let alphabet = match Alphabet::new(cli.alphabet.as_bytes()) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.cmd {
        Cmd::Check { query, word, oracle, explain, require_acyclic } => {
            cmd_check(&alphabet, &query, &word, oracle, explain, require_acyclic, out, err)
        }
        Cmd::Enum { query, word, limit, json, oracle, require_acyclic } => {
            cmd_enum(&alphabet, &query, &word, limit, json, oracle, require_acyclic, out, err)
        }
        Cmd::Pattern { mode, pattern, k } => cmd_pattern(&alphabet, mode, &pattern, k, out),
        Cmd::Convert { direction, input, output, acyclic } => {
            cmd_convert(&alphabet, direction, &input, &output, acyclic, err)
        }
        Cmd::Plan { query } => cmd_plan(&alphabet, &query, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
