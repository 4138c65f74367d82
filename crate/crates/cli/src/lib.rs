//! Batch command-line surface over the toolkit.
//!
//! Exit codes: 0 success (or EQUAL), 1 NOT EQUAL (or an invalid
//! independence report), 2 parse or usage errors, 3 size-guard refusals
//! and questions the theory leaves open.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use seqprop::axioms::{AxiomId, AxiomSet, ALL_AXIOMS};
use seqprop::ba::{from_ba, to_ba};
use seqprop::error::Error;
use seqprop::forms::{decide, to_basic_form, to_bf_cr, to_bf_rp, to_bf_st, Variety};
use seqprop::independence::independence_report;
use seqprop::rewrite::normal_form;
use seqprop::semantics::{
    check_axiom_soundness, format_cell, format_history, parse_valuation, truth_table, SemVariety,
    SoundnessOutcome,
};
use seqprop::syntax::{parse_ba, parse_term, print_ba, print_term};
use seqprop::{Alphabet, Term};

const TRUTH_TABLE_CELL_LIMIT: usize = 12;

#[derive(Parser)]
#[command(name = "seqprop", version, about = "Sequential propositional logic toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a term to its unique normal form
    Normalize {
        term: String,
        /// Print one line per rewrite step
        #[arg(long)]
        trace: bool,
        /// Comma-separated atoms; default: atoms of the term
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Decide equality of two terms in a variety (fr, rp, cr, st)
    Prove {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        alphabet: Option<String>,
        term1: String,
        term2: String,
    },
    /// Canonical basic form of a closed term in a variety
    BasicForm {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        alphabet: Option<String>,
        term: String,
    },
    /// Evaluate a closed term against a valuation file
    Eval {
        #[arg(long)]
        valuation: PathBuf,
        term: String,
    },
    /// Tabulate a closed term over the valuation cells it can read
    TruthTable {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        alphabet: Option<String>,
        term: String,
    },
    /// Translate a term to Boolean algebra
    ToBa { term: String },
    /// Translate a Boolean-algebra term to conditionals
    FromBa { term: String },
    /// Independence report for an axiom within an axiom set
    Independence {
        /// cp, cprp, cpcr, or cpst
        #[arg(long)]
        set: String,
        /// Target axiom, e.g. cp3 or cpstat
        #[arg(long)]
        target: String,
        /// Closed-term pool size bound
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Axiom-soundness property suite for a valuation variety
    CheckLaws {
        /// free, rp, cr, st, nr, rp1, rp2, cr1, cr2, or statcounter
        #[arg(long)]
        variety: String,
        #[arg(long)]
        alphabet: Option<String>,
        /// Defaults to SEQPROP_SEED, then 0
        #[arg(long)]
        seed: Option<u64>,
        /// Random instances per axiom schema
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::SizeGuard(_) | Error::UnresolvedIndependence { .. } | Error::DepthExceeded { .. } => {
            3
        }
        _ => 2,
    }
}

fn parse_alphabet_flag(flag: &Option<String>, terms: &[&Term]) -> Result<Alphabet, Error> {
    match flag {
        Some(s) => Alphabet::new(s.split(',').map(str::trim).filter(|p| !p.is_empty())),
        None => Ok(Alphabet::from_terms(terms.iter().copied())),
    }
}

fn default_seed() -> u64 {
    std::env::var("SEQPROP_SEED")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

/// Runs one command; returns the exit code and fills stdout text.
fn exec(cmd: Cmd, out: &mut String) -> Result<u8, Error> {
    match cmd {
        Cmd::Normalize {
            term,
            trace,
            alphabet,
        } => {
            let t = parse_term(&term, None)?;
            if let Some(flag) = &alphabet {
                let al = parse_alphabet_flag(&Some(flag.clone()), &[&t])?;
                al.check_term(&t)?;
            }
            let (nf, tr) = normal_form(&t);
            if trace {
                out.push_str(&tr.render());
            }
            writeln!(out, "{}", print_term(&nf)).unwrap();
            Ok(0)
        }
        Cmd::Prove {
            variety,
            alphabet,
            term1,
            term2,
        } => {
            let v = Variety::parse(&variety)?;
            let p = parse_term(&term1, None)?;
            let q = parse_term(&term2, None)?;
            let al = parse_alphabet_flag(&alphabet, &[&p, &q])?;
            let open = !p.is_closed() || !q.is_closed();
            // Static equality of open terms goes through the algebra
            // translation; the fr route accepts open terms natively.
            let equal = if v == Variety::St && open {
                seqprop::ba::decide_st_via_ba(&p, &q)?
            } else {
                decide(v, &p, &q, &al)?
            };
            writeln!(out, "{}", if equal { "EQUAL" } else { "NOT EQUAL" }).unwrap();
            Ok(u8::from(!equal))
        }
        Cmd::BasicForm {
            variety,
            alphabet,
            term,
        } => {
            let v = Variety::parse(&variety)?;
            let t = parse_term(&term, None)?;
            let al = parse_alphabet_flag(&alphabet, &[&t])?;
            let bf = match v {
                Variety::Fr => to_basic_form(&t)?,
                Variety::Rp => to_bf_rp(&t, &al)?,
                Variety::Cr => to_bf_cr(&t, &al)?,
                Variety::St => to_bf_st(&t, &al)?,
            };
            writeln!(out, "{}", print_term(&bf)).unwrap();
            Ok(0)
        }
        Cmd::Eval { valuation, term } => {
            let text = std::fs::read_to_string(&valuation)
                .map_err(|e| Error::Valuation(format!("{}: {e}", valuation.display())))?;
            let v = parse_valuation(&text)?;
            let t = parse_term(&term, Some(v.alphabet()))?;
            let (value, history) = v.eval_full(&t, &[])?;
            writeln!(out, "{}", if value { "T" } else { "F" }).unwrap();
            writeln!(out, "derivative: {}", format_history(&history)).unwrap();
            Ok(0)
        }
        Cmd::TruthTable {
            variety,
            alphabet,
            term,
        } => {
            let v = SemVariety::parse(&variety)?;
            let t = parse_term(&term, None)?;
            let al = parse_alphabet_flag(&alphabet, &[&t])?;
            al.check_term(&t)?;
            let table = truth_table(v, &al, &t, TRUTH_TABLE_CELL_LIMIT)?;
            let headers: Vec<String> = table.columns.iter().map(format_cell).collect();
            writeln!(out, "{} | value", headers.join(" ")).unwrap();
            for (values, result) in &table.rows {
                let cells: Vec<String> = values
                    .iter()
                    .zip(&headers)
                    .map(|(v, h)| format!("{:<width$}", if *v { "T" } else { "F" }, width = h.len()))
                    .collect();
                writeln!(
                    out,
                    "{} | {}",
                    cells.join(" ").trim_end(),
                    if *result { "T" } else { "F" }
                )
                .unwrap();
            }
            Ok(0)
        }
        Cmd::ToBa { term } => {
            let t = parse_term(&term, None)?;
            writeln!(out, "{}", print_ba(&to_ba(&t))).unwrap();
            Ok(0)
        }
        Cmd::FromBa { term } => {
            let t = parse_ba(&term)?;
            writeln!(out, "{}", print_term(&from_ba(&t))).unwrap();
            Ok(0)
        }
        Cmd::Independence {
            set,
            target,
            bound,
            alphabet,
        } => {
            let set = AxiomSet::parse(&set)?;
            let target = AxiomId::parse(&target)?;
            let al = match &alphabet {
                Some(s) => parse_alphabet_flag(&Some(s.clone()), &[])?,
                None => Alphabet::new(["a", "b"]).unwrap(),
            };
            match independence_report(set, target, bound, &al) {
                Ok(report) => {
                    out.push_str(&report.render());
                    Ok(u8::from(!report.is_valid()))
                }
                Err(Error::UnresolvedIndependence { .. }) => {
                    writeln!(out, "OPEN (paper)").unwrap();
                    Ok(3)
                }
                Err(e) => Err(e),
            }
        }
        Cmd::CheckLaws {
            variety,
            alphabet,
            seed,
            trials,
        } => {
            let v = SemVariety::parse(&variety)?;
            let al = match &alphabet {
                Some(s) => parse_alphabet_flag(&Some(s.clone()), &[])?,
                None => Alphabet::new(["a", "b"]).unwrap(),
            };
            let seed = seed.unwrap_or_else(default_seed);
            for axiom in ALL_AXIOMS {
                match check_axiom_soundness(v, axiom, &al, trials, seed)? {
                    SoundnessOutcome::Holds => writeln!(out, "{axiom}: holds").unwrap(),
                    SoundnessOutcome::Counterexample(ce) => {
                        writeln!(
                            out,
                            "{axiom}: FAILS  {} = {} @{}  but  {} = {} @{}",
                            print_term(&ce.lhs),
                            if ce.lhs_result.0 { "T" } else { "F" },
                            format_history(&ce.lhs_result.1),
                            print_term(&ce.rhs),
                            if ce.rhs_result.0 { "T" } else { "F" },
                            format_history(&ce.rhs_result.1),
                        )
                        .unwrap();
                    }
                }
            }
            Ok(0)
        }
    }
}

/// Entry point shared by the binary and the tests: parses `argv` (including
/// the program name) and returns `(exit code, stdout, stderr)`.
pub fn run(argv: &[String]) -> (u8, String, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                (0, e.to_string(), String::new())
            } else {
                (2, String::new(), e.to_string())
            };
        }
    };
    let mut out = String::new();
    match exec(cli.cmd, &mut out) {
        Ok(code) => (code, out, String::new()),
        Err(e) => (exit_code_for(&e), out, format!("error: {e}\n")),
    }
}
