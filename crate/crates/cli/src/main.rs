//! weakseq: t-weak sequencings, walk realizations, bounds, and the Monte
//! Carlo harness on the command line.
//!
//! Exit codes: 0 success or passing verdict, 1 violation / nothing found /
//! proven impossible, 2 precondition unmet or search undecided, 3 parse
//! error (arguments, group, multiset, ordering, walk, or seed).

use std::fmt::Display;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use weakseq::bounds::{expectation_bound, min_ell};
use weakseq::construct::{sequence_multiset, SeqError};
use weakseq::group::{Element, Group};
use weakseq::montecarlo::{build_scenario, McError};
use weakseq::multiset::{Multiset, Sequencing};
use weakseq::report::{
    bound_csv_row, elements_value, mc_csv_row, to_json, BoundJson, McJson, MinEllJson,
    RealizeReport, SearchJson, SequenceReport, VerifyRealReport, VerifySeqReport,
    BOUND_CSV_HEADER, MC_CSV_HEADER,
};
use weakseq::search::{brute_force_sequence, SearchOutcome, DEFAULT_NODE_BUDGET};
use weakseq::seq::verify_t_weak;
use weakseq::walk::{brute_force_realize, realize_multiset, verify_realization, Walk, WalkError};

#[derive(Parser)]
#[command(name = "weakseq", version, about = "t-weak sequencing and realization toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Target {
    Sequencing,
    Realization,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an ordering for t-weakness of its partial sums.
    VerifySeq {
        #[arg(long)]
        group: String,
        /// Comma-separated elements, e.g. "1,2,3" or "(1,0),(0,2)".
        #[arg(long)]
        ordering: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Produce a t-weak sequencing of a multiset.
    Sequence {
        #[arg(long)]
        group: String,
        /// Multiset literal, e.g. "1^2,3,5".
        #[arg(long)]
        multiset: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        /// Defaults to $WEAKSEQ_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check that a walk realizes a multiset t-weakly.
    VerifyReal {
        #[arg(long)]
        group: String,
        /// Comma-separated vertices; translated to start at the identity.
        #[arg(long)]
        walk: String,
        #[arg(long)]
        multiset: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Produce a t-weak walk realizing a multiset.
    Realize {
        #[arg(long)]
        group: String,
        #[arg(long)]
        multiset: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate the collision-expectation bound exactly.
    Bound {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        ell: u64,
        /// Sweep ell..=ell-end instead of a single value.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        ell_end: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Smallest ell with bound < 1 for the given t.
    MinEll {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample a scenario and estimate the collision count empirically.
    Montecarlo {
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        ell: u64,
        /// Distinct non-identity elements to sample; defaults to 2*ell.
        #[arg(long)]
        set_size: Option<usize>,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Brute-force search, an oracle for small instances.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long)]
        multiset: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: u32,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, e: impl Display) -> Failure {
        Failure { code, msg: e.to_string() }
    }
}

fn seq_code(e: &SeqError) -> u8 {
    match e {
        SeqError::ProvenImpossible
        | SeqError::RetriesExhausted { .. }
        | SeqError::NoZeroSumFreeSubset { .. } => 1,
        _ => 2,
    }
}

fn walk_code(e: &WalkError) -> u8 {
    match e {
        WalkError::ProvenImpossible => 1,
        WalkError::Seq(inner) => seq_code(inner),
        _ => 2,
    }
}

fn mc_code(e: &McError) -> u8 {
    match e {
        McError::NoZeroSumFreeSubset { .. } => 1,
        _ => 2,
    }
}

fn parse_group(spec: &str) -> Result<Group, Failure> {
    Group::parse(spec).map_err(|e| Failure::new(3, e))
}

fn parse_multiset(g: &Group, s: &str) -> Result<Multiset, Failure> {
    Multiset::parse(g, s).map_err(|e| Failure::new(3, e))
}

fn parse_elements(g: &Group, s: &str) -> Result<Vec<Element>, Failure> {
    g.parse_element_list(s).map_err(|e| Failure::new(3, e))
}

fn resolve_seed(cli_seed: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = cli_seed {
        return Ok(s);
    }
    match std::env::var("WEAKSEQ_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::new(3, format!("WEAKSEQ_SEED must be a u64, found {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn no_csv(format: Format, cmd: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::new(
            3,
            format!("csv output is only available for montecarlo and bound, not {cmd}"),
        ));
    }
    Ok(())
}

fn literal_list(g: &Group, es: &[Element]) -> String {
    es.iter().map(|&e| g.element_literal(e)).collect::<Vec<_>>().join(",")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, Failure> {
    match cmd {
        Cmd::VerifySeq { group, ordering, t, format } => {
            no_csv(format, "verify-seq")?;
            let g = parse_group(&group)?;
            let order = parse_elements(&g, &ordering)?;
            let seq = Sequencing::from_order(&g, order).map_err(|e| Failure::new(3, e))?;
            let verdict = verify_t_weak(&g, &seq, t);
            let sums = seq.partial_sums(&g);
            let rep = VerifySeqReport::new(&g, t, &sums, verdict);
            match format {
                Format::Json => println!("{}", to_json(&rep)),
                Format::Plain => match rep.violation {
                    None => println!("ok"),
                    Some((i, j)) => println!("violation ({i},{j})"),
                },
                Format::Csv => unreachable!(),
            }
            Ok(ExitCode::from(if rep.ok { 0 } else { 1 }))
        }
        Cmd::Sequence { group, multiset, t, seed, max_attempts, format } => {
            no_csv(format, "sequence")?;
            let g = parse_group(&group)?;
            let m = parse_multiset(&g, &multiset)?;
            let seed = resolve_seed(seed)?;
            let result = sequence_multiset(&g, &m, t, seed, max_attempts)
                .map_err(|e| Failure::new(seq_code(&e), e))?;
            let rep = SequenceReport::new(&g, t, &result.sequencing, result.route, Some(seed));
            match format {
                Format::Json => println!("{}", to_json(&rep)),
                Format::Plain => println!("{}", literal_list(&g, result.sequencing.order())),
                Format::Csv => unreachable!(),
            }
            Ok(ExitCode::from(0))
        }
        Cmd::VerifyReal { group, walk, multiset, t, format } => {
            no_csv(format, "verify-real")?;
            let g = parse_group(&group)?;
            let m = parse_multiset(&g, &multiset)?;
            let vertices = parse_elements(&g, &walk)?;
            let w = Walk::from_vertices(vertices)
                .map_err(|e| Failure::new(3, e))?
                .normalized(&g);
            let verdict = verify_realization(&g, &w, &m, t);
            let rep = VerifyRealReport::new(&g, t, &w, verdict);
            match format {
                Format::Json => println!("{}", to_json(&rep)),
                Format::Plain => match (rep.failure, rep.collision) {
                    (None, _) => println!("ok"),
                    (Some("window"), Some((i, j))) => println!("window collision ({i},{j})"),
                    (Some(f), _) => println!("{f} mismatch"),
                },
                Format::Csv => unreachable!(),
            }
            Ok(ExitCode::from(if rep.ok { 0 } else { 1 }))
        }
        Cmd::Realize { group, multiset, t, seed, max_attempts, format } => {
            no_csv(format, "realize")?;
            let g = parse_group(&group)?;
            let m = parse_multiset(&g, &multiset)?;
            let seed = resolve_seed(seed)?;
            let realized = realize_multiset(&g, &m, t, seed, max_attempts)
                .map_err(|e| Failure::new(walk_code(&e), e))?;
            let rep = RealizeReport::new(&g, t, &m, &realized, Some(seed));
            match format {
                Format::Json => println!("{}", to_json(&rep)),
                Format::Plain => println!("{}", literal_list(&g, realized.walk.vertices())),
                Format::Csv => unreachable!(),
            }
            Ok(ExitCode::from(0))
        }
        Cmd::Bound { t, ell, ell_end, format } => {
            let end = ell_end.unwrap_or(ell);
            if end < ell {
                return Err(Failure::new(3, "--ell-end must be at least --ell"));
            }
            let reports: Vec<_> = (ell..=end).map(|l| expectation_bound(t, l)).collect();
            match format {
                Format::Json if reports.len() == 1 => {
                    println!("{}", to_json(&BoundJson::from(&reports[0])))
                }
                Format::Json => {
                    let rows: Vec<BoundJson> = reports.iter().map(BoundJson::from).collect();
                    println!("{}", to_json(&rows));
                }
                Format::Csv => {
                    println!("{BOUND_CSV_HEADER}");
                    for r in &reports {
                        println!("{}", bound_csv_row(r));
                    }
                }
                Format::Plain => {
                    for r in &reports {
                        println!("{}", r.bound_rational());
                    }
                }
            }
            Ok(ExitCode::from(0))
        }
        Cmd::MinEll { t, format } => {
            no_csv(format, "min-ell")?;
            let value = min_ell(t).map_err(|e| Failure::new(2, e))?;
            match format {
                Format::Json => println!("{}", to_json(&MinEllJson { t, min_ell: value })),
                Format::Plain => println!("{value}"),
                Format::Csv => unreachable!(),
            }
            Ok(ExitCode::from(0))
        }
        Cmd::Montecarlo { group, t, ell, set_size, trials, seed, format } => {
            let g = parse_group(&group)?;
            let seed = resolve_seed(seed)?;
            let set_size = set_size.unwrap_or(2 * ell as usize);
            let scenario =
                build_scenario(&g, t, ell, set_size, seed).map_err(|e| Failure::new(mc_code(&e), e))?;
            let report = scenario.run(trials, seed).map_err(|e| Failure::new(mc_code(&e), e))?;
            match format {
                Format::Json => println!("{}", to_json(&McJson::new(&g, &report, set_size, seed))),
                Format::Csv => {
                    println!("{MC_CSV_HEADER}");
                    println!("{}", mc_csv_row(&report));
                }
                Format::Plain => println!(
                    "t={} ell={} trials={} mean_X={:.6} std_err={:.6} bound={} within_3se={}",
                    report.t,
                    report.ell,
                    report.trials,
                    report.mean_x(),
                    report.std_err(),
                    report.bound.bound_rational(),
                    report.within_std_err(3.0)
                ),
            }
            Ok(ExitCode::from(0))
        }
        Cmd::Search { group, multiset, t, target, budget, format } => {
            no_csv(format, "search")?;
            let g = parse_group(&group)?;
            let m = parse_multiset(&g, &multiset)?;
            let (target_name, outcome, witness) = match target {
                Target::Sequencing => {
                    let out = brute_force_sequence(&g, &m, t, budget)
                        .map_err(|e| Failure::new(2, e))?;
                    match out {
                        SearchOutcome::Found(seq) => {
                            let w = elements_value(&g, seq.order());
                            ("sequencing", "found", Some(w))
                        }
                        SearchOutcome::ExhaustedNone => ("sequencing", "exhausted-none", None),
                        SearchOutcome::BudgetExceeded => ("sequencing", "budget-exceeded", None),
                    }
                }
                Target::Realization => {
                    let out = brute_force_realize(&g, &m, t, budget)
                        .map_err(|e| Failure::new(2, e))?;
                    match out {
                        SearchOutcome::Found(walk) => {
                            let w = elements_value(&g, walk.vertices());
                            ("realization", "found", Some(w))
                        }
                        SearchOutcome::ExhaustedNone => ("realization", "exhausted-none", None),
                        SearchOutcome::BudgetExceeded => ("realization", "budget-exceeded", None),
                    }
                }
            };
            let code = match outcome {
                "found" => 0,
                "exhausted-none" => 1,
                _ => 2,
            };
            match format {
                Format::Json => println!(
                    "{}",
                    to_json(&SearchJson {
                        group: g.spec().to_string(),
                        t,
                        target: target_name,
                        outcome,
                        witness,
                    })
                ),
                Format::Plain => match outcome {
                    "found" => println!("found"),
                    "exhausted-none" => println!("none"),
                    _ => println!("undecided"),
                },
                Format::Csv => unreachable!(),
            }
            Ok(ExitCode::from(code))
        }
    }
}
