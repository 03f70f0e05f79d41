use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use utmv::domain::ScalarDomain;
use utmv::gadgets::{verify_gadget_iff, GadgetKind, VerifyMode};
use utmv::graph::{test_star, GraphOracle};
use utmv::harness::{run_experiment, write_csv, ExperimentSpec, TesterId};
use utmv::instances::InstanceKind;
use utmv::io::{parse_edge_list_file, parse_matrix_file};
use utmv::linalg::{exact_trace, test_diagonal, test_symmetric, test_unitary};
use utmv::oracle::{BilinearOracle, TestReport};
use utmv::stats::{
    column_majority_exact, find_all_ones_column, find_identical_columns, scan_negative_entry,
    test_doubly_stochastic, test_permutation,
};

/// Metered uTMv-query laboratory: property testers, graph queries, gadget
/// verification, and seeded experiments.
#[derive(Parser)]
#[command(name = "utmv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one tester against a matrix file.
    Test {
        /// Matrix file (see README for the format).
        #[arg(long)]
        file: PathBuf,
        /// Tester: diagonal | symmetric | unitary | trace | all_ones |
        /// identical | majority | permutation | doubly_stochastic |
        /// negative_scan | star.
        #[arg(long)]
        tester: TesterId,
        /// Error target for eps-driven testers.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Round count for round-driven testers (unitary: Gaussian trials).
        #[arg(long, default_value_t = 32)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a tester over a seeded instance ensemble and summarize verdicts.
    Experiment {
        #[arg(long)]
        tester: TesterId,
        /// Instance family, e.g. diagonal, near_permutation, star:0, path,
        /// all_ones_column:3, identical_columns:2,5, random_binary:0.5,
        /// hadamard_unitary.
        #[arg(long)]
        instance: InstanceKind,
        #[arg(long)]
        n: usize,
        /// Domain override: gf2 | gfp:p | int | rat | real[:tol] |
        /// complex[:tol].
        #[arg(long)]
        domain: Option<ScalarDomain>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        rounds: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify every reduction gadget's claimed iff and print a table.
    VerifyGadgets {
        /// Restrict to one kind: perm | majority | identical | negative |
        /// unitary_rand | unitary_det.
        #[arg(long)]
        kind: Option<GadgetKind>,
    },
    /// Local-query demos on an edge-list graph file.
    Graph {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of uniform edge samples to draw.
        #[arg(long, default_value_t = 5)]
        samples: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> utmv::Result<ExitCode> {
    match cli.command {
        Command::Test { file, tester, eps, rounds, seed } => {
            let matrix = parse_matrix_file(&file)?;
            println!("matrix: n={} domain={}", matrix.n(), matrix.domain());
            match tester {
                TesterId::Trace => {
                    let mut oracle = BilinearOracle::new(matrix);
                    let value = exact_trace(&mut oracle)?;
                    println!("trace = {value} ({} queries)", oracle.ledger().total());
                }
                TesterId::Majority => {
                    let mut oracle = BilinearOracle::new(matrix);
                    let bits = column_majority_exact(&mut oracle)?;
                    let rendered: String =
                        bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    println!("column majority = {rendered} ({} queries)", oracle.ledger().total());
                }
                TesterId::Star => {
                    let mut g = GraphOracle::new(matrix)?;
                    print_report(&test_star(&mut g, rounds, seed)?);
                }
                other => {
                    let mut oracle = BilinearOracle::new(matrix);
                    let report = match other {
                        TesterId::Diagonal => test_diagonal(&mut oracle, eps, seed)?,
                        TesterId::Symmetric => test_symmetric(&mut oracle, eps, seed)?,
                        TesterId::Unitary => test_unitary(&mut oracle, rounds, seed)?,
                        TesterId::AllOnesColumn => find_all_ones_column(&mut oracle, seed)?,
                        TesterId::IdenticalColumns => {
                            find_identical_columns(&mut oracle, eps, seed)?
                        }
                        TesterId::Permutation => test_permutation(&mut oracle, rounds, seed)?,
                        TesterId::DoublyStochastic => {
                            test_doubly_stochastic(&mut oracle, rounds, seed)?
                        }
                        TesterId::NegativeScan => scan_negative_entry(&mut oracle)?,
                        TesterId::Trace | TesterId::Majority | TesterId::Star => unreachable!(),
                    };
                    print_report(&report);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { tester, instance, n, domain, eps, rounds, trials, seed, out } => {
            let spec =
                ExperimentSpec { tester, instance, n, domain, eps, rounds, trials, seed };
            let summary = run_experiment(&spec)?;
            print!("{summary}");
            if let Some(path) = out {
                write_csv(&summary, &path)?;
                println!("csv written to {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyGadgets { kind } => {
            // The standard verification table: exhaustive wherever the input
            // space fits the cap, sampled for the statistical identical
            // gadget.
            let table: Vec<(GadgetKind, usize, VerifyMode)> = vec![
                (GadgetKind::Permutation, 4, VerifyMode::Exhaustive),
                (GadgetKind::Majority, 4, VerifyMode::Exhaustive),
                (GadgetKind::IdenticalColumns, 32, VerifyMode::Sampled { trials: 2000 }),
                (GadgetKind::NegativeEntry, 3, VerifyMode::Exhaustive),
                (
                    GadgetKind::UnitaryRandomized { alice_minus: false, bob_minus: false },
                    8,
                    VerifyMode::Exhaustive,
                ),
                (GadgetKind::UnitaryDeterministic, 4, VerifyMode::Exhaustive),
            ];
            let mut all_passed = true;
            for (k, n, mode) in table {
                if let Some(only) = kind {
                    if only.name() != k.name() {
                        continue;
                    }
                }
                let report = verify_gadget_iff(k, n, mode)?;
                println!("{report}");
                for note in &report.notes {
                    println!("{:>14}{note}", "");
                }
                for ce in report.counterexamples.iter().take(5) {
                    println!("{:>14}counterexample: {ce}", "");
                }
                all_passed &= report.passed();
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Graph { file, seed, samples } => {
            let matrix = parse_edge_list_file(&file)?;
            let n = matrix.n();
            let mut g = GraphOracle::new(matrix)?;
            let m = g.edge_count()?;
            println!("graph: n={n} edges={m}");
            let degrees: Vec<u64> =
                (0..n).map(|v| g.degree(v)).collect::<utmv::Result<_>>()?;
            println!("degrees: {degrees:?}");
            if let Some(v) = (0..n).find(|&v| degrees[v] > 0) {
                let neighbors: Vec<usize> = (1..=degrees[v])
                    .map(|rank| g.kth_neighbor(v, rank))
                    .collect::<utmv::Result<_>>()?;
                println!("neighbors of {v}: {neighbors:?}");
            }
            for t in 0..samples {
                match g.sample_edge(utmv::rng::child_seed(seed, t)) {
                    Ok(trace) => println!(
                        "sample {t}: edge {:?} ({} queries)",
                        trace.edge(),
                        trace.queries_used
                    ),
                    Err(utmv::Error::EmptyGraph) => {
                        println!("sample {t}: graph has no edges");
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            println!("ledger: total={} by_category={:?}", g.ledger().total(), g.ledger().by_category());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_report(report: &TestReport) {
    println!(
        "verdict={} witness={:?} rounds={} queries={} seed={}{}",
        report.verdict.as_str(),
        report.witness,
        report.rounds,
        report.queries_charged,
        report.seed,
        match report.nominal_queries {
            Some(nominal) => format!(" nominal_queries={nominal}"),
            None => String::new(),
        }
    );
}
