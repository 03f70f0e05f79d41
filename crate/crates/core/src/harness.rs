//! Seeded experiment runner: testers over instance ensembles, with query
//! budgets asserted per trial and CSV output.
//!
//! A run is a deterministic function of its spec. Trial t derives its seed
//! as child_seed(master, t), splits it into an instance stream and a tester
//! stream, and owns a private oracle, so trials parallelize freely; CSV rows
//! are ordered by trial index regardless of completion order. Everything in
//! the CSV except the wall-time column is reproducible byte for byte.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::domain::{DomainKind, ScalarDomain};
use crate::error::{Error, Result};
use crate::graph::{test_star, GraphOracle};
use crate::instances::{generate_instance_in, InstanceKind};
use crate::linalg::{
    exact_trace, test_diagonal, test_diagonal_rounds, test_symmetric, test_symmetric_rounds,
    test_unitary,
};
use crate::oracle::{BilinearOracle, Verdict};
use crate::rng::child_seed;
use crate::stats::{
    column_majority_exact, find_all_ones_column, find_identical_columns, scan_negative_entry,
    test_doubly_stochastic, test_permutation,
};

/// Which tester an experiment drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TesterId {
    Diagonal,
    Symmetric,
    Unitary,
    Trace,
    AllOnesColumn,
    IdenticalColumns,
    Majority,
    Permutation,
    DoublyStochastic,
    NegativeScan,
    Star,
}

impl TesterId {
    pub fn name(&self) -> &'static str {
        match self {
            TesterId::Diagonal => "diagonal",
            TesterId::Symmetric => "symmetric",
            TesterId::Unitary => "unitary",
            TesterId::Trace => "trace",
            TesterId::AllOnesColumn => "all_ones",
            TesterId::IdenticalColumns => "identical",
            TesterId::Majority => "majority",
            TesterId::Permutation => "permutation",
            TesterId::DoublyStochastic => "doubly_stochastic",
            TesterId::NegativeScan => "negative_scan",
            TesterId::Star => "star",
        }
    }

    /// Domain kinds the tester operates over.
    pub fn supported_kinds(&self) -> &'static [DomainKind] {
        use DomainKind::*;
        match self {
            TesterId::Diagonal | TesterId::Symmetric | TesterId::Trace => {
                &[Gf2, Gfp, ExactInt, ExactRational, ApproxReal, ApproxComplex]
            }
            TesterId::Unitary => &[ApproxReal, ApproxComplex],
            TesterId::AllOnesColumn | TesterId::Permutation | TesterId::Star => &[ExactInt],
            TesterId::IdenticalColumns => &[ExactInt, Gf2],
            TesterId::Majority => &[Gf2],
            TesterId::DoublyStochastic => &[ExactRational, ApproxReal],
            TesterId::NegativeScan => &[ExactInt, ExactRational, ApproxReal],
        }
    }

    /// The domain used when the spec does not pick one.
    fn default_domain(&self, instance: InstanceKind) -> ScalarDomain {
        match self {
            TesterId::Majority => ScalarDomain::Gf2,
            TesterId::Unitary => ScalarDomain::approx_real_default(),
            TesterId::DoublyStochastic => ScalarDomain::ExactRational,
            _ => instance.default_domain(),
        }
    }
}

impl FromStr for TesterId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(TesterId::Diagonal),
            "symmetric" => Ok(TesterId::Symmetric),
            "unitary" => Ok(TesterId::Unitary),
            "trace" => Ok(TesterId::Trace),
            "all_ones" => Ok(TesterId::AllOnesColumn),
            "identical" => Ok(TesterId::IdenticalColumns),
            "majority" => Ok(TesterId::Majority),
            "permutation" => Ok(TesterId::Permutation),
            "doubly_stochastic" => Ok(TesterId::DoublyStochastic),
            "negative_scan" => Ok(TesterId::NegativeScan),
            "star" => Ok(TesterId::Star),
            other => Err(Error::InvalidParameter(format!("unknown tester `{other}`"))),
        }
    }
}

/// One experiment: a tester, an instance family, and run parameters.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub tester: TesterId,
    pub instance: InstanceKind,
    pub n: usize,
    /// Explicit domain; defaults per tester/instance when absent.
    pub domain: Option<ScalarDomain>,
    /// Error target for eps-driven testers (diagonal, symmetric, identical).
    pub eps: Option<f64>,
    /// Round count for round-driven testers; overrides eps where both
    /// apply. For the unitary tester this is its Gaussian trial count.
    pub rounds: Option<u64>,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn resolved_domain(&self) -> ScalarDomain {
        self.domain.unwrap_or_else(|| self.tester.default_domain(self.instance))
    }

    /// Tester/domain compatibility, checked before any trial runs.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("an experiment needs at least one trial".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("instance dimension must be positive".into()));
        }
        let domain = self.resolved_domain();
        if !self.tester.supported_kinds().contains(&domain.kind()) {
            return Err(Error::UnsupportedDomain {
                op: self.tester.name(),
                domain: domain.to_string(),
            });
        }
        Ok(())
    }
}

/// One trial's outcome. `queries` always equals the private ledger's total
/// after the run (metering completeness is asserted in `run_experiment`).
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub verdict: Verdict,
    pub queries: u64,
    pub micros: u64,
}

/// Aggregated run outcome plus all per-trial rows.
#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub tester: TesterId,
    pub n: usize,
    pub domain: ScalarDomain,
    pub records: Vec<TrialRecord>,
}

impl ExperimentSummary {
    pub fn accepts(&self) -> u64 {
        self.records.iter().filter(|r| r.verdict == Verdict::Accept).count() as u64
    }

    pub fn rejects(&self) -> u64 {
        self.records.len() as u64 - self.accepts()
    }

    pub fn accept_rate(&self) -> f64 {
        self.accepts() as f64 / self.records.len() as f64
    }

    pub fn reject_rate(&self) -> f64 {
        1.0 - self.accept_rate()
    }

    pub fn mean_queries(&self) -> f64 {
        self.records.iter().map(|r| r.queries as f64).sum::<f64>() / self.records.len() as f64
    }

    pub fn max_queries(&self) -> u64 {
        self.records.iter().map(|r| r.queries).max().unwrap_or(0)
    }

    /// CSV with the fixed schema `tester,n,domain,trial,seed,verdict,queries,us`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tester,n,domain,trial,seed,verdict,queries,us\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.tester.name(),
                self.n,
                self.domain,
                r.trial,
                r.seed,
                r.verdict.as_str(),
                r.queries,
                r.micros
            ));
        }
        out
    }
}

impl fmt::Display for ExperimentSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "tester={} n={} domain={} trials={}",
            self.tester.name(),
            self.n,
            self.domain,
            self.records.len()
        )?;
        writeln!(
            f,
            "accept_rate={:.4} reject_rate={:.4} mean_queries={:.2} max_queries={}",
            self.accept_rate(),
            self.reject_rate(),
            self.mean_queries(),
            self.max_queries()
        )
    }
}

/// Runs the experiment: deterministic in the spec, trials in parallel, rows
/// ordered by trial index.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentSummary> {
    spec.validate()?;
    let domain = spec.resolved_domain();
    let records: Result<Vec<TrialRecord>> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| run_trial(spec, domain, trial))
        .collect();
    Ok(ExperimentSummary { tester: spec.tester, n: spec.n, domain, records: records? })
}

/// Runs the experiment and writes its CSV to `path`.
pub fn run_experiment_to_csv(spec: &ExperimentSpec, path: &Path) -> Result<ExperimentSummary> {
    let summary = run_experiment(spec)?;
    write_csv(&summary, path)?;
    Ok(summary)
}

pub fn write_csv(summary: &ExperimentSummary, path: &Path) -> Result<()> {
    fs::write(path, summary.to_csv())?;
    Ok(())
}

fn run_trial(spec: &ExperimentSpec, domain: ScalarDomain, trial: u64) -> Result<TrialRecord> {
    let trial_seed = child_seed(spec.seed, trial);
    let instance_seed = child_seed(trial_seed, 0);
    let tester_seed = child_seed(trial_seed, 1);
    let matrix = generate_instance_in(spec.instance, spec.n, domain, instance_seed)?;
    let eps = spec.eps.unwrap_or(0.01);
    let start = Instant::now();

    let (verdict, queries) = match spec.tester {
        TesterId::Star => {
            let mut g = GraphOracle::new(matrix)?;
            let report = test_star(&mut g, spec.rounds.unwrap_or(32), tester_seed)?;
            assert_eq!(
                report.queries_charged,
                g.ledger().total(),
                "metering completeness violated"
            );
            (report.verdict, report.queries_charged)
        }
        tester => {
            let mut oracle = BilinearOracle::new(matrix);
            let report = match tester {
                TesterId::Diagonal => match spec.rounds {
                    Some(r) => test_diagonal_rounds(&mut oracle, r, tester_seed)?,
                    None => test_diagonal(&mut oracle, eps, tester_seed)?,
                },
                TesterId::Symmetric => match spec.rounds {
                    Some(r) => test_symmetric_rounds(&mut oracle, r, tester_seed)?,
                    None => test_symmetric(&mut oracle, eps, tester_seed)?,
                },
                TesterId::Unitary => {
                    test_unitary(&mut oracle, spec.rounds.unwrap_or(1), tester_seed)?
                }
                TesterId::AllOnesColumn => find_all_ones_column(&mut oracle, tester_seed)?,
                TesterId::IdenticalColumns => {
                    find_identical_columns(&mut oracle, eps, tester_seed)?
                }
                TesterId::Permutation => {
                    test_permutation(&mut oracle, spec.rounds.unwrap_or(32), tester_seed)?
                }
                TesterId::DoublyStochastic => {
                    test_doubly_stochastic(&mut oracle, spec.rounds.unwrap_or(32), tester_seed)?
                }
                TesterId::NegativeScan => scan_negative_entry(&mut oracle)?,
                TesterId::Trace => {
                    // Value operation: completing the exact scan is the
                    // accepting outcome.
                    let _ = exact_trace(&mut oracle)?;
                    crate::oracle::TestReport::accepted(1, oracle.ledger().total(), tester_seed)
                }
                TesterId::Majority => {
                    let _ = column_majority_exact(&mut oracle)?;
                    crate::oracle::TestReport::accepted(1, oracle.ledger().total(), tester_seed)
                }
                TesterId::Star => unreachable!("handled above"),
            };
            assert_eq!(
                report.queries_charged,
                oracle.ledger().total(),
                "metering completeness violated"
            );
            (report.verdict, report.queries_charged)
        }
    };

    Ok(TrialRecord {
        trial,
        seed: trial_seed,
        verdict,
        queries,
        micros: start.elapsed().as_micros() as u64,
    })
}

/// Drops the wall-time column from a CSV; the remainder is the reproducible
/// part.
pub fn csv_without_walltime(csv: &str) -> String {
    csv.lines()
        .map(|line| match line.rsplit_once(',') {
            Some((rest, _us)) => rest.to_string(),
            None => line.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}
