//! Column-statistics testers: all-ones column, identical columns, exact
//! column majority, permutation, doubly stochastic, and the quadratic
//! negative-entry scan.
//!
//! The find-style operations here report on the "no such structure"
//! property: Accept means nothing was found; a find is a rejection carrying
//! its witness.

use crate::domain::{DomainKind, Scalar};
use crate::error::{Error, Result};
use crate::matrix::QueryVector;
use crate::oracle::{BilinearOracle, TestReport, Witness};
use crate::rng::{probe_int, rng_from_seed, sample_subset};

/// One column's probe responses across rounds. Identical columns always
/// produce identical signatures, by linearity.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSignature {
    pub column: usize,
    pub values: Vec<Scalar>,
}

/// Inner products of every column with `rounds` fresh random probe vectors:
/// n queries per round, the shared machinery of the column-matching testers.
pub fn column_signatures(
    oracle: &mut BilinearOracle,
    rounds: u64,
    seed: u64,
) -> Result<Vec<ColumnSignature>> {
    let n = oracle.n();
    let domain = *oracle.domain();
    let mut rng = rng_from_seed(seed);
    let mut signatures: Vec<ColumnSignature> =
        (0..n).map(|column| ColumnSignature { column, values: Vec::new() }).collect();
    for _ in 0..rounds {
        let mut u = QueryVector::zeros(n, domain);
        for i in 0..n {
            u.set(i, domain.sample_uniform(&mut rng));
        }
        for (i, sig) in signatures.iter_mut().enumerate() {
            let e_i = QueryVector::basis(n, i, domain);
            sig.values.push(oracle.query(&u, &e_i, "identical")?);
        }
    }
    Ok(signatures)
}

/// Scans for an all-ones column with n queries: compare each column's probe
/// response to the locally computed probe sum. A planted all-ones column is
/// always found; a false positive survives with probability at most
/// n * 2^-20.
pub fn find_all_ones_column(oracle: &mut BilinearOracle, seed: u64) -> Result<TestReport> {
    require_domain(oracle, "find_all_ones_column", &[DomainKind::ExactInt])?;
    require_binary(oracle, "find_all_ones_column")?;
    let n = oracle.n();
    let domain = *oracle.domain();
    let mut rng = rng_from_seed(seed);
    let mut u = QueryVector::zeros(n, domain);
    let mut probe_sum: i128 = 0;
    for i in 0..n {
        let x = probe_int(&mut rng);
        probe_sum += x;
        u.set(i, Scalar::Int(x));
    }
    let before = oracle.ledger().total();
    let mut witness = None;
    // All n columns are probed regardless of early matches: the budget is
    // exactly n.
    for i in 0..n {
        let e_i = QueryVector::basis(n, i, domain);
        let got = oracle.query(&u, &e_i, "all_ones")?.as_int().unwrap();
        if got == probe_sum && witness.is_none() {
            witness = Some(Witness::Column(i));
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(match witness {
        Some(w) => TestReport::rejected(Some(w), 1, charged, seed),
        None => TestReport::accepted(1, charged, seed),
    })
}

/// Detects two identical columns.
///
/// Over exact integers: one signature round with 2^20-range probes, n
/// queries. Over GF(2): ceil(log2(n^2 / eps)) rounds of uniform bit probes,
/// n queries each, for overall false-pair probability at most eps. Identical
/// pairs are always reported (one-sided); the witness is the smallest
/// colliding pair.
pub fn find_identical_columns(
    oracle: &mut BilinearOracle,
    eps: f64,
    seed: u64,
) -> Result<TestReport> {
    require_domain(oracle, "find_identical_columns", &[DomainKind::ExactInt, DomainKind::Gf2])?;
    require_binary(oracle, "find_identical_columns")?;
    let n = oracle.n();
    let rounds = match oracle.domain().kind() {
        DomainKind::ExactInt => 1,
        DomainKind::Gf2 => {
            if !(0.0..1.0).contains(&eps) || eps == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "identical-columns error target must lie in (0, 1), got {eps}"
                )));
            }
            ((n * n) as f64 / eps).log2().ceil() as u64
        }
        _ => unreachable!(),
    };
    let before = oracle.ledger().total();
    let signatures = column_signatures(oracle, rounds, seed)?;
    let charged = oracle.ledger().total() - before;

    let mut witness: Option<Witness> = None;
    'outer: for b in 1..n {
        for a in 0..b {
            if signatures[a].values == signatures[b].values {
                witness = Some(Witness::ColumnPair(a, b));
                break 'outer;
            }
        }
    }
    Ok(match witness {
        Some(w) => TestReport::rejected(Some(w), rounds, charged, seed),
        None => TestReport::accepted(rounds, charged, seed),
    })
}

/// The exact column-wise majority of a GF(2) matrix: bit i is set iff column
/// i holds at least ceil(n/2) ones. Reads all n^2 entries; the quadratic
/// cost is inherent, so no sublinear shortcut is attempted.
pub fn column_majority_exact(oracle: &mut BilinearOracle) -> Result<Vec<bool>> {
    require_domain(oracle, "column_majority_exact", &[DomainKind::Gf2])?;
    let n = oracle.n();
    let threshold = n.div_ceil(2) as u64;
    let mut bits = Vec::with_capacity(n);
    for j in 0..n {
        let mut ones = 0u64;
        for i in 0..n {
            if !oracle.entry_query(i, j, "majority")?.is_raw_zero() {
                ones += 1;
            }
        }
        bits.push(ones >= threshold);
    }
    Ok(bits)
}

/// Tests whether a binary matrix is a permutation matrix.
///
/// One query checks the total number of ones is n; each round then compares
/// the ones mass of a random half of the columns (and of the rows) against
/// its expected share, deriving the complement side from the total for free.
/// Permutation matrices are always accepted; the per-round detection
/// constant is calibrated empirically (floor 0.05 asserted in tests).
pub fn test_permutation(oracle: &mut BilinearOracle, rounds: u64, seed: u64) -> Result<TestReport> {
    require_domain(oracle, "test_permutation", &[DomainKind::ExactInt])?;
    require_binary(oracle, "test_permutation")?;
    let n = oracle.n();
    let domain = *oracle.domain();
    let mut rng = rng_from_seed(seed);
    let before = oracle.ledger().total();
    let all_ones = QueryVector::ones(n, domain);

    let total = oracle.query(&all_ones, &all_ones, "permutation")?.as_int().unwrap();
    if total != n as i128 {
        let charged = oracle.ledger().total() - before;
        return Ok(TestReport::rejected(None, 0, charged, seed).with_nominal(1));
    }

    let half = n / 2;
    for round in 1..=rounds {
        // Columns: a uniform half must carry exactly its |A| share of ones.
        let cols = sample_subset(&mut rng, n, half);
        let col_indicator = QueryVector::indicator(n, cols.iter().copied(), domain)?;
        let col_mass = oracle.query(&all_ones, &col_indicator, "permutation")?.as_int().unwrap();
        // Complement derived: total - col_mass, no extra query.
        if col_mass != half as i128 {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, round, charged, seed)
                .with_nominal(1 + 4 * round));
        }
        // Rows, by the same argument.
        let rows = sample_subset(&mut rng, n, half);
        let row_indicator = QueryVector::indicator(n, rows.iter().copied(), domain)?;
        let row_mass = oracle.query(&row_indicator, &all_ones, "permutation")?.as_int().unwrap();
        if row_mass != half as i128 {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, round, charged, seed)
                .with_nominal(1 + 4 * round));
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(TestReport::accepted(rounds, charged, seed).with_nominal(1 + 4 * rounds))
}

/// Tests whether a nonnegative matrix is doubly stochastic: total mass n,
/// then random half-splits of columns and rows whose group sums must equal
/// the group size (complement derived). Nonnegativity is a caller promise
/// and deliberately unchecked: detecting a negative entry is provably
/// quadratic, see `scan_negative_entry`.
pub fn test_doubly_stochastic(
    oracle: &mut BilinearOracle,
    rounds: u64,
    seed: u64,
) -> Result<TestReport> {
    require_domain(
        oracle,
        "test_doubly_stochastic",
        &[DomainKind::ExactRational, DomainKind::ApproxReal],
    )?;
    let n = oracle.n();
    let domain = *oracle.domain();
    let mut rng = rng_from_seed(seed);
    let before = oracle.ledger().total();
    let all_ones = QueryVector::ones(n, domain);

    let total = oracle.query(&all_ones, &all_ones, "doubly_stochastic")?;
    if !domain.eq(total, domain.from_i64(n as i64)) {
        let charged = oracle.ledger().total() - before;
        return Ok(TestReport::rejected(None, 0, charged, seed).with_nominal(1));
    }

    let half = n / 2;
    for round in 1..=rounds {
        let cols = sample_subset(&mut rng, n, half);
        let col_indicator = QueryVector::indicator(n, cols.iter().copied(), domain)?;
        let col_mass = oracle.query(&all_ones, &col_indicator, "doubly_stochastic")?;
        if !domain.eq(col_mass, domain.from_i64(half as i64)) {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, round, charged, seed)
                .with_nominal(1 + 4 * round));
        }
        let rows = sample_subset(&mut rng, n, half);
        let row_indicator = QueryVector::indicator(n, rows.iter().copied(), domain)?;
        let row_mass = oracle.query(&row_indicator, &all_ones, "doubly_stochastic")?;
        if !domain.eq(row_mass, domain.from_i64(half as i64)) {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, round, charged, seed)
                .with_nominal(1 + 4 * round));
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(TestReport::accepted(rounds, charged, seed).with_nominal(1 + 4 * rounds))
}

/// Scans all n^2 entries for a negative one; the quadratic baseline is the
/// best possible up to a log factor. Always charges exactly n^2; the
/// witness is the first negative cell in row-major order.
pub fn scan_negative_entry(oracle: &mut BilinearOracle) -> Result<TestReport> {
    require_domain(
        oracle,
        "scan_negative_entry",
        &[DomainKind::ExactInt, DomainKind::ExactRational, DomainKind::ApproxReal],
    )?;
    let n = oracle.n();
    let domain = *oracle.domain();
    let before = oracle.ledger().total();
    let mut witness = None;
    for i in 0..n {
        for j in 0..n {
            let entry = oracle.entry_query(i, j, "negative_scan")?;
            if witness.is_none() && domain.is_negative(entry)? {
                witness = Some(Witness::Entry(i, j));
            }
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(match witness {
        Some(w) => TestReport::rejected(Some(w), 1, charged, 0),
        None => TestReport::accepted(1, charged, 0),
    })
}

fn require_domain(oracle: &BilinearOracle, op: &'static str, kinds: &[DomainKind]) -> Result<()> {
    if kinds.contains(&oracle.domain().kind()) {
        Ok(())
    } else {
        Err(Error::UnsupportedDomain { op, domain: oracle.domain().to_string() })
    }
}

/// Load-time contract check for binary-matrix testers; direct inspection,
/// never a metered probe.
fn require_binary(oracle: &BilinearOracle, op: &str) -> Result<()> {
    if oracle.unmetered_matrix().is_binary() {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!("{op} requires a 0/1 matrix")))
    }
}

/// Expected GF(2) signature rounds for a given dimension and error target;
/// the identical-columns budget is n times this.
pub fn identical_gf2_rounds(n: usize, eps: f64) -> u64 {
    ((n * n) as f64 / eps).log2().ceil() as u64
}
