//! Planted instance generators: positives and negatives for every tester.
//!
//! Each generator is a deterministic function of (kind, n, domain, seed) and
//! the returned matrix provably satisfies or violates the named property by
//! construction, so experiment verdicts can be scored without a second
//! oracle.

use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;

use crate::domain::{DomainKind, Scalar, ScalarDomain};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::{rng_from_seed, sample_subset, TrialRng};

/// Instance families. The planted parameters (center, column, pair, density)
/// are part of the kind so instances stay reproducible from (kind, n, seed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InstanceKind {
    /// Random diagonal matrix.
    Diagonal,
    /// Diagonal plus exactly one nonzero off-diagonal cell.
    NearDiagonal,
    /// Random symmetric matrix.
    Symmetric,
    /// Symmetric except one broken (i, j) pair.
    Asymmetric,
    /// Uniformly random permutation matrix.
    Permutation,
    /// Permutation with one emptied column and one doubled column
    /// (rows stay intact; total ones stays n).
    NearPermutation,
    /// Random convex combination of permutation matrices.
    DoublyStochastic,
    /// Star graph adjacency with the given center.
    Star { center: usize },
    /// Path graph adjacency 0-1-...-(n-1).
    Path,
    /// Random binary matrix with one planted all-ones column (unique by
    /// construction).
    AllOnesColumn { column: usize },
    /// Random binary matrix with one planted identical column pair (unique
    /// by construction).
    IdenticalColumns { first: usize, second: usize },
    /// Independent Bernoulli(density) binary entries.
    RandomBinary { density: f64 },
    /// The normalized Hadamard matrix G_n; unitary/orthonormal by
    /// construction. Requires n to be a power of two.
    HadamardUnitary,
}

impl InstanceKind {
    /// The domain used when the caller does not pick one.
    pub fn default_domain(&self) -> ScalarDomain {
        match self {
            InstanceKind::DoublyStochastic => ScalarDomain::ExactRational,
            InstanceKind::HadamardUnitary => ScalarDomain::approx_real_default(),
            _ => ScalarDomain::ExactInt,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::Diagonal => "diagonal",
            InstanceKind::NearDiagonal => "near_diagonal",
            InstanceKind::Symmetric => "symmetric",
            InstanceKind::Asymmetric => "asymmetric",
            InstanceKind::Permutation => "permutation",
            InstanceKind::NearPermutation => "near_permutation",
            InstanceKind::DoublyStochastic => "doubly_stochastic",
            InstanceKind::Star { .. } => "star",
            InstanceKind::Path => "path",
            InstanceKind::AllOnesColumn { .. } => "all_ones_column",
            InstanceKind::IdenticalColumns { .. } => "identical_columns",
            InstanceKind::RandomBinary { .. } => "random_binary",
            InstanceKind::HadamardUnitary => "hadamard_unitary",
        }
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    /// Parses `name` or `name:params`, e.g. `star:3`, `random_binary:0.25`,
    /// `identical_columns:2,5`, `all_ones_column:1`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let bad_arg = || Error::InvalidParameter(format!("bad instance argument in `{s}`"));
        let kind = match name {
            "diagonal" => InstanceKind::Diagonal,
            "near_diagonal" => InstanceKind::NearDiagonal,
            "symmetric" => InstanceKind::Symmetric,
            "asymmetric" => InstanceKind::Asymmetric,
            "permutation" => InstanceKind::Permutation,
            "near_permutation" => InstanceKind::NearPermutation,
            "doubly_stochastic" => InstanceKind::DoublyStochastic,
            "star" => InstanceKind::Star {
                center: arg.map_or(Ok(0), |a| a.parse().map_err(|_| bad_arg()))?,
            },
            "path" => InstanceKind::Path,
            "all_ones_column" => InstanceKind::AllOnesColumn {
                column: arg.map_or(Ok(0), |a| a.parse().map_err(|_| bad_arg()))?,
            },
            "identical_columns" => match arg {
                None => InstanceKind::IdenticalColumns { first: 0, second: 1 },
                Some(a) => {
                    let (i, j) = a.split_once(',').ok_or_else(bad_arg)?;
                    InstanceKind::IdenticalColumns {
                        first: i.trim().parse().map_err(|_| bad_arg())?,
                        second: j.trim().parse().map_err(|_| bad_arg())?,
                    }
                }
            },
            "random_binary" => InstanceKind::RandomBinary {
                density: arg.map_or(Ok(0.5), |a| a.parse().map_err(|_| bad_arg()))?,
            },
            "hadamard_unitary" => InstanceKind::HadamardUnitary,
            other => return Err(Error::InvalidParameter(format!("unknown instance kind `{other}`"))),
        };
        Ok(kind)
    }
}

/// Generates an instance in the kind's default domain.
pub fn generate_instance(kind: InstanceKind, n: usize, seed: u64) -> Result<DenseMatrix> {
    generate_instance_in(kind, n, kind.default_domain(), seed)
}

/// Generates an instance in an explicit domain.
pub fn generate_instance_in(
    kind: InstanceKind,
    n: usize,
    domain: ScalarDomain,
    seed: u64,
) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("instance dimension must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    match kind {
        InstanceKind::Diagonal => {
            let mut m = DenseMatrix::zeros(n, domain);
            for i in 0..n {
                m.set(i, i, small_scalar(&domain, &mut rng));
            }
            Ok(m)
        }
        InstanceKind::NearDiagonal => {
            if n < 2 {
                return Err(Error::InvalidParameter("near_diagonal needs n >= 2".into()));
            }
            let mut m = generate_instance_in(InstanceKind::Diagonal, n, domain, seed)?;
            let (i, j) = distinct_pair(&mut rng, n);
            m.set(i, j, nonzero_scalar(&domain, &mut rng));
            Ok(m)
        }
        InstanceKind::Symmetric => {
            let mut m = DenseMatrix::zeros(n, domain);
            for i in 0..n {
                for j in i..n {
                    let s = small_scalar(&domain, &mut rng);
                    m.set(i, j, s);
                    m.set(j, i, s);
                }
            }
            Ok(m)
        }
        InstanceKind::Asymmetric => {
            if n < 2 {
                return Err(Error::InvalidParameter("asymmetric needs n >= 2".into()));
            }
            let mut m = generate_instance_in(InstanceKind::Symmetric, n, domain, seed)?;
            let (i, j) = distinct_pair(&mut rng, n);
            // Break exactly one pair: M_ij becomes M_ji + 1.
            m.set(i, j, domain.add(m.get(j, i), domain.one()));
            Ok(m)
        }
        InstanceKind::Permutation => {
            let perm = random_permutation(&mut rng, n);
            let mut m = DenseMatrix::zeros(n, domain);
            for (row, &col) in perm.iter().enumerate() {
                m.set(row, col, domain.one());
            }
            Ok(m)
        }
        InstanceKind::NearPermutation => {
            if n < 2 {
                return Err(Error::InvalidParameter("near_permutation needs n >= 2".into()));
            }
            let mut m = generate_instance_in(InstanceKind::Permutation, n, domain, seed)?;
            // Move the single one of column `empty` into column `doubled`:
            // rows keep one entry each, total stays n, but one column is
            // emptied and another doubled.
            let (doubled, empty) = distinct_pair(&mut rng, n);
            let row_of_empty = (0..n).find(|&r| !m.get(r, empty).is_raw_zero()).unwrap();
            m.set(row_of_empty, empty, domain.zero());
            m.set(row_of_empty, doubled, domain.one());
            Ok(m)
        }
        InstanceKind::DoublyStochastic => {
            if !matches!(domain.kind(), DomainKind::ExactRational | DomainKind::ApproxReal) {
                return Err(Error::UnsupportedDomain {
                    op: "doubly_stochastic instance",
                    domain: domain.to_string(),
                });
            }
            // Birkhoff: convex combination of 4 random permutations with
            // positive integer weights, exact over the rationals.
            let k = 4usize;
            let weights: Vec<i128> = (0..k).map(|_| rng.random_range(1..=9)).collect();
            let total: i128 = weights.iter().sum();
            let mut m = DenseMatrix::zeros(n, domain);
            for w in &weights {
                let perm = random_permutation(&mut rng, n);
                for (row, &col) in perm.iter().enumerate() {
                    let share = match domain {
                        ScalarDomain::ExactRational => Scalar::Rational(Ratio::new(*w, total)),
                        _ => Scalar::Real(*w as f64 / total as f64),
                    };
                    m.set(row, col, domain.add(m.get(row, col), share));
                }
            }
            Ok(m)
        }
        InstanceKind::Star { center } => {
            if center >= n {
                return Err(Error::InvalidParameter(format!(
                    "star center {center} out of range for n = {n}"
                )));
            }
            let mut m = DenseMatrix::zeros(n, domain);
            for v in 0..n {
                if v != center {
                    m.set(center, v, domain.one());
                    m.set(v, center, domain.one());
                }
            }
            Ok(m)
        }
        InstanceKind::Path => {
            let mut m = DenseMatrix::zeros(n, domain);
            for v in 0..n.saturating_sub(1) {
                m.set(v, v + 1, domain.one());
                m.set(v + 1, v, domain.one());
            }
            Ok(m)
        }
        InstanceKind::AllOnesColumn { column } => {
            if column >= n {
                return Err(Error::InvalidParameter(format!(
                    "planted column {column} out of range for n = {n}"
                )));
            }
            let mut m = random_binary(&mut rng, n, domain, 0.5);
            for i in 0..n {
                m.set(i, column, domain.one());
            }
            // Keep the plant unique: force a zero into any other column that
            // came out all ones.
            for j in (0..n).filter(|&j| j != column) {
                if (0..n).all(|i| !m.get(i, j).is_raw_zero()) {
                    let i = rng.random_range(0..n);
                    m.set(i, j, domain.zero());
                }
            }
            Ok(m)
        }
        InstanceKind::IdenticalColumns { first, second } => {
            if first >= n || second >= n || first == second {
                return Err(Error::InvalidParameter(format!(
                    "planted pair ({first},{second}) invalid for n = {n}"
                )));
            }
            let mut m = random_binary(&mut rng, n, domain, 0.5);
            for i in 0..n {
                m.set(i, second, m.get(i, first));
            }
            // Deterministic fix-up: make the planted pair the only identical
            // pair so witnesses are exact.
            loop {
                let mut fixed = true;
                for a in 0..n {
                    for b in a + 1..n {
                        if (a, b) == (first.min(second), first.max(second)) {
                            continue;
                        }
                        if (0..n).all(|i| m.get(i, a) == m.get(i, b)) {
                            // Flip one bit of the column not in the plant.
                            let col = if a == first || a == second { b } else { a };
                            let row = rng.random_range(0..n);
                            let flipped = if m.get(row, col).is_raw_zero() {
                                domain.one()
                            } else {
                                domain.zero()
                            };
                            m.set(row, col, flipped);
                            if col == first || col == second {
                                unreachable!("plant columns are never edited");
                            }
                            fixed = false;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
            Ok(m)
        }
        InstanceKind::RandomBinary { density } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::InvalidParameter(format!(
                    "density must lie in [0, 1], got {density}"
                )));
            }
            Ok(random_binary(&mut rng, n, domain, density))
        }
        InstanceKind::HadamardUnitary => {
            if !n.is_power_of_two() {
                return Err(Error::InvalidParameter(format!(
                    "hadamard_unitary needs a power-of-two dimension, got {n}"
                )));
            }
            if !matches!(domain.kind(), DomainKind::ApproxReal | DomainKind::ApproxComplex) {
                return Err(Error::UnsupportedDomain {
                    op: "hadamard_unitary instance",
                    domain: domain.to_string(),
                });
            }
            let h = crate::gadgets::HadamardMatrix::new(n.trailing_zeros());
            let scale = 1.0 / (n as f64).sqrt();
            let mut m = DenseMatrix::zeros(n, domain);
            for i in 0..n {
                for j in 0..n {
                    let g = h.sign(i, j) as f64 * scale;
                    let s = match domain {
                        ScalarDomain::ApproxComplex { .. } => {
                            Scalar::Complex(num_complex::Complex64::new(g, 0.0))
                        }
                        _ => Scalar::Real(g),
                    };
                    m.set(i, j, s);
                }
            }
            Ok(m)
        }
    }
}

/// Random simple-graph adjacency matrix: symmetric, hollow, 0/1 over exact
/// integers. Each edge present independently with the given density.
pub fn random_graph(n: usize, density: f64, seed: u64) -> DenseMatrix {
    let domain = ScalarDomain::ExactInt;
    let mut rng = rng_from_seed(seed);
    let mut m = DenseMatrix::zeros(n, domain);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                m.set(i, j, domain.one());
                m.set(j, i, domain.one());
            }
        }
    }
    m
}

fn random_binary(rng: &mut TrialRng, n: usize, domain: ScalarDomain, density: f64) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, domain);
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(density) {
                m.set(i, j, domain.one());
            }
        }
    }
    m
}

fn random_permutation(rng: &mut TrialRng, n: usize) -> Vec<usize> {
    sample_subset(rng, n, n)
}

fn distinct_pair(rng: &mut TrialRng, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// A small random domain scalar (bits for GF(2), field elements for GF(p),
/// single digits elsewhere). Used for diagonal/symmetric filler content.
fn small_scalar(domain: &ScalarDomain, rng: &mut TrialRng) -> Scalar {
    match domain {
        ScalarDomain::Gf2 | ScalarDomain::Gfp { .. } => domain.sample_uniform(rng),
        _ => domain.from_i64(rng.random_range(0..=9)),
    }
}

fn nonzero_scalar(domain: &ScalarDomain, rng: &mut TrialRng) -> Scalar {
    match domain {
        ScalarDomain::Gf2 => Scalar::Bit(true),
        ScalarDomain::Gfp { modulus } => Scalar::Mod(rng.random_range(1..*modulus)),
        _ => domain.from_i64(rng.random_range(1..=9)),
    }
}
