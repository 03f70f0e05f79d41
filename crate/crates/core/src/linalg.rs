//! Linear-algebra property testers: diagonal, symmetric, unitary, and the
//! exact trace.
//!
//! The randomized testers are one-sided: a matrix with the property is
//! accepted with certainty, a violator is caught per round with at least the
//! stated probability, and rounds amplify the soundness to any target error.

use crate::domain::{DomainKind, Scalar, ScalarDomain};
use crate::error::{Error, Result};
use crate::matrix::QueryVector;
use crate::oracle::{BilinearOracle, TestReport};
use crate::rng::{rng_from_seed, sample_subset, TrialRng};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Round count needed to push one-sided error below a target.
///
/// With per-round detection probability at least `delta`, `rounds` repeats
/// give error at most `(1 - delta)^rounds <= target_error`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationPlan {
    pub target_error: f64,
    pub per_round_detection: f64,
    pub rounds: u64,
}

impl AmplificationPlan {
    pub fn new(target_error: f64, per_round_detection: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&target_error) || target_error == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "target error must lie in (0, 1), got {target_error}"
            )));
        }
        if !(0.0..=1.0).contains(&per_round_detection) || per_round_detection == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "per-round detection must lie in (0, 1], got {per_round_detection}"
            )));
        }
        let survive = 1.0 - per_round_detection;
        let mut rounds = if survive == 0.0 {
            1
        } else {
            ((1.0 / target_error).ln() / -survive.ln()).ceil() as u64
        };
        rounds = rounds.max(1);
        // Guard the invariant against floating-point edge rounding.
        while survive.powi(rounds as i32) > target_error {
            rounds += 1;
        }
        Ok(AmplificationPlan { target_error, per_round_detection, rounds })
    }
}

/// Per-round detection floor for the diagonal tester (proof constant).
pub const DIAGONAL_ROUND_DETECTION: f64 = 1.0 / 16.0;

/// Tests whether the hidden matrix is diagonal, with error at most `eps`.
/// One query per round; rounds from the amplification plan at delta = 1/16.
pub fn test_diagonal(oracle: &mut BilinearOracle, eps: f64, seed: u64) -> Result<TestReport> {
    let plan = AmplificationPlan::new(eps, DIAGONAL_ROUND_DETECTION)?;
    test_diagonal_rounds(oracle, plan.rounds, seed)
}

/// Diagonal tester with an explicit round count; rejects iff some round sees
/// a nonzero bilinear form across a random half-split.
pub fn test_diagonal_rounds(
    oracle: &mut BilinearOracle,
    rounds: u64,
    seed: u64,
) -> Result<TestReport> {
    let n = oracle.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("diagonal tester needs n >= 2, got {n}")));
    }
    let domain = *oracle.domain();
    let mut rng = rng_from_seed(seed);
    let before = oracle.ledger().total();
    for round in 1..=rounds {
        // u lives on a uniform half S with entries from G = {0, 1}; v lives
        // on the complement. Any diagonal mass cancels structurally.
        let s = sample_subset(&mut rng, n, n / 2);
        let mut in_s = vec![false; n];
        for &i in &s {
            in_s[i] = true;
        }
        let mut u = QueryVector::zeros(n, domain);
        let mut v = QueryVector::zeros(n, domain);
        for (i, &in_left) in in_s.iter().enumerate() {
            let bit = if rng.random::<bool>() { domain.one() } else { domain.zero() };
            if in_left {
                u.set(i, bit);
            } else {
                v.set(i, bit);
            }
        }
        let value = oracle.query(&u, &v, "diagonal")?;
        if !domain.is_zero(value) {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, round, charged, seed));
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(TestReport::accepted(rounds, charged, seed))
}

/// Per-round detection used to plan the symmetric tester, by domain kind.
///
/// GF(2): a uniform bilinear form on the nonzero skew part evaluates nonzero
/// with probability at least the planned constant. Other finite fields plan
/// conservatively at (1 - 1/p)^2 >= 1/4. Exact and approximate rationals /
/// reals / complexes sample from the 2^20 probe range, where Schwartz-Zippel
/// leaves at most 2^-20 mass on the bad event.
pub fn symmetric_round_detection(domain: &ScalarDomain) -> f64 {
    match domain.kind() {
        DomainKind::Gf2 => 0.5,
        DomainKind::Gfp => 0.25,
        _ => 1.0 - 2f64.powi(-20),
    }
}

/// Tests whether the hidden matrix is symmetric, with error at most `eps`.
/// Two queries per round (u^T M v vs v^T M u).
pub fn test_symmetric(oracle: &mut BilinearOracle, eps: f64, seed: u64) -> Result<TestReport> {
    let plan = AmplificationPlan::new(eps, symmetric_round_detection(oracle.domain()))?;
    test_symmetric_rounds(oracle, plan.rounds, seed)
}

pub fn test_symmetric_rounds(
    oracle: &mut BilinearOracle,
    rounds: u64,
    seed: u64,
) -> Result<TestReport> {
    let n = oracle.n();
    let domain = *oracle.domain();
    let mut rng = rng_from_seed(seed);
    let before = oracle.ledger().total();
    for round in 1..=rounds {
        let u = random_probe(n, &domain, &mut rng);
        let v = random_probe(n, &domain, &mut rng);
        let uv = oracle.query(&u, &v, "symmetric")?;
        let vu = oracle.query(&v, &u, "symmetric")?;
        if !domain.eq(uv, vu) {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, round, charged, seed));
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(TestReport::accepted(rounds, charged, seed))
}

/// Tests whether the hidden matrix is unitary (orthonormal over the reals,
/// which is the real special case), by recovering w = Mv for a Gaussian v
/// with n basis-probe queries per trial and comparing norms.
///
/// Rejects iff | ||w||^2 - ||v||^2 | > tolerance * ||v||^2 in some trial;
/// the normalization keeps the test scale-free. Exact domains are refused:
/// Gaussian sampling is undefined there.
pub fn test_unitary(oracle: &mut BilinearOracle, trials: u64, seed: u64) -> Result<TestReport> {
    let n = oracle.n();
    let domain = *oracle.domain();
    let tolerance = match domain {
        ScalarDomain::ApproxReal { tolerance } | ScalarDomain::ApproxComplex { tolerance } => {
            tolerance
        }
        _ => {
            return Err(Error::UnsupportedDomain {
                op: "test_unitary",
                domain: domain.to_string(),
            })
        }
    };
    if trials == 0 {
        return Err(Error::InvalidParameter("unitary tester needs at least one trial".into()));
    }
    let complex = domain.kind() == DomainKind::ApproxComplex;
    let mut rng = rng_from_seed(seed);
    let before = oracle.ledger().total();
    for trial in 1..=trials {
        let mut v = QueryVector::zeros(n, domain);
        let mut v_norm2 = 0.0;
        for i in 0..n {
            if complex {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                v_norm2 += re * re + im * im;
                v.set(i, Scalar::Complex(num_complex::Complex64::new(re, im)));
            } else {
                let x: f64 = StandardNormal.sample(&mut rng);
                v_norm2 += x * x;
                v.set(i, Scalar::Real(x));
            }
        }
        let mut w_norm2 = 0.0;
        for i in 0..n {
            let e_i = QueryVector::basis(n, i, domain);
            let w_i = oracle.query(&e_i, &v, "unitary")?;
            w_norm2 += match w_i {
                Scalar::Real(x) => x * x,
                Scalar::Complex(z) => z.norm_sqr(),
                _ => unreachable!("approx domains produce real or complex scalars"),
            };
        }
        if (w_norm2 - v_norm2).abs() > tolerance * v_norm2 {
            let charged = oracle.ledger().total() - before;
            return Ok(TestReport::rejected(None, trial, charged, seed));
        }
    }
    let charged = oracle.ledger().total() - before;
    Ok(TestReport::accepted(trials, charged, seed))
}

/// The exact trace: sum of the n diagonal entry probes.
pub fn exact_trace(oracle: &mut BilinearOracle) -> Result<Scalar> {
    let n = oracle.n();
    let domain = *oracle.domain();
    let mut acc = domain.zero();
    for i in 0..n {
        acc = domain.add(acc, oracle.entry_query(i, i, "trace")?);
    }
    Ok(acc)
}

/// Uniform probe from the domain's sampling set (bits over GF(2), field
/// elements over GF(p), the 2^20 range elsewhere).
fn random_probe(n: usize, domain: &ScalarDomain, rng: &mut TrialRng) -> QueryVector {
    let mut u = QueryVector::zeros(n, *domain);
    for i in 0..n {
        u.set(i, domain.sample_uniform(rng));
    }
    u
}
