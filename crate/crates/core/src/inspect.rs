//! Unmetered ground-truth predicates on matrices.
//!
//! These read entries directly and are used for gadget verification,
//! instance scoring, and test oracles. They are never part of a metered
//! query algorithm.

use crate::domain::{DomainKind, Scalar};
use crate::matrix::DenseMatrix;

/// Exactly one 1 per row and per column, everything else 0.
pub fn is_permutation_matrix(m: &DenseMatrix) -> bool {
    let n = m.n();
    if !m.is_binary() {
        return false;
    }
    let row_ok = (0..n).all(|i| (0..n).filter(|&j| !m.get(i, j).is_raw_zero()).count() == 1);
    let col_ok = (0..n).all(|j| (0..n).filter(|&i| !m.get(i, j).is_raw_zero()).count() == 1);
    row_ok && col_ok
}

/// Column-wise majority: bit i is set iff column i holds at least
/// ceil(n/2) ones.
pub fn column_majority_bits(m: &DenseMatrix) -> Vec<bool> {
    let n = m.n();
    let threshold = n.div_ceil(2);
    (0..n)
        .map(|j| (0..n).filter(|&i| !m.get(i, j).is_raw_zero()).count() >= threshold)
        .collect()
}

/// First identical column pair in lexicographic order, if any.
pub fn find_identical_columns_direct(m: &DenseMatrix) -> Option<(usize, usize)> {
    let n = m.n();
    for a in 0..n {
        for b in a + 1..n {
            if (0..n).all(|i| m.get(i, a) == m.get(i, b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// First strictly negative entry in row-major order, if any. Only defined
/// over ordered domains.
pub fn find_negative_entry_direct(m: &DenseMatrix) -> Option<(usize, usize)> {
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            if m.domain().is_negative(m.get(i, j)).unwrap_or(false) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Max-norm deviation of M*M from the identity (conjugate transpose over the
/// complex numbers, plain transpose over the reals).
pub fn unitarity_deviation(m: &DenseMatrix) -> f64 {
    let n = m.n();
    let complex = m.domain().kind() == DomainKind::ApproxComplex;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let want = if a == b { 1.0 } else { 0.0 };
            if complex {
                let mut dot = num_complex::Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let ma = m.get(i, a).as_complex().unwrap();
                    let mb = m.get(i, b).as_complex().unwrap();
                    dot += ma.conj() * mb;
                }
                worst = worst.max((dot - want).norm());
            } else {
                let mut dot = 0.0;
                for i in 0..n {
                    dot += scalar_to_f64(m.get(i, a)) * scalar_to_f64(m.get(i, b));
                }
                worst = worst.max((dot - want).abs());
            }
        }
    }
    worst
}

/// A star on n vertices: one center adjacent to all others, all others of
/// degree one. Degenerate n = 1 (a single vertex) counts as a star.
pub fn is_star_graph(m: &DenseMatrix) -> bool {
    let n = m.n();
    if !m.is_binary() || !m.is_symmetric_exact() || !m.is_hollow() {
        return false;
    }
    let degree =
        |v: usize| (0..n).filter(|&w| !m.get(v, w).is_raw_zero()).count();
    (0..n).any(|c| degree(c) == n - 1 && (0..n).filter(|&v| v != c).all(|v| degree(v) == 1))
}

fn scalar_to_f64(s: Scalar) -> f64 {
    match s {
        Scalar::Real(x) => x,
        Scalar::Int(v) => v as f64,
        Scalar::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
        Scalar::Bit(b) => b as u8 as f64,
        Scalar::Mod(v) => v as f64,
        Scalar::Complex(_) => panic!("complex scalar in real inspection"),
    }
}
