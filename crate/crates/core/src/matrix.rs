//! Dense row-major matrices and probe vectors over a scalar domain.
//!
//! Matrices are immutable once handed to an oracle and safe to share
//! read-only across trials. No bit-packing for GF(2) in this version:
//! clarity over speed at desk scale (n <= 4096).

use crate::domain::{Scalar, ScalarDomain};
use crate::error::{Error, Result};

/// Row-major n x n matrix of domain scalars: the hidden input.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    domain: ScalarDomain,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(n: usize, domain: ScalarDomain) -> Self {
        DenseMatrix { n, domain, entries: vec![domain.zero(); n * n] }
    }

    pub fn identity(n: usize, domain: ScalarDomain) -> Self {
        let mut m = Self::zeros(n, domain);
        for i in 0..n {
            m.set(i, i, domain.one());
        }
        m
    }

    /// Builds from a row-major scalar list, validating every entry.
    pub fn from_scalars(n: usize, domain: ScalarDomain, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        for s in &entries {
            domain.validate(s)?;
        }
        Ok(DenseMatrix { n, domain, entries })
    }

    /// Convenience constructor from small integers (reduced into the domain).
    pub fn from_i64_rows(domain: ScalarDomain, rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&v| domain.from_i64(v)));
        }
        Ok(DenseMatrix { n, domain, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.n && j < self.n, "matrix index ({i},{j}) out of range");
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        assert!(i < self.n && j < self.n, "matrix index ({i},{j}) out of range");
        self.entries[i * self.n + j] = s;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// All entries exactly 0 or 1. Binary-matrix testers check this at load
    /// time; it is not a metered probe.
    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|s| s.is_binary_value())
    }

    /// Structural symmetry (bit-exact, unmetered).
    pub fn is_symmetric_exact(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Zero diagonal (bit-exact, unmetered).
    pub fn is_hollow(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_raw_zero())
    }
}

/// Length-n probe vector for the bilinear oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryVector {
    domain: ScalarDomain,
    entries: Vec<Scalar>,
}

impl QueryVector {
    pub fn zeros(n: usize, domain: ScalarDomain) -> Self {
        QueryVector { domain, entries: vec![domain.zero(); n] }
    }

    pub fn ones(n: usize, domain: ScalarDomain) -> Self {
        QueryVector { domain, entries: vec![domain.one(); n] }
    }

    /// Standard basis vector e_i.
    pub fn basis(n: usize, i: usize, domain: ScalarDomain) -> Self {
        assert!(i < n, "basis index {i} out of range for n = {n}");
        let mut v = Self::zeros(n, domain);
        v.entries[i] = domain.one();
        v
    }

    /// 0/1 indicator of an index set.
    pub fn indicator<I: IntoIterator<Item = usize>>(
        n: usize,
        indices: I,
        domain: ScalarDomain,
    ) -> Result<Self> {
        let mut v = Self::zeros(n, domain);
        for i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange(format!("indicator index {i} for n = {n}")));
            }
            v.entries[i] = domain.one();
        }
        Ok(v)
    }

    /// Prefix indicator: 1 on positions 0..k, 0 elsewhere.
    pub fn prefix(n: usize, k: usize, domain: ScalarDomain) -> Self {
        assert!(k <= n, "prefix length {k} exceeds n = {n}");
        let mut v = Self::zeros(n, domain);
        for e in v.entries.iter_mut().take(k) {
            *e = domain.one();
        }
        v
    }

    pub fn from_scalars(domain: ScalarDomain, entries: Vec<Scalar>) -> Result<Self> {
        for s in &entries {
            domain.validate(s)?;
        }
        Ok(QueryVector { domain, entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn domain(&self) -> &ScalarDomain {
        &self.domain
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, s: Scalar) {
        self.entries[i] = s;
    }

    /// Positions with structurally nonzero entries.
    pub fn support(&self) -> Vec<(usize, Scalar)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_raw_zero())
            .map(|(i, s)| (i, *s))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_count_is_enforced() {
        let d = ScalarDomain::ExactInt;
        let err = DenseMatrix::from_scalars(2, d, vec![Scalar::Int(1); 3]);
        assert!(err.is_err());
    }

    #[test]
    fn entries_are_validated_against_domain() {
        let d = ScalarDomain::gfp(5).unwrap();
        let bad = DenseMatrix::from_scalars(1, d, vec![Scalar::Mod(9)]);
        assert!(bad.is_err());
    }

    #[test]
    fn identity_is_binary_symmetric_not_hollow() {
        let m = DenseMatrix::identity(4, ScalarDomain::ExactInt);
        assert!(m.is_binary());
        assert!(m.is_symmetric_exact());
        assert!(!m.is_hollow());
    }

    #[test]
    fn indicator_and_prefix_agree() {
        let d = ScalarDomain::ExactInt;
        let a = QueryVector::indicator(5, 0..3, d).unwrap();
        let b = QueryVector::prefix(5, 3, d);
        assert_eq!(a, b);
        assert_eq!(a.support().len(), 3);
        assert!(QueryVector::indicator(3, [7], d).is_err());
    }
}
