//! Brute-force ground truth shared by the integration suites. Everything
//! here reads matrices directly and stays independent of the query path it
//! checks.

#![allow(dead_code)]

use utmv::domain::Scalar;
use utmv::matrix::DenseMatrix;

/// Direct count of ones in rows x cols of a 0/1 matrix.
pub fn brute_ones(m: &DenseMatrix, rows: &[usize], cols: &[usize]) -> u64 {
    let mut count = 0;
    for &i in rows {
        for &j in cols {
            if !m.get(i, j).is_raw_zero() {
                count += 1;
            }
        }
    }
    count
}

/// Direct integer trace.
pub fn brute_trace_int(m: &DenseMatrix) -> i128 {
    (0..m.n()).map(|i| m.get(i, i).as_int().unwrap()).sum()
}

/// Direct sorted neighbor list of a vertex.
pub fn brute_neighbors(m: &DenseMatrix, v: usize) -> Vec<usize> {
    (0..m.n()).filter(|&w| !m.get(v, w).is_raw_zero()).collect()
}

/// Direct degree.
pub fn brute_degree(m: &DenseMatrix, v: usize) -> u64 {
    brute_neighbors(m, v).len() as u64
}

/// All undirected edges (i < j) of an adjacency matrix.
pub fn brute_edges(m: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = m.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !m.get(i, j).is_raw_zero() {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Direct u^T M v over exact integers.
pub fn brute_bilinear_int(m: &DenseMatrix, u: &[i128], v: &[i128]) -> i128 {
    let mut acc = 0i128;
    for (i, &ui) in u.iter().enumerate() {
        for (j, &vj) in v.iter().enumerate() {
            acc += ui * entry_as_int(m.get(i, j)) * vj;
        }
    }
    acc
}

fn entry_as_int(s: Scalar) -> i128 {
    match s {
        Scalar::Int(v) => v,
        Scalar::Bit(b) => b as i128,
        other => panic!("expected integer entry, got {other:?}"),
    }
}
