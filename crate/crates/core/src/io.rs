//! Text formats: the matrix file format and edge-list graphs.
//!
//! Matrix files are bit-exact on exact domains: line 1 is
//! `n KIND [modulus] [tolerance]` with KIND one of gf2 | gfp | int | rat |
//! real | complex, followed by n lines of n whitespace-separated entries.
//! Rationals are written `p/q`, complexes `a+bi` (decimal components with
//! shortest round-trip formatting). Finite-field entries are reduced into
//! the field on parse.
//!
//! Edge-list files hold `n` on the first line and one `i j` pair per
//! subsequent line, 0-indexed; they convert to adjacency matrices in the
//! exact-integer domain.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::domain::{Scalar, ScalarDomain, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub fn parse_matrix_file(path: &Path) -> Result<DenseMatrix> {
    parse_matrix_str(&fs::read_to_string(path)?)
}

pub fn write_matrix_file(matrix: &DenseMatrix, path: &Path) -> Result<()> {
    fs::write(path, format_matrix(matrix))?;
    Ok(())
}

pub fn parse_matrix_str(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty matrix file".into() })?;
    let mut tokens = header.split_whitespace();
    let bad_header = |msg: &str| Error::Parse { line: 1, msg: msg.into() };
    let n: usize = tokens
        .next()
        .ok_or_else(|| bad_header("missing dimension"))?
        .parse()
        .map_err(|_| bad_header("dimension must be a nonnegative integer"))?;
    if n == 0 {
        return Err(bad_header("dimension must be positive"));
    }
    let kind = tokens.next().ok_or_else(|| bad_header("missing domain kind"))?;
    let domain = match kind {
        "gf2" => ScalarDomain::Gf2,
        "gfp" => {
            let modulus: u64 = tokens
                .next()
                .ok_or_else(|| bad_header("gfp needs a modulus"))?
                .parse()
                .map_err(|_| bad_header("gfp modulus must be an integer"))?;
            ScalarDomain::gfp(modulus).map_err(|e| bad_header(&e.to_string()))?
        }
        "int" => ScalarDomain::ExactInt,
        "rat" => ScalarDomain::ExactRational,
        "real" | "complex" => {
            let tolerance = match tokens.next() {
                Some(t) => t
                    .parse::<f64>()
                    .map_err(|_| bad_header("tolerance must be a real number"))?,
                None => DEFAULT_TOLERANCE,
            };
            let built = if kind == "real" {
                ScalarDomain::approx_real(tolerance)
            } else {
                ScalarDomain::approx_complex(tolerance)
            };
            built.map_err(|e| bad_header(&e.to_string()))?
        }
        other => return Err(bad_header(&format!("unknown domain kind `{other}`"))),
    };
    if tokens.next().is_some() {
        return Err(bad_header("trailing tokens in header"));
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut rows_read = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if rows_read == n {
            return Err(Error::Parse { line: line_no, msg: format!("more than {n} rows") });
        }
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {n} entries, found {}", cells.len()),
            });
        }
        for cell in cells {
            entries.push(parse_scalar(cell, &domain, line_no)?);
        }
        rows_read += 1;
    }
    if rows_read != n {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {n} rows, found {rows_read}"),
        });
    }
    DenseMatrix::from_scalars(n, domain, entries)
}

pub fn format_matrix(matrix: &DenseMatrix) -> String {
    let n = matrix.n();
    let mut out = String::new();
    match matrix.domain() {
        ScalarDomain::Gf2 => out.push_str(&format!("{n} gf2\n")),
        ScalarDomain::Gfp { modulus } => out.push_str(&format!("{n} gfp {modulus}\n")),
        ScalarDomain::ExactInt => out.push_str(&format!("{n} int\n")),
        ScalarDomain::ExactRational => out.push_str(&format!("{n} rat\n")),
        ScalarDomain::ApproxReal { tolerance } => out.push_str(&format!("{n} real {tolerance}\n")),
        ScalarDomain::ApproxComplex { tolerance } => {
            out.push_str(&format!("{n} complex {tolerance}\n"))
        }
    }
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| matrix.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_scalar(cell: &str, domain: &ScalarDomain, line: usize) -> Result<Scalar> {
    let err = |msg: String| Error::Parse { line, msg };
    match domain {
        ScalarDomain::Gf2 => {
            let v = i128::from_str(cell)
                .map_err(|_| err(format!("`{cell}` is not a gf2 entry")))?;
            Ok(Scalar::Bit(v.rem_euclid(2) == 1))
        }
        ScalarDomain::Gfp { modulus } => {
            let v = i128::from_str(cell)
                .map_err(|_| err(format!("`{cell}` is not a gfp entry")))?;
            Ok(Scalar::Mod(v.rem_euclid(*modulus as i128) as u64))
        }
        ScalarDomain::ExactInt => {
            let v = i128::from_str(cell)
                .map_err(|_| err(format!("`{cell}` is not an integer entry")))?;
            Ok(Scalar::Int(v))
        }
        ScalarDomain::ExactRational => {
            let (p, q) = match cell.split_once('/') {
                Some((p, q)) => (p, q),
                None => (cell, "1"),
            };
            let numer =
                i128::from_str(p).map_err(|_| err(format!("`{cell}` has a bad numerator")))?;
            let denom =
                i128::from_str(q).map_err(|_| err(format!("`{cell}` has a bad denominator")))?;
            if denom == 0 {
                return Err(err(format!("`{cell}` has a zero denominator")));
            }
            Ok(Scalar::Rational(Ratio::new(numer, denom)))
        }
        ScalarDomain::ApproxReal { .. } => {
            let v =
                f64::from_str(cell).map_err(|_| err(format!("`{cell}` is not a real entry")))?;
            if !v.is_finite() {
                return Err(err(format!("`{cell}` is not finite")));
            }
            Ok(Scalar::Real(v))
        }
        ScalarDomain::ApproxComplex { .. } => parse_complex(cell)
            .ok_or_else(|| err(format!("`{cell}` is not an a+bi complex entry")))
            .map(Scalar::Complex),
    }
}

/// Parses `a+bi` / `a-bi` with decimal (possibly exponent-bearing)
/// components.
fn parse_complex(cell: &str) -> Option<Complex64> {
    let body = cell.strip_suffix('i')?;
    let bytes = body.as_bytes();
    // Split at the last sign that terminates the real component: the
    // character before it must be a digit or '.', which excludes leading
    // signs, exponent signs, and the first of a double sign as in `3+-0.5i`.
    let split = (1..bytes.len())
        .rev()
        .find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-')
                && matches!(bytes[k - 1], b'0'..=b'9' | b'.')
        })?;
    let re: f64 = body[..split].parse().ok()?;
    let im_str = &body[split..];
    let im: f64 = match im_str.as_bytes()[0] {
        b'+' => im_str[1..].parse().ok()?,
        _ => im_str.parse().ok()?,
    };
    if re.is_finite() && im.is_finite() {
        Some(Complex64::new(re, im))
    } else {
        None
    }
}

/// Parses an edge-list graph into an adjacency matrix over exact integers.
pub fn parse_edge_list_str(text: &str) -> Result<DenseMatrix> {
    let domain = ScalarDomain::ExactInt;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty edge-list file".into() })?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: "first line must be the vertex count".into() })?;
    let mut m = DenseMatrix::zeros(n, domain);
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let i: usize = parts
            .next()
            .ok_or_else(|| err("missing endpoint".into()))?
            .parse()
            .map_err(|_| err("bad endpoint".into()))?;
        let j: usize = parts
            .next()
            .ok_or_else(|| err("missing second endpoint".into()))?
            .parse()
            .map_err(|_| err("bad endpoint".into()))?;
        if parts.next().is_some() {
            return Err(err("trailing tokens on edge line".into()));
        }
        if i >= n || j >= n {
            return Err(err(format!("edge ({i},{j}) out of range for n = {n}")));
        }
        if i == j {
            return Err(err(format!("self-loop at vertex {i}")));
        }
        m.set(i, j, domain.one());
        m.set(j, i, domain.one());
    }
    Ok(m)
}

pub fn parse_edge_list_file(path: &Path) -> Result<DenseMatrix> {
    parse_edge_list_str(&fs::read_to_string(path)?)
}
