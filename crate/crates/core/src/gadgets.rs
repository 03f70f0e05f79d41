//! Reduction gadgets: matrices built from two bit strings such that a target
//! property holds iff the strings are disjoint (or intersect), plus the
//! Hadamard family they lean on.
//!
//! Each constructor realizes one lower-bound reduction as an executable
//! object, and `verify_gadget_iff` replays the claimed equivalence over the
//! whole (or a sampled) input space by direct matrix inspection. Nothing
//! here proves a communication bound; the point is that every claimed "iff"
//! is checked by exhaustion instead of trusted.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::domain::{Scalar, ScalarDomain};
use crate::error::{Error, Result};
use crate::inspect;
use crate::matrix::DenseMatrix;
use crate::rng::{rng_from_seed, sample_subset};

/// Sylvester Hadamard matrix H_{2^k} with entries in {+1, -1}, built by the
/// recursive doubling [[H, H], [H, -H]] from H_1 = [1].
#[derive(Debug, Clone)]
pub struct HadamardMatrix {
    k: u32,
    n: usize,
    signs: Vec<i8>, // row-major
}

impl HadamardMatrix {
    pub fn new(k: u32) -> Self {
        let n = 1usize << k;
        let mut signs = vec![1i8; n * n];
        let mut size = 1usize;
        while size < n {
            // Double: copy the current top-left block into the other three
            // quadrants, negating the bottom-right.
            for i in 0..size {
                for j in 0..size {
                    let s = signs[i * n + j];
                    signs[i * n + (j + size)] = s;
                    signs[(i + size) * n + j] = s;
                    signs[(i + size) * n + (j + size)] = -s;
                }
            }
            size *= 2;
        }
        HadamardMatrix { k, n, signs }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.n + j]
    }

    /// Number of -1 entries; equals n(n-1)/2 for every order.
    pub fn negative_count(&self) -> u64 {
        self.signs.iter().filter(|&&s| s < 0).count() as u64
    }

    /// Row-major linear indexing of the +1 positions, as (row, col) pairs.
    pub fn positive_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.sign(i, j) > 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The normalized variant G = H / sqrt(n), orthonormal over the reals.
    pub fn normalized(&self) -> DenseMatrix {
        let domain = ScalarDomain::approx_real_default();
        let scale = 1.0 / (self.n as f64).sqrt();
        let mut m = DenseMatrix::zeros(self.n, domain);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, Scalar::Real(self.sign(i, j) as f64 * scale));
            }
        }
        m
    }
}

/// Which reduction a gadget realizes. The unitary randomized gadget carries
/// the (i, j) variant choice: plus uses G entries, minus uses their
/// negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    /// 3x3-block permutation gadget over GF(2). Inputs of length n (one bit
    /// per block); M is a permutation matrix iff the inputs are disjoint.
    Permutation,
    /// Column-majority gadget over GF(2). Inputs of length n^2 (n chunks of
    /// n bits, chunk i is the i-th column string, each of weight exactly
    /// n/4); column i has majority 0 iff chunk pair i intersects.
    Majority,
    /// Identical-columns gadget over GF(2). Inputs of length n-1 (n even);
    /// the free cells are random, so the claim is one-sided: intersection
    /// forces an all-ones column equal to the pinned last column.
    IdenticalColumns,
    /// Negative-entry gadget over exact integers. Inputs of length n^2 (one
    /// bit per cell); M has a negative entry iff the inputs intersect.
    NegativeEntry,
    /// Randomized-queries unitary gadget over the reals. Inputs of length n
    /// (n a power of two, weight exactly n/4); all four variants are unitary
    /// iff the inputs are disjoint.
    UnitaryRandomized { alice_minus: bool, bob_minus: bool },
    /// Deterministic-queries unitary gadget over the reals. Inputs of length
    /// n(n+1)/2 with weight exactly half; M is unitary iff the inputs are
    /// disjoint.
    UnitaryDeterministic,
}

impl GadgetKind {
    pub fn name(&self) -> &'static str {
        match self {
            GadgetKind::Permutation => "perm",
            GadgetKind::Majority => "majority",
            GadgetKind::IdenticalColumns => "identical",
            GadgetKind::NegativeEntry => "negative",
            GadgetKind::UnitaryRandomized { .. } => "unitary_rand",
            GadgetKind::UnitaryDeterministic => "unitary_det",
        }
    }
}

impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perm" => Ok(GadgetKind::Permutation),
            "majority" => Ok(GadgetKind::Majority),
            "identical" => Ok(GadgetKind::IdenticalColumns),
            "negative" => Ok(GadgetKind::NegativeEntry),
            "unitary_rand" => Ok(GadgetKind::UnitaryRandomized { alice_minus: false, bob_minus: false }),
            "unitary_det" => Ok(GadgetKind::UnitaryDeterministic),
            other => Err(Error::InvalidParameter(format!("unknown gadget kind `{other}`"))),
        }
    }
}

/// A built reduction matrix together with the inputs that produced it.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    pub alice_input: Vec<bool>,
    pub bob_input: Vec<bool>,
    pub matrix: DenseMatrix,
}

impl GadgetInstance {
    pub fn inputs_intersect(&self) -> bool {
        self.alice_input.iter().zip(&self.bob_input).any(|(&a, &b)| a && b)
    }
}

/// Builds the reduction matrix for `kind` from the two input strings. The
/// seed is consulted only by the identical-columns gadget (its free cells
/// are random); every other construction is a pure function of the inputs.
pub fn build_gadget(kind: GadgetKind, x: &[bool], y: &[bool], seed: u64) -> Result<GadgetInstance> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "gadget inputs must have equal length, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let matrix = match kind {
        GadgetKind::Permutation => build_permutation(x, y),
        GadgetKind::Majority => build_majority(x, y)?,
        GadgetKind::IdenticalColumns => build_identical(x, y, seed)?,
        GadgetKind::NegativeEntry => build_negative(x, y)?,
        GadgetKind::UnitaryRandomized { alice_minus, bob_minus } => {
            build_unitary_randomized(x, y, alice_minus, bob_minus)?
        }
        GadgetKind::UnitaryDeterministic => build_unitary_deterministic(x, y)?,
    };
    Ok(GadgetInstance { kind, alice_input: x.to_vec(), bob_input: y.to_vec(), matrix })
}

// Alice's block for x_i = 0 is the cyclic shift, for x_i = 1 the identity;
// Bob adds the hollow all-ones block on y_i = 1. Over GF(2) the block sum is
// a permutation iff the pair never hits (1, 1).
const SHIFT_BLOCK: [[u8; 3]; 3] = [[0, 0, 1], [1, 0, 0], [0, 1, 0]];
const IDENTITY_BLOCK: [[u8; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
const HOLLOW_BLOCK: [[u8; 3]; 3] = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];

fn build_permutation(x: &[bool], y: &[bool]) -> DenseMatrix {
    let blocks = x.len();
    let n = 3 * blocks;
    let mut m = DenseMatrix::zeros(n, ScalarDomain::Gf2);
    for (i, (&xi, &yi)) in x.iter().zip(y).enumerate() {
        let a = if xi { IDENTITY_BLOCK } else { SHIFT_BLOCK };
        let b = if yi { HOLLOW_BLOCK } else { [[0; 3]; 3] };
        for r in 0..3 {
            for c in 0..3 {
                let bit = (a[r][c] ^ b[r][c]) == 1;
                m.set(3 * i + r, 3 * i + c, Scalar::Bit(bit));
            }
        }
    }
    m
}

fn build_majority(x: &[bool], y: &[bool]) -> Result<DenseMatrix> {
    let n = integer_sqrt(x.len()).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "majority gadget inputs must have length n^2, got {}",
            x.len()
        ))
    })?;
    if n % 4 != 0 {
        return Err(Error::InvalidParameter(format!(
            "majority gadget needs n divisible by 4, got {n}"
        )));
    }
    let w = n / 4;
    for (side, s) in [("alice", x), ("bob", y)] {
        for i in 0..n {
            let ones = s[i * n..(i + 1) * n].iter().filter(|&&b| b).count();
            if ones != w {
                return Err(Error::InvalidParameter(format!(
                    "majority gadget: {side} chunk {i} has weight {ones}, expected {w}"
                )));
            }
        }
    }
    // Column i of M is chunk_i(x) XOR chunk_i(y): weight-n/4 strings make
    // the column carry exactly n/2 ones iff the chunks are disjoint.
    let mut m = DenseMatrix::zeros(n, ScalarDomain::Gf2);
    for i in 0..n {
        for r in 0..n {
            m.set(r, i, Scalar::Bit(x[i * n + r] ^ y[i * n + r]));
        }
    }
    Ok(m)
}

fn build_identical(x: &[bool], y: &[bool], seed: u64) -> Result<DenseMatrix> {
    let n = x.len() + 1;
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "identical gadget needs inputs of odd length n-1 for even n >= 2, got length {}",
            x.len()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let domain = ScalarDomain::Gf2;
    let mut m = DenseMatrix::zeros(n, domain);
    // Top half from x, bottom half from y. Row 0 of each half is the input
    // itself; the remaining rows copy the input's ones and fill the rest
    // with random bits. The last column is pinned to all ones.
    for (half, s) in [(0usize, x), (n / 2, y)] {
        for r in 0..n / 2 {
            for (j, &input_bit) in s.iter().enumerate() {
                let bit = if r == 0 {
                    input_bit
                } else if input_bit {
                    true
                } else {
                    rng.random::<bool>()
                };
                m.set(half + r, j, Scalar::Bit(bit));
            }
            m.set(half + r, n - 1, Scalar::Bit(true));
        }
    }
    Ok(m)
}

fn build_negative(x: &[bool], y: &[bool]) -> Result<DenseMatrix> {
    let n = integer_sqrt(x.len()).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "negative gadget inputs must have length n^2, got {}",
            x.len()
        ))
    })?;
    let domain = ScalarDomain::ExactInt;
    let mut m = DenseMatrix::zeros(n, domain);
    for i in 0..n {
        for j in 0..n {
            let a: i64 = if x[i * n + j] { 0 } else { 1 };
            let b: i64 = if y[i * n + j] { -1 } else { 0 };
            m.set(i, j, domain.from_i64(a + b));
        }
    }
    Ok(m)
}

fn build_unitary_randomized(
    x: &[bool],
    y: &[bool],
    alice_minus: bool,
    bob_minus: bool,
) -> Result<DenseMatrix> {
    let n = x.len();
    if !n.is_power_of_two() || n < 4 {
        return Err(Error::InvalidParameter(format!(
            "unitary_rand gadget needs power-of-two n >= 4, got {n}"
        )));
    }
    let w = n / 4;
    for (side, s) in [("alice", x), ("bob", y)] {
        let ones = s.iter().filter(|&&b| b).count();
        if ones != w {
            return Err(Error::InvalidParameter(format!(
                "unitary_rand gadget: {side} input has weight {ones}, expected {w}"
            )));
        }
    }
    let h = HadamardMatrix::new(w.trailing_zeros());
    let scale = 1.0 / (w as f64).sqrt();
    let positions = |s: &[bool]| -> Vec<usize> {
        (0..n).filter(|&i| s[i]).collect()
    };
    let a = positions(x);
    let b = positions(y);
    let domain = ScalarDomain::approx_real_default();
    let mut m = DenseMatrix::identity(n, domain);
    // M = X + Y + I: each side embeds (+/-)G - I on its own support, so a
    // disjoint support turns the embedded columns into exact G columns.
    for (pos, minus) in [(&a, alice_minus), (&b, bob_minus)] {
        for (i, &ri) in pos.iter().enumerate() {
            for (j, &cj) in pos.iter().enumerate() {
                let mut g = h.sign(i, j) as f64 * scale;
                if minus {
                    g = -g;
                }
                let fill = if i == j { g - 1.0 } else { g };
                let prev = m.get(ri, cj).as_f64().unwrap();
                m.set(ri, cj, Scalar::Real(prev + fill));
            }
        }
    }
    Ok(m)
}

fn build_unitary_deterministic(x: &[bool], y: &[bool]) -> Result<DenseMatrix> {
    let len = x.len();
    // len = n(n+1)/2 for a power-of-two n >= 4.
    let n = (0..=24u32)
        .map(|k| 1usize << k)
        .find(|&n| n.checked_mul(n + 1).is_some_and(|t| t / 2 == len))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unitary_det gadget inputs must have length n(n+1)/2 for power-of-two n, got {len}"
            ))
        })?;
    if n < 4 {
        return Err(Error::InvalidParameter(
            "unitary_det gadget needs n >= 4 (n(n+1)/2 must be even)".into(),
        ));
    }
    for (side, s) in [("alice", x), ("bob", y)] {
        let ones = s.iter().filter(|&&b| b).count();
        if ones != len / 2 {
            return Err(Error::InvalidParameter(format!(
                "unitary_det gadget: {side} input has weight {ones}, expected {}",
                len / 2
            )));
        }
    }
    let h = HadamardMatrix::new(n.trailing_zeros());
    let plus = h.positive_positions();
    let scale = 1.0 / (n as f64).sqrt();
    let domain = ScalarDomain::approx_real_default();
    let mut m = DenseMatrix::zeros(n, domain);
    // Z holds -1 on the negative cells of H; X and Y drop 1s onto the
    // positive cells their strings select.
    for i in 0..n {
        for j in 0..n {
            if h.sign(i, j) < 0 {
                m.set(i, j, Scalar::Real(-scale));
            }
        }
    }
    for (idx, &(i, j)) in plus.iter().enumerate() {
        let fill = (x[idx] as u8 + y[idx] as u8) as f64;
        if fill != 0.0 {
            m.set(i, j, Scalar::Real(fill * scale));
        }
    }
    Ok(m)
}

/// How a verification sweep covers the input space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every valid input pair; refused above 2^24 joint assignments.
    Exhaustive,
    /// Seeded random input pairs.
    Sampled { trials: u64 },
}

/// Outcome of a gadget verification sweep.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub kind: GadgetKind,
    pub n: usize,
    pub mode: VerifyMode,
    pub pairs_checked: u64,
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>12}  n={:<3} pairs={:<8} {}",
            self.kind.name(),
            self.n,
            self.pairs_checked,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

const EXHAUSTIVE_CAP: u64 = 1 << 24;
const UNITARY_TOLERANCE: f64 = 1e-9;

/// Replays a gadget's claimed iff over its input space: build the matrix,
/// evaluate the target property by direct inspection, compare against the
/// disjointness predicate, and report any counterexample.
pub fn verify_gadget_iff(kind: GadgetKind, n: usize, mode: VerifyMode) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        kind,
        n,
        mode,
        pairs_checked: 0,
        counterexamples: Vec::new(),
        notes: Vec::new(),
    };
    let inputs = input_space(kind, n, mode)?;
    match kind {
        GadgetKind::Permutation => {
            for (x, y) in inputs {
                let g = build_gadget(kind, &x, &y, 0)?;
                let holds = inspect::is_permutation_matrix(&g.matrix);
                let disjoint = !g.inputs_intersect();
                if holds != disjoint {
                    report.counterexamples.push(format!(
                        "x={} y={}: permutation={holds}, disjoint={disjoint}",
                        bits(&x),
                        bits(&y)
                    ));
                }
                report.pairs_checked += 1;
            }
        }
        GadgetKind::Majority => {
            for (x, y) in inputs {
                let g = build_gadget(kind, &x, &y, 0)?;
                let majority = inspect::column_majority_bits(&g.matrix);
                for i in 0..n {
                    let chunk_intersects =
                        (0..n).any(|r| x[i * n + r] && y[i * n + r]);
                    // Majority 0 exactly on intersecting chunk pairs.
                    if majority[i] == chunk_intersects {
                        report.counterexamples.push(format!(
                            "x={} y={} column {i}: majority={}, intersects={chunk_intersects}",
                            bits(&x),
                            bits(&y),
                            majority[i]
                        ));
                    }
                }
                report.pairs_checked += 1;
            }
        }
        GadgetKind::IdenticalColumns => {
            // One-sided: intersection forces an identical pair for every
            // seed; disjoint inputs may collide only with the bounded
            // probability of the random fill, estimated below.
            let mut disjoint_pairs = 0u64;
            let mut disjoint_collisions = 0u64;
            for (pair_index, (x, y)) in inputs.into_iter().enumerate() {
                let intersects = x.iter().zip(&y).any(|(&a, &b)| a && b);
                for fill in 0..3u64 {
                    let seed = (pair_index as u64) * 3 + fill;
                    let g = build_gadget(kind, &x, &y, seed)?;
                    let identical = inspect::find_identical_columns_direct(&g.matrix).is_some();
                    if intersects && !identical {
                        report.counterexamples.push(format!(
                            "x={} y={} seed={seed}: intersecting inputs without identical columns",
                            bits(&x),
                            bits(&y)
                        ));
                    }
                    if !intersects {
                        disjoint_pairs += 1;
                        if identical {
                            disjoint_collisions += 1;
                        }
                    }
                }
                report.pairs_checked += 1;
            }
            if disjoint_pairs > 0 {
                // Union bound over column pairs: n^2 * 2^(1 - n/2) per draw.
                let bound = ((n * n) as f64 * 2f64.powi(1 - (n as i32) / 2)).min(1.0);
                let rate = disjoint_collisions as f64 / disjoint_pairs as f64;
                let slack = 3.0 * (bound * (1.0 - bound) / disjoint_pairs as f64).sqrt();
                report.notes.push(format!(
                    "disjoint-side collision rate {rate:.4} over {disjoint_pairs} draws \
                     (union bound {bound:.4})"
                ));
                if rate > bound + slack.max(0.01) {
                    report.counterexamples.push(format!(
                        "disjoint collision rate {rate:.4} exceeds bound {bound:.4}"
                    ));
                }
            }
        }
        GadgetKind::NegativeEntry => {
            for (x, y) in inputs {
                let g = build_gadget(kind, &x, &y, 0)?;
                let holds = inspect::find_negative_entry_direct(&g.matrix).is_some();
                let intersects = g.inputs_intersect();
                if holds != intersects {
                    report.counterexamples.push(format!(
                        "x={} y={}: negative={holds}, intersects={intersects}",
                        bits(&x),
                        bits(&y)
                    ));
                }
                report.pairs_checked += 1;
            }
        }
        GadgetKind::UnitaryRandomized { .. } => {
            // The claim is over the variant family: disjoint inputs make all
            // four M_ij unitary; intersecting inputs break at least one.
            for (x, y) in inputs {
                let mut all_unitary = true;
                let mut any_broken = false;
                for alice_minus in [false, true] {
                    for bob_minus in [false, true] {
                        let g = build_gadget(
                            GadgetKind::UnitaryRandomized { alice_minus, bob_minus },
                            &x,
                            &y,
                            0,
                        )?;
                        let dev = inspect::unitarity_deviation(&g.matrix);
                        if dev <= UNITARY_TOLERANCE {
                            // unitary
                        } else {
                            all_unitary = false;
                            any_broken = true;
                        }
                    }
                }
                let disjoint = !x.iter().zip(&y).any(|(&a, &b)| a && b);
                if disjoint && !all_unitary {
                    report.counterexamples.push(format!(
                        "x={} y={}: disjoint inputs with a non-unitary variant",
                        bits(&x),
                        bits(&y)
                    ));
                }
                if !disjoint && !any_broken {
                    report.counterexamples.push(format!(
                        "x={} y={}: intersecting inputs with all variants unitary",
                        bits(&x),
                        bits(&y)
                    ));
                }
                report.pairs_checked += 1;
            }
        }
        GadgetKind::UnitaryDeterministic => {
            for (x, y) in inputs {
                let g = build_gadget(kind, &x, &y, 0)?;
                let unitary = inspect::unitarity_deviation(&g.matrix) <= UNITARY_TOLERANCE;
                let disjoint = !g.inputs_intersect();
                if unitary != disjoint {
                    report.counterexamples.push(format!(
                        "x={} y={}: unitary={unitary}, disjoint={disjoint}",
                        bits(&x),
                        bits(&y)
                    ));
                }
                report.pairs_checked += 1;
            }
        }
    }
    Ok(report)
}

/// Enumerates (or samples) the valid input pairs for a gadget kind.
fn input_space(kind: GadgetKind, n: usize, mode: VerifyMode) -> Result<Vec<(Vec<bool>, Vec<bool>)>> {
    match mode {
        VerifyMode::Exhaustive => {
            let side: Vec<Vec<bool>> = match kind {
                GadgetKind::Permutation => all_strings(n)?,
                GadgetKind::NegativeEntry => all_strings(n * n)?,
                GadgetKind::IdenticalColumns => {
                    if n < 2 || !n.is_multiple_of(2) {
                        return Err(Error::InvalidParameter(
                            "identical gadget verification needs even n >= 2".into(),
                        ));
                    }
                    all_strings(n - 1)?
                }
                GadgetKind::Majority => {
                    if !n.is_multiple_of(4) {
                        return Err(Error::InvalidParameter(
                            "majority gadget verification needs n divisible by 4".into(),
                        ));
                    }
                    chunked_weighted_strings(n, n / 4)?
                }
                GadgetKind::UnitaryRandomized { .. } => {
                    if !n.is_power_of_two() || n < 4 {
                        return Err(Error::InvalidParameter(
                            "unitary_rand verification needs power-of-two n >= 4".into(),
                        ));
                    }
                    weighted_strings(n, n / 4)
                }
                GadgetKind::UnitaryDeterministic => {
                    if !n.is_power_of_two() || n < 4 {
                        return Err(Error::InvalidParameter(
                            "unitary_det verification needs power-of-two n >= 4".into(),
                        ));
                    }
                    let len = n * (n + 1) / 2;
                    weighted_strings(len, len / 2)
                }
            };
            let joint = (side.len() as u64).saturating_mul(side.len() as u64);
            if joint > EXHAUSTIVE_CAP {
                return Err(Error::InvalidParameter(format!(
                    "exhaustive space of {joint} joint assignments exceeds the 2^24 cap"
                )));
            }
            let mut pairs = Vec::with_capacity(joint as usize);
            for x in &side {
                for y in &side {
                    pairs.push((x.clone(), y.clone()));
                }
            }
            Ok(pairs)
        }
        VerifyMode::Sampled { trials } => {
            let mut rng = rng_from_seed(0x9ad6e);
            let mut pairs = Vec::with_capacity(trials as usize);
            for _ in 0..trials {
                pairs.push(sample_input_pair(kind, n, &mut rng)?);
            }
            Ok(pairs)
        }
    }
}

/// Samples one (x, y) pair. Independent draws at realistic sizes are almost
/// never disjoint, which would leave the disjoint branch of the iff
/// untested, so half the draws construct y inside the complement of x's
/// support.
fn sample_input_pair(
    kind: GadgetKind,
    n: usize,
    rng: &mut crate::rng::TrialRng,
) -> Result<(Vec<bool>, Vec<bool>)> {
    let x = sample_input(kind, n, rng)?;
    let y = if rng.random::<bool>() {
        sample_input(kind, n, rng)?
    } else {
        disjoint_partner(kind, n, &x, rng)
    };
    Ok((x, y))
}

fn sample_input(kind: GadgetKind, n: usize, rng: &mut crate::rng::TrialRng) -> Result<Vec<bool>> {
    let random_string = |rng: &mut crate::rng::TrialRng, len: usize| -> Vec<bool> {
        (0..len).map(|_| rng.random::<bool>()).collect()
    };
    Ok(match kind {
        GadgetKind::Permutation => random_string(rng, n),
        GadgetKind::NegativeEntry => random_string(rng, n * n),
        GadgetKind::IdenticalColumns => random_string(rng, n - 1),
        GadgetKind::Majority => {
            let mut s = Vec::with_capacity(n * n);
            for _ in 0..n {
                s.extend(weighted_sample(rng, n, n / 4, None));
            }
            s
        }
        GadgetKind::UnitaryRandomized { .. } => weighted_sample(rng, n, n / 4, None),
        GadgetKind::UnitaryDeterministic => {
            let len = n * (n + 1) / 2;
            weighted_sample(rng, len, len / 2, None)
        }
    })
}

/// A valid input whose support avoids x's support entirely.
fn disjoint_partner(
    kind: GadgetKind,
    n: usize,
    x: &[bool],
    rng: &mut crate::rng::TrialRng,
) -> Vec<bool> {
    match kind {
        GadgetKind::Permutation | GadgetKind::NegativeEntry | GadgetKind::IdenticalColumns => x
            .iter()
            .map(|&xi| if xi { false } else { rng.random::<bool>() })
            .collect(),
        GadgetKind::Majority => {
            let mut s = Vec::with_capacity(n * n);
            for c in 0..n {
                s.extend(weighted_sample(rng, n, n / 4, Some(&x[c * n..(c + 1) * n])));
            }
            s
        }
        GadgetKind::UnitaryRandomized { .. } => weighted_sample(rng, n, n / 4, Some(x)),
        GadgetKind::UnitaryDeterministic => {
            // The complement is the unique disjoint partner at weight len/2.
            x.iter().map(|&xi| !xi).collect()
        }
    }
}

/// A weight-w string of the given length, optionally supported only where
/// `avoid` is false.
fn weighted_sample(
    rng: &mut crate::rng::TrialRng,
    len: usize,
    w: usize,
    avoid: Option<&[bool]>,
) -> Vec<bool> {
    let candidates: Vec<usize> = match avoid {
        Some(mask) => (0..len).filter(|&i| !mask[i]).collect(),
        None => (0..len).collect(),
    };
    let mut s = vec![false; len];
    for k in sample_subset(rng, candidates.len(), w) {
        s[candidates[k]] = true;
    }
    s
}

fn all_strings(len: usize) -> Result<Vec<Vec<bool>>> {
    if len >= 24 {
        return Err(Error::InvalidParameter(format!(
            "cannot enumerate all strings of length {len}"
        )));
    }
    Ok((0u32..1 << len)
        .map(|mask| (0..len).map(|i| mask >> i & 1 == 1).collect())
        .collect())
}

/// All strings of the given length and weight.
fn weighted_strings(len: usize, weight: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut current = vec![false; len];
    fn recurse(
        current: &mut Vec<bool>,
        start: usize,
        remaining: usize,
        out: &mut Vec<Vec<bool>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let len = current.len();
        for i in start..=len - remaining {
            current[i] = true;
            recurse(current, i + 1, remaining - 1, out);
            current[i] = false;
        }
    }
    recurse(&mut current, 0, weight, &mut out);
    out
}

/// All concatenations of n weight-w chunks of length n.
fn chunked_weighted_strings(n: usize, w: usize) -> Result<Vec<Vec<bool>>> {
    let chunk_options = weighted_strings(n, w);
    let total = (chunk_options.len() as u64).checked_pow(n as u32);
    match total {
        Some(t) if t <= EXHAUSTIVE_CAP => {}
        _ => {
            return Err(Error::InvalidParameter(format!(
                "chunked space for n = {n} exceeds the exhaustive cap"
            )))
        }
    }
    let mut out: Vec<Vec<bool>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * chunk_options.len());
        for prefix in &out {
            for chunk in &chunk_options {
                let mut s = prefix.clone();
                s.extend_from_slice(chunk);
                next.push(s);
            }
        }
        out = next;
    }
    Ok(out)
}

fn integer_sqrt(len: usize) -> Option<usize> {
    let n = (len as f64).sqrt().round() as usize;
    (n * n == len && n > 0).then_some(n)
}

fn bits(s: &[bool]) -> String {
    s.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_base_cases_match_definition() {
        let h0 = HadamardMatrix::new(0);
        assert_eq!(h0.order(), 1);
        assert_eq!(h0.sign(0, 0), 1);

        let h1 = HadamardMatrix::new(1);
        assert_eq!(
            [[h1.sign(0, 0), h1.sign(0, 1)], [h1.sign(1, 0), h1.sign(1, 1)]],
            [[1, 1], [1, -1]]
        );
    }

    #[test]
    fn hadamard_matches_parity_closed_form() {
        // Independent route: H[i][j] = (-1)^(popcount(i & j)).
        let h = HadamardMatrix::new(5);
        for i in 0..32usize {
            for j in 0..32usize {
                let want = if (i & j).count_ones() % 2 == 0 { 1 } else { -1 };
                assert_eq!(h.sign(i, j), want, "at ({i},{j})");
            }
        }
    }

    #[test]
    fn hadamard_negative_counts() {
        for k in 0..=6u32 {
            let h = HadamardMatrix::new(k);
            let n = h.order() as u64;
            assert_eq!(h.negative_count(), n * (n - 1) / 2, "k = {k}");
        }
    }

    #[test]
    fn normalized_hadamard_is_orthonormal() {
        let g = HadamardMatrix::new(2).normalized();
        assert!(inspect::unitarity_deviation(&g) < 1e-12);
    }

    #[test]
    fn permutation_gadget_matches_printed_blocks() {
        let g = build_gadget(GadgetKind::Permutation, &[false], &[false], 0).unwrap();
        let got: Vec<u8> =
            g.matrix.entries().iter().map(|s| !s.is_raw_zero() as u8).collect();
        assert_eq!(got, vec![0, 0, 1, 1, 0, 0, 0, 1, 0]);
        assert!(inspect::is_permutation_matrix(&g.matrix));
        // Cell (0, 2) of the x = 0 block, read through the metered oracle.
        let mut oracle = crate::oracle::BilinearOracle::new(g.matrix.clone());
        assert_eq!(oracle.entry_query(0, 2, "probe").unwrap(), Scalar::Bit(true));

        let g = build_gadget(GadgetKind::Permutation, &[true], &[true], 0).unwrap();
        assert!(g.matrix.entries().iter().all(|s| !s.is_raw_zero()));
        assert!(!inspect::is_permutation_matrix(&g.matrix));
    }

    #[test]
    fn permutation_gadget_is_block_diagonal_gf2() {
        let x = [true, false, true, false, true];
        let y = [false, false, true, true, false];
        let g = build_gadget(GadgetKind::Permutation, &x, &y, 0).unwrap();
        assert_eq!(*g.matrix.domain(), ScalarDomain::Gf2);
        for i in 0..15 {
            for j in 0..15 {
                if i / 3 != j / 3 {
                    assert!(g.matrix.get(i, j).is_raw_zero(), "outside block at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn negative_gadget_entry_arithmetic() {
        // Bit 0 set on both sides: cell (0,0) is 0 + (-1) = -1.
        let x = [true, false, false, false];
        let y = [true, false, false, false];
        let g = build_gadget(GadgetKind::NegativeEntry, &x, &y, 0).unwrap();
        assert_eq!(g.matrix.get(0, 0), Scalar::Int(-1));
        assert_eq!(inspect::find_negative_entry_direct(&g.matrix), Some((0, 0)));
    }

    #[test]
    fn unitary_randomized_gadget_breaks_on_intersection() {
        // n = 8, weight-2 strings sharing position 0.
        let mut x = vec![false; 8];
        let mut y = vec![false; 8];
        x[0] = true;
        x[3] = true;
        y[0] = true;
        y[5] = true;
        let mut broken = None;
        for am in [false, true] {
            for bm in [false, true] {
                let g = build_gadget(
                    GadgetKind::UnitaryRandomized { alice_minus: am, bob_minus: bm },
                    &x,
                    &y,
                    0,
                )
                .unwrap();
                if inspect::unitarity_deviation(&g.matrix) > 1e-9 {
                    broken = Some(g);
                }
            }
        }
        // The broken variant carries a diagonal entry -1 - 2/sqrt(n/4) < -1.
        let g = broken.expect("some variant must break");
        let worst = (0..8).map(|i| g.matrix.get(i, i).as_f64().unwrap()).fold(f64::MAX, f64::min);
        assert!((worst - (-1.0 - 2.0 / (2.0f64).sqrt())).abs() < 1e-12);
        // The metered unitary tester catches it too.
        let mut oracle = crate::oracle::BilinearOracle::new(g.matrix.clone());
        let report = crate::linalg::test_unitary(&mut oracle, 2, 7).unwrap();
        assert_eq!(report.verdict, crate::oracle::Verdict::Reject);
    }

    #[test]
    fn unitary_gadget_weight_and_length_violations() {
        assert!(build_gadget(GadgetKind::UnitaryRandomized { alice_minus: false, bob_minus: false },
            &[true; 8], &[true; 8], 0).is_err());
        assert!(build_gadget(GadgetKind::Majority, &[false; 15], &[false; 15], 0).is_err());
        assert!(build_gadget(GadgetKind::UnitaryDeterministic, &[false; 9], &[false; 9], 0)
            .is_err());
    }

    #[test]
    fn identical_gadget_intersection_forces_all_ones_column() {
        // n = 6: strings of length 5 intersecting at position 2.
        let x = [false, false, true, false, true];
        let y = [true, false, true, false, false];
        for seed in 0..5 {
            let g = build_gadget(GadgetKind::IdenticalColumns, &x, &y, seed).unwrap();
            assert!((0..6).all(|i| !g.matrix.get(i, 2).is_raw_zero()));
            let pair = inspect::find_identical_columns_direct(&g.matrix);
            assert!(pair.is_some());
        }
    }

    #[test]
    fn verify_small_gadgets_have_no_counterexamples() {
        let perm = verify_gadget_iff(GadgetKind::Permutation, 3, VerifyMode::Exhaustive).unwrap();
        assert!(perm.passed(), "{:?}", perm.counterexamples.first());
        assert_eq!(perm.pairs_checked, 64);

        let neg = verify_gadget_iff(GadgetKind::NegativeEntry, 2, VerifyMode::Exhaustive).unwrap();
        assert!(neg.passed());
        assert_eq!(neg.pairs_checked, 256);
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        assert!(verify_gadget_iff(GadgetKind::Permutation, 13, VerifyMode::Exhaustive).is_err());
        assert!(verify_gadget_iff(GadgetKind::NegativeEntry, 4, VerifyMode::Exhaustive).is_err());
    }
}
