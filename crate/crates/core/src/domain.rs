//! Scalar domains: the arithmetic world a matrix lives in.
//!
//! Exact kinds (GF(2), GF(p), integers, rationals) compute bit-exactly and
//! never consult a tolerance. Approximate kinds (real, complex) carry a
//! positive tolerance used for every equality-to-zero decision, scaled by
//! `max(1, |operands|)` so Hadamard-sized values compare sensibly.

use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::rng::{probe_int, TrialRng};
use rand::Rng;

/// Domain tag without parameters, used for compatibility checks and display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Gf2,
    Gfp,
    ExactInt,
    ExactRational,
    ApproxReal,
    ApproxComplex,
}

impl DomainKind {
    pub fn is_exact(self) -> bool {
        !matches!(self, DomainKind::ApproxReal | DomainKind::ApproxComplex)
    }
}

/// A scalar domain: which field (or ring) entries live in, plus the modulus
/// for GF(p) and the tolerance for the approximate kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarDomain {
    Gf2,
    Gfp { modulus: u64 },
    ExactInt,
    ExactRational,
    ApproxReal { tolerance: f64 },
    ApproxComplex { tolerance: f64 },
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

impl ScalarDomain {
    /// GF(p) for a prime modulus. Rejects composites and p < 2.
    pub fn gfp(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::InvalidParameter(format!(
                "GF(p) modulus must be prime, got {modulus}"
            )));
        }
        Ok(ScalarDomain::Gfp { modulus })
    }

    pub fn approx_real(tolerance: f64) -> Result<Self> {
        check_tolerance(tolerance)?;
        Ok(ScalarDomain::ApproxReal { tolerance })
    }

    pub fn approx_complex(tolerance: f64) -> Result<Self> {
        check_tolerance(tolerance)?;
        Ok(ScalarDomain::ApproxComplex { tolerance })
    }

    pub fn approx_real_default() -> Self {
        ScalarDomain::ApproxReal { tolerance: DEFAULT_TOLERANCE }
    }

    pub fn approx_complex_default() -> Self {
        ScalarDomain::ApproxComplex { tolerance: DEFAULT_TOLERANCE }
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            ScalarDomain::Gf2 => DomainKind::Gf2,
            ScalarDomain::Gfp { .. } => DomainKind::Gfp,
            ScalarDomain::ExactInt => DomainKind::ExactInt,
            ScalarDomain::ExactRational => DomainKind::ExactRational,
            ScalarDomain::ApproxReal { .. } => DomainKind::ApproxReal,
            ScalarDomain::ApproxComplex { .. } => DomainKind::ApproxComplex,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind().is_exact()
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self {
            ScalarDomain::ApproxReal { tolerance } | ScalarDomain::ApproxComplex { tolerance } => {
                Some(*tolerance)
            }
            _ => None,
        }
    }

    /// Two domains are compatible when vectors of one may probe matrices of
    /// the other: same kind, and same modulus for GF(p).
    pub fn compatible(&self, other: &ScalarDomain) -> bool {
        match (self, other) {
            (ScalarDomain::Gfp { modulus: a }, ScalarDomain::Gfp { modulus: b }) => a == b,
            (a, b) => a.kind() == b.kind(),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarDomain::Gf2 => Scalar::Bit(false),
            ScalarDomain::Gfp { .. } => Scalar::Mod(0),
            ScalarDomain::ExactInt => Scalar::Int(0),
            ScalarDomain::ExactRational => Scalar::Rational(Ratio::new(0, 1)),
            ScalarDomain::ApproxReal { .. } => Scalar::Real(0.0),
            ScalarDomain::ApproxComplex { .. } => Scalar::Complex(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            ScalarDomain::Gf2 => Scalar::Bit(true),
            ScalarDomain::Gfp { .. } => Scalar::Mod(1),
            ScalarDomain::ExactInt => Scalar::Int(1),
            ScalarDomain::ExactRational => Scalar::Rational(Ratio::new(1, 1)),
            ScalarDomain::ApproxReal { .. } => Scalar::Real(1.0),
            ScalarDomain::ApproxComplex { .. } => Scalar::Complex(Complex64::new(1.0, 0.0)),
        }
    }

    /// Embeds a small integer into the domain (reduced for finite fields).
    pub fn from_i64(&self, value: i64) -> Scalar {
        match self {
            ScalarDomain::Gf2 => Scalar::Bit(value.rem_euclid(2) == 1),
            ScalarDomain::Gfp { modulus } => {
                Scalar::Mod(value.rem_euclid(*modulus as i64) as u64)
            }
            ScalarDomain::ExactInt => Scalar::Int(value as i128),
            ScalarDomain::ExactRational => Scalar::Rational(Ratio::new(value as i128, 1)),
            ScalarDomain::ApproxReal { .. } => Scalar::Real(value as f64),
            ScalarDomain::ApproxComplex { .. } => {
                Scalar::Complex(Complex64::new(value as f64, 0.0))
            }
        }
    }

    /// Checks that a scalar is a valid element of this domain.
    pub fn validate(&self, s: &Scalar) -> Result<()> {
        let ok = match (self, s) {
            (ScalarDomain::Gf2, Scalar::Bit(_)) => true,
            (ScalarDomain::Gfp { modulus }, Scalar::Mod(v)) => v < modulus,
            (ScalarDomain::ExactInt, Scalar::Int(_)) => true,
            (ScalarDomain::ExactRational, Scalar::Rational(_)) => true,
            (ScalarDomain::ApproxReal { .. }, Scalar::Real(x)) => x.is_finite(),
            (ScalarDomain::ApproxComplex { .. }, Scalar::Complex(z)) => {
                z.re.is_finite() && z.im.is_finite()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ScalarOutsideDomain(format!("{s} is not an element of {self}")))
        }
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match (self, a, b) {
            (ScalarDomain::Gf2, Scalar::Bit(x), Scalar::Bit(y)) => Scalar::Bit(x ^ y),
            (ScalarDomain::Gfp { modulus }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((x as u128 + y as u128) % *modulus as u128) as u64)
            }
            (ScalarDomain::ExactInt, Scalar::Int(x), Scalar::Int(y)) => {
                Scalar::Int(x.checked_add(y).expect("i128 overflow in exact-int addition"))
            }
            (ScalarDomain::ExactRational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x + y)
            }
            (ScalarDomain::ApproxReal { .. }, Scalar::Real(x), Scalar::Real(y)) => {
                Scalar::Real(x + y)
            }
            (ScalarDomain::ApproxComplex { .. }, Scalar::Complex(x), Scalar::Complex(y)) => {
                Scalar::Complex(x + y)
            }
            (d, a, b) => panic!("scalar variants {a:?}, {b:?} do not match domain {d:?}"),
        }
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match (self, a, b) {
            (ScalarDomain::Gf2, Scalar::Bit(x), Scalar::Bit(y)) => Scalar::Bit(x & y),
            (ScalarDomain::Gfp { modulus }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((x as u128 * y as u128) % *modulus as u128) as u64)
            }
            (ScalarDomain::ExactInt, Scalar::Int(x), Scalar::Int(y)) => {
                Scalar::Int(x.checked_mul(y).expect("i128 overflow in exact-int multiplication"))
            }
            (ScalarDomain::ExactRational, Scalar::Rational(x), Scalar::Rational(y)) => {
                Scalar::Rational(x * y)
            }
            (ScalarDomain::ApproxReal { .. }, Scalar::Real(x), Scalar::Real(y)) => {
                Scalar::Real(x * y)
            }
            (ScalarDomain::ApproxComplex { .. }, Scalar::Complex(x), Scalar::Complex(y)) => {
                Scalar::Complex(x * y)
            }
            (d, a, b) => panic!("scalar variants {a:?}, {b:?} do not match domain {d:?}"),
        }
    }

    pub fn neg(&self, a: Scalar) -> Scalar {
        match (self, a) {
            (ScalarDomain::Gf2, Scalar::Bit(x)) => Scalar::Bit(x),
            (ScalarDomain::Gfp { modulus }, Scalar::Mod(x)) => {
                Scalar::Mod(if x == 0 { 0 } else { modulus - x })
            }
            (ScalarDomain::ExactInt, Scalar::Int(x)) => Scalar::Int(-x),
            (ScalarDomain::ExactRational, Scalar::Rational(x)) => Scalar::Rational(-x),
            (ScalarDomain::ApproxReal { .. }, Scalar::Real(x)) => Scalar::Real(-x),
            (ScalarDomain::ApproxComplex { .. }, Scalar::Complex(x)) => Scalar::Complex(-x),
            (d, a) => panic!("scalar variant {a:?} does not match domain {d:?}"),
        }
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    /// Equality in the domain. Exact kinds compare bit-exactly; approximate
    /// kinds use `|a - b| <= tolerance * max(1, |a|, |b|)`.
    pub fn eq(&self, a: Scalar, b: Scalar) -> bool {
        match self.tolerance() {
            None => a == b,
            Some(tol) => {
                let (da, db) = (a.magnitude(), b.magnitude());
                let scale = 1.0_f64.max(da).max(db);
                self.sub(a, b).magnitude() <= tol * scale
            }
        }
    }

    /// Zero test in the domain; `eq(x, 0)`.
    pub fn is_zero(&self, x: Scalar) -> bool {
        self.eq(x, self.zero())
    }

    /// Strict negativity for ordered domains. Approximate reals must clear
    /// the tolerance band: `x < -tolerance * max(1, |x|)`.
    pub fn is_negative(&self, x: Scalar) -> Result<bool> {
        match (self, x) {
            (ScalarDomain::ExactInt, Scalar::Int(v)) => Ok(v < 0),
            (ScalarDomain::ExactRational, Scalar::Rational(v)) => Ok(v < Ratio::new(0, 1)),
            (ScalarDomain::ApproxReal { tolerance }, Scalar::Real(v)) => {
                Ok(v < -tolerance * 1.0_f64.max(v.abs()))
            }
            _ => Err(Error::UnsupportedDomain { op: "sign test", domain: self.to_string() }),
        }
    }

    /// Uniform sample from the domain's probing set: bits over GF(2), the
    /// full field over GF(p), and `{1, ..., 2^20}` everywhere else (with an
    /// independent imaginary part over the complex numbers).
    pub fn sample_uniform(&self, rng: &mut TrialRng) -> Scalar {
        match self {
            ScalarDomain::Gf2 => Scalar::Bit(rng.random::<bool>()),
            ScalarDomain::Gfp { modulus } => Scalar::Mod(rng.random_range(0..*modulus)),
            ScalarDomain::ExactInt => Scalar::Int(probe_int(rng)),
            ScalarDomain::ExactRational => Scalar::Rational(Ratio::new(probe_int(rng), 1)),
            ScalarDomain::ApproxReal { .. } => Scalar::Real(probe_int(rng) as f64),
            ScalarDomain::ApproxComplex { .. } => {
                Scalar::Complex(Complex64::new(probe_int(rng) as f64, probe_int(rng) as f64))
            }
        }
    }
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Gf2 => write!(f, "gf2"),
            ScalarDomain::Gfp { modulus } => write!(f, "gfp:{modulus}"),
            ScalarDomain::ExactInt => write!(f, "int"),
            ScalarDomain::ExactRational => write!(f, "rat"),
            ScalarDomain::ApproxReal { .. } => write!(f, "real"),
            ScalarDomain::ApproxComplex { .. } => write!(f, "complex"),
        }
    }
}

impl std::str::FromStr for ScalarDomain {
    type Err = Error;

    /// Parses `gf2`, `gfp:p`, `int`, `rat`, `real[:tol]`, `complex[:tol]`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let parse_tol = |arg: Option<&str>| -> Result<f64> {
            match arg {
                None => Ok(DEFAULT_TOLERANCE),
                Some(a) => a.parse().map_err(|_| {
                    Error::InvalidParameter(format!("bad tolerance in domain `{s}`"))
                }),
            }
        };
        match name {
            "gf2" => Ok(ScalarDomain::Gf2),
            "gfp" => {
                let p: u64 = arg
                    .ok_or_else(|| Error::InvalidParameter("gfp needs a modulus, e.g. gfp:5".into()))?
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad modulus in `{s}`")))?;
                ScalarDomain::gfp(p)
            }
            "int" => Ok(ScalarDomain::ExactInt),
            "rat" => Ok(ScalarDomain::ExactRational),
            "real" => ScalarDomain::approx_real(parse_tol(arg)?),
            "complex" => ScalarDomain::approx_complex(parse_tol(arg)?),
            other => Err(Error::InvalidParameter(format!("unknown domain `{other}`"))),
        }
    }
}

/// A single domain scalar. Structural `==` is bit-exact; use
/// [`ScalarDomain::eq`] for tolerance-aware comparison in approximate kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Bit(bool),
    Mod(u64),
    Int(i128),
    Rational(Ratio<i128>),
    Real(f64),
    Complex(Complex64),
}

impl Scalar {
    /// Structurally zero (the additive identity's canonical representation).
    /// Used to skip no-op terms in bilinear evaluation.
    pub fn is_raw_zero(&self) -> bool {
        match self {
            Scalar::Bit(b) => !b,
            Scalar::Mod(v) => *v == 0,
            Scalar::Int(v) => *v == 0,
            Scalar::Rational(r) => *r.numer() == 0,
            Scalar::Real(x) => *x == 0.0,
            Scalar::Complex(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Absolute value as f64, for tolerance scaling.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Bit(b) => *b as u8 as f64,
            Scalar::Mod(v) => *v as f64,
            Scalar::Int(v) => (*v as f64).abs(),
            Scalar::Rational(r) => (*r.numer() as f64 / *r.denom() as f64).abs(),
            Scalar::Real(x) => x.abs(),
            Scalar::Complex(z) => z.norm(),
        }
    }

    pub fn as_int(&self) -> Option<i128> {
        match self {
            Scalar::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Scalar::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Complex(z) => Some(*z),
            _ => None,
        }
    }

    /// Is this scalar exactly 0 or 1 in its own representation?
    pub fn is_binary_value(&self) -> bool {
        match self {
            Scalar::Bit(_) => true,
            Scalar::Mod(v) => *v <= 1,
            Scalar::Int(v) => *v == 0 || *v == 1,
            Scalar::Rational(r) => *r.denom() == 1 && (*r.numer() == 0 || *r.numer() == 1),
            Scalar::Real(x) => *x == 0.0 || *x == 1.0,
            Scalar::Complex(z) => z.im == 0.0 && (z.re == 0.0 || z.re == 1.0),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Bit(b) => write!(f, "{}", *b as u8),
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Real(x) => write!(f, "{x}"),
            Scalar::Complex(z) => {
                if z.im < 0.0 {
                    write!(f, "{}-{}i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance > 0.0 && tolerance.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "tolerance must be positive and finite, got {tolerance}"
        )))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
