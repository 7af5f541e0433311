//! Numeric backends.
//!
//! Every real quantity in the crate (slopes, the critical point, orbit points)
//! is a [`Scalar`]. Two backends exist:
//!
//! * [`Exact`]: arbitrary-precision rationals. Comparisons are decidable and
//!   every predicate built on them is a proof for the given parameters.
//! * [`Float`]: `f64` with an absolute tolerance of [`FLOAT_EPS`]. Two values
//!   closer than the tolerance compare equal, so every predicate is
//!   ε-sensitive. Use it for scans where speed matters more than certainty.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational backend.
pub type Exact = BigRational;

/// Absolute tolerance used by [`Float`] comparisons.
pub const FLOAT_EPS: f64 = 1e-12;

/// Arithmetic mode selector, mostly for front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown arithmetic mode `{other}`"))),
        }
    }
}

/// A real number backend. All comparisons in the crate go through
/// `PartialOrd`/`PartialEq` of an implementor.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when comparisons are exact.
    const EXACT: bool;

    fn from_ratio(r: &BigRational) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn zero() -> Self;
    fn one() -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_ratio(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn powu(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Total order used by the algorithms. Float NaNs never arise from valid
    /// maps; they are ordered as equal rather than panicking.
    fn cmp_to(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// `true` when the comparison between `self` and `other` could flip under
    /// the backend's rounding. Always `false` in exact mode.
    fn is_ambiguous_against(&self, other: &Self) -> bool {
        let _ = other;
        false
    }

    /// Lossless text form: `p/q` for rationals, shortest round-trip decimal
    /// for floats.
    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    /// The exact value, for the exact backend only.
    fn to_ratio(&self) -> Option<BigRational> {
        None
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(<BigRational as Zero>::zero)
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }

    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn powu(&self, n: u32) -> Self {
        num_traits::pow(self.clone(), n as usize)
    }

    fn cmp_to(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn to_ratio(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Converts a rational to the nearest `f64`, also for huge numerators and
/// denominators where a naive `n as f64 / d as f64` overflows.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits() as i64).max(d.bits() as i64) - 60;
    if shift <= 0 {
        return ToPrimitive::to_f64(n).unwrap_or(f64::NAN) / ToPrimitive::to_f64(d).unwrap_or(f64::NAN);
    }
    let s = shift as usize;
    let nn = ToPrimitive::to_f64(&(n >> s)).unwrap_or(0.0);
    let dd = ToPrimitive::to_f64(&(d >> s)).unwrap_or(0.0);
    nn / dd
}

/// `f64` compared with an absolute tolerance of [`FLOAT_EPS`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Float(pub f64);

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= FLOAT_EPS
    }
}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            Some(Ordering::Equal)
        } else {
            self.0.partial_cmp(&other.0)
        }
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Float {
            type Output = Float;
            fn $m(self, rhs: Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
    };
}

float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn from_ratio(r: &BigRational) -> Self {
        Float(ratio_to_f64(r))
    }

    fn from_f64(x: f64) -> Self {
        Float(x)
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn zero() -> Self {
        Float(0.0)
    }

    fn one() -> Self {
        Float(1.0)
    }

    fn powu(&self, n: u32) -> Self {
        Float(self.0.powi(n as i32))
    }

    fn is_ambiguous_against(&self, other: &Self) -> bool {
        self == other
    }
}

/// Parses `p/q`, an integer, or a decimal such as `1.3` or `-2.5e-3` into an
/// exact rational. Decimals are converted digit by digit, so `"1.3"` is
/// exactly `13/10`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num = parse_rational(n)?;
        let den = parse_rational(d)?;
        if Zero::is_zero(&den) {
            return Err(Error::Parse(format!("zero denominator in `{t}`")));
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{t}`")))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("`{t}` is not a number")));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("`{t}` is not a number")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse()
            .map_err(|_| Error::Parse(format!("`{t}` is not a number")))?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Parses into any backend by way of the exact parser.
pub fn parse_scalar<S: Scalar>(s: &str) -> Result<S, Error> {
    parse_rational(s).map(|r| S::from_ratio(&r))
}

/// Shorthand for building exact constants in tests and examples.
pub fn q(num: i64, den: i64) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
