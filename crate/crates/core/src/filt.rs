//! Exact filtration values: rationals extended by `±inf`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A value of the instanton filtration, or one of the two infinities.
///
/// Finite values are `BigRational`, which is always kept in lowest terms with
/// a positive denominator. The derived ordering puts `NegInf` below every
/// finite value and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiltValue {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl FiltValue {
    pub fn zero() -> Self {
        FiltValue::Finite(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        FiltValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        FiltValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FiltValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            FiltValue::Finite(q) => Some(q),
            _ => None,
        }
    }

    /// Shift by an integer power of `y`.
    pub fn shift(&self, k: i64) -> Self {
        match self {
            FiltValue::Finite(q) => FiltValue::Finite(q + BigInt::from(k)),
            other => other.clone(),
        }
    }

    /// Greatest integer `k` with `base + k <= self`; `None` for infinite `self`.
    pub fn floor_offset(&self, base: &BigRational) -> Option<i64> {
        let q = self.finite()?;
        let diff = q - base;
        let fl = diff.numer().div_floor(diff.denom());
        Some(i64::try_from(fl).expect("y-power out of i64 range"))
    }

    /// Smallest integer `k` with `base + k > self`; `None` for infinite `self`.
    pub fn strict_ceil_offset(&self, base: &BigRational) -> Option<i64> {
        self.floor_offset(base).map(|k| k + 1)
    }

    pub fn max(a: &FiltValue, b: &FiltValue) -> FiltValue {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl From<BigRational> for FiltValue {
    fn from(q: BigRational) -> Self {
        FiltValue::Finite(q)
    }
}

impl Neg for FiltValue {
    type Output = FiltValue;
    fn neg(self) -> FiltValue {
        match self {
            FiltValue::NegInf => FiltValue::PosInf,
            FiltValue::PosInf => FiltValue::NegInf,
            FiltValue::Finite(q) => FiltValue::Finite(-q),
        }
    }
}

impl Neg for &FiltValue {
    type Output = FiltValue;
    fn neg(self) -> FiltValue {
        -(self.clone())
    }
}

impl Add for &FiltValue {
    type Output = FiltValue;

    /// Extended addition. `inf + (-inf)` has no meaning for filtration
    /// levels and panics.
    fn add(self, rhs: &FiltValue) -> FiltValue {
        use FiltValue::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInf, NegInf) | (NegInf, PosInf) => panic!("indeterminate inf + -inf"),
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
        }
    }
}

impl Add for FiltValue {
    type Output = FiltValue;
    fn add(self, rhs: FiltValue) -> FiltValue {
        &self + &rhs
    }
}

impl Sub for &FiltValue {
    type Output = FiltValue;
    fn sub(self, rhs: &FiltValue) -> FiltValue {
        self + &(-rhs)
    }
}

impl Sub for FiltValue {
    type Output = FiltValue;
    fn sub(self, rhs: FiltValue) -> FiltValue {
        &self - &rhs
    }
}

impl fmt::Display for FiltValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltValue::NegInf => write!(f, "-inf"),
            FiltValue::PosInf => write!(f, "inf"),
            FiltValue::Finite(q) => write_rational(f, q),
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl FromStr for FiltValue {
    type Err = Error;

    /// Accepts `p/q`, integers, `inf`, `+inf` and `-inf`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        match t {
            "inf" | "+inf" => return Ok(FiltValue::PosInf),
            "-inf" => return Ok(FiltValue::NegInf),
            _ => {}
        }
        let bad = || Error::Parse(format!("not a rational `p/q`: {s:?}"));
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(FiltValue::Finite(BigRational::new(num, den)))
    }
}

/// Parse a finite rational, rejecting infinities.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    match s.parse::<FiltValue>()? {
        FiltValue::Finite(q) => Ok(q),
        _ => Err(Error::Parse(format!("expected a finite rational, got {s:?}"))),
    }
}

/// Render a finite rational as `p/q` (or `p` when integral).
pub fn fmt_rational(q: &BigRational) -> String {
    FiltValue::Finite(q.clone()).to_string()
}

pub fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

pub fn is_positive(q: &BigRational) -> bool {
    q.is_positive()
}

/// Convenience constructor used throughout tests and the catalog.
pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl PartialEq<BigRational> for FiltValue {
    fn eq(&self, other: &BigRational) -> bool {
        matches!(self, FiltValue::Finite(x) if x == other)
    }
}

impl PartialOrd<BigRational> for FiltValue {
    fn partial_cmp(&self, other: &BigRational) -> Option<Ordering> {
        Some(match self {
            FiltValue::NegInf => Ordering::Less,
            FiltValue::PosInf => Ordering::Greater,
            FiltValue::Finite(x) => x.cmp(other),
        })
    }
}
