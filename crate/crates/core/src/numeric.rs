//! Scalars that stay exact while every input is rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance for equality of floating values.
pub const EQ_TOL: f64 = 1e-12;
/// Absolute tolerance for separation (disjointness) tests on floating values.
pub const SEP_TOL: f64 = 1e-9;

/// A rational number when every ingredient was rational, a float otherwise.
#[derive(Clone, Debug)]
pub enum Num {
    Exact(BigRational),
    Float(f64),
}

impl Num {
    pub fn zero() -> Self {
        Num::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Num::Exact(BigRational::one())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Num::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Parses `"p/q"`, an integer, or a decimal float.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::MalformedInput("empty number".into()));
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| Error::MalformedInput(format!("bad numerator in {s:?}")))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| Error::MalformedInput(format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(Error::MalformedInput(format!("zero denominator in {s:?}")));
            }
            return Ok(Num::Exact(BigRational::new(n, d)));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Num::Exact(BigRational::from_integer(n)));
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Num::Float(x)),
            _ => Err(Error::MalformedInput(format!("not a number: {s:?}"))),
        }
    }

    /// Reads a JSON string or number.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        match value {
            serde_json::Value::String(s) => Num::parse(s),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Num::Exact(BigRational::from_integer(BigInt::from(i))))
                } else if let Some(x) = n.as_f64() {
                    Ok(Num::Float(x))
                } else {
                    Err(Error::MalformedInput(format!("unsupported number {n}")))
                }
            }
            other => Err(Error::MalformedInput(format!("expected a number, got {other}"))),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Num::Float(x) => *x,
        }
    }

    pub fn abs(&self) -> Num {
        match self {
            Num::Exact(q) => Num::Exact(q.abs()),
            Num::Float(x) => Num::Float(x.abs()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Exact(q) => q.is_negative(),
            Num::Float(x) => *x < 0.0,
        }
    }

    pub fn recip(&self) -> Num {
        match self {
            Num::Exact(q) => Num::Exact(q.recip()),
            Num::Float(x) => Num::Float(1.0 / x),
        }
    }

    pub fn max(a: &Num, b: &Num) -> Num {
        if cmp(a, b, 0.0) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn min(a: &Num, b: &Num) -> Num {
        if cmp(a, b, 0.0) == Ordering::Greater {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Num::Exact(q) => Some(q),
            Num::Float(_) => None,
        }
    }
}

/// Compares exactly when both sides are rational; otherwise values within
/// `tol` of each other compare equal.
pub fn cmp(a: &Num, b: &Num, tol: f64) -> Ordering {
    match (a, b) {
        (Num::Exact(x), Num::Exact(y)) => x.cmp(y),
        _ => {
            let (x, y) = (a.to_f64(), b.to_f64());
            if (x - y).abs() <= tol {
                Ordering::Equal
            } else if x < y {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

/// Equality with the floating tolerance [`EQ_TOL`].
pub fn approx_eq(a: &Num, b: &Num) -> bool {
    cmp(a, b, EQ_TOL) == Ordering::Equal
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Num::Exact(x), Num::Exact(y)) => x == y,
            (Num::Float(x), Num::Float(y)) => x.to_bits() == y.to_bits(),
            _ => false,
        }
    }
}

fn lift(a: &Num, b: &Num, exact: impl Fn(&BigRational, &BigRational) -> BigRational, float: impl Fn(f64, f64) -> f64) -> Num {
    match (a, b) {
        (Num::Exact(x), Num::Exact(y)) => Num::Exact(exact(x, y)),
        _ => Num::Float(float(a.to_f64(), b.to_f64())),
    }
}

impl Add for &Num {
    type Output = Num;
    fn add(self, rhs: &Num) -> Num {
        lift(self, rhs, |x, y| x + y, |x, y| x + y)
    }
}

impl Sub for &Num {
    type Output = Num;
    fn sub(self, rhs: &Num) -> Num {
        lift(self, rhs, |x, y| x - y, |x, y| x - y)
    }
}

impl Mul for &Num {
    type Output = Num;
    fn mul(self, rhs: &Num) -> Num {
        lift(self, rhs, |x, y| x * y, |x, y| x * y)
    }
}

impl Neg for &Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Exact(q) => Num::Exact(-q),
            Num::Float(x) => Num::Float(-x),
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            // Debug keeps a decimal point, so floats never re-parse as rationals.
            Num::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NumVisitor;
        impl<'de> Visitor<'de> for NumVisitor {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                Num::parse(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num::Exact(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num::Exact(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                Ok(Num::Float(v))
            }
        }
        deserializer.deserialize_any(NumVisitor)
    }
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Num,
    pub hi: Num,
}

impl Interval {
    pub fn new(a: Num, b: Num) -> Self {
        if cmp(&a, &b, 0.0) == Ordering::Greater {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn unit() -> Self {
        Interval { lo: Num::zero(), hi: Num::one() }
    }

    pub fn width(&self) -> Num {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Num {
        let sum = &self.lo + &self.hi;
        &sum * &Num::ratio(1, 2)
    }

    /// Gap between the two intervals, zero when they meet.
    pub fn gap(&self, other: &Interval) -> Num {
        let left = &other.lo - &self.hi;
        let right = &self.lo - &other.hi;
        Num::max(&Num::max(&left, &right), &Num::zero())
    }

    /// The open interiors are disjoint; touching endpoints are allowed.
    pub fn disjoint_open(&self, other: &Interval) -> bool {
        cmp(&self.hi, &other.lo, SEP_TOL) != Ordering::Greater
            || cmp(&other.hi, &self.lo, SEP_TOL) != Ordering::Greater
    }

    /// The closed intervals do not meet.
    pub fn disjoint_closed(&self, other: &Interval) -> bool {
        cmp(&self.hi, &other.lo, SEP_TOL) == Ordering::Less
            || cmp(&other.hi, &self.lo, SEP_TOL) == Ordering::Less
    }

    /// Both endpoints lie strictly inside `(0, 1)`.
    pub fn strictly_inside_unit(&self) -> bool {
        cmp(&self.lo, &Num::zero(), EQ_TOL) == Ordering::Greater
            && cmp(&self.hi, &Num::one(), EQ_TOL) == Ordering::Less
    }

    pub fn contains(&self, other: &Interval) -> bool {
        cmp(&self.lo, &other.lo, EQ_TOL) != Ordering::Greater
            && cmp(&other.hi, &self.hi, EQ_TOL) != Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_integers_and_floats() {
        assert_eq!(Num::parse("2/6").unwrap(), Num::ratio(1, 3));
        assert_eq!(Num::parse(" 0 ").unwrap(), Num::zero());
        assert_eq!(Num::parse("-3/2").unwrap(), Num::ratio(-3, 2));
        assert_eq!(Num::parse("0.25").unwrap(), Num::Float(0.25));
        assert!(Num::parse("1/0").is_err());
        assert!(Num::parse("abc").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/3", "-7/2", "5", "0.1", "1.0", "1e-7"] {
            let n = Num::parse(s).unwrap();
            assert_eq!(Num::parse(&n.to_string()).unwrap(), n, "{s}");
        }
        assert_eq!(Num::Float(1.0).to_string(), "1.0");
    }

    #[test]
    fn rational_normalized() {
        match Num::parse("-4/-6").unwrap() {
            Num::Exact(q) => {
                assert_eq!(q.numer(), &BigInt::from(2));
                assert_eq!(q.denom(), &BigInt::from(3));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn mixed_arithmetic_falls_back_to_float() {
        let a = Num::ratio(1, 2);
        let b = Num::Float(0.25);
        assert_eq!(&a + &b, Num::Float(0.75));
        assert_eq!(&a * &a, Num::ratio(1, 4));
    }

    #[test]
    fn touching_intervals() {
        let a = Interval::new(Num::zero(), Num::ratio(1, 2));
        let b = Interval::new(Num::ratio(1, 2), Num::one());
        assert!(a.disjoint_open(&b));
        assert!(!a.disjoint_closed(&b));
        assert_eq!(a.gap(&b), Num::zero());
        let c = Interval::new(Num::ratio(3, 4), Num::one());
        assert!(a.disjoint_closed(&c));
        assert_eq!(a.gap(&c), Num::ratio(1, 4));
        assert_eq!(c.gap(&a), Num::ratio(1, 4));
    }

    #[test]
    fn float_touching_within_tolerance() {
        let a = Interval::new(Num::Float(0.0), Num::Float(1.0 / 3.0));
        let b = Interval::new(Num::Float(0.1 + 0.2 + 1.0 / 3.0 - 0.3), Num::Float(0.9));
        assert!(a.disjoint_open(&b));
        assert!(!a.disjoint_closed(&b));
    }
}
