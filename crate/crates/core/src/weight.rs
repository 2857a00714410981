//! Exact non-negative edge weights.
//!
//! Every cost decision in the crate goes through [`Weight`] (an arbitrary
//! precision rational) or through the scaled-integer fast path in
//! [`crate::matrix::ScaledMatrix`]; floating point only appears in report
//! columns.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed as _, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("negative weight {0}")]
    Negative(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("cannot parse {0:?} as a rational weight")]
    Syntax(String),
}

/// Exact non-negative rational, always held in reduced form with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Weight(BigRational);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    pub fn from_int(value: u64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(value)))
    }

    /// `num / den`. Panics if `den == 0`; use [`Weight::try_ratio`] for
    /// untrusted input.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Weight(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn try_ratio(num: BigInt, den: BigInt) -> Result<Self, WeightError> {
        if den.is_zero() {
            return Err(WeightError::ZeroDenominator(format!("{num}/{den}")));
        }
        Self::from_rational(BigRational::new(num, den))
    }

    pub fn from_rational(value: BigRational) -> Result<Self, WeightError> {
        if value.is_negative() {
            return Err(WeightError::Negative(value.to_string()));
        }
        Ok(Weight(value))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `self - other`, clamped at zero.
    pub fn saturating_sub(&self, other: &Weight) -> Weight {
        if other >= self {
            Weight::zero()
        } else {
            Weight(&self.0 - &other.0)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parse = |part: &str| -> Result<BigInt, WeightError> {
            let part = part.trim();
            if part.is_empty() {
                return Err(WeightError::Syntax(s.to_string()));
            }
            part.parse::<BigInt>().map_err(|_| WeightError::Syntax(s.to_string()))
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (parse(n)?, parse(d)?);
                if d.is_zero() {
                    return Err(WeightError::ZeroDenominator(s.to_string()));
                }
                Weight::from_rational(BigRational::new(n, d))
            }
            None => Weight::from_rational(BigRational::from_integer(parse(t)?)),
        }
    }
}

impl From<u64> for Weight {
    fn from(v: u64) -> Self {
        Weight::from_int(v)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &'a Weight) -> Weight {
        Weight(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        self.0 += &rhs.0;
    }
}

impl Mul<u64> for &Weight {
    type Output = Weight;
    fn mul(self, rhs: u64) -> Weight {
        Weight(&self.0 * BigRational::from_integer(BigInt::from(rhs)))
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        let mut acc = Weight::zero();
        for w in iter {
            acc += w;
        }
        acc
    }
}

// Integers that fit in i64 serialize as JSON numbers, everything else as an
// "a/b" (or big-integer) string so round trips are bit-exact.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(v) = self.0.numer().to_i64() {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WeightVisitor;
        impl Visitor<'_> for WeightVisitor {
            type Value = Weight;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or a rational string \"a/b\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Weight, E> {
                Ok(Weight::from_int(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Weight, E> {
                if v < 0 {
                    Err(E::custom(WeightError::Negative(v.to_string())))
                } else {
                    Ok(Weight::from_int(v as u64))
                }
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Weight, E> {
                Err(E::custom(format!("floating-point weight {v} not allowed; use an integer or \"a/b\"")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Weight, E> {
                v.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_any(WeightVisitor)
    }
}

/// Value type the combinatorial solvers are generic over. Implemented for
/// [`Weight`] and for `i128` (scaled-integer fast path).
pub trait Cost: Clone + Ord + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
}

impl Cost for Weight {
    fn zero() -> Self {
        Weight::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl Cost for i128 {
    fn zero() -> Self {
        0
    }
    fn plus(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("scaled cost overflow")
    }
}

/// Signed exact value used for slacks and differences.
pub type Signed = BigRational;

pub fn signed(w: &Weight) -> Signed {
    w.0.clone()
}

/// Decimal rendering for report columns.
pub fn decimal(r: &BigRational) -> String {
    format!("{:.6}", r.to_f64().unwrap_or(f64::NAN))
}
