//! Exact nonnegative dyadic rationals `k / 2^m`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `numerator / 2^exponent`, kept with an odd numerator (or `0/2^0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigUint,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: BigUint, exponent: u64) -> Self {
        if numerator.is_zero() {
            return DyadicRational::zero();
        }
        let tz = numerator.trailing_zeros().unwrap_or(0).min(exponent);
        DyadicRational {
            numerator: numerator >> tz,
            exponent: exponent - tz,
        }
    }

    /// `2^{-n}`.
    pub fn pow2_neg(n: u64) -> Self {
        DyadicRational {
            numerator: BigUint::one(),
            exponent: n,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Numerators of both values over the common denominator `2^max`.
    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u64) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
            e,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let (a, b, e) = self.aligned(other);
        (a >= b).then(|| DyadicRational::new(a - b, e))
    }

    /// Nearest `f64`, for display and cross-checks only.
    pub fn to_f64(&self) -> f64 {
        let bits = self.numerator.bits();
        let shift = bits.saturating_sub(60);
        let top: u64 = (&self.numerator >> shift)
            .try_into()
            .expect("fits after shift");
        top as f64 * 2f64.powi(shift as i32 - self.exponent.min(i32::MAX as u64) as i32)
    }
}

impl Zero for DyadicRational {
    fn zero() -> Self {
        DyadicRational {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

impl One for DyadicRational {
    fn one() -> Self {
        DyadicRational {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: Self) -> Self {
        let (a, b, e) = self.aligned(&rhs);
        DyadicRational::new(a + b, e)
    }
}

impl Sub for DyadicRational {
    type Output = DyadicRational;

    /// Panics when the difference would be negative.
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs)
            .expect("dyadic subtraction below zero")
    }
}

impl Mul for DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: Self) -> Self {
        DyadicRational::new(self.numerator * rhs.numerator, self.exponent + rhs.exponent)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

/// `k/2^m`, or plain `k` when `m = 0`.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed dyadic rational {0:?}")]
pub struct DyadicParseError(String);

impl FromStr for DyadicRational {
    type Err = DyadicParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DyadicParseError(s.to_string());
        let (num, exp) = match s.split_once("/2^") {
            Some((n, e)) => (n, e.parse().map_err(|_| bad())?),
            None => (s, 0),
        };
        let num: BigUint = num.parse().map_err(|_| bad())?;
        Ok(DyadicRational::new(num, exp))
    }
}
