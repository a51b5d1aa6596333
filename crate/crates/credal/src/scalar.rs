//! Scalar abstraction over the two arithmetic modes.
//!
//! Certifying operations (hull equality, independence verdicts, maximality
//! verdicts) run on exact rationals; probes and randomized trials may run on
//! `f64` with absolute tolerances. Every verdict records which mode produced
//! it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arithmetic mode a verdict was produced under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Rational => write!(f, "rational"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// Exact rational scalar.
pub type Rat = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Pivot / residual threshold for the feasibility solver.
    fn pivot_tol() -> Self;
    /// Coordinate-wise tolerance for duplicate-point removal.
    fn dedup_tol() -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// |a - b| <= tol
    fn close_to(&self, other: &Self, tol: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= *tol
    }

    fn pos_part(&self) -> Self {
        if *self > Self::zero() {
            self.clone()
        } else {
            Self::zero()
        }
    }

    fn neg_part(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            Self::zero()
        }
    }
}

impl Scalar for Rat {
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn pivot_tol() -> Self {
        Zero::zero()
    }

    fn dedup_tol() -> Self {
        Zero::zero()
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn pivot_tol() -> Self {
        1e-9
    }

    fn dedup_tol() -> Self {
        1e-12
    }
}

/// Dot product of two equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parts() {
        let x = Rat::ratio(-3, 2);
        assert_eq!(x.pos_part(), <Rat as Scalar>::zero());
        assert_eq!(x.neg_part(), Rat::ratio(3, 2));
        let y = Rat::ratio(3, 2);
        assert_eq!(y.pos_part(), y);
        assert_eq!(y.neg_part(), <Rat as Scalar>::zero());
    }

    #[test]
    fn dot_product() {
        let a = vec![Rat::from_int(1), Rat::from_int(2)];
        let b = vec![Rat::ratio(1, 2), Rat::ratio(1, 4)];
        assert_eq!(dot(&a, &b), Rat::from_int(1));
    }
}
