//! Exact arithmetic foundation.
//!
//! Everything above this module is written against the [`Coeff`] trait, a
//! commutative ℚ-algebra with a partial inverse. The concrete coefficient
//! rings are arbitrary-precision rationals, multivariate polynomials over
//! them and univariate rational functions; all values are immutable after
//! construction and normalized eagerly.

pub mod graded;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod unipoly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A commutative ℚ-algebra usable as a coefficient ring.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Image of a rational number under the structure map ℚ → Self.
    fn from_rational(q: &Rational) -> Self;

    /// Multiplicative inverse when `self` is a unit.
    fn unit_inverse(&self) -> Option<Self>;

    fn scale(&self, q: &Rational) -> Self {
        self.clone() * Self::from_rational(q)
    }

    fn pow_u(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A [`Coeff`] in which every nonzero element is invertible.
pub trait Field: Coeff + Div<Output = Self> {}

impl Coeff for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
}

impl Field for Rational {}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * int(n - i) / int(i + 1);
    }
    acc
}

/// Generalized binomial coefficient C(alpha, k) for rational `alpha`.
pub fn binomial_rational(alpha: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (alpha - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Canonical text of a rational: `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
