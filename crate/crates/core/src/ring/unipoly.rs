use std::fmt;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::{Field, Rational};

/// Dense univariate polynomial over a field, lowest degree first.
///
/// Invariant: no trailing zero coefficient; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::new(vec![F::one()])
    }

    pub fn constant(c: F) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.leading().expect("division by zero polynomial").clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let c = rem[k + ddeg].clone() / dlead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = F::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Substitute `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        UniPoly::new(out)
    }
}

impl UniPoly<Rational> {
    /// Interpret a polynomial in at most the single variable `var`.
    pub fn from_multi(p: &MultiPoly, var: &str) -> Option<Self> {
        if p.vars().iter().any(|v| v != var) {
            return None;
        }
        let deg = p.degree_in(var) as usize;
        Some(UniPoly::new(
            (0..=deg).map(|k| p.coeff_of(var, k as u32).constant_term()).collect(),
        ))
    }

    pub fn to_multi(&self, var: &str) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &MultiPoly::monomial(c.clone(), &[(var, k as u32)]);
            }
        }
        acc
    }
}

impl fmt::Debug for UniPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_multi("x"))
    }
}

impl<F: Field> One for UniPoly<F> {
    fn one() -> Self {
        UniPoly::one()
    }
}

impl<F: Field> std::ops::Mul for UniPoly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        UniPoly::mul(&self, &rhs)
    }
}
