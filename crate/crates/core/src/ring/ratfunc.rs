use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::unipoly::UniPoly;
use super::{Coeff, Error, Field, Rational, Result};

/// Quotient of two polynomials.
///
/// When numerator and denominator together involve at most one variable the
/// fraction is fully reduced (Euclidean gcd) and the denominator is monic,
/// which makes the representation unique. With several variables only the
/// leading coefficient of the denominator is normalized to 1; equality is
/// always decided by cross-multiplication, so it is exact in both cases.
#[derive(Clone)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction { num: p, den: MultiPoly::one() }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    /// The polynomial this fraction equals, if the denominator is constant.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        self.den.as_constant().map(|c| self.num.scale(&c.recip()))
    }

    fn normalize(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: MultiPoly::one() };
        }
        let mut vars: Vec<&String> = num.vars().iter().chain(den.vars().iter()).collect();
        vars.sort();
        vars.dedup();
        if vars.len() <= 1 {
            let name = vars.first().map(|s| s.as_str()).unwrap_or("x");
            let n = UniPoly::from_multi(&num, name).expect("univariate");
            let d = UniPoly::from_multi(&den, name).expect("univariate");
            let g = n.gcd(&d);
            let n = n.div_exact(&g).expect("gcd divides");
            let d = d.div_exact(&g).expect("gcd divides");
            let lead = d.leading().expect("nonzero").clone().recip();
            return RationalFunction {
                num: n.scale(&lead).to_multi(name),
                den: d.scale(&lead).to_multi(name),
            };
        }
        let lead = den.leading_coeff().expect("nonzero").recip();
        RationalFunction { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// Substitute a polynomial for a variable; fails if the denominator
    /// vanishes identically afterwards.
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Result<Self> {
        RationalFunction::new(self.num.substitute(var, value), self.den.substitute(var, value))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.num_terms() == 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self)
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::normalize(&self.num + &rhs.num, self.den);
        }
        Self::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for RationalFunction {
    type Output = Self;
    /// Panics on division by zero; use [`RationalFunction::recip`] to handle
    /// that case.
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction { num: -self.num, den: self.den }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::from_poly(MultiPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::from_poly(MultiPoly::one())
    }
}

impl From<MultiPoly> for RationalFunction {
    fn from(p: MultiPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl Coeff for RationalFunction {
    fn from_rational(q: &Rational) -> Self {
        RationalFunction::from_poly(MultiPoly::constant(q.clone()))
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.recip().ok()
    }
}

impl Field for RationalFunction {}
