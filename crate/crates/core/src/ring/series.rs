use std::fmt;

use num_traits::One;

use super::poly::MultiPoly;
use super::{int, Coeff, Error, Rational, Result};

/// Truncated univariate power series `c_0 + c_1 z + ... + c_N z^N`.
///
/// Invariant: exactly `N + 1` stored coefficients. No operation ever reads
/// or produces information beyond `z^N`; binary operations on series of
/// different order work at the smaller order.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<C> {
    var: String,
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncSeries<C> {
    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn new(var: &str, mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        TruncSeries { var: var.to_string(), coeffs }
    }

    pub fn from_fn(var: &str, order: usize, f: impl FnMut(usize) -> C) -> Self {
        TruncSeries { var: var.to_string(), coeffs: (0..=order).map(f).collect() }
    }

    pub fn zero(var: &str, order: usize) -> Self {
        Self::new(var, Vec::new(), order)
    }

    pub fn constant(var: &str, c: C, order: usize) -> Self {
        Self::new(var, vec![c], order)
    }

    pub fn one(var: &str, order: usize) -> Self {
        Self::constant(var, C::one(), order)
    }

    /// The series `z`.
    pub fn variable(var: &str, order: usize) -> Self {
        Self::new(var, vec![C::zero(), C::one()], order)
    }

    /// `exp(a z)` for a coefficient `a`.
    pub fn exp_linear(var: &str, a: &C, order: usize) -> Self {
        let mut c = C::one();
        let mut out = Vec::with_capacity(order + 1);
        for k in 0..=order {
            out.push(c.clone());
            c = c * a.clone() * C::from_rational(&Rational::new(1.into(), (k as i64 + 1).into()));
        }
        Self::new(var, out, order)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(&self.var, self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries { var: self.var.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(&self.var, n, |k| self.coeffs[k].clone() + other.coeffs[k].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(&self.var, n, |k| self.coeffs[k].clone() - other.coeffs[k].clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncSeries { var: self.var.clone(), coeffs: out }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(|a| a.scale(q))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.var, self.order());
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

    /// `f(a z)`.
    pub fn rescale(&self, a: &C) -> Self {
        let mut p = C::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * p.clone());
            p = p * a.clone();
        }
        TruncSeries { var: self.var.clone(), coeffs: out }
    }

    /// `outer(inner(z))` through the common order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(format!("{:?}", inner.constant_term())));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(&self.var, self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<Self> {
        let b0 = self
            .constant_term()
            .unit_inverse()
            .ok_or_else(|| Error::NonUnit(format!("{:?}", self.constant_term())))?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(b0.clone());
        for m in 1..=n {
            let mut s = C::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s = s + self.coeffs[k].clone() * out[m - k].clone();
                }
            }
            out.push(-(b0.clone() * s));
        }
        Ok(TruncSeries { var: self.var.clone(), coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        Self::from_fn(&self.var, n, |k| {
            if k < n {
                self.coeffs[k + 1].scale(&int(k as i64 + 1))
            } else {
                C::zero()
            }
        })
    }

    /// Antiderivative with zero constant term (the top coefficient of the
    /// input is not needed and is dropped).
    pub fn integral(&self) -> Self {
        Self::from_fn(&self.var, self.order(), |k| {
            if k == 0 {
                C::zero()
            } else {
                self.coeffs[k - 1].scale(&Rational::new(1.into(), (k as i64).into()))
            }
        })
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(format!("{:?}", self.constant_term())));
        }
        let n = self.order();
        let mut g: Vec<C> = Vec::with_capacity(n + 1);
        g.push(C::one());
        // m g_m = sum_{k=1}^m k f_k g_{m-k}
        for m in 1..=n {
            let mut s = C::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s = s + self.coeffs[k].scale(&int(k as i64)) * g[m - k].clone();
                }
            }
            g.push(s.scale(&Rational::new(1.into(), (m as i64).into())));
        }
        Ok(TruncSeries { var: self.var.clone(), coeffs: g })
    }

    /// `log(f)` for `f` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnit(format!(
                "log needs constant term 1, got {:?}",
                self.constant_term()
            )));
        }
        Ok(self.derivative().div(self)?.integral())
    }

    /// `f(z) / z` for `f` with zero constant term; loses one order.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(format!("{:?}", self.constant_term())));
        }
        let n = self.order();
        Ok(Self::new(&self.var, self.coeffs[1..].to_vec(), n.saturating_sub(1)))
    }

    /// `z^k f(z)`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut v = vec![C::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(&self.var, v, self.order())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl TruncSeries<MultiPoly> {
    /// Substitute a rational value for a parameter in every coefficient.
    pub fn eval_param(&self, var: &str, value: &Rational) -> TruncSeries<MultiPoly> {
        self.map(|c| c.eval(var, value))
    }

    /// Coefficientwise view over ℚ, if every coefficient is constant.
    pub fn to_rational(&self) -> Option<TruncSeries<Rational>> {
        let coeffs: Option<Vec<Rational>> = self.coeffs.iter().map(|c| c.as_constant()).collect();
        coeffs.map(|c| TruncSeries { var: self.var.clone(), coeffs: c })
    }

    /// The series as the polynomial `sum c_k var^k`.
    pub fn to_poly(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &(c * &MultiPoly::monomial(Rational::one(), &[(self.var.as_str(), k as u32)]));
        }
        acc
    }

    pub fn from_poly(p: &MultiPoly, var: &str, order: usize) -> Self {
        Self::from_fn(var, order, |k| p.coeff_of(var, k as u32))
    }
}

impl TruncSeries<Rational> {
    pub fn to_poly_series(&self) -> TruncSeries<MultiPoly> {
        self.map(|c| MultiPoly::constant(c.clone()))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*{}", c, self.var)?,
                _ => write!(f, "({})*{}^{}", c, self.var, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncSeries")
            .field("var", &self.var)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}
