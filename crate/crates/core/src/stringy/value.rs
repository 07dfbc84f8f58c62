//! Exact fractions with an adjoined root of `L` (or of `uv`).

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::k0::LEFSCHETZ;
use crate::ring::poly::MultiPoly;
use crate::ring::unipoly::UniPoly;
use crate::ring::{Error, Rational, Result};

/// Name of the adjoined root.
pub const ROOT: &str = "t";

/// Which ring the root is adjoined to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// K₀ with atoms; `t^r = L`.
    K0,
    /// E-polynomials in `u, v`; `t^r = uv`.
    Hodge,
}

/// `numerator / denominator` with `numerator` a polynomial in `t` and
/// other variables, `denominator` a polynomial in `t` alone, and `t^r`
/// identified with `L` or `uv`.
///
/// Canonical form: `L` never appears (it is rewritten to `t^r`), in Hodge
/// mode no monomial contains both `u` and `v`, the gcd of the denominator
/// with all `t`-coefficient polynomials of the numerator is 1 and the
/// denominator is monic. Equality lifts both sides to a common root index.
#[derive(Clone, Debug)]
pub struct RootFraction {
    realization: Realization,
    r: u32,
    numerator: MultiPoly,
    denominator: UniPoly<Rational>,
}

impl RootFraction {
    pub fn new(realization: Realization, r: u32, numerator: MultiPoly, denominator: UniPoly<Rational>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("root index must be positive"));
        }
        if denominator.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let numerator = rewrite(realization, r, &numerator);
        Ok(Self::reduced(realization, r, numerator, denominator))
    }

    pub fn from_poly(realization: Realization, r: u32, p: MultiPoly) -> Result<Self> {
        Self::new(realization, r, p, UniPoly::one())
    }

    fn reduced(realization: Realization, r: u32, numerator: MultiPoly, denominator: UniPoly<Rational>) -> Self {
        let groups = group_by_cofactor(&numerator);
        let g = groups.values().fold(denominator.clone(), |g, p| g.gcd(p));
        let lead = g.leading().cloned().unwrap_or_else(Rational::one);
        let g = if g.is_zero() { UniPoly::one() } else { g.scale(&lead.recip()) };
        let den = denominator.div_exact(&g).expect("gcd divides");
        let scale = den.leading().expect("nonzero").recip();
        let den = den.scale(&scale);
        let mut num = MultiPoly::zero();
        for (cofactor, p) in groups {
            let q = p.div_exact(&g).expect("gcd divides").scale(&scale);
            let powers: Vec<(&str, u32)> = cofactor.iter().map(|(v, e)| (v.as_str(), *e)).collect();
            num = &num + &(&q.to_multi(ROOT) * &MultiPoly::monomial(Rational::one(), &powers));
        }
        RootFraction { realization, r, numerator: num, denominator: den }
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    pub fn root_index(&self) -> u32 {
        self.r
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &UniPoly<Rational> {
        &self.denominator
    }

    /// Same value with root index `r * k` (so `t -> t^k`).
    pub fn lift(&self, new_r: u32) -> Result<Self> {
        if !new_r.is_multiple_of(self.r) {
            return Err(Error::invalid(format!("cannot lift root index {} to {new_r}", self.r)));
        }
        let k = new_r / self.r;
        if k == 1 {
            return Ok(self.clone());
        }
        let t_k = MultiPoly::var(ROOT).pow(k);
        Ok(RootFraction {
            realization: self.realization,
            r: new_r,
            numerator: self.numerator.substitute(ROOT, &t_k),
            denominator: self.denominator.inflate(k as usize),
        })
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.realization != other.realization {
            return Err(Error::invalid("cannot combine K₀ and E-polynomial values"));
        }
        let r = self.r.lcm(&other.r);
        Ok((self.lift(r)?, other.lift(r)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let num = &(&a.numerator * &b.denominator.to_multi(ROOT)) + &(&b.numerator * &a.denominator.to_multi(ROOT));
        RootFraction::new(a.realization, a.r, num, a.denominator.mul(&b.denominator))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        RootFraction::new(a.realization, a.r, &a.numerator * &b.numerator, a.denominator.mul(&b.denominator))
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.degree() == Some(0)
    }

    /// Value with `t` expressed back through `L` or `uv` when `r = 1`.
    pub fn numerator_display(&self) -> MultiPoly {
        self.unroot(&self.numerator)
    }

    pub fn denominator_display(&self) -> MultiPoly {
        self.unroot(&self.denominator.to_multi(ROOT))
    }

    fn unroot(&self, p: &MultiPoly) -> MultiPoly {
        if self.r != 1 {
            return p.clone();
        }
        let base = match self.realization {
            Realization::K0 => MultiPoly::var(LEFSCHETZ),
            Realization::Hodge => &MultiPoly::var("u") * &MultiPoly::var("v"),
        };
        p.substitute(ROOT, &base)
    }

    /// `t^r = L` or `t^r = u*v`.
    pub fn relation(&self) -> String {
        let base = match self.realization {
            Realization::K0 => LEFSCHETZ,
            Realization::Hodge => "u*v",
        };
        if self.r == 1 {
            format!("{ROOT} = {base}")
        } else {
            format!("{ROOT}^{} = {base}", self.r)
        }
    }
}

impl PartialEq for RootFraction {
    fn eq(&self, other: &Self) -> bool {
        match self.common(other) {
            Ok((a, b)) => a.numerator == b.numerator && a.denominator == b.denominator,
            Err(_) => false,
        }
    }
}

impl fmt::Display for RootFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator_display();
        if self.is_polynomial() {
            write!(f, "{num}")?;
        } else if num.num_terms() <= 1 {
            write!(f, "{num}/({})", self.denominator_display())?;
        } else {
            write!(f, "({num})/({})", self.denominator_display())?;
        }
        if self.r != 1 {
            write!(f, " [{}]", self.relation())?;
        }
        Ok(())
    }
}

/// Canonical numerator: `L -> t^r`, or `u^a v^b -> u^{a-m} v^{b-m} t^{rm}`.
fn rewrite(realization: Realization, r: u32, p: &MultiPoly) -> MultiPoly {
    match realization {
        Realization::K0 => p.substitute(LEFSCHETZ, &MultiPoly::var(ROOT).pow(r)),
        Realization::Hodge => {
            if !p.has_var("u") || !p.has_var("v") {
                return p.clone();
            }
            let mut out = MultiPoly::zero();
            for (mono, c) in p.named_terms() {
                let exp = |name: &str| mono.iter().find(|(v, _)| *v == name).map_or(0, |(_, e)| *e);
                let m = exp("u").min(exp("v"));
                let powers: Vec<(&str, u32)> = mono
                    .iter()
                    .map(|(v, e)| match *v {
                        "u" | "v" => (*v, e - m),
                        _ => (*v, *e),
                    })
                    .chain(std::iter::once((ROOT, r * m)))
                    .collect();
                out = &out + &MultiPoly::monomial(c.clone(), &powers);
            }
            out
        }
    }
}

/// Split a polynomial as `Σ cofactor · p(t)` with cofactors free of `t`.
fn group_by_cofactor(p: &MultiPoly) -> BTreeMap<Vec<(String, u32)>, UniPoly<Rational>> {
    let mut coeffs: BTreeMap<Vec<(String, u32)>, Vec<Rational>> = BTreeMap::new();
    for (mono, c) in p.named_terms() {
        let mut t_exp = 0usize;
        let mut rest = Vec::new();
        for (v, e) in mono {
            if v == ROOT {
                t_exp = e as usize;
            } else {
                rest.push((v.to_string(), e));
            }
        }
        let slot = coeffs.entry(rest).or_default();
        if slot.len() <= t_exp {
            slot.resize(t_exp + 1, Rational::zero());
        }
        slot[t_exp] = c.clone();
    }
    coeffs.into_iter().map(|(k, v)| (k, UniPoly::new(v))).collect()
}

/// `t^n - 1`.
pub(crate) fn t_power_minus_one(n: u32) -> UniPoly<Rational> {
    UniPoly::monomial(Rational::one(), n as usize).sub(&UniPoly::one())
}
