use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::MultiPoly;
use super::{int, Error, Rational, Result};

/// A variable of a [`GradedRing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVar {
    pub name: String,
    pub weight: u32,
    /// `name^(max_exp + 1) = 0` when set.
    pub max_exp: Option<u32>,
}

/// Truncated graded polynomial ring used as the ambient ring for
/// characteristic-class computations.
///
/// Elements are plain [`MultiPoly`] values; this type only knows how to
/// reduce them. Reduction kills every monomial of weighted degree above
/// `max_degree`, every monomial exceeding a per-variable nilpotency bound,
/// and cancels declared inverse pairs (`a*b = 1`). Variables that are not
/// declared (parameters such as `y`) have weight 0 and no bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    vars: Vec<GradedVar>,
    max_degree: u32,
    inverse_pairs: Vec<(String, String)>,
}

impl GradedRing {
    pub fn new(max_degree: u32) -> Self {
        GradedRing { vars: Vec::new(), max_degree, inverse_pairs: Vec::new() }
    }

    pub fn with_var(mut self, name: &str, weight: u32, max_exp: Option<u32>) -> Self {
        self.vars.retain(|v| v.name != name);
        self.vars.push(GradedVar { name: name.to_string(), weight, max_exp });
        self
    }

    /// Declare `a * b = 1`.
    pub fn with_inverse_pair(mut self, a: &str, b: &str) -> Self {
        self.inverse_pairs.push((a.to_string(), b.to_string()));
        self
    }

    /// Generic Chern-class ring: `c1..c_rank` of weights `1..rank`.
    pub fn chern(prefix: &str, rank: u32, max_degree: u32) -> Self {
        (1..=rank).fold(GradedRing::new(max_degree), |r, i| r.with_var(&format!("{prefix}{i}"), i, None))
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn vars(&self) -> &[GradedVar] {
        &self.vars
    }

    pub fn weight(&self, name: &str) -> u32 {
        self.vars.iter().find(|v| v.name == name).map_or(0, |v| v.weight)
    }

    fn max_exp(&self, name: &str) -> Option<u32> {
        self.vars.iter().find(|v| v.name == name).and_then(|v| v.max_exp)
    }

    /// Weighted degree of a monomial given by name/exponent pairs.
    pub fn monomial_degree(&self, mono: &[(&str, u32)]) -> u32 {
        mono.iter().map(|(v, e)| self.weight(v) * e).sum()
    }

    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let vars: Vec<String> = p.vars().to_vec();
        let weights: Vec<u32> = vars.iter().map(|v| self.weight(v)).collect();
        let caps: Vec<Option<u32>> = vars.iter().map(|v| self.max_exp(v)).collect();
        let pairs: Vec<(usize, usize)> = self
            .inverse_pairs
            .iter()
            .filter_map(|(a, b)| {
                let ia = vars.iter().position(|v| v == a)?;
                let ib = vars.iter().position(|v| v == b)?;
                Some((ia, ib))
            })
            .collect();
        let mut changed = false;
        let mut out: Vec<(Vec<u32>, Rational)> = Vec::with_capacity(p.num_terms());
        for (exps, c) in p.terms() {
            let mut exps = exps.to_vec();
            for &(a, b) in &pairs {
                let m = exps[a].min(exps[b]);
                if m > 0 {
                    exps[a] -= m;
                    exps[b] -= m;
                    changed = true;
                }
            }
            let deg: u32 = exps.iter().zip(&weights).map(|(e, w)| e * w).sum();
            let capped = exps.iter().zip(&caps).any(|(e, cap)| cap.is_some_and(|m| *e > m));
            if deg > self.max_degree || capped {
                changed = true;
                continue;
            }
            out.push((exps, c.clone()));
        }
        if !changed {
            return p.clone();
        }
        MultiPoly::from_raw(vars, out)
    }

    pub fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, a: &MultiPoly, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
        items.into_iter().fold(MultiPoly::one(), |acc, x| self.mul(&acc, x))
    }

    /// Longest possible chain of nonzero products of nilpotent elements.
    fn nilpotency_bound(&self) -> u32 {
        self.max_degree + self.vars.iter().filter_map(|v| v.max_exp).sum::<u32>() + 1
    }

    /// Sum of `x^j * coeff(j)` over `j` until the powers of `x` vanish; fails
    /// if `x` is not nilpotent.
    fn nilpotent_series(&self, x: &MultiPoly, coeff: impl Fn(u32) -> Rational) -> Result<MultiPoly> {
        let x = self.reduce(x);
        let mut acc = MultiPoly::constant(coeff(0));
        let mut power = MultiPoly::one();
        for j in 1..=self.nilpotency_bound() + 1 {
            power = self.mul(&power, &x);
            if power.is_zero() {
                return Ok(acc);
            }
            acc = &acc + &power.scale(&coeff(j));
        }
        Err(Error::invalid(format!("element {x} is not nilpotent in the ambient ring")))
    }

    /// `exp(x)` for nilpotent `x`.
    pub fn exp(&self, x: &MultiPoly) -> Result<MultiPoly> {
        let mut fact = vec![Rational::from_integer(1.into())];
        for j in 1..=self.nilpotency_bound() + 1 {
            let next = fact.last().unwrap() / int(j as i64);
            fact.push(next);
        }
        self.nilpotent_series(x, |j| fact[j as usize].clone())
    }

    /// Inverse of `c + n` with `c` a nonzero rational and `n` nilpotent.
    pub fn inverse(&self, x: &MultiPoly) -> Result<MultiPoly> {
        let x = self.reduce(x);
        let c = x.constant_term();
        if c.is_zero() {
            return Err(Error::NonUnit(x.to_string()));
        }
        let cinv = c.recip();
        let n = (&x - &MultiPoly::constant(c)).scale(&cinv);
        let neg_n = -n;
        Ok(self.nilpotent_series(&neg_n, |_| int(1))?.scale(&cinv))
    }

    /// Homogeneous component of weighted degree `d`.
    pub fn degree_part(&self, p: &MultiPoly, d: u32) -> MultiPoly {
        let parts: Vec<(Vec<u32>, Rational)> = p
            .terms()
            .filter(|(e, _)| {
                let deg: u32 = e.iter().zip(p.vars()).map(|(e, v)| e * self.weight(v)).sum();
                deg == d
            })
            .map(|(e, c)| (e.to_vec(), c.clone()))
            .collect();
        MultiPoly::from_raw(p.vars().to_vec(), parts)
    }

    /// Split into homogeneous components by weighted degree.
    pub fn components(&self, p: &MultiPoly) -> BTreeMap<u32, MultiPoly> {
        (0..=self.max_degree)
            .map(|d| (d, self.degree_part(p, d)))
            .filter(|(_, q)| !q.is_zero())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_poly;

    #[test]
    fn truncation_and_nilpotency() {
        let r = GradedRing::new(2).with_var("h", 1, Some(2));
        let h = MultiPoly::var("h");
        assert!(r.pow(&h, 3).is_zero());
        let one_plus_h = &MultiPoly::one() + &h;
        assert_eq!(r.pow(&one_plus_h, 3), parse_poly("1 + 3*h + 3*h^2").unwrap());
    }

    #[test]
    fn parameters_are_unbounded() {
        let r = GradedRing::new(1).with_var("h", 1, None);
        let p = parse_poly("y^5*h + y^9 + h^2").unwrap();
        assert_eq!(r.reduce(&p), parse_poly("y^5*h + y^9").unwrap());
    }

    #[test]
    fn inverse_pairs_cancel() {
        let r = GradedRing::new(4).with_inverse_pair("y", "w");
        let p = parse_poly("y^3*w + w^2*y^2*q").unwrap();
        assert_eq!(r.reduce(&p), parse_poly("y^2 + q").unwrap());
    }

    #[test]
    fn exp_and_inverse() {
        let r = GradedRing::new(3).with_var("h", 1, Some(3));
        let e = r.exp(&MultiPoly::var("h")).unwrap();
        assert_eq!(e, parse_poly("1 + h + 1/2*h^2 + 1/6*h^3").unwrap());
        let inv = r.inverse(&parse_poly("2 + h").unwrap()).unwrap();
        assert_eq!(r.mul(&inv, &parse_poly("2 + h").unwrap()), MultiPoly::one());
        assert!(r.exp(&MultiPoly::var("y")).is_err());
    }
}
