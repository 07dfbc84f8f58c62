//! Towers `... -> X_{n+1} -> X_n -> ...` whose projections have constant
//! fiber data, and the induced proalgebraic Euler and Grothendieck values.
//!
//! Levels start at `base_level` (1 for towers indexed by positive integers,
//! 0 for arc spaces). The value at level `n` divides by the fiber data of
//! all projections `X_{k+1} -> X_k` with `base_level <= k < n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::K0Class;
use crate::ring::poly::MultiPoly;
use crate::ring::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq)]
enum Factors {
    Euler(Vec<BigInt>),
    Classes(Vec<K0Class>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TowerDatum {
    base_level: u32,
    factors: Factors,
    /// The last listed factor repeats at every later level.
    repeat_last: bool,
}

impl TowerDatum {
    /// Euler numbers `e_{base}, e_{base+1}, ...` of the successive fibers.
    pub fn euler(base_level: u32, e: Vec<BigInt>) -> Result<Self> {
        if e.iter().any(Zero::is_zero) {
            return Err(Error::invalid("tower Euler numbers must be nonzero"));
        }
        Ok(TowerDatum { base_level, factors: Factors::Euler(e), repeat_last: false })
    }

    pub fn constant_euler(base_level: u32, e: BigInt) -> Result<Self> {
        let mut t = Self::euler(base_level, vec![e])?;
        t.repeat_last = true;
        Ok(t)
    }

    /// Fiber classes `γ_{base}, γ_{base+1}, ...`.
    pub fn classes(base_level: u32, gamma: Vec<K0Class>) -> Self {
        TowerDatum { base_level, factors: Factors::Classes(gamma), repeat_last: false }
    }

    pub fn constant_class(base_level: u32, gamma: K0Class) -> Self {
        TowerDatum { base_level, factors: Factors::Classes(vec![gamma]), repeat_last: true }
    }

    /// Arc space of a smooth variety of dimension `d`: fibers `L^d`, from level 0.
    pub fn smooth_arcs(d: u32) -> Self {
        Self::constant_class(0, K0Class::affine(d))
    }

    pub fn base_level(&self) -> u32 {
        self.base_level
    }

    fn index(&self, k: u32, len: usize) -> Result<usize> {
        let i = (k - self.base_level) as usize;
        if i < len {
            Ok(i)
        } else if self.repeat_last && len > 0 {
            Ok(len - 1)
        } else {
            Err(Error::invalid(format!("tower has no fiber data for level {k}")))
        }
    }

    fn check_level(&self, n: u32) -> Result<()> {
        if n < self.base_level {
            return Err(Error::invalid(format!("level {n} is below the base level {}", self.base_level)));
        }
        Ok(())
    }
}

/// `χ(α_n) / (e_{base} ⋯ e_{n-1})`.
pub fn pro_euler(tower: &TowerDatum, n: u32, chi_alpha_n: &BigInt) -> Result<Rational> {
    tower.check_level(n)?;
    let Factors::Euler(e) = &tower.factors else {
        return Err(Error::invalid("tower carries fiber classes, not Euler numbers"));
    };
    let mut denominator = BigInt::one();
    for k in tower.base_level..n {
        denominator *= &e[tower.index(k, e.len())?];
    }
    Ok(Rational::new(chi_alpha_n.clone(), denominator))
}

/// Formal quotient `numerator / (γ_1 ⋯ γ_m)` in localized K₀.
#[derive(Clone, Debug, PartialEq)]
pub struct ProClass {
    pub numerator: K0Class,
    /// Factors that did not cancel.
    pub denominator: Vec<K0Class>,
}

impl ProClass {
    pub fn is_reduced_to_class(&self) -> bool {
        self.denominator.is_empty()
    }
}

impl fmt::Display for ProClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        let den: Vec<String> = self.denominator.iter().map(|d| format!("({d})")).collect();
        write!(f, "({})/({})", self.numerator, den.join("*"))
    }
}

/// Exponents of a monic monomial, or `None`.
fn monic_monomial(p: &MultiPoly) -> Option<Vec<(String, u32)>> {
    let terms = p.named_terms();
    match terms.as_slice() {
        [(mono, c)] if c.is_one() => Some(mono.iter().map(|(v, e)| (v.to_string(), *e)).collect()),
        _ => None,
    }
}

/// `p / m` when every term of `p` is divisible by the monic monomial `m`.
fn divide_by_monomial(p: &MultiPoly, m: &[(String, u32)]) -> Option<MultiPoly> {
    let mut out = MultiPoly::zero();
    for (mono, c) in p.named_terms() {
        let mut powers: Vec<(&str, u32)> = mono.clone();
        for (v, e) in m {
            let slot = powers.iter_mut().find(|(name, _)| name == v)?;
            slot.1 = slot.1.checked_sub(*e)?;
        }
        out = &out + &MultiPoly::monomial(c.clone(), &powers);
    }
    Some(out)
}

/// `Γ(α_n) / (γ_{base} ⋯ γ_{n-1})`, cancelling monomial factors that
/// divide the numerator.
pub fn pro_grothendieck(tower: &TowerDatum, n: u32, gamma_alpha_n: &K0Class) -> Result<ProClass> {
    tower.check_level(n)?;
    let Factors::Classes(gamma) = &tower.factors else {
        return Err(Error::invalid("tower carries Euler numbers, not fiber classes"));
    };
    let mut numerator = gamma_alpha_n.as_poly().clone();
    let mut denominator = Vec::new();
    for k in tower.base_level..n {
        let g = &gamma[tower.index(k, gamma.len())?];
        let quotient = monic_monomial(g.as_poly()).and_then(|m| divide_by_monomial(&numerator, &m));
        match quotient {
            Some(q) => numerator = q,
            None => denominator.push(g.clone()),
        }
    }
    Ok(ProClass { numerator: K0Class::from_poly(numerator)?, denominator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn euler_towers() {
        let two = TowerDatum::constant_euler(1, BigInt::from(2)).unwrap();
        for n in 1..10u32 {
            assert_eq!(pro_euler(&two, n, &BigInt::from(2).pow(n)).unwrap(), int(2));
        }
        assert_eq!(pro_euler(&two, 1, &BigInt::from(7)).unwrap(), int(7));
        let three = TowerDatum::constant_euler(1, BigInt::from(3)).unwrap();
        assert_eq!(pro_euler(&three, 2, &BigInt::from(9)).unwrap(), int(3));
        assert!(TowerDatum::euler(1, vec![BigInt::from(0)]).is_err());
        let short = TowerDatum::euler(1, vec![BigInt::from(2)]).unwrap();
        assert!(pro_euler(&short, 3, &BigInt::from(8)).is_err());
    }

    #[test]
    fn class_towers() {
        let x = K0Class::atom("X");
        let arcs = TowerDatum::smooth_arcs(2);
        for n in 0..5 {
            let level = &x * &K0Class::affine(2 * n);
            let v = pro_grothendieck(&arcs, n, &level).unwrap();
            assert_eq!(v, ProClass { numerator: x.clone(), denominator: vec![] });
        }
        let t = TowerDatum::constant_class(1, K0Class::affine(2));
        assert_eq!(pro_grothendieck(&t, 2, &K0Class::affine(5)).unwrap().numerator, K0Class::affine(3));
        assert_eq!(pro_grothendieck(&t, 1, &K0Class::affine(5)).unwrap().numerator, K0Class::affine(5));
        let p1 = TowerDatum::constant_class(1, K0Class::projective(1));
        let v = pro_grothendieck(&p1, 3, &K0Class::projective(1).pow(3)).unwrap();
        assert_eq!(v.denominator.len(), 2);
        assert_eq!(v.to_string(), "(1 + 3*L + 3*L^2 + L^3)/((1 + L)*(1 + L))");
    }
}
