//! Brute-force motivic integrals of monomial divisors on affine space.
//!
//! An arc in `ℂ^d` truncated at order `n` is a tuple of coefficient vectors
//! `(c_{i,0}, ..., c_{i,n})`. The condition `ord(x_i) = k` fixes
//! `c_{i,0} = ... = c_{i,k-1} = 0` and `c_{i,k} ≠ 0`, contributing
//! `(L - 1) L^{n-k}`; the set `{ord(E) = p}` for `E = Σ a_i {x_i = 0}` is the
//! disjoint union over `Σ a_i k_i = p`. Classes are normalized by `L^{-nd}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::k0::{AtomTable, K0Class};
use crate::ring::poly::MultiPoly;
use crate::ring::unipoly::UniPoly;
use crate::ring::{fmt_rational, int, Error, Rational, Result};
use crate::stringy::{self, Component, Flavor, Realization, ResolutionDatum, RootFraction, ROOT};

pub const MAX_DIMENSION: usize = 4;
pub const MAX_LEVEL: u32 = 64;

/// Laurent polynomial in `L`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Laurent(BTreeMap<i64, Rational>);

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Laurent(m)
    }

    /// `L^e`.
    pub fn power(e: i64) -> Self {
        Self::monomial(Rational::one(), e)
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (e, c) in &other.0 {
            let slot = out.entry(*e).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                out.remove(e);
            }
        }
        Laurent(out)
    }

    pub fn neg(&self) -> Self {
        Laurent(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                out = out.add(&Laurent::monomial(c1 * c2, e1 + e2));
            }
        }
        out
    }

    /// `L^shift * p(L)` with `p` a polynomial.
    pub fn split(&self) -> (i64, UniPoly<Rational>) {
        let shift = self.min_exponent().unwrap_or(0);
        let len = self.max_exponent().map_or(0, |m| (m - shift + 1) as usize);
        let mut coeffs = vec![Rational::zero(); len];
        for (e, c) in &self.0 {
            coeffs[(e - shift) as usize] = c.clone();
        }
        (shift, UniPoly::new(coeffs))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().rev().enumerate() {
            let neg = *c < Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coeff = fmt_rational(&abs);
            match *e {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if *e == 1 {
                        write!(f, "L")?;
                    } else {
                        write!(f, "L^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// Monomial divisor `Σ a_i {x_i = 0}` on `ℂ^d`, looked at through jets of
/// order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSpec {
    exponents: Vec<u32>,
    level: u32,
}

impl JetSpec {
    pub fn new(exponents: Vec<u32>, level: u32) -> Result<Self> {
        if exponents.is_empty() || exponents.len() > MAX_DIMENSION {
            return Err(Error::invalid(format!("dimension must be between 1 and {MAX_DIMENSION}")));
        }
        if level > MAX_LEVEL {
            return Err(Error::invalid(format!("jet level must be at most {MAX_LEVEL}")));
        }
        Ok(JetSpec { exponents, level })
    }

    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn at_level(&self, level: u32) -> Result<Self> {
        Self::new(self.exponents.clone(), level)
    }
}

/// `[L_n(ℂ^d)] = L^{d(n+1)}`.
pub fn jet_space_class(spec: &JetSpec) -> Laurent {
    Laurent::power(spec.dimension() as i64 * (spec.level as i64 + 1))
}

/// All `(k_i)` with `Σ a_i k_i = p` (`k_i = 0` where `a_i = 0`).
fn order_patterns(exponents: &[u32], p: u32) -> Vec<Vec<u32>> {
    fn go(exponents: &[u32], rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&a, tail)) = exponents.split_first() else {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        let max_k = rest.checked_div(a).unwrap_or(0);
        for k in 0..=max_k {
            prefix.push(k);
            go(tail, rest - a * k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(exponents, p, &mut Vec::new(), &mut out);
    out
}

/// Measure of `{ord(E) = p}`, counted at the level of `spec`.
pub fn cylinder_measure(spec: &JetSpec, p: u32) -> Result<Laurent> {
    let n = spec.level as i64;
    let d = spec.dimension() as i64;
    let l_minus_one = Laurent::power(1).sub(&Laurent::power(0));
    let mut class = Laurent::zero();
    for pattern in order_patterns(&spec.exponents, p) {
        let mut term = Laurent::power(0);
        for (a, k) in spec.exponents.iter().zip(&pattern) {
            if *a == 0 {
                term = term.mul(&Laurent::power(n + 1));
            } else if *k as i64 > n {
                return Err(Error::invalid(format!(
                    "order {p} needs jets beyond level {n}; the count has not stabilized"
                )));
            } else {
                term = term.mul(&l_minus_one).mul(&Laurent::power(n - *k as i64));
            }
        }
        class = class.add(&term);
    }
    Ok(class.mul(&Laurent::power(-n * d)))
}

/// `∏_{a_i > 0} (L-1) L^{a_i+1} / (L^{a_i+1} - 1) · L^{#{a_i = 0}}`.
pub fn closed_integral(exponents: &[u32]) -> Result<RootFraction> {
    let mut num = MultiPoly::one();
    let mut den = UniPoly::one();
    let t = MultiPoly::var(ROOT);
    for &a in exponents {
        if a == 0 {
            num = &num * &t;
        } else {
            num = &(&num * &(&t - &MultiPoly::one())) * &t.pow(a + 1);
            den = den.mul(&UniPoly::monomial(int(1), a as usize + 1).sub(&UniPoly::one()));
        }
    }
    RootFraction::new(Realization::K0, 1, num, den)
}

/// Resolution datum of `(ℂ^d, Σ a_i {x_i = 0})` with the coordinate
/// hyperplanes of positive multiplicity as components.
pub fn coordinate_datum(exponents: &[u32]) -> Result<ResolutionDatum> {
    let d = exponents.len() as u32;
    let active: Vec<usize> = (0..exponents.len()).filter(|i| exponents[*i] > 0).collect();
    let m = active.len();
    let components = active.iter().map(|i| Component::new(&format!("x{}", i + 1), int(exponents[*i] as i64))).collect();
    let strata = (0..1usize << m)
        .map(|mask| {
            let names = (0..m).filter(|j| mask & (1 << j) != 0).map(|j| format!("x{}", active[j] + 1)).collect();
            let free = K0Class::affine(d - m as u32);
            let torus = K0Class::lefschetz() - K0Class::point();
            (names, &free * &torus.pow(m as u32 - mask.count_ones()))
        })
        .collect();
    ResolutionDatum::new(Flavor::Arc, 1, components, strata, AtomTable::new())
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    /// `Σ_{p <= p_max} μ(ord E = p) L^{-p}`.
    pub partial: Laurent,
    /// Exact geometric-series sum.
    pub closed: RootFraction,
    /// `closed` agrees with the stringy integral of the coordinate datum.
    pub matches_stringy: bool,
    /// Every measure is unchanged when counted five levels higher.
    pub stabilized: bool,
    /// `L^d - Σ_{p <= p_max} μ_p` and `closed - partial` have no terms
    /// above the order forced by the omitted cylinders.
    pub tails_small: bool,
    pub verdict: bool,
}

/// Largest `L`-exponent of the expansion at `L = ∞` of `value - partial`;
/// `None` if they are equal.
fn tail_degree(value: &RootFraction, partial: &Laurent) -> Option<i64> {
    let (shift, poly) = partial.split();
    let den = value.denominator().to_multi(ROOT);
    let num = value.numerator();
    let shifted_partial = poly.to_multi(ROOT);
    // value - L^shift p = (num - L^shift p den) / den
    let (num_scaled, rest) = if shift >= 0 {
        (num.clone(), &(&shifted_partial * &MultiPoly::var(ROOT).pow(shift as u32)) * &den)
    } else {
        (num * &MultiPoly::var(ROOT).pow((-shift) as u32), &shifted_partial * &den)
    };
    let diff = &num_scaled - &rest;
    if diff.is_zero() {
        return None;
    }
    let extra = if shift < 0 { shift } else { 0 };
    Some(diff.degree_in(ROOT) as i64 - value.denominator().degree().unwrap_or(0) as i64 + extra)
}

pub fn oracle_integral(spec: &JetSpec, p_max: u32) -> Result<OracleReport> {
    let d = spec.dimension() as i64;
    let higher = spec.at_level((spec.level + 5).min(MAX_LEVEL))?;
    let mut partial = Laurent::zero();
    let mut mass = Laurent::zero();
    let mut stabilized = true;
    for p in 0..=p_max {
        let mu = cylinder_measure(spec, p)?;
        stabilized &= cylinder_measure(&higher, p)? == mu;
        mass = mass.add(&mu);
        partial = partial.add(&mu.mul(&Laurent::power(-(p as i64))));
    }
    let closed = closed_integral(&spec.exponents)?;
    let matches_stringy = stringy::motivic_integral(&coordinate_datum(&spec.exponents)?)? == closed;

    // Omitted cylinders have Σ a_i k_i > p_max, hence Σ k_i >= ceil((p_max+1)/a_max).
    let a_max = spec.exponents.iter().copied().max().unwrap_or(0) as i64;
    let p1 = p_max as i64 + 1;
    let tails_small = if a_max == 0 {
        mass == Laurent::power(d) && tail_degree(&closed, &partial).is_none()
    } else {
        let min_orders = (p1 + a_max - 1) / a_max;
        let mass_tail = Laurent::power(d).sub(&mass);
        let mass_ok = mass_tail.max_exponent().is_none_or(|e| e <= d - min_orders);
        let integral_ok = tail_degree(&closed, &partial).is_none_or(|e| e <= d - min_orders - p1);
        mass_ok && integral_ok
    };
    let verdict = matches_stringy && stabilized && tails_small;
    Ok(OracleReport { partial, closed, matches_stringy, stabilized, tails_small, verdict })
}
