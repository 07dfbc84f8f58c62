use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_rational, is_negative, Coeff, Rational};

/// Sparse multivariate polynomial over ℚ with named variables.
///
/// The variable list is kept sorted and contains exactly the variables that
/// occur with a positive exponent in some term, so two equal polynomials
/// always have identical representations and `==` is structural. Binary
/// operations on polynomials over different variable sets work on the
/// union of the sets.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Vec::new(), q);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(super::int(n))
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Rational::one(), &[(name, 1)])
    }

    /// `coeff * x1^e1 * x2^e2 * ...`; repeated names multiply.
    pub fn monomial(coeff: Rational, powers: &[(&str, u32)]) -> Self {
        let vars: Vec<String> = powers.iter().map(|(v, _)| v.to_string()).collect();
        let exps: Vec<u32> = powers.iter().map(|(_, e)| *e).collect();
        Self::from_raw(vars, std::iter::once((exps, coeff)))
    }

    /// Build from an arbitrary (unsorted, possibly repeating) variable list
    /// and exponent vectors aligned with it. Duplicate monomials are summed.
    pub fn from_raw<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut sorted: Vec<String> = vars.clone();
        sorted.sort();
        sorted.dedup();
        let position: Vec<usize> = vars
            .iter()
            .map(|v| sorted.binary_search(v).expect("variable present"))
            .collect();
        let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
            if c.is_zero() {
                continue;
            }
            let mut key = vec![0u32; sorted.len()];
            for (i, e) in exps.iter().enumerate() {
                key[position[i]] += e;
            }
            add_term(&mut out, key, c);
        }
        Self::normalized(sorted, out)
    }

    fn normalized(vars: Vec<String>, mut terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|k| k[i] > 0))
            .collect();
        if used.iter().all(|u| *u) {
            return MultiPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        let new_vars = keep.iter().map(|&i| vars[i].clone()).collect();
        let new_terms = terms
            .into_iter()
            .map(|(k, c)| (keep.iter().map(|&i| k[i]).collect(), c))
            .collect();
        MultiPoly { vars: new_vars, terms: new_terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.var_index(name).is_some()
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    /// Raw terms: exponent vectors aligned with [`vars`](Self::vars).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    /// Terms with exponents keyed by variable name (zero exponents omitted).
    pub fn named_terms(&self) -> Vec<(Vec<(&str, u32)>, &Rational)> {
        self.terms
            .iter()
            .map(|(k, c)| {
                let mono = k
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| (self.vars[i].as_str(), *e))
                    .collect();
                (mono, c)
            })
            .collect()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.vars.is_empty() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        let zero_key = vec![0u32; self.vars.len()];
        self.terms.get(&zero_key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial given by name/exponent pairs.
    pub fn coeff_of_monomial(&self, powers: &[(&str, u32)]) -> Rational {
        let mut key = vec![0u32; self.vars.len()];
        for (v, e) in powers {
            if *e == 0 {
                continue;
            }
            match self.var_index(v) {
                Some(i) => key[i] += e,
                None => return Rational::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|k| k[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn min_degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|k| k[i]).min().unwrap_or(0),
            None => 0,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// The part of `self` in which `var` occurs to exactly the power `k`,
    /// with `var` removed.
    pub fn coeff_of(&self, var: &str, k: u32) -> MultiPoly {
        let Some(i) = self.var_index(var) else {
            return if k == 0 { self.clone() } else { MultiPoly::zero() };
        };
        let terms = self
            .terms
            .iter()
            .filter(|(key, _)| key[i] == k)
            .map(|(key, c)| {
                let mut key = key.clone();
                key[i] = 0;
                (key, c.clone())
            })
            .collect();
        Self::normalized(self.vars.clone(), terms)
    }

    pub fn scale(&self, q: &Rational) -> MultiPoly {
        if q.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        Coeff::pow_u(self, exp)
    }

    /// Replace `var` by `value` everywhere.
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> MultiPoly {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let max = self.degree_in(var);
        let mut powers = vec![MultiPoly::one()];
        for _ in 0..max {
            let next = powers.last().unwrap() * value;
            powers.push(next);
        }
        let mut by_power: BTreeMap<u32, BTreeMap<Vec<u32>, Rational>> = BTreeMap::new();
        for (key, c) in &self.terms {
            let mut rest = key.clone();
            let e = rest[i];
            rest[i] = 0;
            add_term(by_power.entry(e).or_default(), rest, c.clone());
        }
        let mut acc = MultiPoly::zero();
        for (e, terms) in by_power {
            let part = Self::normalized(self.vars.clone(), terms);
            acc = &acc + &(&part * &powers[e as usize]);
        }
        acc
    }

    pub fn eval(&self, var: &str, value: &Rational) -> MultiPoly {
        self.substitute(var, &MultiPoly::constant(value.clone()))
    }

    /// Rename a variable (merging with an existing variable of the new name).
    pub fn rename(&self, from: &str, to: &str) -> MultiPoly {
        if !self.has_var(from) {
            return self.clone();
        }
        let vars = self
            .vars
            .iter()
            .map(|v| if v == from { to.to_string() } else { v.clone() })
            .collect();
        Self::from_raw(vars, self.terms.iter().map(|(k, c)| (k.clone(), c.clone())))
    }

    /// Terms in canonical order: ascending total degree, then exponent
    /// vectors in descending lexicographic order over the sorted variables.
    pub fn canonical_terms(&self) -> Vec<(&[u32], &Rational)> {
        let mut v: Vec<(&[u32], &Rational)> = self.terms().collect();
        v.sort_by(|a, b| canonical_cmp(a.0, b.0));
        v
    }

    /// Highest term in the canonical order.
    pub fn leading_coeff(&self) -> Option<Rational> {
        self.canonical_terms().last().map(|(_, c)| (*c).clone())
    }

    /// Re-express over a superset of the variables.
    fn embedded(&self, vars: &[String]) -> BTreeMap<Vec<u32>, Rational> {
        if self.vars.as_slice() == vars {
            return self.terms.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut key = vec![0u32; vars.len()];
                for (i, e) in k.iter().enumerate() {
                    key[pos[i]] = *e;
                }
                (key, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, other: &MultiPoly) -> Vec<String> {
        if self.vars == other.vars {
            return self.vars.clone();
        }
        let mut v: Vec<String> = self.vars.iter().chain(other.vars.iter()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    fn add_impl(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let vars = self.union_vars(other);
        let mut terms = self.embedded(&vars);
        for (k, c) in other.embedded(&vars) {
            add_term(&mut terms, k, if negate { -c } else { c });
        }
        Self::normalized(vars, terms)
    }

    fn mul_impl(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let vars = self.union_vars(other);
        let a = self.embedded(&vars);
        let b = other.embedded(&vars);
        let mut terms = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let key: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                add_term(&mut terms, key, ca * cb);
            }
        }
        Self::normalized(vars, terms)
    }
}

fn add_term(terms: &mut BTreeMap<Vec<u32>, Rational>, key: Vec<u32>, c: Rational) {
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn canonical_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl fmt::Display for MultiPoly {
    /// Canonical text, e.g. `1 - 3/2*x + x^2*y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (key, c)) in self.canonical_terms().into_iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = key
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if *e == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.mul_impl(rhs)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.add_impl(&rhs, false)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self.add_impl(&rhs, true)
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.mul_impl(&rhs)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -(self.clone())
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::one()
    }
}

impl From<Rational> for MultiPoly {
    fn from(q: Rational) -> Self {
        MultiPoly::constant(q)
    }
}

impl Coeff for MultiPoly {
    fn from_rational(q: &Rational) -> Self {
        MultiPoly::constant(q.clone())
    }

    /// Only nonzero constants are units of a polynomial ring.
    fn unit_inverse(&self) -> Option<Self> {
        match self.as_constant() {
            Some(c) if !c.is_zero() => Some(MultiPoly::constant(c.recip())),
            _ => None,
        }
    }

    fn scale(&self, q: &Rational) -> Self {
        MultiPoly::scale(self, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};

    fn x() -> MultiPoly {
        MultiPoly::var("x")
    }
    fn y() -> MultiPoly {
        MultiPoly::var("y")
    }

    #[test]
    fn cancellation_drops_variables() {
        let p = &x() - &x();
        assert!(p.is_zero());
        assert!(p.vars().is_empty());
        assert_eq!(p, MultiPoly::zero());
    }

    #[test]
    fn canonical_display() {
        let p = &(&(&x() * &y()) + &MultiPoly::one()) + &x().scale(&rat(-3, 2));
        assert_eq!(p.to_string(), "1 - 3/2*x + x*y");
        let q = (&x() - &MultiPoly::one()).pow(2);
        assert_eq!(q.to_string(), "1 - 2*x + x^2");
        let u = MultiPoly::var("u");
        let v = MultiPoly::var("v");
        let s = (&u + &v).pow(2);
        assert_eq!(s.to_string(), "u^2 + 2*u*v + v^2");
        assert_eq!(MultiPoly::int(-4).to_string(), "-4");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn substitution_and_coefficients() {
        let p = (&x() + &y()).pow(3);
        let at = p.substitute("y", &MultiPoly::int(1));
        assert_eq!(at, (&x() + &MultiPoly::one()).pow(3));
        assert_eq!(p.coeff_of("x", 2), y().scale(&int(3)));
        assert_eq!(p.coeff_of_monomial(&[("x", 1), ("y", 2)]), int(3));
        assert_eq!(p.degree_in("y"), 3);
        assert_eq!(p.total_degree(), 3);
    }

    #[test]
    fn rename_merges() {
        let p = &x() * &y();
        assert_eq!(p.rename("y", "x"), x().pow(2));
    }

    #[test]
    fn units() {
        assert!(x().unit_inverse().is_none());
        assert_eq!(MultiPoly::int(4).unit_inverse(), Some(MultiPoly::constant(rat(1, 4))));
        assert!(MultiPoly::zero().unit_inverse().is_none());
    }
}
