//! Stringy invariants of a log-terminal pair from resolution data.
//!
//! A [`ResolutionDatum`] lists the exceptional/boundary components `E_i`
//! with discrepancies `a_i` and the classes of the open strata
//! `E_I^o` (points lying on exactly the components in `I`). All invariants
//! are sums over subsets `I` weighted by `∏_{i∈I} (L-1)/(L^{a_i+1}-1)`;
//! fractional exponents are handled by adjoining `t = L^{1/r}`.

mod value;

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::k0::{AtomTable, K0Class};
use crate::ring::poly::MultiPoly;
use crate::ring::ratfunc::RationalFunction;
use crate::ring::series::TruncSeries;
use crate::ring::unipoly::UniPoly;
use crate::ring::{binomial_rational, int, Error, Rational, Result};

pub use value::{Realization, RootFraction, ROOT};
use value::t_power_minus_one;

/// Largest number of components accepted (the sums run over all subsets).
pub const MAX_COMPONENTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Stringy,
    /// Arc-space data on a smooth variety: discrepancies are nonnegative integers.
    Arc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub name: String,
    pub discrepancy: Rational,
}

impl Component {
    pub fn new(name: &str, discrepancy: Rational) -> Self {
        Component { name: name.to_string(), discrepancy }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionDatum {
    flavor: Flavor,
    index_r: u32,
    components: Vec<Component>,
    /// Indexed by the bitmask of the subset.
    strata: Vec<K0Class>,
    atoms: AtomTable,
}

impl ResolutionDatum {
    /// `strata` must name every subset of the components exactly once
    /// (empty strata are given the class 0).
    pub fn new(
        flavor: Flavor,
        index_r: u32,
        components: Vec<Component>,
        strata: Vec<(Vec<String>, K0Class)>,
        atoms: AtomTable,
    ) -> Result<Self> {
        if index_r == 0 {
            return Err(Error::invalid("Gorenstein index must be positive"));
        }
        let k = components.len();
        if k > MAX_COMPONENTS {
            return Err(Error::invalid(format!("{k} components; at most {MAX_COMPONENTS} are supported")));
        }
        let mut names = BTreeSet::new();
        for c in &components {
            if !names.insert(c.name.as_str()) {
                return Err(Error::invalid(format!("duplicate component `{}`", c.name)));
            }
            let a = &c.discrepancy;
            if *a <= int(-1) {
                return Err(Error::invalid(format!("discrepancy of `{}` is {a}; need a > -1", c.name)));
            }
            if !(a * int(index_r as i64)).is_integer() {
                return Err(Error::invalid(format!("discrepancy of `{}` is {a}, not in (1/{index_r})ℤ", c.name)));
            }
            if flavor == Flavor::Arc && (!a.is_integer() || *a < int(0)) {
                return Err(Error::invalid(format!("arc data need nonnegative integer discrepancies, `{}` has {a}", c.name)));
            }
        }
        let mut slots: Vec<Option<K0Class>> = vec![None; 1 << k];
        for (subset, class) in strata {
            let mut mask = 0usize;
            for name in &subset {
                let i = components
                    .iter()
                    .position(|c| &c.name == name)
                    .ok_or_else(|| Error::invalid(format!("stratum refers to unknown component `{name}`")))?;
                if mask & (1 << i) != 0 {
                    return Err(Error::invalid(format!("component `{name}` repeated in a stratum subset")));
                }
                mask |= 1 << i;
            }
            atoms.e_polynomial(&class)?;
            if slots[mask].replace(class).is_some() {
                return Err(Error::invalid(format!("stratum {{{}}} given twice", subset.join(", "))));
            }
        }
        let strata = slots
            .into_iter()
            .enumerate()
            .map(|(mask, s)| {
                s.ok_or_else(|| {
                    let names: Vec<&str> =
                        (0..k).filter(|i| mask & (1 << i) != 0).map(|i| components[i].name.as_str()).collect();
                    Error::invalid(format!("missing stratum entry for {{{}}}", names.join(", ")))
                })
            })
            .collect::<Result<_>>()?;
        Ok(ResolutionDatum { flavor, index_r, components, strata, atoms })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn index_r(&self) -> u32 {
        self.index_r
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    /// `[E_I^o]` for the subset with bitmask `mask`.
    pub fn open_stratum(&self, mask: usize) -> &K0Class {
        &self.strata[mask]
    }

    pub fn subset_names(&self, mask: usize) -> Vec<String> {
        (0..self.components.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.components[i].name.clone())
            .collect()
    }

    /// `[E_I] = Σ_{J ⊇ I} [E_J^o]` for every subset.
    pub fn closed_strata(&self) -> Vec<K0Class> {
        let k = self.components.len();
        let mut out = self.strata.clone();
        for i in 0..k {
            for mask in 0..out.len() {
                if mask & (1 << i) == 0 {
                    out[mask] = &out[mask] + &out[mask | (1 << i)];
                }
            }
        }
        out
    }

    /// Class of the resolution space.
    pub fn total_class(&self) -> K0Class {
        self.strata.iter().fold(K0Class::zero(), |acc, c| acc + c.clone())
    }

    /// `r (a_i + 1)`, the exponent of `t` in `L^{a_i+1}`.
    fn shifted_exponent(&self, i: usize) -> u32 {
        let e = (&self.components[i].discrepancy + int(1)) * int(self.index_r as i64);
        e.to_integer().try_into().expect("positive exponent")
    }

    fn realize(&self, class: &K0Class, how: Realization) -> Result<MultiPoly> {
        match how {
            Realization::K0 => Ok(class.as_poly().clone()),
            Realization::Hodge => self.atoms.e_polynomial(class),
        }
    }

    /// `Σ_I [E_I^o] ∏_{i∈I} (t^r - 1)/(t^{r(a_i+1)} - 1)` over the common
    /// denominator `∏_i (t^{r(a_i+1)} - 1)`.
    fn open_form(&self, how: Realization) -> Result<RootFraction> {
        let r = self.index_r;
        let k = self.components.len();
        let lm1 = t_power_minus_one(r).to_multi(ROOT);
        let dens: Vec<MultiPoly> = (0..k).map(|i| t_power_minus_one(self.shifted_exponent(i)).to_multi(ROOT)).collect();
        let mut num = MultiPoly::zero();
        for (mask, class) in self.strata.iter().enumerate() {
            if class.is_zero() {
                continue;
            }
            let mut term = self.realize(class, how)?;
            for (i, den) in dens.iter().enumerate() {
                term = &term * if mask & (1 << i) != 0 { &lm1 } else { den };
            }
            num = &num + &term;
        }
        RootFraction::new(how, r, num, self.full_denominator())
    }

    /// `Σ_I [E_I] ∏_{i∈I} ((t^r - 1)/(t^{r(a_i+1)} - 1) - 1)`.
    fn closed_form(&self, how: Realization) -> Result<RootFraction> {
        let r = self.index_r;
        let k = self.components.len();
        let t_r = MultiPoly::var(ROOT).pow(r);
        let dens: Vec<MultiPoly> = (0..k).map(|i| t_power_minus_one(self.shifted_exponent(i)).to_multi(ROOT)).collect();
        let nums: Vec<MultiPoly> =
            (0..k).map(|i| &t_r - &MultiPoly::var(ROOT).pow(self.shifted_exponent(i))).collect();
        let mut num = MultiPoly::zero();
        for (mask, class) in self.closed_strata().iter().enumerate() {
            if class.is_zero() {
                continue;
            }
            let mut term = self.realize(class, how)?;
            for i in 0..k {
                term = &term * if mask & (1 << i) != 0 { &nums[i] } else { &dens[i] };
            }
            num = &num + &term;
        }
        RootFraction::new(how, r, num, self.full_denominator())
    }

    fn full_denominator(&self) -> UniPoly<Rational> {
        (0..self.components.len()).fold(UniPoly::one(), |acc, i| acc.mul(&t_power_minus_one(self.shifted_exponent(i))))
    }

    /// Contribution of each stratum, `[E_I^o] ∏_{i∈I} (L-1)/(L^{a_i+1}-1)`.
    pub fn stratum_contributions(&self, how: Realization) -> Result<Vec<(Vec<String>, RootFraction)>> {
        let r = self.index_r;
        let lm1 = t_power_minus_one(r).to_multi(ROOT);
        let mut out = Vec::new();
        for (mask, class) in self.strata.iter().enumerate() {
            let mut num = self.realize(class, how)?;
            let mut den = UniPoly::one();
            for i in 0..self.components.len() {
                if mask & (1 << i) != 0 {
                    num = &num * &lm1;
                    den = den.mul(&t_power_minus_one(self.shifted_exponent(i)));
                }
            }
            out.push((self.subset_names(mask), RootFraction::new(how, r, num, den)?));
        }
        Ok(out)
    }
}

fn both_forms(d: &ResolutionDatum, how: Realization) -> Result<RootFraction> {
    let open = d.open_form(how)?;
    let closed = d.closed_form(how)?;
    if open != closed {
        return Err(Error::Consistency(format!("open-stratum form {open} differs from closed-stratum form {closed}")));
    }
    Ok(open)
}

/// The motivic integral in K₀ with `t^r = L`; the open- and closed-stratum
/// forms are both computed and must agree.
pub fn motivic_integral(d: &ResolutionDatum) -> Result<RootFraction> {
    both_forms(d, Realization::K0)
}

/// The stringy E-function, `t^r = uv`.
pub fn stringy_e(d: &ResolutionDatum) -> Result<RootFraction> {
    both_forms(d, Realization::Hodge)
}

/// `E_str(-y, 1)`. With `r = 1` this is a rational function in `y`; for
/// `r > 1` it is a rational function in `t` with `t^r = -y`.
#[derive(Clone, Debug)]
pub struct StringyChiY {
    pub index_r: u32,
    pub value: RationalFunction,
}

impl StringyChiY {
    /// The value in `t` with `t^m = -y`, `m` a multiple of the index.
    pub fn in_root(&self, m: u32) -> Result<RationalFunction> {
        if !m.is_multiple_of(self.index_r) {
            return Err(Error::invalid(format!("{m} is not a multiple of {}", self.index_r)));
        }
        let t = MultiPoly::var(ROOT);
        if self.index_r == 1 {
            self.value.substitute("y", &-t.pow(m))
        } else {
            self.value.substitute(ROOT, &t.pow(m / self.index_r))
        }
    }

    pub fn variable(&self) -> &'static str {
        if self.index_r == 1 {
            "y"
        } else {
            ROOT
        }
    }
}

impl PartialEq for StringyChiY {
    fn eq(&self, other: &Self) -> bool {
        let m = num_integer::lcm(self.index_r, other.index_r);
        matches!((self.in_root(m), other.in_root(m)), (Ok(a), Ok(b)) if a == b)
    }
}

impl std::fmt::Display for StringyChiY {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.index_r == 1 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} [t^{} = -y]", self.value, self.index_r)
        }
    }
}

pub fn stringy_chi_y(d: &ResolutionDatum) -> Result<StringyChiY> {
    let e = stringy_e(d)?;
    let r = e.root_index();
    let minus_y = -MultiPoly::var("y");
    let t = MultiPoly::var(ROOT);
    let (num, den) = if r == 1 {
        let sub = |p: &MultiPoly| p.substitute("u", &minus_y).eval("v", &int(1)).substitute(ROOT, &minus_y);
        (sub(e.numerator()), sub(&e.denominator().to_multi(ROOT)))
    } else {
        let u = t.pow(r);
        (e.numerator().substitute("u", &u).eval("v", &int(1)), e.denominator().to_multi(ROOT))
    };
    let value = RationalFunction::new(num, den)
        .map_err(|_| Error::Consistency("denominator vanishes at (u, v) = (-y, 1)".into()))?;
    Ok(StringyChiY { index_r: r, value })
}

/// `Σ_I χ(E_I^o) ∏_{i∈I} 1/(a_i+1)`.
pub fn stringy_euler_direct(d: &ResolutionDatum) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (mask, class) in d.strata.iter().enumerate() {
        let mut term = Rational::from_integer(d.atoms.euler(class)?);
        for (i, c) in d.components.iter().enumerate() {
            if mask & (1 << i) != 0 {
                term /= &c.discrepancy + int(1);
            }
        }
        acc += term;
    }
    Ok(acc)
}

/// `(1 + s)^alpha` through `s^order`.
fn binomial_series(alpha: &Rational, order: usize) -> TruncSeries<Rational> {
    TruncSeries::from_fn("s", order, |k| binomial_rational(alpha, k as u32))
}

/// Value at `u = v = 1` of the stringy E-function, by setting `u = 1 + s`,
/// `v = 1` (so `t = (1+s)^{1/r}`) and reading the constant term of the
/// quotient of series.
pub fn stringy_euler_limit(d: &ResolutionDatum) -> Result<Rational> {
    let e = stringy_e(d)?;
    let r = int(e.root_index() as i64);
    let order = e.denominator().degree().unwrap_or(0);
    let den = e
        .denominator()
        .coeffs()
        .iter()
        .enumerate()
        .fold(TruncSeries::zero("s", order), |acc, (k, c)| acc.add(&binomial_series(&(int(k as i64) / &r), order).scale(c)));
    let mut num = TruncSeries::zero("s", order);
    for (mono, c) in e.numerator().named_terms() {
        let mut alpha = Rational::zero();
        for (v, exp) in mono {
            match v {
                "u" => alpha += int(exp as i64),
                "v" => {}
                ROOT => alpha += int(exp as i64) / &r,
                other => return Err(Error::Consistency(format!("unexpected variable `{other}` in E-function"))),
            }
        }
        num = num.add(&binomial_series(&alpha, order).scale(c));
    }
    let m = den.valuation().ok_or_else(|| Error::Consistency("denominator vanishes identically".into()))?;
    if let Some(j) = num.valuation().filter(|j| *j < m) {
        return Err(Error::Consistency(format!("pole of order {} at u = v = 1", m - j)));
    }
    Ok(num.coeff(m) / den.coeff(m))
}

/// Stringy Euler number; both evaluation paths must agree.
pub fn stringy_euler(d: &ResolutionDatum) -> Result<Rational> {
    let direct = stringy_euler_direct(d)?;
    let limit = stringy_euler_limit(d)?;
    if direct != limit {
        return Err(Error::Consistency(format!("stringy Euler number: direct sum {direct} but limit {limit}")));
    }
    Ok(direct)
}

/// The two displayed forms of the degree-level Jacobian factor, as series
/// in the nilpotent class `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianLimit {
    /// 1 when `a` is an integer; otherwise coefficients are in `ℚ(w)` with `y = w^root`.
    pub root: u32,
    pub product_form: TruncSeries<RationalFunction>,
    pub sum_form: TruncSeries<RationalFunction>,
    pub agree: bool,
}

/// `(y-1)(1 - y^{a+1} e^{-e}) / ((y^{a+1}-1)(1 - y e^{-e}))` and
/// `1 + (y - y^{a+1})(1 - e^{-e}) / ((y^{a+1}-1)(1 - y e^{-e}))`.
pub fn jacobian_factor_limit(a: &Rational, e_order: usize) -> Result<JacobianLimit> {
    if *a <= int(-1) {
        return Err(Error::invalid(format!("discrepancy {a} must exceed -1")));
    }
    let root: u32 = a.denom().try_into().map_err(|_| Error::invalid("denominator too large"))?;
    let shifted: u32 = ((a + int(1)) * int(root as i64)).to_integer().try_into().expect("positive");
    let (var, y_exp) = if root == 1 { ("y", 1) } else { ("w", root) };
    let q = |p: MultiPoly| RationalFunction::from_poly(p);
    let y = q(MultiPoly::var(var).pow(y_exp));
    let y_a1 = q(MultiPoly::var(var).pow(shifted));
    let one = q(MultiPoly::one());
    let decay = TruncSeries::exp_linear("e", &-one.clone(), e_order);
    let unit = TruncSeries::one("e", e_order);
    let denom = unit.sub(&decay.scale(&y)).scale(&(y_a1.clone() - one.clone()));
    let product_form = unit.sub(&decay.scale(&y_a1)).scale(&(y.clone() - one.clone())).div(&denom)?;
    let sum_form = unit.add(&unit.sub(&decay).scale(&(y - y_a1)).div(&denom)?);
    let agree = product_form == sum_form;
    Ok(JacobianLimit { root, product_form, sum_form, agree })
}

/// All four invariants of one datum.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub motivic_integral: RootFraction,
    pub e_function: RootFraction,
    pub chi_y: StringyChiY,
    pub euler: Rational,
}

pub fn invariants(d: &ResolutionDatum) -> Result<Invariants> {
    Ok(Invariants {
        motivic_integral: motivic_integral(d)?,
        e_function: stringy_e(d)?,
        chi_y: stringy_chi_y(d)?,
        euler: stringy_euler(d)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub first: Invariants,
    pub second: Invariants,
    pub motivic_integral_equal: bool,
    pub e_function_equal: bool,
    pub chi_y_equal: bool,
    pub euler_equal: bool,
}

impl InvarianceReport {
    pub fn all_equal(&self) -> bool {
        self.motivic_integral_equal && self.e_function_equal && self.chi_y_equal && self.euler_equal
    }
}

/// Compare the invariants of two resolutions of the same pair.
pub fn invariance_check(d1: &ResolutionDatum, d2: &ResolutionDatum) -> Result<InvarianceReport> {
    let first = invariants(d1)?;
    let second = invariants(d2)?;
    Ok(InvarianceReport {
        motivic_integral_equal: first.motivic_integral == second.motivic_integral,
        e_function_equal: first.e_function == second.e_function,
        chi_y_equal: first.chi_y == second.chi_y,
        euler_equal: first.euler == second.euler,
        first,
        second,
    })
}

/// Resolution-free datum of a smooth variety with empty divisor.
pub fn smooth_datum(class: K0Class, atoms: AtomTable) -> Result<ResolutionDatum> {
    ResolutionDatum::new(Flavor::Stringy, 1, Vec::new(), vec![(Vec::new(), class)], atoms)
}

#[cfg(test)]
mod tests;
