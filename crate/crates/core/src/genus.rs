//! Characteristic power series and the genera they induce.
//!
//! A normalized series `f` determines a genus by `Φ_f(P^n) = [z^n] f^{n+1}`
//! (the tangent bundle of `P^n` plus a trivial line is `n+1` copies of
//! `O(1)`). A series with unit constant term `a` is treated like its
//! normalization `f(a z)/a`, which amounts to `Φ_f(P^n) = [z^n] f^{n+1} / a`.

use std::fmt;
use std::str::FromStr;

use crate::projmodel;
use crate::ring::poly::MultiPoly;
use crate::ring::series::TruncSeries;
use crate::ring::{factorial, int, rat, Coeff, Error, Rational, Result};

pub const SERIES_VAR: &str = "z";
pub const Y: &str = "y";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Chern,
    Todd,
    LGenus,
    AHat,
    Hirzebruch,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::Chern, Builtin::Todd, Builtin::LGenus, Builtin::AHat, Builtin::Hirzebruch];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Chern => "chern",
            Builtin::Todd => "todd",
            Builtin::LGenus => "lgenus",
            Builtin::AHat => "ahat",
            Builtin::Hirzebruch => "hirzebruch",
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownSeries(s.to_string()))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named characteristic power series in `z` with coefficients in `ℚ[y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSeries {
    name: String,
    series: TruncSeries<MultiPoly>,
}

impl CharSeries {
    /// Rejects series whose constant term is not a unit of `ℚ[y]`.
    pub fn new(name: &str, series: TruncSeries<MultiPoly>) -> Result<Self> {
        if series.constant_term().unit_inverse().is_none() {
            return Err(Error::NonUnit(format!("constant term {} of series `{name}`", series.constant_term())));
        }
        Ok(CharSeries { name: name.to_string(), series })
    }

    pub fn builtin(which: Builtin, order: usize) -> Self {
        let series = match which {
            Builtin::Chern => TruncSeries::new(SERIES_VAR, vec![int(1), int(1)], order).to_poly_series(),
            Builtin::Todd => todd(order).to_poly_series(),
            Builtin::LGenus => lgenus(order).to_poly_series(),
            Builtin::AHat => ahat(order).to_poly_series(),
            Builtin::Hirzebruch => hirzebruch(order),
        };
        CharSeries { name: which.name().to_string(), series }
    }

    pub fn by_name(name: &str, order: usize) -> Result<Self> {
        Ok(Self::builtin(name.parse()?, order))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn series(&self) -> &TruncSeries<MultiPoly> {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn is_normalized(&self) -> bool {
        self.series.constant_term().as_constant().is_some_and(|c| c == int(1))
    }

    /// Substitute a value for `y`.
    pub fn specialize(&self, y0: &Rational) -> CharSeries {
        CharSeries {
            name: format!("{}[y={}]", self.name, crate::ring::fmt_rational(y0)),
            series: self.series.eval_param(Y, y0),
        }
    }
}

/// `z / (1 - e^{-z})`.
pub fn todd(order: usize) -> TruncSeries<Rational> {
    // (1 - e^{-z}) / z = sum (-1)^k z^k / (k+1)!
    let g = TruncSeries::from_fn(SERIES_VAR, order, |k| {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        sign / factorial(k as u32 + 1)
    });
    g.invert().expect("unit constant term")
}

/// `z / tanh z`.
pub fn lgenus(order: usize) -> TruncSeries<Rational> {
    let cosh = TruncSeries::from_fn(SERIES_VAR, order, |k| if k % 2 == 0 { factorial(k as u32).recip() } else { int(0) });
    let sinh_over_z =
        TruncSeries::from_fn(SERIES_VAR, order, |k| if k % 2 == 0 { factorial(k as u32 + 1).recip() } else { int(0) });
    cosh.div(&sinh_over_z).expect("unit constant term")
}

/// `(z/2) / sinh(z/2)`.
pub fn ahat(order: usize) -> TruncSeries<Rational> {
    let sinh_over_z =
        TruncSeries::from_fn(SERIES_VAR, order, |k| if k % 2 == 0 { factorial(k as u32 + 1).recip() } else { int(0) });
    sinh_over_z.rescale(&rat(1, 2)).invert().expect("unit constant term")
}

/// `z(1+y) / (1 - e^{-z(1+y)}) - z y` over `ℚ[y]`.
pub fn hirzebruch(order: usize) -> TruncSeries<MultiPoly> {
    let one_plus_y = &MultiPoly::one() + &MultiPoly::var(Y);
    let scaled = todd(order).to_poly_series().rescale(&one_plus_y);
    let shift = TruncSeries::new(SERIES_VAR, vec![MultiPoly::zero(), MultiPoly::var(Y)], order);
    scaled.sub(&shift)
}

pub fn hirzebruch_specialize(y0: &Rational, order: usize) -> CharSeries {
    CharSeries::builtin(Builtin::Hirzebruch, order).specialize(y0)
}

/// `[z^n] f^{n+1} / f(0)` for any series with unit constant term.
pub fn genus_value<C: Coeff>(f: &TruncSeries<C>, n: usize) -> Result<C> {
    if n > f.order() {
        return Err(Error::TruncationTooSmall { have: f.order(), need: n });
    }
    let a_inv = f
        .constant_term()
        .unit_inverse()
        .ok_or_else(|| Error::NonUnit(format!("{:?}", f.constant_term())))?;
    Ok(f.truncate(n).pow(n as u32 + 1).coeff(n) * a_inv)
}

pub fn genus_on_projective(f: &CharSeries, n: usize) -> Result<MultiPoly> {
    genus_value(f.series(), n)
}

/// `g(t) = sum_{i>=0} Φ_f(P^i) t^{i+1} / (i+1)` through `t^order`.
pub fn genus_logarithm(f: &CharSeries, order: usize) -> Result<TruncSeries<MultiPoly>> {
    if order == 0 {
        return Err(Error::invalid("genus logarithm needs order >= 1"));
    }
    let values: Vec<MultiPoly> = (0..order).map(|i| genus_on_projective(f, i)).collect::<Result<_>>()?;
    Ok(TruncSeries::from_fn("t", order, |k| {
        if k == 0 {
            MultiPoly::zero()
        } else {
            values[k - 1].scale(&rat(1, k as i64))
        }
    }))
}

/// Whether `f` and `f(a z)/a` give the same value on `P^0..P^N`, `N` the
/// truncation order of `f`.
pub fn unnormalize_invariance_check<C: Coeff>(f: &TruncSeries<C>, a: &C) -> Result<bool> {
    let a_inv = a.unit_inverse().ok_or_else(|| Error::NonUnit(format!("{a:?}")))?;
    let g = f.rescale(a).scale(&a_inv);
    for n in 0..=f.order() {
        if genus_value(f, n)? != genus_value(&g, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∫_{P^n} e^{-k c1} ch(Λ_y T*) td(T)` as a polynomial in `y` and `k`,
/// dropping powers of `k` above `k_order`.
pub fn twisted_chi_y(n: u32, k_order: u32) -> Result<MultiPoly> {
    projmodel::twisted_chi_y(n, k_order)
}
