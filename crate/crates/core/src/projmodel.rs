//! Cohomology rings of products of projective spaces.
//!
//! `H*(P^{n_1} x ... x P^{n_m}) = ℚ[h_1..h_m] / (h_j^{n_j+1})`, integration
//! reads off the coefficient of `h_1^{n_1} ... h_m^{n_m}`. Coefficients may
//! involve free parameters such as `y`.

use std::sync::Arc;

use crate::genus::{self, Builtin, CharSeries};
use crate::ring::graded::GradedRing;
use crate::ring::poly::MultiPoly;
use crate::ring::ratfunc::RationalFunction;
use crate::ring::series::TruncSeries;
use crate::ring::{binomial, int, Error, Rational, Result};
use crate::symm::elliptic::{self, QSeries};
use crate::symm::{eval_series_at, FormalBundle};

#[derive(Clone, Debug, PartialEq)]
pub struct ProjSpaceRing {
    dims: Vec<u32>,
    names: Vec<String>,
    ring: Arc<GradedRing>,
}

impl ProjSpaceRing {
    /// `P^{dims[0]} x ... `; an empty list is a point. A single factor uses
    /// the class name `h`, several use `h1, h2, ...`.
    pub fn new(dims: &[u32]) -> Self {
        let names: Vec<String> = if dims.len() == 1 {
            vec!["h".to_string()]
        } else {
            (1..=dims.len()).map(|j| format!("h{j}")).collect()
        };
        Self::with_names(dims, names)
    }

    fn with_names(dims: &[u32], names: Vec<String>) -> Self {
        let ring = dims
            .iter()
            .zip(&names)
            .fold(GradedRing::new(dims.iter().sum()), |r, (n, name)| r.with_var(name, 1, Some(*n)));
        ProjSpaceRing { dims: dims.to_vec(), names, ring: Arc::new(ring) }
    }

    pub fn projective(n: u32) -> Self {
        Self::new(&[n])
    }

    /// Same ring with an extra parameter `name` satisfying `name^(cap+1) = 0`.
    pub fn with_truncated_parameter(&self, name: &str, cap: u32) -> Self {
        let ring = (*self.ring).clone().with_var(name, 0, Some(cap));
        ProjSpaceRing { dims: self.dims.clone(), names: self.names.clone(), ring: Arc::new(ring) }
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn dimension(&self) -> u32 {
        self.dims.iter().sum()
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn hyperplane(&self, j: usize) -> MultiPoly {
        MultiPoly::var(&self.names[j])
    }

    pub fn hyperplane_names(&self) -> &[String] {
        &self.names
    }

    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        self.ring.reduce(p)
    }

    /// Coefficient of the top monomial.
    pub fn integrate(&self, elt: &MultiPoly) -> MultiPoly {
        let mut acc = self.ring.reduce(elt);
        for (name, n) in self.names.iter().zip(&self.dims) {
            acc = acc.coeff_of(name, *n);
        }
        acc
    }

    /// `prod_j f(h_j)^{n_j + 1}`.
    pub fn tangent_class(&self, f: &TruncSeries<MultiPoly>) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one();
        for (j, n) in self.dims.iter().enumerate() {
            if f.order() < *n as usize {
                return Err(Error::TruncationTooSmall { have: f.order(), need: *n as usize });
            }
            let fh = eval_series_at(f, &self.hyperplane(j), &self.ring);
            acc = self.ring.mul(&acc, &self.ring.pow(&fh, n + 1));
        }
        Ok(acc)
    }

    /// The tangent bundle as Chern data: `c(TP^n) = (1+h)^{n+1}` on each
    /// factor, summed over the factors.
    pub fn tangent_bundle(&self) -> FormalBundle {
        let mut acc = FormalBundle::trivial(self.ring.clone(), 0);
        for (j, n) in self.dims.iter().enumerate() {
            let h = self.hyperplane(j);
            let chern = (1..=*n).map(|i| h.pow(i).scale(&binomial(*n as i64 + 1, i as i64))).collect();
            let factor = FormalBundle::from_chern(self.ring.clone(), *n, chern).expect("homogeneous Chern classes");
            acc = acc.direct_sum(&factor).expect("same ring");
        }
        acc
    }

    pub fn canonical_class(&self) -> MultiPoly {
        self.tangent_bundle().chern_class(1)
    }

    /// Value of the genus of `f` on this space.
    pub fn genus(&self, f: &TruncSeries<MultiPoly>) -> Result<MultiPoly> {
        Ok(self.integrate(&self.tangent_class(f)?))
    }

    /// `∫ e^{d h} td(T)` on a single projective space.
    pub fn hrr_integral(&self, d: i64) -> Result<MultiPoly> {
        let h = self.hyperplane(0);
        let twist = self.ring.exp(&h.scale(&int(d)))?;
        let todd = self.tangent_class(&genus::todd(self.dimension() as usize).to_poly_series())?;
        Ok(self.integrate(&self.ring.mul(&twist, &todd)))
    }

    /// Coefficients in `q` of `∫ ELL(T) td(T)`.
    pub fn elliptic_genus(&self, q_order: usize) -> Result<Vec<MultiPoly>> {
        let ell = elliptic::elliptic_class_qseries(&self.tangent_bundle(), q_order)?;
        self.pair_with_todd(&ell)
    }

    fn pair_with_todd(&self, ell: &QSeries) -> Result<Vec<MultiPoly>> {
        let todd = self.tangent_class(&genus::todd(self.dimension() as usize).to_poly_series())?;
        let with_inverse = GradedRing::new(0).with_inverse_pair(elliptic::Y, elliptic::Y_INV);
        Ok(ell
            .coefficients()
            .iter()
            .map(|c| with_inverse.reduce(&self.integrate(&self.ring.mul(c, &todd))))
            .collect())
    }

    /// `∫ e^{-k c1} ELL(T) td(T)` with `k` truncated at `k_order`.
    pub fn twisted_elliptic_genus(&self, q_order: usize, k_order: u32) -> Result<Vec<MultiPoly>> {
        let with_k = self.with_truncated_parameter("k", k_order);
        let ell = elliptic::elliptic_class_qseries(&with_k.tangent_bundle(), q_order)?;
        let twist = with_k.ring.exp(&(&-MultiPoly::var("k") * &with_k.canonical_class()))?;
        with_k.pair_with_todd(&ell.times(&twist))
    }
}

/// Number of monomials of degree `d` in `vars` variables.
fn count_monomials(vars: u32, d: u32) -> u64 {
    match vars {
        0 => u64::from(d == 0),
        1 => 1,
        _ => (0..=d).map(|first| count_monomials(vars - 1, d - first)).sum(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrrReport {
    /// Dimension of the space of degree-`d` forms in `n+1` variables.
    pub lhs: Rational,
    /// `∫ e^{d h} td(TP^n)`.
    pub rhs: Rational,
    pub equal: bool,
}

pub fn hrr_check(n: u32, d: u32) -> Result<HrrReport> {
    let lhs = int(count_monomials(n + 1, d) as i64);
    let rhs = ProjSpaceRing::projective(n)
        .hrr_integral(d as i64)?
        .as_constant()
        .ok_or_else(|| Error::Consistency("Todd integral is not a number".into()))?;
    let equal = lhs == rhs;
    Ok(HrrReport { lhs, rhs, equal })
}

/// The two sides of the normalization identity over `ℚ(y)`: the integrand
/// `(1 + y e^{-z}) z / (1 - e^{-z})` of `ch(Λ_y T*) td(T)`, rescaled
/// `z -> (1+y) z` and divided by `1+y`, against `f_y(z)`. The third entry
/// is the `-y z` term of `f_y`.
fn ghrr_sides(
    order: usize,
) -> Result<(TruncSeries<RationalFunction>, TruncSeries<RationalFunction>, TruncSeries<RationalFunction>)> {
    let q = |p: MultiPoly| RationalFunction::from_poly(p);
    let y = q(MultiPoly::var(genus::Y));
    let one = q(MultiPoly::one());
    let one_plus_y = one.clone() + y.clone();
    let todd = genus::todd(order).map(|c| q(MultiPoly::constant(c.clone())));
    let decay = TruncSeries::exp_linear(genus::SERIES_VAR, &-one, order);
    let integrand = decay.scale(&y).add(&TruncSeries::one(genus::SERIES_VAR, order)).mul(&todd);
    let lhs = integrand.rescale(&one_plus_y).scale(&one_plus_y.recip()?);
    let rhs = CharSeries::builtin(Builtin::Hirzebruch, order).series().map(|c| q(c.clone()));
    let shift = TruncSeries::new(genus::SERIES_VAR, vec![q(MultiPoly::zero()), -y], order);
    Ok((lhs, rhs, shift))
}

/// Whether the normalization identity holds through `z^order`.
pub fn ghrr_normalization_check(order: usize) -> Result<bool> {
    if order < 2 {
        return Err(Error::invalid("order must be at least 2"));
    }
    let (lhs, rhs, _) = ghrr_sides(order)?;
    Ok(lhs == rhs)
}

/// Negative control: the identity with the `-y z` term removed.
pub fn ghrr_perturbed_check(order: usize) -> Result<bool> {
    if order < 2 {
        return Err(Error::invalid("order must be at least 2"));
    }
    let (lhs, rhs, shift) = ghrr_sides(order)?;
    Ok(lhs == rhs.sub(&shift))
}

/// `∫_{P^n}` of the Hirzebruch class of the tangent bundle.
pub fn ty_class_degree(n: u32) -> Result<MultiPoly> {
    let f = CharSeries::builtin(Builtin::Hirzebruch, n as usize);
    ProjSpaceRing::projective(n).genus(f.series())
}

/// `∫_{P^n} e^{-k c1} ch(Λ_y T*) td(T)` with `k^(k_order+1) = 0`.
pub fn twisted_chi_y(n: u32, k_order: u32) -> Result<MultiPoly> {
    let space = ProjSpaceRing::projective(n).with_truncated_parameter("k", k_order);
    let ring = space.ring().clone();
    let tangent = space.tangent_bundle();
    let twist = ring.exp(&(&-MultiPoly::var("k") * &tangent.chern_class(1)))?;
    let lambda = tangent.ch_lambda(&MultiPoly::var(genus::Y), true);
    let todd = tangent.multiplicative_class(&genus::todd(n as usize).to_poly_series())?;
    Ok(space.integrate(&ring.product([&twist, &lambda, &todd])))
}
