//! The elliptic class as a power series in `q`.
//!
//! ```text
//! ELL(E) = Λ_y(E*) ⊗ ⊗_{n>=1} Λ_{y q^n}(E*) ⊗ Λ_{y^-1 q^n}(E) ⊗ S_{q^n}(E*) ⊗ S_{q^n}(E)
//! ```
//!
//! Every K-theory class is replaced by its Chern character, so the
//! coefficients live in the ambient graded ring extended by `y` and its
//! inverse (written [`Y_INV`]). `S_x` is computed as the inverse of `Λ_{-x}`.

use std::sync::Arc;

use super::FormalBundle;
use crate::ring::graded::GradedRing;
use crate::ring::poly::MultiPoly;
use crate::ring::{Error, Result};

pub const Y: &str = "y";
pub const Y_INV: &str = "y_inv";
const Q: &str = "q";

/// Coefficients `ELL_0, ..., ELL_{order_q}` of a q-series whose entries are
/// Laurent polynomials in `y` over a graded ring.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    order_q: usize,
    coefficients: Vec<MultiPoly>,
    y_bounds: Vec<(i64, i64)>,
    ring: Arc<GradedRing>,
}

impl QSeries {
    pub fn order_q(&self) -> usize {
        self.order_q
    }

    pub fn coefficients(&self) -> &[MultiPoly] {
        &self.coefficients
    }

    /// Coefficient of `q^n` (zero past the order).
    pub fn coefficient(&self, n: usize) -> MultiPoly {
        self.coefficients.get(n).cloned().unwrap_or_else(MultiPoly::zero)
    }

    /// Admissible range of `y`-exponents in the coefficient of `q^n`.
    pub fn y_bounds(&self, n: usize) -> (i64, i64) {
        self.y_bounds[n]
    }

    /// Ambient ring of the coefficients (without `q`).
    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// Multiply every coefficient by a ring element, e.g. the twist
    /// `e^{-k c1}`; the element must not involve `y`.
    pub fn times(&self, factor: &MultiPoly) -> QSeries {
        let mut out = self.clone();
        out.coefficients = self.coefficients.iter().map(|c| self.ring.mul(c, factor)).collect();
        out
    }

    /// `y`-exponents actually present in the coefficient of `q^n`.
    pub fn y_range(&self, n: usize) -> Option<(i64, i64)> {
        let c = &self.coefficients[n];
        let exps: Vec<i64> = c
            .named_terms()
            .iter()
            .map(|(mono, _)| {
                mono.iter()
                    .map(|(v, e)| match *v {
                        Y => *e as i64,
                        Y_INV => -(*e as i64),
                        _ => 0,
                    })
                    .sum()
            })
            .collect();
        Some((*exps.iter().min()?, *exps.iter().max()?))
    }
}

/// Ring used for the intermediate products: the bundle's ring plus a
/// nilpotent `q` and the pair `y * y_inv = 1`.
fn extended_ring(base: &GradedRing, q_order: usize) -> Result<GradedRing> {
    for name in [Q, Y, Y_INV] {
        if base.vars().iter().any(|v| v.name == name) {
            return Err(Error::invalid(format!("ambient ring already uses the name `{name}`")));
        }
    }
    Ok(base.clone().with_var(Q, 0, Some(q_order as u32)).with_inverse_pair(Y, Y_INV))
}

/// `sum_j x^j lam[j]`.
fn lambda_at(ring: &GradedRing, x: &MultiPoly, lam: &[MultiPoly]) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    let mut xp = MultiPoly::one();
    for l in lam {
        acc = &acc + &ring.mul(&xp, l);
        xp = ring.mul(&xp, x);
        if xp.is_zero() {
            break;
        }
    }
    acc
}

pub fn elliptic_class_qseries(bundle: &FormalBundle, q_order: usize) -> Result<QSeries> {
    let base = bundle.ring().clone();
    let ring = extended_ring(&base, q_order)?;
    let lam_dual = bundle.ch_exterior_powers(true);
    let lam = bundle.ch_exterior_powers(false);
    let y = MultiPoly::var(Y);
    let y_inv = MultiPoly::var(Y_INV);
    let q = MultiPoly::var(Q);

    let mut acc = lambda_at(&ring, &y, &lam_dual);
    for n in 1..=q_order {
        let qn = q.pow(n as u32);
        let factors = [
            lambda_at(&ring, &(&y * &qn), &lam_dual),
            lambda_at(&ring, &(&y_inv * &qn), &lam),
            ring.inverse(&lambda_at(&ring, &-&qn, &lam_dual))?,
            ring.inverse(&lambda_at(&ring, &-&qn, &lam))?,
        ];
        for f in &factors {
            acc = ring.mul(&acc, f);
        }
    }

    let r = bundle.rank() as i64;
    let coefficients = (0..=q_order).map(|m| acc.coeff_of(Q, m as u32)).collect();
    let y_bounds = (0..=q_order as i64).map(|m| (-m, r + m)).collect();
    Ok(QSeries { order_q: q_order, coefficients, y_bounds, ring: base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn rank_zero_is_one() {
        let ring = Arc::new(GradedRing::new(2).with_var("h", 1, Some(2)));
        let e = FormalBundle::trivial(ring, 0);
        let ell = elliptic_class_qseries(&e, 3).unwrap();
        assert_eq!(ell.coefficient(0), MultiPoly::one());
        for n in 1..=3 {
            assert!(ell.coefficient(n).is_zero());
        }
    }

    #[test]
    fn leading_coefficient_is_lambda_y_of_dual() {
        let ring = Arc::new(GradedRing::new(3).with_var("a", 1, None).with_var("b", 1, None));
        let e = FormalBundle::split(ring, vec![p("a"), p("b")]).unwrap();
        let ell = elliptic_class_qseries(&e, 2).unwrap();
        assert_eq!(ell.coefficient(0), e.ch_lambda_split(&p("y"), true).unwrap());
        for n in 0..=2 {
            let (lo, hi) = ell.y_range(n).unwrap();
            let (blo, bhi) = ell.y_bounds(n);
            assert!(blo <= lo && hi <= bhi);
        }
    }

    #[test]
    fn first_order_term_of_line_bundle() {
        let ring = Arc::new(GradedRing::new(3).with_var("a", 1, None));
        let e = FormalBundle::line(ring.clone(), p("a")).unwrap();
        let ell = elliptic_class_qseries(&e, 1).unwrap();
        let ea = ring.exp(&p("a")).unwrap();
        let ema = ring.exp(&p("-a")).unwrap();
        let lead = &MultiPoly::one() + &ring.mul(&p("y"), &ema);
        let bracket = &(&ring.mul(&p("y"), &ema) + &ring.mul(&p("y_inv"), &ea)) + &(&ea + &ema);
        let mut expected = ring.mul(&lead, &bracket);
        expected = GradedRing::new(3).with_inverse_pair("y", "y_inv").reduce(&expected);
        assert_eq!(ell.coefficient(1), expected);
    }
}
