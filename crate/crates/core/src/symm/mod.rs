//! Chern roots versus Chern classes.
//!
//! A [`FormalBundle`] is a rank together with Chern classes living in a
//! [`GradedRing`]. Everything that is naturally a symmetric function of the
//! Chern roots (power sums, multiplicative classes, the Chern character,
//! λ- and S-operations) is computed from the Chern classes through Newton's
//! identities, so bundles need not split. Split bundles additionally keep
//! their roots, which gives a second, root-by-root evaluation route.
//!
//! Dual bundles use `c^i(E*) = (-1)^i c^i(E)`.

pub mod elliptic;

use std::sync::Arc;

use crate::ring::graded::GradedRing;
use crate::ring::poly::MultiPoly;
use crate::ring::series::TruncSeries;
use crate::ring::{factorial, int, Coeff, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FormalBundle {
    rank: u32,
    chern: Vec<MultiPoly>,
    split_roots: Option<Vec<MultiPoly>>,
    ring: Arc<GradedRing>,
}

impl FormalBundle {
    /// Bundle with prescribed Chern classes `c^1..c^r` (missing trailing
    /// classes are zero). Each `c^i` must be homogeneous of degree `i`.
    pub fn from_chern(ring: Arc<GradedRing>, rank: u32, chern: Vec<MultiPoly>) -> Result<Self> {
        if chern.len() > rank as usize {
            return Err(Error::invalid(format!(
                "{} Chern classes given for a bundle of rank {rank}",
                chern.len()
            )));
        }
        let mut chern: Vec<MultiPoly> = chern.iter().map(|c| ring.reduce(c)).collect();
        for (i, c) in chern.iter().enumerate() {
            if ring.degree_part(c, i as u32 + 1) != *c {
                return Err(Error::invalid(format!("c^{} = {c} is not homogeneous of degree {}", i + 1, i + 1)));
            }
        }
        chern.resize(rank as usize, MultiPoly::zero());
        Ok(FormalBundle { rank, chern, split_roots: None, ring })
    }

    /// Bundle with independent Chern classes `c1..c_rank` in a fresh ring
    /// truncated at `max_degree`.
    pub fn generic(rank: u32, max_degree: u32) -> Self {
        Self::generic_named("c", rank, max_degree)
    }

    pub fn generic_named(prefix: &str, rank: u32, max_degree: u32) -> Self {
        let ring = Arc::new(GradedRing::chern(prefix, rank, max_degree));
        let chern = (1..=rank).map(|i| ring.reduce(&MultiPoly::var(&format!("{prefix}{i}")))).collect();
        FormalBundle { rank, chern, split_roots: None, ring }
    }

    /// Direct sum of line bundles with the given degree-1 roots.
    pub fn split(ring: Arc<GradedRing>, roots: Vec<MultiPoly>) -> Result<Self> {
        for a in &roots {
            if ring.degree_part(a, 1) != *a {
                return Err(Error::invalid(format!("Chern root {a} is not of degree 1")));
            }
        }
        let chern = elementary_symmetric(&roots, &ring);
        Ok(FormalBundle { rank: roots.len() as u32, chern, split_roots: Some(roots), ring })
    }

    pub fn line(ring: Arc<GradedRing>, c1: MultiPoly) -> Result<Self> {
        Self::split(ring, vec![c1])
    }

    pub fn trivial(ring: Arc<GradedRing>, rank: u32) -> Self {
        FormalBundle {
            rank,
            chern: vec![MultiPoly::zero(); rank as usize],
            split_roots: Some(vec![MultiPoly::zero(); rank as usize]),
            ring,
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    /// `c^i` for `1 <= i <= rank`; zero above the rank, one at `i = 0`.
    pub fn chern_class(&self, i: usize) -> MultiPoly {
        match i {
            0 => MultiPoly::one(),
            i if i <= self.rank as usize => self.chern[i - 1].clone(),
            _ => MultiPoly::zero(),
        }
    }

    pub fn chern_classes(&self) -> &[MultiPoly] {
        &self.chern
    }

    pub fn split_roots(&self) -> Option<&[MultiPoly]> {
        self.split_roots.as_deref()
    }

    pub fn total_chern(&self) -> MultiPoly {
        self.chern.iter().fold(MultiPoly::one(), |acc, c| &acc + c)
    }

    pub fn dual(&self) -> Self {
        let chern = self
            .chern
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { -c } else { c.clone() })
            .collect();
        let split_roots = self.split_roots.as_ref().map(|r| r.iter().map(|a| -a).collect());
        FormalBundle { rank: self.rank, chern, split_roots, ring: self.ring.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::invalid("direct sum of bundles over different ambient rings"));
        }
        let total = self.ring.mul(&self.total_chern(), &other.total_chern());
        let rank = self.rank + other.rank;
        let chern = (1..=rank).map(|i| self.ring.degree_part(&total, i)).collect();
        let split_roots = match (&self.split_roots, &other.split_roots) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(FormalBundle { rank, chern, split_roots, ring: self.ring.clone() })
    }

    /// Power sums `p_1..p_{k_max}` of the Chern roots (Newton's identities).
    pub fn power_sums(&self, k_max: usize) -> Vec<MultiPoly> {
        let e: Vec<MultiPoly> = (0..=k_max.min(self.rank as usize)).map(|i| self.chern_class(i)).collect();
        power_sums_from_elementary(&e, k_max, &self.ring)
    }

    fn top_degree(&self) -> usize {
        self.ring.max_degree() as usize
    }

    /// `prod_i f(alpha_i)` expressed through the Chern classes, computed as
    /// `a^r * exp(sum_k lambda_k p_k)` where `a = f(0)` and
    /// `log(f/a) = sum_k lambda_k z^k`.
    pub fn multiplicative_class(&self, f: &TruncSeries<MultiPoly>) -> Result<MultiPoly> {
        let a = f.constant_term().clone();
        let a_inv = a
            .unit_inverse()
            .ok_or_else(|| Error::NonUnit(format!("{a} (characteristic series must start with a unit)")))?;
        let need = self.top_degree();
        if f.order() < need {
            return Err(Error::TruncationTooSmall { have: f.order(), need });
        }
        let log = f.truncate(need).scale(&a_inv).log()?;
        let p = self.power_sums(need);
        let mut x = MultiPoly::zero();
        for k in 1..=need {
            x = &x + &self.ring.reduce(&(log.coeff(k) * p[k - 1].clone()));
        }
        let e = self.ring.exp(&x)?;
        Ok(self.ring.mul(&a.pow(self.rank), &e))
    }

    /// Root-by-root evaluation `prod_i f(alpha_i)`; only for split bundles.
    pub fn multiplicative_class_split(&self, f: &TruncSeries<MultiPoly>) -> Result<MultiPoly> {
        let roots = self
            .split_roots
            .as_ref()
            .ok_or_else(|| Error::invalid("bundle is not split"))?;
        let need = self.top_degree();
        if f.order() < need {
            return Err(Error::TruncationTooSmall { have: f.order(), need });
        }
        let mut acc = MultiPoly::one();
        for a in roots {
            let val = eval_series_at(f, a, &self.ring);
            acc = self.ring.mul(&acc, &val);
        }
        Ok(acc)
    }

    /// `ch(E) = r + sum_{k>=1} p_k / k!`.
    pub fn chern_character(&self) -> MultiPoly {
        let need = self.top_degree();
        let p = self.power_sums(need);
        let mut acc = MultiPoly::int(self.rank as i64);
        for (k, pk) in p.iter().enumerate() {
            acc = &acc + &pk.scale(&factorial(k as u32 + 1).recip());
        }
        self.ring.reduce(&acc)
    }

    /// `Λ_t(E) = sum_j c^j t^j` (a polynomial of degree `rank` in `t`).
    pub fn lambda_op(&self, t_order: usize) -> TruncSeries<MultiPoly> {
        TruncSeries::from_fn("t", t_order, |j| self.chern_class(j))
    }

    /// `S_t(E) = prod_i (1 - t alpha_i)^{-1} = exp(sum_k p_k t^k / k)`.
    pub fn s_op(&self, t_order: usize) -> TruncSeries<MultiPoly> {
        let p = self.power_sums(t_order);
        let arg = TruncSeries::from_fn("t", t_order, |k| {
            if k == 0 {
                MultiPoly::zero()
            } else {
                p[k - 1].scale(&Rational::new(1.into(), (k as i64).into()))
            }
        });
        arg.exp().expect("zero constant term").map(|c| self.ring.reduce(c))
    }

    /// Chern characters `ch(Λ^j E)` (or of `E*` when `dual`) for
    /// `j = 0..=rank`, computed from the Adams power sums
    /// `ch(ψ^k E) = sum_i e^{k alpha_i}` through Newton's identities.
    pub fn ch_exterior_powers(&self, dual: bool) -> Vec<MultiPoly> {
        let r = self.rank as usize;
        let need = self.top_degree();
        let p = self.power_sums(need);
        let sign = if dual { -1 } else { 1 };
        let adams: Vec<MultiPoly> = (1..=r)
            .map(|k| {
                let mut acc = MultiPoly::int(r as i64);
                for (m, pm) in p.iter().enumerate() {
                    let m = m as u32 + 1;
                    let coeff = int(sign * k as i64).pow(m as i32) / factorial(m);
                    acc = &acc + &pm.scale(&coeff);
                }
                self.ring.reduce(&acc)
            })
            .collect();
        elementary_from_power_sums(&adams, r, &self.ring)
    }

    /// `ch(Λ_x E) = sum_j x^j ch(Λ^j E)` for a ring element `x`.
    pub fn ch_lambda(&self, x: &MultiPoly, dual: bool) -> MultiPoly {
        let lam = self.ch_exterior_powers(dual);
        let mut acc = MultiPoly::zero();
        let mut xp = MultiPoly::one();
        for l in &lam {
            acc = &acc + &self.ring.mul(&xp, l);
            xp = self.ring.mul(&xp, x);
        }
        acc
    }

    /// Same as [`ch_lambda`](Self::ch_lambda) for split bundles, multiplying
    /// out `prod_i (1 + x e^{±alpha_i})` root by root.
    pub fn ch_lambda_split(&self, x: &MultiPoly, dual: bool) -> Result<MultiPoly> {
        let roots = self
            .split_roots
            .as_ref()
            .ok_or_else(|| Error::invalid("bundle is not split"))?;
        let mut acc = MultiPoly::one();
        for a in roots {
            let arg = if dual { -a } else { a.clone() };
            let e = self.ring.exp(&arg)?;
            let factor = &MultiPoly::one() + &self.ring.mul(x, &e);
            acc = self.ring.mul(&acc, &factor);
        }
        Ok(acc)
    }
}

/// `sum_k f_k a^k` in the graded ring.
pub fn eval_series_at(f: &TruncSeries<MultiPoly>, a: &MultiPoly, ring: &GradedRing) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    let mut power = MultiPoly::one();
    for c in f.coeffs() {
        if power.is_zero() {
            break;
        }
        acc = &acc + &ring.reduce(&(c * &power));
        power = ring.mul(&power, a);
    }
    acc
}

/// Elementary symmetric polynomials `e_1..e_n` of the given elements.
pub fn elementary_symmetric(xs: &[MultiPoly], ring: &GradedRing) -> Vec<MultiPoly> {
    let mut e = vec![MultiPoly::one()];
    for x in xs {
        let mut next = e.clone();
        next.push(MultiPoly::zero());
        for j in 1..next.len() {
            next[j] = &e.get(j).cloned().unwrap_or_default() + &ring.mul(&e[j - 1], x);
        }
        e = next;
    }
    e.remove(0);
    e
}

/// Newton: `p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k`,
/// with `e[0] = 1` and `e_i = 0` beyond the slice.
pub fn power_sums_from_elementary(e: &[MultiPoly], k_max: usize, ring: &GradedRing) -> Vec<MultiPoly> {
    let ei = |i: usize| e.get(i).cloned().unwrap_or_else(MultiPoly::zero);
    let mut p: Vec<MultiPoly> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut acc = ei(k).scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let term = ring.mul(&ei(i), &p[k - i - 1]);
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        p.push(ring.reduce(&acc));
    }
    p
}

/// Newton in the other direction: `j e_j = sum_{i=1}^j (-1)^{i-1} e_{j-i} p_i`.
/// Returns `e_0..e_n`.
pub fn elementary_from_power_sums(p: &[MultiPoly], n: usize, ring: &GradedRing) -> Vec<MultiPoly> {
    let mut e = vec![MultiPoly::one()];
    for j in 1..=n {
        let mut acc = MultiPoly::zero();
        for i in 1..=j {
            let Some(pi) = p.get(i - 1) else { break };
            let term = ring.mul(&e[j - i], pi);
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&Rational::new(1.into(), (j as i64).into())));
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_poly;
    use crate::ring::rat;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    fn series(coeffs: &[Rational], n: usize) -> TruncSeries<MultiPoly> {
        TruncSeries::new("z", coeffs.iter().map(|c| MultiPoly::constant(c.clone())).collect(), n)
    }

    fn projective_plane() -> Arc<GradedRing> {
        Arc::new(GradedRing::new(2).with_var("h", 1, Some(2)))
    }

    #[test]
    fn newton_power_sums() {
        let e2 = FormalBundle::generic(2, 6);
        let ps = e2.power_sums(2);
        assert_eq!(ps[0], p("c1"));
        assert_eq!(ps[1], p("c1^2 - 2*c2"));
        let e1 = FormalBundle::generic(1, 6);
        for (k, pk) in e1.power_sums(5).iter().enumerate() {
            assert_eq!(*pk, p("c1").pow(k as u32 + 1));
        }
        let e3 = FormalBundle::generic(3, 6);
        assert_eq!(e3.power_sums(3)[2], p("c1^3 - 3*c1*c2 + 3*c3"));
    }

    #[test]
    fn newton_round_trip() {
        let e = FormalBundle::generic(4, 8);
        let ring = e.ring().clone();
        let ps = e.power_sums(4);
        let back = elementary_from_power_sums(&ps, 4, &ring);
        for (i, c) in back.iter().enumerate().skip(1) {
            assert_eq!(*c, e.chern_class(i));
        }
    }

    #[test]
    fn total_chern_class_from_one_plus_z() {
        let e = FormalBundle::generic(3, 5);
        let f = series(&[int(1), int(1)], 5);
        assert_eq!(e.multiplicative_class(&f).unwrap(), p("1 + c1 + c2 + c3"));
    }

    #[test]
    fn todd_of_line_bundle_on_plane() {
        let ring = projective_plane();
        let line = FormalBundle::line(ring, p("h")).unwrap();
        let todd = series(&[int(1), rat(1, 2), rat(1, 12), int(0)], 3);
        assert_eq!(line.multiplicative_class(&todd).unwrap(), p("1 + 1/2*h + 1/12*h^2"));
        assert_eq!(line.multiplicative_class_split(&todd).unwrap(), p("1 + 1/2*h + 1/12*h^2"));
    }

    #[test]
    fn non_unit_series_rejected() {
        let e = FormalBundle::generic(2, 3);
        let f = series(&[int(0), int(1)], 3);
        assert!(matches!(e.multiplicative_class(&f), Err(Error::NonUnit(_))));
    }

    #[test]
    fn short_series_rejected() {
        let e = FormalBundle::generic(2, 6);
        let f = series(&[int(1), int(1)], 3);
        assert_eq!(e.multiplicative_class(&f), Err(Error::TruncationTooSmall { have: 3, need: 6 }));
    }

    #[test]
    fn chern_character_examples() {
        let ring = projective_plane();
        let line = FormalBundle::line(ring, p("3*h")).unwrap();
        assert_eq!(line.chern_character(), p("1 + 3*h + 9/2*h^2"));
        let e = FormalBundle::generic(2, 2);
        assert_eq!(e.chern_character(), p("2 + c1 + 1/2*c1^2 - c2"));
    }

    #[test]
    fn lambda_and_s_operations() {
        let e = FormalBundle::generic(2, 6);
        let lam = e.lambda_op(4);
        assert_eq!(lam.coeff(1), p("c1"));
        assert_eq!(lam.coeff(2), p("c2"));
        assert!(lam.coeff(3).is_zero());
        let s = e.s_op(3);
        assert_eq!(s.coeff(2), p("c1^2 - c2"));
        let zero = FormalBundle::generic(0, 4);
        assert_eq!(zero.lambda_op(3), TruncSeries::one("t", 3));
        assert_eq!(zero.s_op(3), TruncSeries::one("t", 3));
    }

    #[test]
    fn dual_signs() {
        let e = FormalBundle::generic(3, 3);
        let d = e.dual();
        assert_eq!(d.chern_classes(), &[p("-c1"), p("c2"), p("-c3")]);
        assert_eq!(d.dual(), e);
    }

    #[test]
    fn exterior_power_characters_match_roots() {
        let ring = Arc::new(GradedRing::new(3).with_var("a", 1, None).with_var("b", 1, None));
        let e = FormalBundle::split(ring, vec![p("a"), p("b")]).unwrap();
        let y = MultiPoly::var("y");
        for dual in [false, true] {
            assert_eq!(e.ch_lambda(&y, dual), e.ch_lambda_split(&y, dual).unwrap());
        }
        let lam = e.ch_exterior_powers(false);
        assert_eq!(lam[0], MultiPoly::one());
        assert_eq!(lam[1], e.chern_character());
    }

    #[test]
    fn from_chern_checks_homogeneity() {
        let ring = projective_plane();
        assert!(FormalBundle::from_chern(ring.clone(), 2, vec![p("h^2")]).is_err());
        assert!(FormalBundle::from_chern(ring.clone(), 1, vec![p("h"), p("h^2")]).is_err());
        assert!(FormalBundle::from_chern(ring, 2, vec![p("3*h"), p("3*h^2")]).is_ok());
    }
}
