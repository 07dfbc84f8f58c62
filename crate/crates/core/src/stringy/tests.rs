use super::*;
use crate::ring::parse::parse_poly;
use crate::ring::rat;

fn p(s: &str) -> MultiPoly {
    parse_poly(s).unwrap()
}

fn class(s: &str) -> K0Class {
    AtomTable::new().parse_class(s).unwrap()
}

fn one_component(r: u32, a: Rational, open: &str, exceptional: &str) -> ResolutionDatum {
    ResolutionDatum::new(
        Flavor::Stringy,
        r,
        vec![Component::new("E1", a)],
        vec![(vec![], class(open)), (vec!["E1".into()], class(exceptional))],
        AtomTable::new(),
    )
    .unwrap()
}

fn blowup_of_plane() -> ResolutionDatum {
    one_component(1, int(1), "L^2 - 1", "L + 1")
}

fn a1_cone() -> ResolutionDatum {
    one_component(1, int(0), "L^2 - 1", "L + 1")
}

#[test]
fn blowup_invariants() {
    let d = blowup_of_plane();
    assert_eq!(motivic_integral(&d).unwrap().to_string(), "L^2");
    assert_eq!(stringy_e(&d).unwrap().to_string(), "u^2*v^2");
    assert_eq!(stringy_chi_y(&d).unwrap().to_string(), "y^2");
    assert_eq!(stringy_euler(&d).unwrap(), int(1));
    let smooth = smooth_datum(class("L^2"), AtomTable::new()).unwrap();
    let report = invariance_check(&smooth, &d).unwrap();
    assert!(report.all_equal());
}

#[test]
fn crepant_cone() {
    let d = a1_cone();
    assert_eq!(stringy_e(&d).unwrap().to_string(), "u*v + u^2*v^2");
    assert_eq!(stringy_euler(&d).unwrap(), int(2));
    assert_eq!(stringy_chi_y(&d).unwrap().value, RationalFunction::from_poly(p("y^2 - y")));
    assert_eq!(motivic_integral(&d).unwrap(), RootFraction::from_poly(Realization::K0, 1, d.total_class().as_poly().clone()).unwrap());
}

#[test]
fn wrong_discrepancy_is_detected() {
    let smooth = smooth_datum(class("L^2"), AtomTable::new()).unwrap();
    let wrong = one_component(1, int(2), "L^2 - 1", "L + 1");
    let report = invariance_check(&smooth, &wrong).unwrap();
    assert!(!report.motivic_integral_equal);
    assert!(!report.all_equal());
    assert!(invariance_check(&wrong, &wrong).unwrap().all_equal());
}

#[test]
fn fractional_discrepancy() {
    let d = one_component(2, rat(1, 2), "L^2 - 1", "L + 1");
    // 2 / (3/2) by l'Hopital on (L - 1)/(L^{3/2} - 1)
    assert_eq!(stringy_euler_direct(&d).unwrap(), rat(4, 3));
    assert_eq!(stringy_euler(&d).unwrap(), rat(4, 3));
    let e = stringy_e(&d).unwrap();
    assert_eq!(e.root_index(), 2);
    let chi = stringy_chi_y(&d).unwrap();
    assert_eq!(chi.variable(), "t");
}

#[test]
fn validation() {
    let atoms = AtomTable::new;
    let comp = |a| vec![Component::new("E1", a)];
    let ok_strata = || vec![(vec![], class("1")), (vec!["E1".to_string()], class("1"))];
    assert!(ResolutionDatum::new(Flavor::Stringy, 1, comp(int(-1)), ok_strata(), atoms()).is_err());
    assert!(ResolutionDatum::new(Flavor::Stringy, 1, comp(rat(1, 2)), ok_strata(), atoms()).is_err());
    assert!(ResolutionDatum::new(Flavor::Arc, 2, comp(rat(1, 2)), ok_strata(), atoms()).is_err());
    let missing = vec![(vec![], class("1"))];
    let err = ResolutionDatum::new(Flavor::Stringy, 1, comp(int(1)), missing, atoms()).unwrap_err();
    assert_eq!(err, Error::invalid("missing stratum entry for {E1}"));
    let unknown = vec![(vec![], class("1")), (vec!["E2".to_string()], class("1"))];
    assert!(ResolutionDatum::new(Flavor::Stringy, 1, comp(int(1)), unknown, atoms()).is_err());
}

#[test]
fn closed_strata_by_inclusion_exclusion() {
    let d = ResolutionDatum::new(
        Flavor::Stringy,
        1,
        vec![Component::new("A", int(1)), Component::new("B", int(2))],
        vec![
            (vec![], class("L^2 - 2*L + 1")),
            (vec!["A".into()], class("L - 1")),
            (vec!["B".into()], class("L - 1")),
            (vec!["A".into(), "B".into()], class("1")),
        ],
        AtomTable::new(),
    )
    .unwrap();
    let closed = d.closed_strata();
    assert_eq!(closed[0], class("L^2"));
    assert_eq!(closed[1], class("L"));
    assert_eq!(closed[3], class("1"));
    // Fubini: product of the one-dimensional answers L^2/(L+1) and L^3/(L^2+L+1)
    let expected = RootFraction::new(Realization::K0, 1, p("L^5"), UniPoly::new(vec![int(1), int(2), int(2), int(1)])).unwrap();
    assert_eq!(motivic_integral(&d).unwrap(), expected);
}

#[test]
fn jacobian_limits() {
    let zero = jacobian_factor_limit(&int(0), 6).unwrap();
    assert!(zero.agree);
    assert_eq!(zero.product_form, TruncSeries::one("e", 6));
    for a in 1..=3 {
        let lim = jacobian_factor_limit(&int(a), 6).unwrap();
        assert!(lim.agree);
        assert_eq!(lim.product_form.coeff(0), RationalFunction::from_poly(MultiPoly::one()));
    }
    let half = jacobian_factor_limit(&rat(1, 2), 4).unwrap();
    assert_eq!(half.root, 2);
    assert!(half.agree);
    assert!(jacobian_factor_limit(&int(-1), 3).is_err());
}

#[test]
fn contributions_sum_to_integral() {
    let d = blowup_of_plane();
    let parts = d.stratum_contributions(Realization::K0).unwrap();
    assert_eq!(parts[1].0, vec!["E1".to_string()]);
    let total = parts.iter().fold(RootFraction::from_poly(Realization::K0, 1, MultiPoly::zero()).unwrap(), |acc, (_, v)| acc.add(v).unwrap());
    assert_eq!(total, motivic_integral(&d).unwrap());
}
