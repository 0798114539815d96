//! Checkers on small hand-built inputs with known outcomes.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use celint_core::celestial::{integrate_class, CelestialError, ManifestationChain};
use celint_core::chow::{blowup_point, projective, ChowClass, ChowRing};
use celint_core::model::file::{load_problem, Problem};
use celint_core::model::{BlowupStep, Component, DegreeConfig, NCConfig, StratumSelection};
use celint_core::verify::{
    check_altexp, check_can_degree, check_cov, check_denloe, check_key, check_necfacts, CheckReport, CovSide,
    DenloeSet,
};
use celint_core::{RatFunc, Rational};

fn fixture(name: &str) -> Problem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"));
    load_problem(&path).unwrap()
}

fn c(n: i64) -> RatFunc {
    RatFunc::from_i64(n)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn cls(ring: &Arc<ChowRing>, src: &str) -> ChowClass {
    ChowClass::parse(ring, src).unwrap()
}

fn whole(config: &NCConfig) -> StratumSelection {
    StratumSelection::whole(config.len())
}

fn assert_pass(r: &CheckReport) {
    assert!(r.passed, "{r}");
}

#[test]
fn key_on_a_line_in_the_plane() {
    let p2 = projective(2);
    let line = Component::new("L", cls(&p2, "h"), c(1));
    let config = NCConfig::new(p2, vec![line]).unwrap();
    for contains in [0b0, 0b1] {
        assert_pass(&check_key(&config, &whole(&config), &BlowupStep::new(contains, "E")).unwrap());
    }
}

#[test]
fn key_on_the_cusp_resolution() {
    let p = fixture("cusp");
    let config = p.config.as_ref().unwrap();
    // A point on E1 only, then the node E1 ∩ E3.
    for contains in [0b0010, 0b1010] {
        let step = BlowupStep::new(contains, "F");
        assert_pass(&check_key(config, &p.selection, &step).unwrap());
    }
}

#[test]
fn zero_multiplicity_component_outside_the_selection_is_invisible() {
    let p2 = projective(2);
    let l = Component::new("L", cls(&p2, "h"), RatFunc::var());
    let z = Component::new("Z", cls(&p2, "2*h"), c(0));
    let without = NCConfig::new(p2.clone(), vec![l.clone()]).unwrap();
    let with = NCConfig::new(p2, vec![l, z]).unwrap();
    assert_eq!(
        integrate_class(&without, &whole(&without)).unwrap(),
        integrate_class(&with, &whole(&with)).unwrap()
    );
}

#[test]
fn cov_plane_against_its_blowup() {
    let p2 = projective(2);
    let bl = blowup_point(&p2).unwrap();
    let x = CovSide {
        config: NCConfig::new(p2, vec![]).unwrap(),
        selection: StratumSelection::whole(0),
        chain: ManifestationChain::identity(),
    };
    let e = Component::new("E", bl.exceptional.clone(), c(1));
    let config = NCConfig::new(bl.ring.clone(), vec![e]).unwrap();
    let y = CovSide {
        selection: whole(&config),
        config,
        chain: ManifestationChain::new(vec![bl.map.clone()]).unwrap(),
    };
    assert_pass(&check_cov(&x, &y, &bl.exceptional).unwrap());

    // A wrong K is caught before any integral is compared.
    let wrong = bl.exceptional.scale(&c(2));
    assert!(matches!(check_cov(&x, &y, &wrong), Err(CelestialError::PreconditionViolated(_))));
}

#[test]
fn denloe_empty_configuration() {
    let dc = DegreeConfig::new(2, vec![], vec![], BTreeMap::from([(0, q(3))])).unwrap();
    let step = BlowupStep::new(0, "E");
    let r = check_denloe(&dc, &DenloeSet::Strata(StratumSelection::whole(0)), &step).unwrap();
    assert_pass(&r);
    assert_eq!(r.rhs, "3");
    let r = check_denloe(&dc, &DenloeSet::CenterPoint, &step).unwrap();
    assert_pass(&r);
    assert_eq!(r.rhs, "1");
}

#[test]
fn altexp_small_configurations() {
    let p2 = projective(2);
    assert_pass(&check_altexp(&NCConfig::new(p2.clone(), vec![]).unwrap()).unwrap());
    let two_lines = NCConfig::new(
        p2.clone(),
        vec![
            Component::new("L1", cls(&p2, "h"), c(1)),
            Component::new("L2", cls(&p2, "h"), RatFunc::var()),
        ],
    )
    .unwrap();
    assert_pass(&check_altexp(&two_lines).unwrap());
    assert_pass(&check_altexp(fixture("cusp").config.as_ref().unwrap()).unwrap());
}

#[test]
fn necfacts_with_literal_sides() {
    let p2 = projective(2);
    let reports = check_necfacts(&p2, &[]).unwrap();
    assert_eq!(reports.len(), 3);
    reports.iter().for_each(assert_pass);
    // c(TP2) + pt.
    assert_eq!(reports[0].rhs, cls(&p2, "[V] + 3*h + 4*h^2").to_string());

    let p3 = projective(3);
    let reports = check_necfacts(&p3, &[]).unwrap();
    reports.iter().for_each(assert_pass);
    // c(TP3) − pt.
    assert_eq!(reports[2].rhs, cls(&p3, "[V] + 4*h + 6*h^2 + 3*h^3").to_string());

    // A line through the center: c(TP2)/(1+h) = 1 + 2h + h².
    let reports = check_necfacts(&p2, &[(cls(&p2, "h"), true)]).unwrap();
    assert_eq!(reports.len(), 4);
    reports.iter().for_each(assert_pass);
    assert_eq!(reports[3].rhs, cls(&p2, "[V] + 2*h + h^2").to_string());
}

#[test]
fn can_degree_of_a_k3() {
    let blown = fixture("k3_blowup");
    let bl_config = blown.config.clone().unwrap();
    let down = ManifestationChain::new(blown.chain("down").unwrap().to_vec()).unwrap();
    let k3 = blown.chain("down").unwrap()[0].target().clone();
    let trivial = NCConfig::new(k3, vec![]).unwrap();
    let reps = [(trivial, ManifestationChain::identity()), (bl_config, down)];
    let r = check_can_degree(&reps, Some(&q(24))).unwrap();
    assert_pass(&r);
    assert_eq!(r.lhs, "{24}");

    let r = check_can_degree(&[], None).unwrap();
    assert_eq!(r.lhs, "{}");
}

#[test]
fn can_degree_on_a_curve_is_reported_not_asserted() {
    let p = fixture("genus2");
    let config = p.config.as_ref().unwrap();
    let ring = config.ring().clone();
    // K = p + q against K = 2p: linearly equivalent, different degrees.
    let doubled = NCConfig::new(ring.clone(), vec![Component::new("p", cls(&ring, "pt"), c(2))]).unwrap();
    let reps = [
        (config.clone(), ManifestationChain::identity()),
        (doubled, ManifestationChain::identity()),
    ];
    let r = check_can_degree(&reps, None).unwrap();
    assert_eq!(r.lhs, "{-3, -8/3}");
}

#[test]
fn key_rejects_a_center_on_disjoint_curves() {
    // E1 and E2 do not meet in the cusp resolution.
    let p = fixture("cusp");
    let step = BlowupStep::new(0b0110, "F");
    assert!(check_key(p.config.as_ref().unwrap(), &p.selection, &step).is_err());
}
