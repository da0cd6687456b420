//! Polynomial defining functions: expansions, reality, projection and the
//! text format.

mod common;

use ake_core::domains::{catalog, DomainSpec, RayParams, CATALOG};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_order_jet_reproduces_the_polynomial(
        (spec, p, h) in (1usize..=3).prop_flat_map(|n| (spsh_polynomial(n), point(n, 0.5), point(n, 0.5))),
    ) {
        let jet = spec.evaluate_jet(&p, spec.degree()).unwrap();
        let shifted: Vec<C> = p.iter().zip(&h).map(|(a, b)| a + b).collect();
        let want = spec.evaluate_complex(&shifted);
        let got = sum_jet(&jet, &h);
        prop_assert!((want - got).norm() <= 1e-12 * want.norm().max(1.0), "{} vs {}", want, got);
    }

    #[test]
    fn hermitian_coefficients_give_real_values(
        (spec, p) in (1usize..=3).prop_flat_map(|n| (spsh_polynomial(n), point(n, 1.0))),
    ) {
        prop_assert!(spec.reality_residual() <= 1e-15);
        let v = spec.evaluate_complex(&p);
        prop_assert!(v.im.abs() <= 1e-13 * v.re.abs().max(1.0));
        let jet = spec.evaluate_jet(&p, 3).unwrap();
        prop_assert!(jet.is_real(1e-12));
    }

    #[test]
    fn projection_lands_on_the_boundary(
        (spec, v) in (1usize..=3).prop_flat_map(|n| (spsh_polynomial(n), direction(n))),
        r in 0.3..1.5f64,
    ) {
        let seed: Vec<C> = v.iter().map(|z| z * r).collect();
        let q = spec.boundary_project(&seed).unwrap();
        prop_assert!(spec.evaluate(&q).abs() <= 1e-12);
    }

    #[test]
    fn spec_file_round_trips(
        spec in (1usize..=3).prop_flat_map(spsh_polynomial),
        p in point(3, 1.0),
    ) {
        let back = DomainSpec::parse(&spec.to_spec_file()).unwrap();
        prop_assert_eq!(back.n(), spec.n());
        let p = &p[..spec.n()];
        prop_assert_eq!(back.evaluate(p), spec.evaluate(p));
        prop_assert_eq!(back.terms(), spec.terms());
    }

    #[test]
    fn inward_ray_points_are_interior(
        spec in (1usize..=3).prop_flat_map(spsh_polynomial),
    ) {
        let q = spec.boundary_project(&spec.default_seed()).unwrap();
        let ray = spec.inward_ray(&q, &RayParams::default()).unwrap();
        for p in ray.points() {
            prop_assert!(spec.evaluate(&p) < 0.0);
        }
    }
}

#[test]
fn catalog_domains_round_trip_and_contain_their_witness() {
    for &(name, _, _) in CATALOG {
        let spec = catalog(name, &[]).unwrap();
        assert!(spec.evaluate(spec.interior_witness()) < 0.0, "{name}");
        let back = DomainSpec::parse(&spec.to_spec_file()).unwrap();
        assert_eq!(back.terms(), spec.terms(), "{name}");
    }
}
