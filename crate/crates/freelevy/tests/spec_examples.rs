//! Closed-form example values and cross-representation identities exercised
//! through the public API.

use freelevy::catalog;
use freelevy::jet::C64;
use freelevy::measures::{log_moment_check, pair_from_triplet, triplet_from_pair};
use freelevy::processes::{sd_test, SdMethod, SelfSimilarProcess};
use freelevy::transforms::{cauchy_transform, density_grid, eval_cumulant, f_inverse_solve};

fn gamma11() -> catalog::CatalogEntry {
    catalog::get("free_gamma", &[("t", 1.0), ("c", 1.0)]).unwrap()
}

#[test]
fn free_gamma_cumulant_at_real_boundary_point() {
    // the quadrature path at the boundary-real argument z = -0.1 must match
    // the closed form (1 - √1.4)/2
    let spec = gamma11().spec.triplet_only().unwrap();
    let v = eval_cumulant(&spec, C64::new(-0.1, 0.0)).unwrap();
    let expected = (1.0 - 1.4f64.sqrt()) / 2.0;
    assert!((v - expected).norm() < 1e-8, "{v} vs {expected}");
}

#[test]
fn free_gamma_cauchy_at_one_plus_two_i() {
    // G(z) = (3z - 1 - √(z-α₋)√(z-α₊)) / (2z²) with the branch that makes
    // G ~ 1/z at infinity
    let z = C64::new(1.0, 2.0);
    let s2 = 2.0 * 2f64.sqrt();
    let s = (z - (3.0 - s2)).sqrt() * (z - (3.0 + s2)).sqrt();
    let expected = (3.0 * z - 1.0 - s) / (2.0 * z * z);
    let got = cauchy_transform(&gamma11().spec, z).unwrap();
    assert!((got - expected).norm() < 1e-11, "{got} vs {expected}");
    assert!(got.im < 0.0);
}

#[test]
fn free_gamma_f_inverse_matches_closed_cauchy() {
    // u = F(w) = 1/G(w) at w = 6i
    let entry = gamma11();
    let w = C64::new(0.0, 6.0);
    let g = entry.closed_cauchy.as_ref().unwrap()(w);
    let u = f_inverse_solve(&entry.spec, w).unwrap();
    assert!((u - 1.0 / g).norm() < 1e-10, "{u} vs {}", 1.0 / g);
}

#[test]
fn cauchy_asymptotics_along_imaginary_axis() {
    for (name, params) in [
        ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
        ("fuss_catalan", vec![("p", 1.5)]),
        ("mu_p", vec![("p", 0.5)]),
    ] {
        let spec = catalog::get(name, &params).unwrap().spec;
        let mut prev = f64::INFINITY;
        for y in [10.0, 100.0, 1000.0] {
            let w = C64::new(0.0, y);
            let g = cauchy_transform(&spec, w).unwrap();
            let dev = (w * g - 1.0).norm();
            assert!(dev < prev, "{name}: |wG-1| not decreasing at y={y}");
            prev = dev;
        }
        assert!(prev < 1e-2);
    }
}

#[test]
fn free_gamma_density_value_through_closed_form_spec() {
    let grid = density_grid(&gamma11().spec, 0.0, 6.0, 601).unwrap();
    let (x, f) = grid.nearest(1.0).unwrap();
    assert_eq!(x, 1.0);
    assert!((f - 1.0 / std::f64::consts::PI).abs() < 1e-6, "f(1) = {f}");
}

#[test]
fn phi_representation_consistency_for_catalog_triplets() {
    // φ from the triplet (through the cumulant) and from the generating
    // pair agree on a ℂ⁺ grid
    for (name, params) in [
        ("semicircle", vec![("eta", 0.3), ("a", 1.1)]),
        ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
        ("mu_p", vec![("p", 0.5)]),
        ("fuss_catalan", vec![("p", 1.5)]),
        ("free_poisson", vec![("lambda", 1.0)]),
    ] {
        let spec = catalog::get(name, &params).unwrap().spec;
        let t = spec.triplet().unwrap();
        let pair = pair_from_triplet(t).unwrap();
        for u in [C64::new(0.4, 1.3), C64::new(-1.2, 0.7), C64::new(2.0, 2.5)] {
            let via_cumulant = u * t.cumulant_jet(1.0 / u).unwrap().v;
            let via_pair = pair.phi(u).unwrap();
            assert!(
                (via_cumulant - via_pair).norm() < 1e-7,
                "{name} at {u}: {via_cumulant} vs {via_pair}"
            );
        }
    }
}

#[test]
fn triplet_pair_round_trip_for_density_measures() {
    let spec = gamma11().spec;
    let t = spec.triplet().unwrap();
    let pair = pair_from_triplet(t).unwrap();
    let back = triplet_from_pair(&pair).unwrap();
    assert!((t.a - back.a).abs() < 1e-12);
    assert!((t.eta - back.eta).abs() < 1e-9);
    for x in [0.3, 1.0, 2.5, 3.9] {
        let orig = t.nu.density_at(x);
        let round = back.nu.density_at(x);
        assert!((orig - round).abs() < 1e-9 * (1.0 + orig), "at {x}");
    }
}

#[test]
fn log_moment_finite_for_all_sd_catalog_laws() {
    for (name, params) in [
        ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
        ("free_gamma", vec![("t", 2.0), ("c", 0.5)]),
        ("mu_p", vec![("p", 0.5)]),
        ("fuss_catalan", vec![("p", 1.5)]),
    ] {
        let spec = catalog::get(name, &params).unwrap().spec;
        assert!(
            log_moment_check(&spec.triplet().unwrap().nu).is_finite(),
            "{name}"
        );
    }
}

#[test]
fn mu_p_nonpositive_parameter_is_excluded_from_sd_flows() {
    let spec = catalog::get("mu_p", &[("p", -0.5)]).unwrap().spec;
    assert!(spec.triplet().is_none());
    let verdict = sd_test(&spec, SdMethod::AnalyticHalfplane).unwrap();
    assert!(!verdict.is_sd);
    assert!(SelfSimilarProcess::new(spec, 1.0).is_err());
}
