//! Property tests over randomized inputs.

use freelevy::calculus::boxplus;
use freelevy::catalog;
use freelevy::jet::C64;
use freelevy::transforms::{eval_cumulant, f_inverse_solve};
use proptest::prelude::*;

fn upper_half_plane() -> impl Strategy<Value = C64> {
    (-6.0..6.0f64, 1e-3..5.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn lower_half_plane() -> impl Strategy<Value = C64> {
    (-3.0..1.5f64, -4.0..-1e-3f64).prop_map(|(re, im)| C64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // u = F(w) stays in the upper half-plane and solves u + φ(u) = w
    #[test]
    fn f_inverse_round_trip(w in upper_half_plane(), t in 0.4..2.5f64, c in 0.3..1.5f64) {
        let spec = catalog::get("free_gamma", &[("t", t), ("c", c)]).unwrap().spec;
        let u = f_inverse_solve(&spec, w).unwrap();
        prop_assert!(u.im > 0.0);
        let back = u + spec.phi(u).unwrap();
        prop_assert!((back - w).norm() <= 1e-10 * (1.0 + w.norm()));
    }

    // φ maps ℂ⁺ into ℂ⁻ ∪ ℝ for ⊞-infinitely divisible laws
    #[test]
    fn phi_halfplane_mapping(u in upper_half_plane(), p in 1.05..1.95f64) {
        let spec = catalog::get("fuss_catalan", &[("p", p)]).unwrap().spec;
        let phi = spec.phi(u).unwrap();
        prop_assert!(phi.im <= 1e-9, "Im φ = {}", phi.im);
    }

    // the jet derivative of the cumulant matches the analytic derivative
    // tc/√(1-4cz) of the free gamma transform
    #[test]
    fn jet_derivative_matches_analytic(z in lower_half_plane(), t in 0.4..2.5f64, c in 0.3..1.5f64) {
        let spec = catalog::get("free_gamma", &[("t", t), ("c", c)]).unwrap().spec;
        let (_, d) = spec.cumulant_with_derivative(z).unwrap();
        let analytic = t * c / (C64::new(1.0, 0.0) - 4.0 * c * z).sqrt();
        prop_assert!((d - analytic).norm() <= 1e-8 * (1.0 + analytic.norm()));
    }

    // convolution adds cumulant transforms exactly
    #[test]
    fn boxplus_adds_cumulants(z in lower_half_plane(), a in 0.2..2.0f64, p in 0.1..0.9f64) {
        let w = catalog::get("semicircle", &[("eta", 0.0), ("a", a)]).unwrap().spec;
        let m = catalog::get("mu_p", &[("p", p)]).unwrap().spec;
        let s = boxplus(&w, &m);
        let lhs = eval_cumulant(&s, z).unwrap();
        let rhs = eval_cumulant(&w, z).unwrap() + eval_cumulant(&m, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-14 * (1.0 + rhs.norm()));
    }
}
