//! Free additive convolution, dilation, and the Bercovici-Pata bijection.
//!
//! ⊞ adds cumulant transforms (triplets add component-wise); dilation D_c
//! rescales them, C_{D_cμ}(z) = C_μ(cz); and Λ : ID(*) → ID(⊞) is the
//! identity on (a, ν, η) data — all the analytic content lies in whether the
//! classical or the free Lévy–Khintchine formula interprets the triplet.

use crate::error::{Error, Result};
use crate::measures::CharTriplet;
use crate::transforms::{CumulantExpr, DistributionSpec};
use std::sync::Arc;

/// A classically infinitely divisible law, carried by the same triplet data.
#[derive(Clone, Debug)]
pub struct ClassicalSpec {
    pub label: String,
    pub triplet: Arc<CharTriplet>,
}

impl ClassicalSpec {
    pub fn new(label: impl Into<String>, triplet: CharTriplet) -> Self {
        ClassicalSpec {
            label: label.into(),
            triplet: Arc::new(triplet),
        }
    }
}

/// Free additive convolution: C_{μ₁⊞μ₂} = C_{μ₁} + C_{μ₂}.
///
/// The result carries a triplet exactly when both inputs do
/// (a₁+a₂, ν₁+ν₂, η₁+η₂).
pub fn boxplus(d1: &DistributionSpec, d2: &DistributionSpec) -> DistributionSpec {
    let expr = CumulantExpr::Sum(vec![d1.expr().clone(), d2.expr().clone()]);
    let triplet = match (d1.triplet(), d2.triplet()) {
        (Some(a), Some(b)) => Some(Arc::new(a.plus(b))),
        _ => None,
    };
    DistributionSpec::new(
        format!("boxplus({},{})", d1.label(), d2.label()),
        expr,
        triplet,
    )
}

/// Dilation D_c, c ≠ 0 (c < 0 reflects the law).
pub fn dilate(d: &DistributionSpec, c: f64) -> Result<DistributionSpec> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dilation factor must be finite and nonzero, got {c}"
        )));
    }
    let expr = CumulantExpr::Dilated(c, Box::new(d.expr().clone()));
    let triplet = match d.triplet() {
        Some(t) => Some(Arc::new(t.dilated(c)?)),
        None => None,
    };
    Ok(DistributionSpec::new(
        format!("dilate[{c}]({})", d.label()),
        expr,
        triplet,
    ))
}

/// The Bercovici-Pata image Λ(μ): the ⊞-ID law with the same triplet.
pub fn bercovici_pata(c: &ClassicalSpec) -> DistributionSpec {
    let t = c.triplet.clone();
    DistributionSpec::new(
        format!("bp({})", c.label),
        CumulantExpr::Triplet(t.clone()),
        Some(t),
    )
}

/// Λ⁻¹(μ): requires the triplet representation.
pub fn bercovici_pata_inverse(d: &DistributionSpec) -> Result<ClassicalSpec> {
    let t = d
        .triplet()
        .ok_or_else(|| Error::UnsupportedRepresentation {
            op: "bercovici_pata_inverse",
            detail: format!("`{}` has no attached triplet", d.label()),
        })?;
    Ok(ClassicalSpec {
        label: format!("bp_inv({})", d.label()),
        triplet: t.clone(),
    })
}

/// Classical convolution at triplet level (triplets add).
pub fn classical_convolve(c1: &ClassicalSpec, c2: &ClassicalSpec) -> ClassicalSpec {
    ClassicalSpec {
        label: format!("conv({},{})", c1.label, c2.label),
        triplet: Arc::new(c1.triplet.plus(&c2.triplet)),
    }
}

/// Classical dilation at triplet level (same triplet transform as D_c).
pub fn classical_dilate(c: &ClassicalSpec, factor: f64) -> Result<ClassicalSpec> {
    Ok(ClassicalSpec {
        label: format!("dilate[{factor}]({})", c.label),
        triplet: Arc::new(c.triplet.dilated(factor)?),
    })
}

/// Bitwise structural equality of triplets: scalars compare by bit pattern,
/// atoms pairwise, density pieces by bounds/exponents and by sampled values
/// at fixed probe points.
pub fn triplets_bitwise_equal(a: &CharTriplet, b: &CharTriplet) -> bool {
    if a.a.to_bits() != b.a.to_bits() || a.eta.to_bits() != b.eta.to_bits() {
        return false;
    }
    if a.nu.atoms().len() != b.nu.atoms().len() || a.nu.pieces().len() != b.nu.pieces().len() {
        return false;
    }
    for (x, y) in a.nu.atoms().iter().zip(b.nu.atoms()) {
        if x.0.to_bits() != y.0.to_bits() || x.1.to_bits() != y.1.to_bits() {
            return false;
        }
    }
    for (p, q) in a.nu.pieces().iter().zip(b.nu.pieces()) {
        if p.lo().to_bits() != q.lo().to_bits() || p.hi().to_bits() != q.hi().to_bits() {
            return false;
        }
        let (lo, hi) = (p.lo().max(-1e3), p.hi().min(1e3));
        for k in 1..17 {
            let x = lo + (hi - lo) * k as f64 / 17.0;
            if p.eval(x).to_bits() != q.eval(x).to_bits() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::jet::C64;
    use crate::measures::LevyMeasure;
    use crate::transforms::{default_cminus_grid, density_grid, eval_cumulant};

    fn dirac(c: f64) -> DistributionSpec {
        catalog::get("dirac", &[("c", c)]).unwrap().spec
    }

    fn semicircle(a: f64) -> DistributionSpec {
        catalog::get("semicircle", &[("eta", 0.0), ("a", a)])
            .unwrap()
            .spec
    }

    #[test]
    fn boxplus_point_masses() {
        let s = boxplus(&dirac(1.25), &dirac(-0.5));
        assert_eq!(s.as_point_mass(), Some(0.75));
    }

    #[test]
    fn boxplus_semicircles_density_at_zero() {
        // w(0,1) ⊞ w(0,1) = w(0,2); f(0) = √2/(2π)
        let s = boxplus(&semicircle(1.0), &semicircle(1.0));
        let grid = density_grid(&s, -3.0, 3.0, 241).unwrap();
        let (_, f0) = grid.nearest(0.0).unwrap();
        let expected = 2f64.sqrt() / (2.0 * std::f64::consts::PI);
        assert!((f0 - expected).abs() < 1e-6, "f(0) = {f0} vs {expected}");
    }

    #[test]
    fn boxplus_free_poisson_triplet_addition() {
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])
            .unwrap()
            .spec;
        let s = boxplus(&fp, &fp);
        let t = s.triplet().unwrap();
        assert_eq!(t.a, 0.0);
        let total_mass_at_1: f64 =
            t.nu.atoms()
                .iter()
                .filter(|(x, _)| *x == 1.0)
                .map(|(_, m)| m)
                .sum();
        assert_eq!(total_mass_at_1, 2.0);
        assert_eq!(t.eta, 2.0);
    }

    #[test]
    fn dilate_point_mass() {
        let d = dilate(&dirac(1.0), -2.5).unwrap();
        assert_eq!(d.as_point_mass(), Some(-2.5));
    }

    #[test]
    fn dilate_semicircle_scales_variance() {
        let d = dilate(&semicircle(1.0), 2.0).unwrap();
        let t = d.triplet().unwrap();
        assert_eq!(t.a, 4.0);
        // and the cumulant is C(2z)
        let z = C64::new(-0.3, -0.4);
        let v = eval_cumulant(&d, z).unwrap();
        assert!((v - 4.0 * z * z).norm() < 1e-14);
    }

    #[test]
    fn dilate_free_poisson_matches_rescaled_cumulant() {
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])
            .unwrap()
            .spec;
        let d = dilate(&fp, 2.0).unwrap();
        let t = d.triplet().unwrap();
        assert_eq!(t.nu.atoms(), &[(2.0, 1.0)]);
        assert!((t.eta - (2.0 * 1.0 - 2.0)).abs() < 1e-14);
        for z in default_cminus_grid() {
            let lhs = t.cumulant_jet(z).unwrap().v;
            let rhs = fp.cumulant(2.0 * z).unwrap();
            assert!((lhs - rhs).norm() < 1e-9, "at {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn bp_gaussian_is_semicircle() {
        let gauss = ClassicalSpec::new(
            "gaussian",
            CharTriplet::new(1.0, LevyMeasure::empty(), 0.0).unwrap(),
        );
        let image = bercovici_pata(&gauss);
        let z = C64::new(-0.7, -0.2);
        let v = eval_cumulant(&image, z).unwrap();
        assert!((v - z * z).norm() < 1e-13);
    }

    #[test]
    fn bp_fixes_point_masses() {
        let c = ClassicalSpec::new("delta", CharTriplet::point_mass(2.0));
        let image = bercovici_pata(&c);
        assert_eq!(image.as_point_mass(), Some(2.0));
        let back = bercovici_pata_inverse(&image).unwrap();
        assert!(triplets_bitwise_equal(&back.triplet, &c.triplet));
    }

    #[test]
    fn bp_inverse_requires_triplet() {
        let closed_only = DistributionSpec::from_expr("mu_p(-0.5)", CumulantExpr::MuP { p: -0.5 });
        assert!(matches!(
            bercovici_pata_inverse(&closed_only),
            Err(Error::UnsupportedRepresentation { .. })
        ));
    }

    #[test]
    fn bp_classical_poisson_to_free_poisson() {
        let poisson = ClassicalSpec::new(
            "poisson",
            CharTriplet::new(0.0, LevyMeasure::from_atoms(vec![(1.0, 1.0)]).unwrap(), 1.0).unwrap(),
        );
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])
            .unwrap()
            .spec;
        let image = bercovici_pata(&poisson);
        assert!(triplets_bitwise_equal(
            image.triplet().unwrap(),
            fp.triplet().unwrap()
        ));
    }

    #[test]
    fn lambda_is_convolution_homomorphism() {
        // Λ(μ₁ * μ₂) = Λ(μ₁) ⊞ Λ(μ₂) holds bitwise at triplet level
        let c1 = ClassicalSpec::new(
            "c1",
            CharTriplet::new(0.5, LevyMeasure::from_atoms(vec![(1.0, 0.3)]).unwrap(), 0.1).unwrap(),
        );
        let c2 = ClassicalSpec::new(
            "c2",
            CharTriplet::new(
                0.25,
                LevyMeasure::from_atoms(vec![(-2.0, 1.2)]).unwrap(),
                -0.4,
            )
            .unwrap(),
        );
        let lhs = bercovici_pata(&classical_convolve(&c1, &c2));
        let rhs = boxplus(&bercovici_pata(&c1), &bercovici_pata(&c2));
        assert!(triplets_bitwise_equal(
            lhs.triplet().unwrap(),
            rhs.triplet().unwrap()
        ));
    }

    #[test]
    fn lambda_commutes_with_dilation() {
        let c = ClassicalSpec::new(
            "c",
            CharTriplet::new(0.5, LevyMeasure::from_atoms(vec![(0.8, 0.3)]).unwrap(), 0.1).unwrap(),
        );
        for factor in [2.0, -0.7, 0.3] {
            let lhs = bercovici_pata(&classical_dilate(&c, factor).unwrap());
            let rhs = dilate(&bercovici_pata(&c), factor).unwrap();
            assert!(triplets_bitwise_equal(
                lhs.triplet().unwrap(),
                rhs.triplet().unwrap()
            ));
        }
    }

    #[test]
    fn free_two_stable_scaling() {
        // D_a w ⊞ D_b w = D_{√(a²+b²)} w at cumulant level
        let w = semicircle(1.0);
        for (a, b) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.1)] {
            let lhs = boxplus(&dilate(&w, a).unwrap(), &dilate(&w, b).unwrap());
            let c = (a * a + b * b).sqrt();
            let rhs = dilate(&w, c).unwrap();
            for z in default_cminus_grid() {
                let l = eval_cumulant(&lhs, z).unwrap();
                let r = eval_cumulant(&rhs, z).unwrap();
                assert!((l - r).norm() <= 1e-14 * (1.0 + l.norm().max(r.norm())));
            }
        }
    }
}
