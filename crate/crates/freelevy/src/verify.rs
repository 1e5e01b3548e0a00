//! The verification suite behind `freelevy verify`.
//!
//! Each criterion checks one closed-form identity or statistical limit at a
//! pinned tolerance and reports pass/fail with the measured value. The run
//! is deterministic: quadrature, solvers and the counter-based matrix
//! sampling have no ambient randomness.

use crate::calculus::{
    bercovici_pata, boxplus, classical_convolve, classical_dilate, dilate, triplets_bitwise_equal,
    ClassicalSpec,
};
use crate::catalog;
use crate::error::Result;
use crate::jet::C64;
use crate::measures::{CharTriplet, ZeroFactored};
use crate::processes::{
    bdlp, bdlp_levy_density, levy_integral_cumulant, sd_test, stochastic_integral_law,
    IntegrandFamily, Integrator, RefinementConfig, SdMethod, SelfSimilarProcess,
};
use crate::rmt::{ks_distance, sample_spectrum, Ensemble};
use crate::transforms::{
    default_cminus_grid, density_grid_cfg, eval_cumulant, support_endpoints, DensityGrid,
    DistributionSpec, StieltjesConfig,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Outcome of one verification criterion (or sub-criterion).
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    fn new(id: &str, name: &str, passed: bool, details: String) -> Self {
        CriterionResult {
            id: id.into(),
            name: name.into(),
            passed,
            details,
        }
    }
}

/// One pass/fail line per criterion.
pub fn format_table(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "[{}] criterion {:>3}  {:<44} {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.details
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!(
        "{} of {} checks passed\n",
        results.len() - failed,
        results.len()
    ));
    out
}

fn gamma11() -> DistributionSpec {
    catalog::get("free_gamma", &[("t", 1.0), ("c", 1.0)])
        .unwrap()
        .spec
}

fn sup_grid_diff(f: impl Fn(C64) -> Result<C64>, g: impl Fn(C64) -> Result<C64>) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for z in default_cminus_grid() {
        let a = f(z)?;
        let b = g(z)?;
        sup = sup.max((a - b).norm());
    }
    Ok(sup)
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

/// Free gamma density through the full triplet → quadrature → Newton →
/// Stieltjes path: f(1) = 1/π within 1e-5, support endpoints 3±2√2
/// within 1e-3.
pub fn criterion_1() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let spec = gamma11().triplet_only()?;
        let grid = density_grid_cfg(&spec, 0.0, 6.0, 601, &StieltjesConfig::default())?;
        let (x1, f1) = grid.nearest(1.0).unwrap();
        let err_f = (f1 - 1.0 / PI).abs();
        let pass_f = x1 == 1.0 && err_f <= 1e-5;

        // the upper density edge is shallow (slope coefficient ≈ 0.011), so
        // the crossing threshold must sit just above the fine ladder's
        // smoothing floor to land within 1e-3 of the true endpoint
        let (lo, hi) = support_endpoints(&spec, 0.05, 7.0, 2e-4)?;
        let s2 = 2.0 * 2f64.sqrt();
        let err_lo = (lo - (3.0 - s2)).abs();
        let err_hi = (hi - (3.0 + s2)).abs();
        let pass_ep = err_lo <= 1e-3 && err_hi <= 1e-3;
        Ok(vec![
            CriterionResult::new(
                "1a",
                "free gamma pipeline: f(1) = 1/pi",
                pass_f,
                format!("|f(1) - 1/pi| = {err_f:.3e} (tol 1e-5)"),
            ),
            CriterionResult::new(
                "1b",
                "free gamma pipeline: support endpoints",
                pass_ep,
                format!("|lo-err| = {err_lo:.3e}, |hi-err| = {err_hi:.3e} (tol 1e-3)"),
            ),
        ])
    };
    unwrap_or_fail("1", "free gamma pipeline", run())
}

fn criterion_2_laws() -> Vec<(&'static str, Vec<(&'static str, f64)>)> {
    vec![
        ("semicircle", vec![("eta", 0.0), ("a", 1.0)]),
        ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
        ("free_gamma", vec![("t", 2.0), ("c", 0.5)]),
        ("mu_p", vec![("p", 0.5)]),
        ("fuss_catalan", vec![("p", 1.5)]),
    ]
}

/// |z·dC/dz - C_bdlp| ≤ 1e-6 in sup over the 25-point ℂ⁻ grid, with the
/// derivative taken by forward-mode jets through the closed cumulant.
pub fn criterion_2() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let mut worst: f64 = 0.0;
        let mut worst_law = String::new();
        for (name, params) in criterion_2_laws() {
            let entry = catalog::get(name, &params)?;
            let closed = entry.bdlp_expr.expect("SD catalog law has closed BDLP");
            let spec = entry.spec;
            let sup = sup_grid_diff(
                |z| spec.cumulant_with_derivative(z).map(|(_, d)| z * d),
                |z| closed.eval_jet(z).map(|j| j.v),
            )?;
            if sup > worst {
                worst = sup;
                worst_law = format!("{name}{params:?}");
            }
        }
        let pass = worst <= 1e-6;
        Ok(vec![CriterionResult::new(
            "2",
            "BDLP derivative identity z dC/dz",
            pass,
            format!("worst sup = {worst:.3e} at {worst_law} (tol 1e-6)"),
        )])
    };
    unwrap_or_fail("2", "BDLP derivative identity", run())
}

/// The BDLP triplet formula reproduces the closed BDLP cumulants to 1e-6.
pub fn criterion_3() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let laws = [
            ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
            ("mu_p", vec![("p", 0.5)]),
            ("fuss_catalan", vec![("p", 1.5)]),
        ];
        let mut worst: f64 = 0.0;
        let mut worst_law = String::new();
        for (name, params) in laws {
            let entry = catalog::get(name, &params)?;
            let t = entry.spec.triplet().unwrap().clone();
            let closed = entry.bdlp_expr.unwrap();
            let sup = sup_grid_diff(
                |z| t.bdlp_cumulant_jet(z).map(|j| j.v),
                |z| closed.eval_jet(z).map(|j| j.v),
            )?;
            if sup > worst {
                worst = sup;
                worst_law = name.to_string();
            }
        }
        let pass = worst <= 1e-6;
        Ok(vec![CriterionResult::new(
            "3",
            "BDLP triplet formula quadrature",
            pass,
            format!("worst sup = {worst:.3e} at {worst_law} (tol 1e-6)"),
        )])
    };
    unwrap_or_fail("3", "BDLP triplet formula", run())
}

/// -k' differentiation for γ(1,1): pointwise within relative 1e-4 of
/// 1/(πx√(x(4-x))) on [0.05, 3.95], and its Lévy–Khintchine quadrature
/// reproduces z/√(1-4z) to 1e-6.
pub fn criterion_4() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let base = gamma11();
        let nu_z = bdlp_levy_density(&base)?;
        let mut worst_rel: f64 = 0.0;
        for i in 0..79 {
            let x = 0.05 + (3.95 - 0.05) * i as f64 / 78.0;
            let got = nu_z.density_at(x);
            let expected = 1.0 / (PI * x * (x * (4.0 - x)).sqrt());
            worst_rel = worst_rel.max((got - expected).abs() / expected);
        }
        let pass_density = worst_rel <= 1e-4;

        // rebuild the BDLP law from the numeric measure alone: the drift is
        // C'(0) of the base minus the uncompensated tail moment of ν_Z
        let mean_x = base.expr().eval_jet(C64::new(0.0, 0.0))?.d.re;
        let tail_kernel: ZeroFactored<f64> = ZeroFactored {
            order: 1.0,
            reduced: Box::new(|_| 0.0),
            plain: Box::new(|x| if x.abs() > 1.0 { x } else { 0.0 }),
            splits: Vec::new(),
        };
        let tail_moment = nu_z.integrate(&tail_kernel)?;
        let eta_z = mean_x - tail_moment;
        let t_z = CharTriplet::new(0.0, nu_z, eta_z)?;
        let closed = catalog::get("free_gamma", &[("t", 1.0), ("c", 1.0)])?
            .bdlp_expr
            .unwrap();
        let sup = sup_grid_diff(
            |z| t_z.cumulant_jet(z).map(|j| j.v),
            |z| closed.eval_jet(z).map(|j| j.v),
        )?;
        let pass_quad = sup <= 1e-6;
        Ok(vec![
            CriterionResult::new(
                "4a",
                "BDLP Levy density by -k' (pointwise)",
                pass_density,
                format!("worst relative error {worst_rel:.3e} (tol 1e-4)"),
            ),
            CriterionResult::new(
                "4b",
                "BDLP Levy density quadrature",
                pass_quad,
                format!("sup |LK[nu_Z] - z/sqrt(1-4z)| = {sup:.3e} (tol 1e-6)"),
            ),
        ])
    };
    unwrap_or_fail("4", "BDLP Levy density", run())
}

/// Reconstruction: ∫₀^{40/H} C_{L(Z₁)}(e^{-tH}z) dt over the H-scaled BDLP
/// reproduces C_{γ(1,1)} within 1e-4, for H ∈ {0.5, 1, 2}.
pub fn criterion_5() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let base = gamma11();
        let mut worst: f64 = 0.0;
        let mut worst_h = 0.0;
        for h in [0.5, 1.0, 2.0] {
            let process = SelfSimilarProcess::new(base.clone(), h)?;
            let lp = process.driving_levy()?;
            let sup = sup_grid_diff(
                |z| {
                    levy_integral_cumulant(
                        &lp,
                        IntegrandFamily::Exp { theta: -h },
                        0.0,
                        40.0 / h,
                        z,
                        1e-6,
                    )
                },
                |z| eval_cumulant(&base, z),
            )?;
            if sup > worst {
                worst = sup;
                worst_h = h;
            }
        }
        let pass = worst <= 1e-4;
        Ok(vec![CriterionResult::new(
            "5",
            "OU reconstruction from the BDLP",
            pass,
            format!("worst sup = {worst:.3e} at H = {worst_h} (tol 1e-4)"),
        )])
    };
    unwrap_or_fail("5", "OU reconstruction", run())
}

/// Riemann-sum law of ∫₁^e u^{-H} dX_u at H = 1 converges dyadically and
/// agrees with 1·C_bdlp within 1e-4.
pub fn criterion_6() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let base = gamma11();
        let process = SelfSimilarProcess::new(base.clone(), 1.0)?;
        let law = stochastic_integral_law(
            &Integrator::SelfSimilar(&process),
            IntegrandFamily::Power { theta: -1.0 },
            1.0,
            std::f64::consts::E,
            &RefinementConfig {
                tol: 1e-6,
                max_depth: 20,
            },
        )?;
        let lp = bdlp(&base)?;
        let sup = sup_grid_diff(
            |z| eval_cumulant(&law, z),
            |z| eval_cumulant(&lp.one_dim_marginal, z),
        )?;
        let pass = sup <= 1e-4;
        Ok(vec![CriterionResult::new(
            "6",
            "Riemann-sum stochastic integral",
            pass,
            format!("sup = {sup:.3e} (tol 1e-4)"),
        )])
    };
    unwrap_or_fail("6", "Riemann-sum stochastic integral", run())
}

/// Telescoping selfsimilarity: 50 randomized (coeffs, times, a, H) tuples,
/// scaled times versus scaled argument, to 1e-10.
pub fn criterion_7() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let base = gamma11();
        let mut rng = ChaCha12Rng::seed_from_u64(20260809);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let h = rng.gen_range(0.3..2.0);
            let process = SelfSimilarProcess::new(base.clone(), h)?;
            let n = rng.gen_range(1..=4usize);
            let mut times: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..5.0)).collect();
            times.sort_by(|x, y| x.partial_cmp(y).unwrap());
            times.dedup_by(|x, y| (*x - *y).abs() < 1e-6);
            let coeffs: Vec<f64> = (0..times.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let a = rng.gen_range(0.25..4.0);
            let z = C64::new(rng.gen_range(-1.0..-0.05), rng.gen_range(-1.0..-0.05));
            let scaled: Vec<f64> = times.iter().map(|t| a * t).collect();
            let lhs = process.linear_combination_cumulant(&coeffs, &scaled, z)?;
            let rhs = process.linear_combination_cumulant(&coeffs, &times, a.powf(h) * z)?;
            worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
        }
        let pass = worst <= 1e-10;
        Ok(vec![CriterionResult::new(
            "7",
            "telescoping selfsimilarity (50 tuples)",
            pass,
            format!("worst relative deviation {worst:.3e} (tol 1e-10)"),
        )])
    };
    unwrap_or_fail("7", "telescoping selfsimilarity", run())
}

/// Λ is a bitwise triplet-level homomorphism for convolution and dilation
/// and fixes point masses, over a 20-case matrix of catalog laws.
pub fn criterion_8() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let classical = |name: &str, params: &[(&str, f64)]| -> Result<ClassicalSpec> {
            let e = catalog::get(name, params)?;
            Ok(ClassicalSpec {
                label: e.spec.label().to_string(),
                triplet: e.spec.triplet().unwrap().clone(),
            })
        };
        let laws = vec![
            classical("semicircle", &[("eta", 0.3), ("a", 1.2)])?,
            classical("free_gamma", &[("t", 1.0), ("c", 1.0)])?,
            classical("free_gamma", &[("t", 2.0), ("c", 0.5)])?,
            classical("mu_p", &[("p", 0.5)])?,
            classical("fuss_catalan", &[("p", 1.5)])?,
            classical("free_poisson", &[("lambda", 1.0)])?,
            classical("dirac", &[("c", -2.0)])?,
        ];
        let mut cases = 0usize;
        let mut failures = 0usize;
        // homomorphism over pairs
        for i in 0..laws.len() {
            let j = (i + 1) % laws.len();
            let lhs = bercovici_pata(&classical_convolve(&laws[i], &laws[j]));
            let rhs = boxplus(&bercovici_pata(&laws[i]), &bercovici_pata(&laws[j]));
            cases += 1;
            if !triplets_bitwise_equal(lhs.triplet().unwrap(), rhs.triplet().unwrap()) {
                failures += 1;
            }
        }
        // dilation equivariance
        for (i, c) in [
            (0usize, 2.0),
            (1, -0.7),
            (2, 0.4),
            (3, 1.3),
            (4, -1.1),
            (5, 2.5),
        ] {
            let lhs = bercovici_pata(&classical_dilate(&laws[i], c)?);
            let rhs = dilate(&bercovici_pata(&laws[i]), c)?;
            cases += 1;
            if !triplets_bitwise_equal(lhs.triplet().unwrap(), rhs.triplet().unwrap()) {
                failures += 1;
            }
        }
        // point masses are fixed, and affine shifts commute
        for c in [-1.5, 0.0, 2.25] {
            let delta = ClassicalSpec::new(format!("delta({c})"), CharTriplet::point_mass(c));
            let image = bercovici_pata(&delta);
            cases += 1;
            if image.as_point_mass() != Some(c) {
                failures += 1;
            }
        }
        for (i, shift) in [(1usize, 0.8), (3, -0.4), (4, 1.7), (5, -2.0)] {
            let delta = ClassicalSpec::new("shift", CharTriplet::point_mass(shift));
            let lhs = bercovici_pata(&classical_convolve(&laws[i], &delta));
            let rhs = boxplus(&bercovici_pata(&laws[i]), &bercovici_pata(&delta));
            cases += 1;
            if !triplets_bitwise_equal(lhs.triplet().unwrap(), rhs.triplet().unwrap()) {
                failures += 1;
            }
        }
        let pass = failures == 0 && cases >= 20;
        Ok(vec![CriterionResult::new(
            "8",
            "Bercovici-Pata algebra (bitwise triplets)",
            pass,
            format!("{failures} failures over {cases} cases"),
        )])
    };
    unwrap_or_fail("8", "Bercovici-Pata algebra", run())
}

/// Free 2-stable scaling D_a w ⊞ D_b w = D_√(a²+b²) w at machine precision
/// for 10 (a, b) pairs.
pub fn criterion_9() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let w = catalog::get("semicircle", &[("eta", 0.0), ("a", 1.0)])?.spec;
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let a = rng.gen_range(0.1..3.0);
            let b = rng.gen_range(0.1..3.0);
            let lhs = boxplus(&dilate(&w, a)?, &dilate(&w, b)?);
            let rhs = dilate(&w, (a * a + b * b).sqrt())?;
            for z in default_cminus_grid() {
                let l = eval_cumulant(&lhs, z)?;
                let r = eval_cumulant(&rhs, z)?;
                worst = worst.max((l - r).norm() / (1.0 + l.norm()));
            }
        }
        let pass = worst <= 1e-14;
        Ok(vec![CriterionResult::new(
            "9",
            "free 2-stable scaling (10 pairs)",
            pass,
            format!("worst relative deviation {worst:.3e} (tol 1e-14)"),
        )])
    };
    unwrap_or_fail("9", "free 2-stable scaling", run())
}

/// SD verdicts: γ(t,c) and μ(p) true by both methods, free Poisson false,
/// and the two methods agree on every catalog case.
pub fn criterion_10() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let mut details = Vec::new();
        let mut ok = true;
        let expect_true: Vec<(&str, Vec<(&str, f64)>)> = vec![
            ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
            ("free_gamma", vec![("t", 2.0), ("c", 0.5)]),
            ("free_gamma", vec![("t", 0.5), ("c", 2.0)]),
            ("mu_p", vec![("p", 0.25)]),
            ("mu_p", vec![("p", 0.5)]),
            ("mu_p", vec![("p", 0.75)]),
        ];
        for (name, params) in &expect_true {
            let spec = catalog::get(name, params)?.spec;
            let a = sd_test(&spec, SdMethod::LevyDensityMonotonicity)?;
            let b = sd_test(&spec, SdMethod::AnalyticHalfplane)?;
            if !(a.is_sd && b.is_sd) {
                ok = false;
                details.push(format!("{name}{params:?}: A={} B={}", a.is_sd, b.is_sd));
            }
        }
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])?.spec;
        let a = sd_test(&fp, SdMethod::LevyDensityMonotonicity)?;
        let b = sd_test(&fp, SdMethod::AnalyticHalfplane)?;
        if a.is_sd || b.is_sd {
            ok = false;
            details.push(format!("free_poisson: A={} B={}", a.is_sd, b.is_sd));
        }
        // agreement across the whole catalog
        let all: Vec<(&str, Vec<(&str, f64)>)> = vec![
            ("semicircle", vec![("eta", 0.0), ("a", 1.0)]),
            ("dirac", vec![("c", 1.0)]),
            ("free_gamma", vec![("t", 1.0), ("c", 1.0)]),
            ("mu_p", vec![("p", 0.5)]),
            ("fuss_catalan", vec![("p", 1.5)]),
            ("fuss_catalan", vec![("p", 1.2)]),
            ("free_poisson", vec![("lambda", 1.0)]),
        ];
        for (name, params) in &all {
            let spec = catalog::get(name, params)?.spec;
            let a = sd_test(&spec, SdMethod::LevyDensityMonotonicity)?;
            let b = sd_test(&spec, SdMethod::AnalyticHalfplane)?;
            if a.is_sd != b.is_sd {
                ok = false;
                details.push(format!("disagree on {name}: A={} B={}", a.is_sd, b.is_sd));
            }
        }
        Ok(vec![CriterionResult::new(
            "10",
            "selfdecomposability verdicts",
            ok,
            if details.is_empty() {
                "all verdicts as expected".into()
            } else {
                details.join("; ")
            },
        )])
    };
    unwrap_or_fail("10", "selfdecomposability verdicts", run())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn closed_grid(name: &str, params: &[(&str, f64)], margin: f64) -> Result<DensityGrid> {
    let e = catalog::get(name, params)?;
    let d = e.closed_density.expect("law must carry a closed density");
    let (lo, hi) = d.support;
    Ok(DensityGrid::from_closed_density(
        move |x| d.eval(x),
        lo - margin,
        hi + margin,
        4001,
    ))
}

/// Random-matrix validation at n = 1000 with 10 seeds: matched ensembles
/// have median KS below 0.05; the deliberately mismatched control
/// (Wigner sample against the variance-2 semicircle) is asserted above the
/// configured 0.15.
///
/// Known: the exact sup-CDF distance between w(0,1) and w(0,2) is ≈ 0.1082,
/// so the 0.15 control threshold is not attainable by this statistic; the
/// check reports the measured value either way.
pub fn criterion_11() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let n = 1000;
        let seeds: Vec<u64> = (1..=10).collect();
        let w1 = closed_grid("semicircle", &[("eta", 0.0), ("a", 1.0)], 0.5)?;
        let w2 = closed_grid("semicircle", &[("eta", 0.0), ("a", 2.0)], 0.5)?;
        let mp1 = closed_grid("free_poisson", &[("lambda", 1.0)], 0.5)?;

        let gue: Vec<_> = seeds
            .par_iter()
            .map(|&s| sample_spectrum(&Ensemble::GaussianHermitian, n, s))
            .collect::<Result<_>>()?;
        let ks_gue: Vec<f64> = gue
            .iter()
            .map(|s| ks_distance(s, &w1))
            .collect::<Result<_>>()?;
        let ks_control: Vec<f64> = gue
            .iter()
            .map(|s| ks_distance(s, &w2))
            .collect::<Result<_>>()?;

        let wis: Vec<_> = seeds
            .par_iter()
            .map(|&s| sample_spectrum(&Ensemble::Wishart { lambda: 1.0 }, n, s))
            .collect::<Result<_>>()?;
        let ks_wis: Vec<f64> = wis
            .iter()
            .map(|s| ks_distance(s, &mp1))
            .collect::<Result<_>>()?;

        let fs_model = Ensemble::FreeSum(
            Box::new(Ensemble::GaussianHermitian),
            Box::new(Ensemble::GaussianHermitian),
        );
        let fs: Vec<_> = seeds
            .par_iter()
            .map(|&s| sample_spectrum(&fs_model, n, s))
            .collect::<Result<_>>()?;
        let ks_fs: Vec<f64> = fs
            .iter()
            .map(|s| ks_distance(s, &w2))
            .collect::<Result<_>>()?;

        let m_gue = median(ks_gue);
        let m_wis = median(ks_wis);
        let m_fs = median(ks_fs);
        let m_ctl = median(ks_control);
        Ok(vec![
            CriterionResult::new(
                "11a",
                "RMT: Wigner vs w(0,1)",
                m_gue < 0.05,
                format!("median KS = {m_gue:.4} (< 0.05)"),
            ),
            CriterionResult::new(
                "11b",
                "RMT: Wishart vs MP(1)",
                m_wis < 0.05,
                format!("median KS = {m_wis:.4} (< 0.05)"),
            ),
            CriterionResult::new(
                "11c",
                "RMT: free sum vs w(0,2)",
                m_fs < 0.05,
                format!("median KS = {m_fs:.4} (< 0.05)"),
            ),
            CriterionResult::new(
                "11d",
                "RMT mismatch control: Wigner vs w(0,2)",
                m_ctl > 0.15,
                format!(
                    "median KS = {m_ctl:.4} (required > 0.15; exact sup-CDF distance \
                     between w(0,1) and w(0,2) is 0.1082)"
                ),
            ),
        ])
    };
    unwrap_or_fail("11", "RMT validation", run())
}

/// Every catalog density grid integrates to 1 ± 1e-3 through the numeric
/// pipeline.
pub fn criterion_12() -> Vec<CriterionResult> {
    let run = || -> Result<Vec<CriterionResult>> {
        let windows: Vec<(&str, Vec<(&str, f64)>, f64, f64)> = vec![
            ("semicircle", vec![("eta", 0.0), ("a", 1.0)], -2.5, 2.5),
            ("free_gamma", vec![("t", 1.0), ("c", 1.0)], -0.2, 6.2),
            ("free_gamma", vec![("t", 2.0), ("c", 0.5)], -0.2, 4.2),
            ("free_poisson", vec![("lambda", 1.0)], -0.5, 4.5),
            ("mu_p", vec![("p", 0.5)], -0.4, 2.4),
            ("fuss_catalan", vec![("p", 1.5)], 0.2, 6.5),
        ];
        let mut details = Vec::new();
        let mut ok = true;
        for (name, params, lo, hi) in windows {
            let spec = catalog::get(name, &params)?.spec;
            let n = 4001;
            let grid = density_grid_cfg(&spec, lo, hi, n, &StieltjesConfig::default())?;
            let err = (grid.mass - 1.0).abs();
            if err > 1e-3 {
                ok = false;
            }
            details.push(format!("{name}{params:?}: mass deviation {err:.2e}"));
        }
        Ok(vec![CriterionResult::new(
            "12",
            "catalog density normalization",
            ok,
            details.join("; "),
        )])
    };
    unwrap_or_fail("12", "catalog density normalization", run())
}

fn unwrap_or_fail(id: &str, name: &str, r: Result<Vec<CriterionResult>>) -> Vec<CriterionResult> {
    match r {
        Ok(v) => v,
        Err(e) => vec![CriterionResult::new(id, name, false, format!("error: {e}"))],
    }
}

/// Run the full deterministic verification suite.
pub fn run_all() -> Vec<CriterionResult> {
    let mut out = Vec::new();
    out.extend(criterion_1());
    out.extend(criterion_2());
    out.extend(criterion_3());
    out.extend(criterion_4());
    out.extend(criterion_5());
    out.extend(criterion_6());
    out.extend(criterion_7());
    out.extend(criterion_8());
    out.extend(criterion_9());
    out.extend(criterion_10());
    out.extend(criterion_11());
    out.extend(criterion_12());
    out
}
