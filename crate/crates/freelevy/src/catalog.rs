//! Closed-form library of example laws.
//!
//! | name          | params            | law                              |
//! |---------------|-------------------|----------------------------------|
//! | `semicircle`  | eta (0), a (1)    | w(η, a), triplet (a, 0, η)       |
//! | `free_gamma`  | t (1), c (1)      | γ(t, c), C = t(1-√(1-4cz))/2     |
//! | `mu_p`        | p ∈ (-1, 1)       | C = 1-(1-z)^p                    |
//! | `fuss_catalan`| p ∈ (1, 2)        | μ(p,p), C = pz + (z+1)^p - 1     |
//! | `free_poisson`| lambda (1)        | Marchenko-Pastur, C = λz/(1-z)   |
//! | `dirac`       | c                 | point mass δ_c                   |
//!
//! Entries carry the closed cumulant transform, the characteristic triplet
//! where both are known (the quadrature path must reproduce the closed form;
//! see the consistency tests), closed densities and Cauchy transforms where
//! available, and the closed background-driving cumulant and Lévy measure of
//! the freely selfdecomposable entries.

use crate::error::{Error, Result};
use crate::jet::C64;
use crate::measures::{CharTriplet, DensityPiece, LevyMeasure};
use crate::quad::{tanh_sinh, QuadConfig};
use crate::transforms::{CumulantExpr, DistributionSpec};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

/// A closed-form density with its support.
#[derive(Clone)]
pub struct ClosedDensity {
    pub support: (f64, f64),
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl ClosedDensity {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.support.0 || x >= self.support.1 {
            0.0
        } else {
            (self.f)(x).max(0.0)
        }
    }
}

/// One catalog law with everything known about it in closed form.
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub spec: DistributionSpec,
    pub closed_density: Option<ClosedDensity>,
    pub closed_cauchy: Option<Arc<dyn Fn(C64) -> C64 + Send + Sync>>,
    /// Closed cumulant of the background driving free Lévy process marginal.
    pub bdlp_expr: Option<CumulantExpr>,
    /// Closed Lévy measure of that marginal.
    pub bdlp_levy: Option<LevyMeasure>,
    /// Known selfdecomposability verdict, if the catalog pins one.
    pub selfdecomposable: Option<bool>,
}

fn get_param(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    match (params.get(key), default) {
        (Some(v), _) => Ok(*v),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(Error::InvalidParameter(format!(
            "missing parameter `{key}`"
        ))),
    }
}

/// Branch of √((w-r₁)(w-r₂)) that behaves like +w at infinity
/// (cut on [r₁, r₂]).
fn sqrt_two_cuts(w: C64, r1: f64, r2: f64) -> C64 {
    (w - r1).sqrt() * (w - r2).sqrt()
}

// ---------------------------------------------------------------------------
// Levy densities (shared with the JSON schema)
// ---------------------------------------------------------------------------

/// Named closed-form Lévy densities.
///
/// - `free_gamma`: t√(x(4c-x))/(2πx²) on (0, 4c)
/// - `mu_p`: (sin(pπ)/(πx))·((1-x)/x)^p on (0, 1), 0 < p < 1
/// - `fuss_catalan`: (-sin(pπ)/(π|x|))·((1+x)/(-x))^p on (-1, 0), 1 < p < 2
/// - `free_gamma_bdlp`: tc/(π x^{3/2} √(4c-x)) on (0, 4c)
/// - `mu_p_bdlp`: p·sin(pπ)/(π x^{1+p} (1-x)^{1-p}) on (0, 1)
/// - `fuss_catalan_bdlp`: p·(-sin(pπ)/π)·(1+x)^{p-1}(-x)^{-1-p} on (-1, 0)
pub fn named_levy_density(name: &str, params: &BTreeMap<String, f64>) -> Result<Vec<DensityPiece>> {
    match name {
        "free_gamma" => {
            let t = get_param(params, "t", Some(1.0))?;
            let c = get_param(params, "c", Some(1.0))?;
            check_free_gamma_params(t, c)?;
            if t == 0.0 {
                return Ok(Vec::new());
            }
            let k = t / (2.0 * PI);
            Ok(vec![DensityPiece::new(
                0.0,
                4.0 * c,
                -1.5,
                0.5,
                format!("levy[free_gamma t={t} c={c}]"),
                Arc::new(move |_x, _dl, _dh| k),
            )?
            .with_provenance(named_json(
                "free_gamma",
                &["t", "c"],
                params,
            ))])
        }
        "mu_p" => {
            let p = get_param(params, "p", None)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "mu_p Levy density needs 0 < p < 1, got {p}"
                )));
            }
            let k = (p * PI).sin() / PI;
            Ok(vec![DensityPiece::new(
                0.0,
                1.0,
                -1.0 - p,
                p,
                format!("levy[mu_p p={p}]"),
                Arc::new(move |_x, _dl, _dh| k),
            )?
            .with_provenance(named_json("mu_p", &["p"], params))])
        }
        "fuss_catalan" => {
            let p = get_param(params, "p", None)?;
            check_fuss_catalan_params(p)?;
            let k = -(p * PI).sin() / PI;
            Ok(vec![DensityPiece::new(
                -1.0,
                0.0,
                p,
                -1.0 - p,
                format!("levy[fuss_catalan p={p}]"),
                Arc::new(move |_x, _dl, _dh| k),
            )?
            .with_provenance(named_json("fuss_catalan", &["p"], params))])
        }
        "free_gamma_bdlp" => {
            let t = get_param(params, "t", Some(1.0))?;
            let c = get_param(params, "c", Some(1.0))?;
            check_free_gamma_params(t, c)?;
            if t == 0.0 {
                return Ok(Vec::new());
            }
            let k = t * c / PI;
            Ok(vec![DensityPiece::new(
                0.0,
                4.0 * c,
                -1.5,
                -0.5,
                format!("levy[free_gamma_bdlp t={t} c={c}]"),
                Arc::new(move |_x, _dl, _dh| k),
            )?
            .with_provenance(named_json(
                "free_gamma_bdlp",
                &["t", "c"],
                params,
            ))])
        }
        "mu_p_bdlp" => {
            let p = get_param(params, "p", None)?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "mu_p BDLP Levy density needs 0 < p < 1, got {p}"
                )));
            }
            let k = p * (p * PI).sin() / PI;
            Ok(vec![DensityPiece::new(
                0.0,
                1.0,
                -1.0 - p,
                p - 1.0,
                format!("levy[mu_p_bdlp p={p}]"),
                Arc::new(move |_x, _dl, _dh| k),
            )?
            .with_provenance(named_json("mu_p_bdlp", &["p"], params))])
        }
        "fuss_catalan_bdlp" => {
            let p = get_param(params, "p", None)?;
            check_fuss_catalan_params(p)?;
            let k = -p * (p * PI).sin() / PI;
            Ok(vec![DensityPiece::new(
                -1.0,
                0.0,
                p - 1.0,
                -1.0 - p,
                format!("levy[fuss_catalan_bdlp p={p}]"),
                Arc::new(move |_x, _dl, _dh| k),
            )?
            .with_provenance(named_json(
                "fuss_catalan_bdlp",
                &["p"],
                params,
            ))])
        }
        other => Err(Error::BadInput(format!("unknown Levy density `{other}`"))),
    }
}

fn check_free_gamma_params(t: f64, c: f64) -> Result<()> {
    if !(t >= 0.0) || !(c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "free_gamma needs t ≥ 0 and c > 0, got t={t}, c={c}"
        )));
    }
    Ok(())
}

fn check_fuss_catalan_params(p: f64) -> Result<()> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "fuss_catalan needs 1 < p < 2, got {p}"
        )));
    }
    Ok(())
}

/// Drift of γ(t, c): the closed cumulant has no explicit drift split, so η
/// is the compensator moment t·∫₀^{min(1,4c)} √(x(4c-x))/(2πx) dx, computed
/// once and cached on the entry.
fn free_gamma_eta(t: f64, c: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let m = 1f64.min(4.0 * c);
    let cfg = QuadConfig {
        atol: 1e-14,
        rtol: 1e-13,
        max_level: 12,
    };
    let est = tanh_sinh(
        |n| {
            let tail = if 4.0 * c <= 1.0 {
                n.d_hi
            } else {
                4.0 * c - n.x
            };
            n.d_lo.powf(-0.5) * tail.sqrt()
        },
        0.0,
        m,
        &cfg,
    )?;
    Ok(t * est.value / (2.0 * PI))
}

// ---------------------------------------------------------------------------
// Entries
// ---------------------------------------------------------------------------

/// Look up a catalog law.
pub fn catalog_get(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    match name {
        "semicircle" => {
            let eta = get_param(params, "eta", Some(0.0))?;
            let a = get_param(params, "a", Some(1.0))?;
            if !(a >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "semicircle needs a ≥ 0, got {a}"
                )));
            }
            let expr = CumulantExpr::Quadratic { eta, a };
            let triplet = CharTriplet::new(a, LevyMeasure::empty(), eta)?;
            let spec = DistributionSpec::new(
                format!("semicircle(eta={eta},a={a})"),
                expr,
                Some(Arc::new(triplet)),
            );
            let closed_density = (a > 0.0).then(|| {
                let r = 2.0 * a.sqrt();
                ClosedDensity {
                    support: (eta - r, eta + r),
                    f: Arc::new(move |x: f64| {
                        let u = x - eta;
                        (4.0 * a - u * u).max(0.0).sqrt() / (2.0 * PI * a)
                    }),
                }
            });
            let closed_cauchy: Arc<dyn Fn(C64) -> C64 + Send + Sync> = if a > 0.0 {
                let r = 2.0 * a.sqrt();
                Arc::new(move |w: C64| {
                    let u = w - eta;
                    (u - sqrt_two_cuts(u, -r, r)) / (2.0 * a)
                })
            } else {
                Arc::new(move |w: C64| 1.0 / (w - eta))
            };
            Ok(CatalogEntry {
                name: name.into(),
                params: btree(&[("eta", eta), ("a", a)]),
                spec,
                closed_density,
                closed_cauchy: Some(closed_cauchy),
                bdlp_expr: Some(CumulantExpr::Quadratic { eta, a: 2.0 * a }),
                bdlp_levy: Some(LevyMeasure::empty()),
                selfdecomposable: Some(true),
            })
        }
        "dirac" => {
            let c = get_param(params, "c", None)?;
            let spec = DistributionSpec::new(
                format!("dirac({c})"),
                CumulantExpr::Quadratic { eta: c, a: 0.0 },
                Some(Arc::new(CharTriplet::point_mass(c))),
            );
            Ok(CatalogEntry {
                name: name.into(),
                params: btree(&[("c", c)]),
                spec,
                closed_density: None,
                closed_cauchy: Some(Arc::new(move |w: C64| 1.0 / (w - c))),
                bdlp_expr: Some(CumulantExpr::Quadratic { eta: c, a: 0.0 }),
                bdlp_levy: Some(LevyMeasure::empty()),
                selfdecomposable: Some(true),
            })
        }
        "free_gamma" => {
            let t = get_param(params, "t", Some(1.0))?;
            let c = get_param(params, "c", Some(1.0))?;
            check_free_gamma_params(t, c)?;
            let expr = CumulantExpr::FreeGamma { t, c };
            let nu = LevyMeasure::from_pieces(named_levy_density("free_gamma", params)?)?;
            let eta = free_gamma_eta(t, c)?;
            let triplet = CharTriplet::new(0.0, nu, eta)?;
            let spec = DistributionSpec::new(
                format!("free_gamma(t={t},c={c})"),
                expr,
                Some(Arc::new(triplet)),
            );
            let closed_density = (t > 0.0).then(|| {
                let alpha_lo = c * (t + 2.0 - 2.0 * (t + 1.0).sqrt());
                let alpha_hi = c * (t + 2.0 + 2.0 * (t + 1.0).sqrt());
                ClosedDensity {
                    support: (alpha_lo, alpha_hi),
                    f: Arc::new(move |x: f64| {
                        t / (2.0 * PI * x * x) * ((x - alpha_lo) * (alpha_hi - x)).max(0.0).sqrt()
                    }),
                }
            });
            let closed_cauchy: Option<Arc<dyn Fn(C64) -> C64 + Send + Sync>> =
                (t > 0.0).then(|| {
                    let alpha_lo = c * (t + 2.0 - 2.0 * (t + 1.0).sqrt());
                    let alpha_hi = c * (t + 2.0 + 2.0 * (t + 1.0).sqrt());
                    let f: Arc<dyn Fn(C64) -> C64 + Send + Sync> = Arc::new(move |w: C64| {
                        let s = sqrt_two_cuts(w, alpha_lo, alpha_hi);
                        ((t + 2.0) * w - c * t * t - t * s) / (2.0 * w * w)
                    });
                    f
                });
            Ok(CatalogEntry {
                name: name.into(),
                params: btree(&[("t", t), ("c", c)]),
                spec,
                closed_density,
                closed_cauchy,
                bdlp_expr: Some(CumulantExpr::FreeGammaBdlp { t, c }),
                bdlp_levy: Some(LevyMeasure::from_pieces(named_levy_density(
                    "free_gamma_bdlp",
                    params,
                )?)?),
                selfdecomposable: Some(true),
            })
        }
        "mu_p" => {
            let p = get_param(params, "p", None)?;
            if !(p > -1.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "mu_p needs -1 < p < 1, got {p}"
                )));
            }
            let expr = CumulantExpr::MuP { p };
            // the displayed Levy density is a positive measure only for
            // 0 < p < 1; outside that range the entry is closed-form only
            // and excluded from selfdecomposability-dependent flows
            let sd_range = p > 0.0 && p < 1.0;
            let triplet = if sd_range {
                let nu = LevyMeasure::from_pieces(named_levy_density("mu_p", params)?)?;
                Some(Arc::new(CharTriplet::new(0.0, nu, p)?))
            } else {
                None
            };
            let spec = DistributionSpec::new(format!("mu_p(p={p})"), expr, triplet);
            Ok(CatalogEntry {
                name: name.into(),
                params: btree(&[("p", p)]),
                spec,
                closed_density: None,
                closed_cauchy: None,
                bdlp_expr: sd_range.then_some(CumulantExpr::MuPBdlp { p }),
                bdlp_levy: if sd_range {
                    Some(LevyMeasure::from_pieces(named_levy_density(
                        "mu_p_bdlp",
                        params,
                    )?)?)
                } else {
                    None
                },
                selfdecomposable: sd_range.then_some(true),
            })
        }
        "fuss_catalan" => {
            let p = get_param(params, "p", None)?;
            check_fuss_catalan_params(p)?;
            let expr = CumulantExpr::FussCatalan { p };
            let nu = LevyMeasure::from_pieces(named_levy_density("fuss_catalan", params)?)?;
            // C'(0) = 2p and the compensated integral is O(z²), so η = 2p
            let triplet = CharTriplet::new(0.0, nu, 2.0 * p)?;
            let spec = DistributionSpec::new(
                format!("fuss_catalan(p={p})"),
                expr,
                Some(Arc::new(triplet)),
            );
            Ok(CatalogEntry {
                name: name.into(),
                params: btree(&[("p", p)]),
                spec,
                closed_density: None,
                closed_cauchy: None,
                bdlp_expr: Some(CumulantExpr::FussCatalanBdlp { p }),
                bdlp_levy: Some(LevyMeasure::from_pieces(named_levy_density(
                    "fuss_catalan_bdlp",
                    params,
                )?)?),
                selfdecomposable: Some(true),
            })
        }
        "free_poisson" => {
            let lambda = get_param(params, "lambda", Some(1.0))?;
            if !(lambda > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "free_poisson needs lambda > 0, got {lambda}"
                )));
            }
            let expr = CumulantExpr::FreePoisson { lambda };
            let nu = LevyMeasure::from_atoms(vec![(1.0, lambda)])?;
            let triplet = CharTriplet::new(0.0, nu, lambda)?;
            let spec = DistributionSpec::new(
                format!("free_poisson(lambda={lambda})"),
                expr,
                Some(Arc::new(triplet)),
            );
            // the absolutely continuous part is the whole law only for
            // λ ≥ 1; below that an atom at 0 appears and no closed density
            // grid is attached
            let closed_density = (lambda >= 1.0).then(|| {
                let lo = (1.0 - lambda.sqrt()).powi(2);
                let hi = (1.0 + lambda.sqrt()).powi(2);
                ClosedDensity {
                    support: (lo, hi),
                    f: Arc::new(move |x: f64| {
                        ((x - lo) * (hi - x)).max(0.0).sqrt() / (2.0 * PI * x)
                    }),
                }
            });
            let lo = (1.0 - lambda.sqrt()).powi(2);
            let hi = (1.0 + lambda.sqrt()).powi(2);
            let closed_cauchy: Arc<dyn Fn(C64) -> C64 + Send + Sync> =
                Arc::new(move |w: C64| (w + 1.0 - lambda - sqrt_two_cuts(w, lo, hi)) / (2.0 * w));
            Ok(CatalogEntry {
                name: name.into(),
                params: btree(&[("lambda", lambda)]),
                spec,
                closed_density,
                closed_cauchy: Some(closed_cauchy),
                bdlp_expr: None,
                bdlp_levy: None,
                selfdecomposable: Some(false),
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown catalog law `{other}`"
        ))),
    }
}

/// Convenience lookup with (key, value) parameter slices.
pub fn get(name: &str, params: &[(&str, f64)]) -> Result<CatalogEntry> {
    catalog_get(name, &btree(params))
}

fn named_json(
    name: &str,
    keys: &[&str],
    params: &BTreeMap<String, f64>,
) -> crate::measures::LevyMeasureJson {
    let mut kept = BTreeMap::new();
    for k in keys {
        if let Some(v) = params.get(*k) {
            kept.insert((*k).to_string(), *v);
        }
    }
    crate::measures::LevyMeasureJson::Density {
        name: Some(name.to_string()),
        params: kept,
        support: None,
        coef: None,
        pow_x: 0.0,
        pow_lo: 0.0,
        pow_hi: 0.0,
        poly: Vec::new(),
    }
}

fn btree(params: &[(&str, f64)]) -> BTreeMap<String, f64> {
    params.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
