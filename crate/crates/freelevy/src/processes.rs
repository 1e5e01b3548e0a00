//! Selfsimilar free additive processes and their background driving free
//! Lévy processes.
//!
//! A freely selfdecomposable base law μ and an index H > 0 determine an
//! H-selfsimilar free additive process through its marginals
//! C_{μ_t}(z) = C_μ(t^H z) and increments C_{μ_{s,t}} = C_{μ_t} - C_{μ_s}.
//! The background driving free Lévy process Z of μ satisfies
//! C_{L(Z₁)}(z) = z·dC_μ/dz, with the triplet-level form
//! C_{L(Z₁)}(z) = ηz + 2az² + z∫(x/(1-zx)² - x·1_{[-1,1]}(x))ν(dx),
//! and its Lévy measure is -k'(x) (x > 0) / +k'(x) (x < 0) when
//! ν(dx) = k(x)/|x|·dx.
//!
//! Stochastic integrals ∫f dX are realized as dyadically refined Riemann
//! sums whose cumulants converge on a fixed ℂ⁻ grid; the limit law is kept
//! as a frozen partition sum, so it evaluates exactly thereafter.

use crate::error::{Error, Result};
use crate::jet::C64;
use crate::measures::{log_moment_check, DensityPiece, LevyMeasure};
use crate::transforms::{default_cminus_grid, CumulantExpr, DistributionSpec};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Selfdecomposability
// ---------------------------------------------------------------------------

/// Which selfdecomposability criterion to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdMethod {
    /// ν(dx) = k(x)/|x|dx with k non-increasing on (0,∞) and
    /// non-decreasing on (-∞,0).
    LevyDensityMonotonicity,
    /// Im C'(z) ≤ 0 on ℂ⁻ (equivalently φ of the would-be BDLP maps ℂ⁺ to
    /// ℂ⁻∪ℝ), sampled on a grid.
    AnalyticHalfplane,
    /// Run every applicable method; they must agree.
    Auto,
}

/// One tested point of an SD verdict.
#[derive(Debug, Clone)]
pub enum SdDiagnostic {
    /// k must not increase from (x_prev, k_prev) to (x, k) in |x|.
    Monotonicity {
        x_prev: f64,
        x: f64,
        k_prev: f64,
        k: f64,
        ok: bool,
    },
    /// Im C'(1/u) at the ℂ⁺ sample u must be ≤ slack.
    Halfplane { u: C64, im_dc: f64, ok: bool },
}

/// Verdict of a selfdecomposability test.
#[derive(Debug, Clone)]
pub struct SdVerdict {
    pub is_sd: bool,
    pub method: &'static str,
    pub reason: Option<String>,
    pub diagnostics: Vec<SdDiagnostic>,
}

const SD_SLACK: f64 = 1e-9;

fn sd_test_monotonicity(d: &DistributionSpec) -> Result<SdVerdict> {
    let triplet = d
        .triplet()
        .ok_or_else(|| Error::UnsupportedRepresentation {
            op: "sd_test(levy_density_monotonicity)",
            detail: format!("`{}` has no triplet attached", d.label()),
        })?;
    if !triplet.nu.atoms().is_empty() {
        return Ok(SdVerdict {
            is_sd: false,
            method: "levy_density_monotonicity",
            reason: Some("no density: Levy measure has atoms".into()),
            diagnostics: Vec::new(),
        });
    }
    // ν = 0 (semicircle family): vacuously monotone
    if triplet.nu.pieces().is_empty() {
        return Ok(SdVerdict {
            is_sd: true,
            method: "levy_density_monotonicity",
            reason: None,
            diagnostics: Vec::new(),
        });
    }

    // merge log-spaced |x| grids (512 points per piece) per sign side and
    // require k(x) = |x|·ℓ(x) non-increasing in |x| with slack for ties
    let mut pos: Vec<f64> = Vec::new();
    let mut neg: Vec<f64> = Vec::new();
    for piece in triplet.nu.pieces() {
        let (lo, hi) = (piece.lo(), piece.hi());
        let a = if lo == 0.0 {
            (hi - lo).abs().min(hi.abs().max(1.0)) * 1e-8
        } else {
            lo.abs() * (1.0 + 1e-9)
        };
        let b = if hi == 0.0 {
            (hi - lo).abs().min(lo.abs().max(1.0)) * 1e-8
        } else {
            hi.abs() * (1.0 - 1e-9)
        };
        let (amin, amax) = if hi <= 0.0 {
            // negative side: |x| runs from |hi| side to |lo|
            (b.min(a), b.max(a))
        } else {
            (a.min(b), a.max(b))
        };
        let amin = amin.max(1e-300);
        let amax = if amax.is_infinite() {
            amin * 1e16
        } else {
            amax
        };
        let log_lo = amin.ln();
        let log_hi = amax.ln();
        for i in 0..512 {
            let r = (log_lo + (log_hi - log_lo) * i as f64 / 511.0).exp();
            if hi <= 0.0 {
                neg.push(r);
            } else {
                pos.push(r);
            }
        }
    }
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    neg.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut diagnostics = Vec::new();
    let mut ok_all = true;
    let mut check_side = |absx: &[f64], sign: f64| -> Result<()> {
        let mut prev: Option<(f64, f64)> = None;
        for &r in absx {
            let x = sign * r;
            let k = triplet.nu.k_at(x);
            if !k.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "indeterminate monotonicity: k({x}) is not finite"
                )));
            }
            if let Some((xp, kp)) = prev {
                let ok = k <= kp + SD_SLACK;
                if !ok {
                    ok_all = false;
                }
                diagnostics.push(SdDiagnostic::Monotonicity {
                    x_prev: xp,
                    x,
                    k_prev: kp,
                    k,
                    ok,
                });
            }
            prev = Some((x, k));
        }
        Ok(())
    };
    check_side(&pos, 1.0)?;
    check_side(&neg, -1.0)?;
    Ok(SdVerdict {
        is_sd: ok_all,
        method: "levy_density_monotonicity",
        reason: (!ok_all).then(|| "k(x) = |x|·density increases away from 0".into()),
        diagnostics,
    })
}

/// ℂ⁺ sample points u whose reciprocals 1/u sweep the informative part of
/// ℂ⁻ (including Re(1/u) > 1, where non-SD laws show violations).
fn sd_halfplane_grid() -> Vec<C64> {
    let mut grid = Vec::new();
    for &x in &[
        -3.0, -2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0,
    ] {
        for &y in &[0.05, 0.2, 1.0, 2.0, 5.0] {
            let z = C64::new(x, -y);
            grid.push(1.0 / z);
        }
    }
    grid
}

fn sd_test_halfplane(d: &DistributionSpec) -> Result<SdVerdict> {
    let mut diagnostics = Vec::new();
    let mut ok_all = true;
    for u in sd_halfplane_grid() {
        let z = 1.0 / u;
        let (_, dc) = d.cumulant_with_derivative(z)?;
        let ok = dc.im <= SD_SLACK;
        if !ok {
            ok_all = false;
        }
        diagnostics.push(SdDiagnostic::Halfplane {
            u,
            im_dc: dc.im,
            ok,
        });
    }
    Ok(SdVerdict {
        is_sd: ok_all,
        method: "analytic_halfplane",
        reason: (!ok_all).then(|| "Im dC/dz > 0 somewhere on the sample grid".into()),
        diagnostics,
    })
}

/// Test free selfdecomposability.
pub fn sd_test(d: &DistributionSpec, method: SdMethod) -> Result<SdVerdict> {
    match method {
        SdMethod::LevyDensityMonotonicity => sd_test_monotonicity(d),
        SdMethod::AnalyticHalfplane => sd_test_halfplane(d),
        SdMethod::Auto => {
            let b = sd_test_halfplane(d)?;
            if d.triplet().is_some() {
                let a = sd_test_monotonicity(d)?;
                if a.is_sd != b.is_sd {
                    return Err(Error::InvalidParameter(format!(
                        "sd_test methods disagree on `{}`: density-monotonicity says {}, \
                         halfplane says {}",
                        d.label(),
                        a.is_sd,
                        b.is_sd
                    )));
                }
                let mut diagnostics = a.diagnostics;
                diagnostics.extend(b.diagnostics);
                return Ok(SdVerdict {
                    is_sd: a.is_sd,
                    method: "both",
                    reason: a.reason.or(b.reason),
                    diagnostics,
                });
            }
            Ok(b)
        }
    }
}

fn require_sd(d: &DistributionSpec) -> Result<()> {
    let verdict = sd_test(d, SdMethod::Auto)?;
    if !verdict.is_sd {
        return Err(Error::NotSelfdecomposable {
            label: d.label().to_string(),
            reason: verdict.reason.unwrap_or_else(|| "verdict negative".into()),
        });
    }
    Ok(())
}

/// The factor ρ_c with μ = D_cμ ⊞ ρ_c: C_{ρ_c}(z) = C_μ(z) - C_μ(cz).
pub fn sd_factor(d: &DistributionSpec, c: f64) -> Result<DistributionSpec> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sd_factor needs 0 < c < 1, got {c}"
        )));
    }
    require_sd(d)?;
    let e = d.expr().clone();
    let expr = CumulantExpr::Diff(
        Box::new(e.clone()),
        Box::new(CumulantExpr::Dilated(c, Box::new(e))),
    );
    Ok(DistributionSpec::from_expr(
        format!("sd_factor[{c}]({})", d.label()),
        expr,
    ))
}

// ---------------------------------------------------------------------------
// Selfsimilar processes
// ---------------------------------------------------------------------------

/// An H-selfsimilar free additive process with ⊞-selfdecomposable base law.
pub struct SelfSimilarProcess {
    base: DistributionSpec,
    h: f64,
    verdict: SdVerdict,
}

impl SelfSimilarProcess {
    pub fn new(base: DistributionSpec, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "index H must be > 0, got {h}"
            )));
        }
        let verdict = sd_test(&base, SdMethod::Auto)?;
        if !verdict.is_sd {
            return Err(Error::NotSelfdecomposable {
                label: base.label().to_string(),
                reason: verdict
                    .reason
                    .clone()
                    .unwrap_or_else(|| "verdict negative".into()),
            });
        }
        Ok(SelfSimilarProcess { base, h, verdict })
    }

    pub fn base(&self) -> &DistributionSpec {
        &self.base
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn sd_verdict(&self) -> &SdVerdict {
        &self.verdict
    }

    /// L(X_t): C_{μ_t}(z) = C_μ(t^H z); μ₀ = δ₀.
    pub fn marginal(&self, t: f64) -> Result<DistributionSpec> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "marginal needs t ≥ 0, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(point_mass_spec(0.0));
        }
        if t == 1.0 {
            return Ok(self.base.clone());
        }
        crate::calculus::dilate(&self.base, t.powf(self.h))
            .map(|d| d.with_label(format!("{}[t={t}]", self.base.label())))
    }

    /// L(X_t - X_s) for 0 ≤ s ≤ t: cumulant C_{μ_t} - C_{μ_s}, equivalently
    /// C_{ρ_{(s/t)^H}}(t^H z).
    pub fn increment(&self, s: f64, t: f64) -> Result<DistributionSpec> {
        if !(s >= 0.0 && s <= t) {
            return Err(Error::InvalidParameter(format!(
                "increment needs 0 ≤ s ≤ t, got ({s}, {t})"
            )));
        }
        if s == t {
            return Ok(point_mass_spec(0.0));
        }
        if s == 0.0 {
            return self.marginal(t);
        }
        let e = self.base.expr().clone();
        let expr = CumulantExpr::Diff(
            Box::new(CumulantExpr::Dilated(t.powf(self.h), Box::new(e.clone()))),
            Box::new(CumulantExpr::Dilated(s.powf(self.h), Box::new(e))),
        );
        Ok(DistributionSpec::from_expr(
            format!("{}[{s},{t}]", self.base.label()),
            expr,
        ))
    }

    /// C of Σⱼ cⱼ X_{tⱼ} under freely independent increments, by the
    /// telescoping identity Σⱼ cⱼX_{tⱼ} = Σₖ c_{n,k}(X_{t_{n+1-k}} - X_{t_{n-k}})
    /// with c_{n,k} = Σ_{j=n+1-k}^n cⱼ and t₀ = 0.
    pub fn linear_combination_cumulant(
        &self,
        coeffs: &[f64],
        times: &[f64],
        z: C64,
    ) -> Result<C64> {
        if coeffs.len() != times.len() || coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "need equally many coefficients and times, at least one".into(),
            ));
        }
        if times[0] < 0.0 || times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "times must be strictly increasing and ≥ 0".into(),
            ));
        }
        let n = coeffs.len();
        let mut total = C64::new(0.0, 0.0);
        let mut c_nk = 0.0;
        for k in 1..=n {
            c_nk += coeffs[n - k];
            if c_nk == 0.0 {
                continue;
            }
            let t_hi = times[n - k];
            let t_lo = if k == n { 0.0 } else { times[n - k - 1] };
            let y = c_nk * z;
            let upper = self.base.expr().eval_jet(t_hi.powf(self.h) * y)?.v;
            let lower = if t_lo == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                self.base.expr().eval_jet(t_lo.powf(self.h) * y)?.v
            };
            total += upper - lower;
        }
        Ok(total)
    }

    /// The background driving free Lévy process Z_t = ∫₁^{eᵗ} u^{-H} dX_u.
    ///
    /// Its time-1 marginal has cumulant H·z·dC_μ/dz: the H-independent
    /// [`bdlp`] marginal run on the clock that makes
    /// X = ∫₀^∞ e^{-uH} dZ_u hold.
    pub fn driving_levy(&self) -> Result<FreeLevyProcessSpec> {
        Ok(bdlp(&self.base)?.time_scaled(self.h))
    }
}

fn point_mass_spec(c: f64) -> DistributionSpec {
    DistributionSpec::new(
        format!("dirac({c})"),
        CumulantExpr::Quadratic { eta: c, a: 0.0 },
        Some(Arc::new(crate::measures::CharTriplet::point_mass(c))),
    )
}

// ---------------------------------------------------------------------------
// Free Lévy processes
// ---------------------------------------------------------------------------

/// A free Lévy process, determined by the law of Z₁ via C_{L(Z_t)} = t·C_{L(Z₁)}.
#[derive(Clone)]
pub struct FreeLevyProcessSpec {
    pub one_dim_marginal: DistributionSpec,
}

impl FreeLevyProcessSpec {
    pub fn new(one_dim_marginal: DistributionSpec) -> Self {
        FreeLevyProcessSpec { one_dim_marginal }
    }

    /// L(Z_t), the ⊞-convolution power t.
    pub fn marginal(&self, t: f64) -> Result<DistributionSpec> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "marginal needs t ≥ 0, got {t}"
            )));
        }
        let expr = CumulantExpr::Scaled(t, Box::new(self.one_dim_marginal.expr().clone()));
        let triplet = self
            .one_dim_marginal
            .triplet()
            .map(|tr| Arc::new(tr.scaled(t)));
        Ok(DistributionSpec::new(
            format!("{}[t={t}]", self.one_dim_marginal.label()),
            expr,
            triplet,
        ))
    }

    /// The process Z'_t = Z_{st} (clock change by s > 0).
    pub fn time_scaled(&self, s: f64) -> FreeLevyProcessSpec {
        assert!(s > 0.0);
        let expr = CumulantExpr::Scaled(s, Box::new(self.one_dim_marginal.expr().clone()));
        let triplet = self
            .one_dim_marginal
            .triplet()
            .map(|tr| Arc::new(tr.scaled(s)));
        FreeLevyProcessSpec {
            one_dim_marginal: DistributionSpec::new(
                format!("timescale[{s}]({})", self.one_dim_marginal.label()),
                expr,
                triplet,
            ),
        }
    }
}

/// Map a cumulant expression to the expression of z·dC/dz, using closed
/// BDLP forms at the leaves where they exist.
fn map_bdlp_expr(e: &CumulantExpr) -> Result<CumulantExpr> {
    Ok(match e {
        CumulantExpr::Quadratic { eta, a } => CumulantExpr::Quadratic {
            eta: *eta,
            a: 2.0 * a,
        },
        CumulantExpr::FreeGamma { t, c } => CumulantExpr::FreeGammaBdlp { t: *t, c: *c },
        CumulantExpr::MuP { p } => CumulantExpr::MuPBdlp { p: *p },
        CumulantExpr::FussCatalan { p } => CumulantExpr::FussCatalanBdlp { p: *p },
        CumulantExpr::Triplet(t) => CumulantExpr::TripletBdlp(t.clone()),
        CumulantExpr::Sum(es) => {
            CumulantExpr::Sum(es.iter().map(map_bdlp_expr).collect::<Result<_>>()?)
        }
        CumulantExpr::Dilated(c, inner) => {
            CumulantExpr::Dilated(*c, Box::new(map_bdlp_expr(inner)?))
        }
        CumulantExpr::Scaled(w, inner) => CumulantExpr::Scaled(*w, Box::new(map_bdlp_expr(inner)?)),
        CumulantExpr::Diff(a, b) => {
            CumulantExpr::Diff(Box::new(map_bdlp_expr(a)?), Box::new(map_bdlp_expr(b)?))
        }
        CumulantExpr::PartitionSum { base, terms } => CumulantExpr::PartitionSum {
            base: Box::new(map_bdlp_expr(base)?),
            terms: terms.clone(),
        },
        CumulantExpr::ZDeriv(_) => {
            return Err(Error::UnsupportedRepresentation {
                op: "bdlp",
                detail: "law is itself only known through z·dC/dz".into(),
            });
        }
        // generic leaf: fall back to the derivative node
        other => {
            if other.contains_zderiv() {
                return Err(Error::UnsupportedRepresentation {
                    op: "bdlp",
                    detail: "cannot nest z·dC/dz".into(),
                });
            }
            CumulantExpr::ZDeriv(Box::new(other.clone()))
        }
    })
}

/// The background driving free Lévy process of a freely selfdecomposable
/// law, normalized by L(X) = L(∫₀^∞ e^{-t} dZ_t): C_{L(Z₁)}(z) = z·dC/dz.
pub fn bdlp(d: &DistributionSpec) -> Result<FreeLevyProcessSpec> {
    require_sd(d)?;
    if let Some(t) = d.triplet() {
        if !log_moment_check(&t.nu).is_finite() {
            return Err(Error::InfiniteLogMoment {
                label: d.label().to_string(),
            });
        }
    }
    let expr = map_bdlp_expr(d.expr())?;
    // a pure Gaussian-with-drift base has the closed BDLP triplet (2a, 0, η)
    let triplet = d.triplet().and_then(|t| {
        t.nu.is_zero().then(|| {
            Arc::new(
                crate::measures::CharTriplet::new(2.0 * t.a, LevyMeasure::empty(), t.eta)
                    .expect("valid triplet"),
            )
        })
    });
    let marginal = DistributionSpec::new(
        format!("the background driving free Levy process of {}", d.label()),
        expr,
        triplet,
    );
    Ok(FreeLevyProcessSpec::new(marginal))
}

/// Lévy measure of the BDLP marginal by differentiating k:
/// the density of ν_{Z₁} is -k'(x) for x > 0 and +k'(x) for x < 0,
/// where ν_X(dx) = k(x)/|x|·dx.
pub fn bdlp_levy_density(d: &DistributionSpec) -> Result<LevyMeasure> {
    require_sd(d)?;
    let triplet = d
        .triplet()
        .ok_or_else(|| Error::UnsupportedRepresentation {
            op: "bdlp_levy_density",
            detail: format!("`{}` has no triplet attached", d.label()),
        })?;
    if !triplet.nu.is_density_form() {
        return Err(Error::UnsupportedRepresentation {
            op: "bdlp_levy_density",
            detail: "Levy measure is not in density form".into(),
        });
    }
    let mut out = Vec::new();
    for piece in triplet.nu.pieces() {
        out.push(neg_k_prime_piece(piece)?);
    }
    LevyMeasure::from_pieces(out)
}

/// Differentiate k = |x|·ℓ numerically on one piece and repackage the
/// result in endpoint-factored form: exponents at a zero endpoint carry
/// over (the |x| factor raises by one, the derivative lowers by one);
/// exponents at non-zero endpoints drop by one.
///
/// The difference quotient runs in the distance coordinate of the nearer
/// endpoint, so it stays accurate at the deep quadrature nodes where
/// x itself has rounded onto the endpoint.
fn neg_k_prime_piece(piece: &DensityPiece) -> Result<DensityPiece> {
    let (lo, hi) = (piece.lo(), piece.hi());
    if lo.is_infinite() || hi.is_infinite() {
        return Err(Error::UnsupportedRepresentation {
            op: "bdlp_levy_density",
            detail: "infinite-support pieces are not differentiated".into(),
        });
    }
    let positive_side = lo >= 0.0;
    let sign = if positive_side { -1.0 } else { 1.0 };
    let pl = if lo == 0.0 {
        piece.pow_lo()
    } else {
        piece.pow_lo() - 1.0
    };
    let ph = if hi == 0.0 {
        piece.pow_hi()
    } else {
        piece.pow_hi() - 1.0
    };
    let inner = piece.clone();
    let rest: crate::measures::DensityFn = Arc::new(move |_x, d_lo, d_hi| {
        let (lo, hi) = (inner.lo(), inner.hi());
        let span = hi - lo;
        let from_lo = d_lo <= d_hi;
        // the stripped factor is flat near the endpoints, so the evaluation
        // depth can be clamped where powers would leave f64 range
        let s = if from_lo { d_lo } else { d_hi }.max(span * 1e-100);
        let h = (s * 1e-5).max(1e-300);
        // k = |x|·ℓ in factored form, |x| folded into a zero endpoint
        let k_of = |sv: f64| -> f64 {
            let (dl, dh) = if from_lo {
                (sv, span - sv)
            } else {
                (span - sv, sv)
            };
            let x = if from_lo { lo + sv } else { hi - sv };
            let (el, eh, absx) = if lo == 0.0 {
                (inner.pow_lo() + 1.0, inner.pow_hi(), 1.0)
            } else if hi == 0.0 {
                (inner.pow_lo(), inner.pow_hi() + 1.0, 1.0)
            } else {
                (inner.pow_lo(), inner.pow_hi(), x.abs())
            };
            absx * dl.powf(el) * dh.powf(eh) * inner.rest_at(x, dl, dh)
        };
        let diff = k_of(s + h) - k_of(s - h);
        if !diff.is_finite() {
            return f64::NAN;
        }
        let oriented = if from_lo { sign } else { -sign };
        let (dl, dh) = if from_lo {
            (s, span - s)
        } else {
            (span - s, s)
        };
        // strip the declared powers before dividing by the (tiny) step so
        // no intermediate leaves f64 range
        let stripped = oriented * diff * dl.powf(-pl) * dh.powf(-ph) / (2.0 * h);
        stripped.max(0.0)
    });
    DensityPiece::new(lo, hi, pl, ph, format!("neg_k_prime({piece:?})"), rest)
        .map(|p| p.with_noise_floor(1e-9))
}

// ---------------------------------------------------------------------------
// Integrals
// ---------------------------------------------------------------------------

/// Integrand families for stochastic and Lévy integrals.
#[derive(Debug, Clone, Copy)]
pub enum IntegrandFamily {
    Const(f64),
    /// t^θ
    Power {
        theta: f64,
    },
    /// e^{θt}
    Exp {
        theta: f64,
    },
}

impl IntegrandFamily {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            IntegrandFamily::Const(c) => *c,
            IntegrandFamily::Power { theta } => t.powf(*theta),
            IntegrandFamily::Exp { theta } => (theta * t).exp(),
        }
    }
}

/// What a stochastic integral integrates against.
pub enum Integrator<'a> {
    SelfSimilar(&'a SelfSimilarProcess),
    Levy(&'a FreeLevyProcessSpec),
}

impl Integrator<'_> {
    fn base_expr(&self) -> CumulantExpr {
        match self {
            Integrator::SelfSimilar(p) => p.base.expr().clone(),
            Integrator::Levy(lp) => lp.one_dim_marginal.expr().clone(),
        }
    }

    /// Partition-sum terms (weight, dilation) of Σⱼ C_{μ_{t_{j-1},t_j}}(f(t#ⱼ)z).
    fn terms(&self, partition: &[f64], tags: &[f64], f: &IntegrandFamily) -> Vec<(f64, f64)> {
        let mut terms = Vec::with_capacity(2 * tags.len());
        match self {
            Integrator::SelfSimilar(p) => {
                for j in 0..tags.len() {
                    let fj = f.eval(tags[j]);
                    if fj == 0.0 {
                        continue;
                    }
                    let hi = partition[j + 1].powf(p.h);
                    let lo = partition[j].powf(p.h);
                    terms.push((1.0, hi * fj));
                    if lo != 0.0 {
                        terms.push((-1.0, lo * fj));
                    }
                }
            }
            Integrator::Levy(_) => {
                for j in 0..tags.len() {
                    let fj = f.eval(tags[j]);
                    if fj == 0.0 {
                        continue;
                    }
                    terms.push((partition[j + 1] - partition[j], fj));
                }
            }
        }
        terms
    }
}

/// Configuration of the dyadic Riemann-sum refinement.
#[derive(Debug, Clone)]
pub struct RefinementConfig {
    /// Sup-norm tolerance on the ℂ⁻ evaluation grid between levels.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        RefinementConfig {
            tol: 1e-6,
            max_depth: 20,
        }
    }
}

/// Law of ∫_A^B f(t) dX_t as the representation-converged limit of dyadic
/// midpoint-tagged Riemann sums.
pub fn stochastic_integral_law(
    integrator: &Integrator<'_>,
    f: IntegrandFamily,
    a: f64,
    b: f64,
    cfg: &RefinementConfig,
) -> Result<DistributionSpec> {
    if !(a >= 0.0 && a < b && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "stochastic integral needs 0 ≤ A < B < ∞, got [{a}, {b}]"
        )));
    }
    let grid = default_cminus_grid();
    let base = integrator.base_expr();
    let mut prev: Option<Vec<C64>> = None;
    let mut trace = Vec::new();
    for depth in 1..=cfg.max_depth {
        let n = 1usize << depth;
        let partition: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        let tags: Vec<f64> = (0..n)
            .map(|j| 0.5 * (partition[j] + partition[j + 1]))
            .collect();
        let terms = integrator.terms(&partition, &tags, &f);
        let expr = CumulantExpr::PartitionSum {
            base: Box::new(base.clone()),
            terms: Arc::new(terms),
        };
        let vals: Vec<C64> = grid
            .iter()
            .map(|&z| expr.eval_jet(z).map(|j| j.v))
            .collect::<Result<_>>()?;
        if let Some(p) = &prev {
            let delta = vals
                .iter()
                .zip(p)
                .map(|(v, q)| (v - q).norm())
                .fold(0.0f64, f64::max);
            trace.push(delta);
            if delta < cfg.tol {
                let label = match integrator {
                    Integrator::SelfSimilar(p) => {
                        format!("int[{a},{b}] f dX over {}", p.base.label())
                    }
                    Integrator::Levy(lp) => {
                        format!("int[{a},{b}] f dZ over {}", lp.one_dim_marginal.label())
                    }
                };
                return Ok(DistributionSpec::from_expr(label, expr));
            }
        }
        prev = Some(vals);
    }
    Err(Error::RefinementDepthExceeded {
        max_depth: cfg.max_depth,
        trace,
    })
}

/// C of ∫_A^B f(t) dZ_t against a free Lévy process:
/// ∫_A^B C_{L(Z₁)}(f(t)z) dt by stationary independent increments.
///
/// B = ∞ is allowed for decaying families; the truncation point R is chosen
/// so the integrand tail bound drops below tol/10 and is reported in the
/// diagnostics of the error when the tail test fails.
pub fn levy_integral_cumulant(
    lp: &FreeLevyProcessSpec,
    f: IntegrandFamily,
    a: f64,
    b: f64,
    z: C64,
    tol: f64,
) -> Result<C64> {
    if !(a >= 0.0) || !(b > a) {
        return Err(Error::InvalidParameter(format!(
            "levy integral needs 0 ≤ A < B, got [{a}, {b}]"
        )));
    }
    let expr = lp.one_dim_marginal.expr();
    let b_eff = if b.is_finite() {
        b
    } else {
        truncation_point(expr, &f, a, z, tol)?
    };
    let cfg = crate::quad::QuadConfig {
        atol: tol.min(1e-8) * 0.1,
        rtol: 1e-12,
        max_level: 14,
    };
    let failure = std::cell::RefCell::new(None);
    let est = crate::quad::tanh_sinh(
        |n| match expr.eval_jet(f.eval(n.x) * z) {
            Ok(j) => j.v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        },
        a,
        b_eff,
        &cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est?.value)
}

/// Truncation point for an infinite-horizon Lévy integral: R with
/// |C_{L(Z₁)}(f(R)z)| small enough that the exponential/power tail bound
/// stays below tol/10.
fn truncation_point(
    expr: &CumulantExpr,
    f: &IntegrandFamily,
    a: f64,
    z: C64,
    tol: f64,
) -> Result<f64> {
    let budget = tol * 0.1;
    match f {
        IntegrandFamily::Exp { theta } if *theta < 0.0 => {
            // |C(εz)| ≈ K·ε near 0, so the tail from R is ≤ |C(f(R)z)|/|θ|
            let mut r = a + (40.0 + (1.0 + z.norm()).ln()) / theta.abs();
            for _ in 0..4 {
                let tail = expr.eval_jet(f.eval(r) * z)?.v.norm() / theta.abs();
                if tail <= budget {
                    return Ok(r);
                }
                r *= 2.0;
            }
            Err(Error::DivergentIntegral {
                lo: a,
                detail: format!("tail test failed at R = {r}"),
            })
        }
        IntegrandFamily::Power { theta } if *theta < -1.0 => {
            let mut r = a.max(1.0) * 2.0;
            for _ in 0..60 {
                let tail = expr.eval_jet(f.eval(r) * z)?.v.norm() * r / (-theta - 1.0);
                if tail <= budget {
                    return Ok(r);
                }
                r *= 2.0;
            }
            Err(Error::DivergentIntegral {
                lo: a,
                detail: "power tail did not pass the tail test".into(),
            })
        }
        _ => Err(Error::DivergentIntegral {
            lo: a,
            detail: format!("integrand family {f:?} does not decay; infinite horizon rejected"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::transforms::eval_cumulant;

    fn gamma11() -> DistributionSpec {
        catalog::get("free_gamma", &[("t", 1.0), ("c", 1.0)])
            .unwrap()
            .spec
    }

    fn semicircle01() -> DistributionSpec {
        catalog::get("semicircle", &[("eta", 0.0), ("a", 1.0)])
            .unwrap()
            .spec
    }

    #[test]
    fn sd_verdicts_for_catalog() {
        assert!(sd_test(&gamma11(), SdMethod::Auto).unwrap().is_sd);
        assert!(sd_test(&semicircle01(), SdMethod::Auto).unwrap().is_sd);
        let mu = catalog::get("mu_p", &[("p", 0.5)]).unwrap().spec;
        assert!(sd_test(&mu, SdMethod::Auto).unwrap().is_sd);
        let fc = catalog::get("fuss_catalan", &[("p", 1.5)]).unwrap().spec;
        assert!(sd_test(&fc, SdMethod::Auto).unwrap().is_sd);
    }

    #[test]
    fn free_poisson_not_sd_both_methods() {
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])
            .unwrap()
            .spec;
        let a = sd_test(&fp, SdMethod::LevyDensityMonotonicity).unwrap();
        assert!(!a.is_sd);
        assert!(a.reason.as_deref().unwrap_or("").contains("no density"));
        let b = sd_test(&fp, SdMethod::AnalyticHalfplane).unwrap();
        assert!(!b.is_sd, "halfplane method must also reject free Poisson");
    }

    #[test]
    fn sd_factor_of_semicircle() {
        // ρ_c of w(0,1) is w(0, 1-c²)
        let w = semicircle01();
        let rho = sd_factor(&w, 0.6).unwrap();
        for z in default_cminus_grid() {
            let v = eval_cumulant(&rho, z).unwrap();
            let expected = (1.0 - 0.36) * z * z;
            assert!((v - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn sd_factor_rejects_free_poisson() {
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])
            .unwrap()
            .spec;
        assert!(matches!(
            sd_factor(&fp, 0.5),
            Err(Error::NotSelfdecomposable { .. })
        ));
    }

    #[test]
    fn sd_factor_continuity_as_c_to_one() {
        // sup |C_{ρ_c}| on a compact ℂ⁻ grid → 0 as c ↑ 1
        let g = gamma11();
        let mut prev = f64::INFINITY;
        for c in [0.9, 0.99, 0.999] {
            let rho = sd_factor(&g, c).unwrap();
            let sup = default_cminus_grid()
                .iter()
                .map(|&z| eval_cumulant(&rho, z).unwrap().norm())
                .fold(0.0f64, f64::max);
            assert!(sup < prev);
            prev = sup;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn sd_factor_gamma_closed_form() {
        // ρ_{1/2} of γ(1,1) has C(z) = [√(1-2z) - √(1-4z)]/2
        let rho = sd_factor(&gamma11(), 0.5).unwrap();
        for z in default_cminus_grid() {
            let v = eval_cumulant(&rho, z).unwrap();
            let one = C64::new(1.0, 0.0);
            let expected = ((one - 2.0 * z).sqrt() - (one - 4.0 * z).sqrt()) / 2.0;
            assert!((v - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn marginal_at_one_is_base() {
        let p = SelfSimilarProcess::new(gamma11(), 0.7).unwrap();
        let m = p.marginal(1.0).unwrap();
        let z = C64::new(-0.2, -0.4);
        assert_eq!(
            eval_cumulant(&m, z).unwrap(),
            eval_cumulant(p.base(), z).unwrap()
        );
    }

    #[test]
    fn marginal_scaling_gamma() {
        // C_{μ_t}(z) = (1-√(1-4t^H z))/2
        let h = 0.7;
        let p = SelfSimilarProcess::new(gamma11(), h).unwrap();
        let t = 2.3;
        let m = p.marginal(t).unwrap();
        let z = C64::new(-0.15, -0.35);
        let v = eval_cumulant(&m, z).unwrap();
        let one = C64::new(1.0, 0.0);
        let expected = (one - (one - 4.0 * t.powf(h) * z).sqrt()) / 2.0;
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn marginal_semicircle_h_half() {
        // base w(0,1), H = 1/2, t = 4 → w(0,4)
        let p = SelfSimilarProcess::new(semicircle01(), 0.5).unwrap();
        let m = p.marginal(4.0).unwrap();
        let t = m.triplet().unwrap();
        assert!((t.a - 4.0).abs() < 1e-14);
        assert_eq!(t.eta, 0.0);
    }

    #[test]
    fn increment_edge_cases() {
        let p = SelfSimilarProcess::new(gamma11(), 1.0).unwrap();
        assert_eq!(p.increment(2.0, 2.0).unwrap().as_point_mass(), Some(0.0));
        let z = C64::new(-0.3, -0.3);
        assert_eq!(
            eval_cumulant(&p.increment(0.0, 3.0).unwrap(), z).unwrap(),
            eval_cumulant(&p.marginal(3.0).unwrap(), z).unwrap()
        );
        assert!(p.increment(3.0, 2.0).is_err());
    }

    #[test]
    fn increment_semicircle_variances() {
        // w(0,1), H = 1/2: L(X_4 - X_1) = w(0, 3)
        let p = SelfSimilarProcess::new(semicircle01(), 0.5).unwrap();
        let inc = p.increment(1.0, 4.0).unwrap();
        for z in default_cminus_grid() {
            let v = eval_cumulant(&inc, z).unwrap();
            assert!((v - 3.0 * z * z).norm() < 1e-13);
        }
    }

    #[test]
    fn increment_cocycle() {
        // increment(s,r) ⊞ increment(r,t) = increment(s,t) at cumulant level
        let p = SelfSimilarProcess::new(gamma11(), 0.8).unwrap();
        let (s, r, t) = (0.5, 1.3, 2.9);
        let left =
            crate::calculus::boxplus(&p.increment(s, r).unwrap(), &p.increment(r, t).unwrap());
        let right = p.increment(s, t).unwrap();
        for z in default_cminus_grid() {
            let l = eval_cumulant(&left, z).unwrap();
            let rr = eval_cumulant(&right, z).unwrap();
            assert!((l - rr).norm() < 1e-13 * (1.0 + l.norm()));
        }
    }

    #[test]
    fn linear_combination_single_term() {
        let p = SelfSimilarProcess::new(gamma11(), 0.6).unwrap();
        let z = C64::new(-0.2, -0.5);
        let v = p.linear_combination_cumulant(&[1.5], &[2.0], z).unwrap();
        let expected = eval_cumulant(&p.marginal(2.0).unwrap(), 1.5 * z).unwrap();
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn linear_combination_difference_reduces_to_increment() {
        // c = (1, -1) at (s, t): X_s - X_t = -(X_t - X_s), so the cumulant is
        // that of the increment evaluated at -z
        let p = SelfSimilarProcess::new(gamma11(), 0.6).unwrap();
        let (s, t) = (0.8, 1.7);
        let z = C64::new(-0.2, -0.5);
        let v = p
            .linear_combination_cumulant(&[1.0, -1.0], &[s, t], z)
            .unwrap();
        let inc = p.increment(s, t).unwrap();
        let expected = inc.expr().eval_jet(-z).unwrap().v;
        assert!((v - expected).norm() < 1e-13, "{v} vs {expected}");
    }

    #[test]
    fn linear_combination_selfsimilarity() {
        // scaling all times by a equals scaling z by a^H
        let p = SelfSimilarProcess::new(gamma11(), 0.85).unwrap();
        let coeffs = [0.7, -1.2, 0.4];
        let times = [0.5, 1.1, 2.4];
        let a = 1.9f64;
        let z = C64::new(-0.21, -0.43);
        let scaled_times: Vec<f64> = times.iter().map(|t| a * t).collect();
        let lhs = p
            .linear_combination_cumulant(&coeffs, &scaled_times, z)
            .unwrap();
        let rhs = p
            .linear_combination_cumulant(&coeffs, &times, a.powf(p.h()) * z)
            .unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn bdlp_of_semicircle_is_free_brownian_marginal() {
        // w(η, a) → C_{L(Z₁)} = ηz + 2az², i.e. w(η, 2a)
        let e = catalog::get("semicircle", &[("eta", 0.4), ("a", 0.9)])
            .unwrap()
            .spec;
        let lp = bdlp(&e).unwrap();
        let z = C64::new(-0.3, -0.7);
        let v = eval_cumulant(&lp.one_dim_marginal, z).unwrap();
        let expected = 0.4 * z + 1.8 * z * z;
        assert!((v - expected).norm() < 1e-14);
        let t = lp.one_dim_marginal.triplet().unwrap();
        assert_eq!(t.a, 1.8);
        assert_eq!(t.eta, 0.4);
    }

    #[test]
    fn bdlp_gamma_value() {
        // z/√(1-4z) at z = -0.1 is -0.1/√1.4
        let lp = bdlp(&gamma11()).unwrap();
        let v = eval_cumulant(&lp.one_dim_marginal, C64::new(-0.1, 0.0)).unwrap();
        let expected = -0.1 / 1.4f64.sqrt();
        assert!((v - expected).norm() < 1e-14, "{v}");
    }

    #[test]
    fn bdlp_closed_forms_match_derivative() {
        // |z·dC/dz - C_bdlp| small on the grid, derivative via jets
        for (name, params) in [
            ("free_gamma", vec![("t", 2.0), ("c", 0.5)]),
            ("mu_p", vec![("p", 0.5)]),
            ("fuss_catalan", vec![("p", 1.5)]),
        ] {
            let e = catalog::get(name, &params).unwrap().spec;
            let lp = bdlp(&e).unwrap();
            for z in default_cminus_grid() {
                let (_, dc) = e.cumulant_with_derivative(z).unwrap();
                let v = eval_cumulant(&lp.one_dim_marginal, z).unwrap();
                assert!((z * dc - v).norm() < 1e-12, "{name} at {z}");
            }
        }
    }

    #[test]
    fn bdlp_rejects_free_poisson() {
        let fp = catalog::get("free_poisson", &[("lambda", 1.0)])
            .unwrap()
            .spec;
        assert!(matches!(bdlp(&fp), Err(Error::NotSelfdecomposable { .. })));
    }

    #[test]
    fn bdlp_levy_density_gamma_matches_closed_form() {
        // -k' for γ(1,1) is 1/(πx√(x(4-x)))
        let nu_z = bdlp_levy_density(&gamma11()).unwrap();
        for x in [0.05, 0.5, 1.0, 2.0, 3.5, 3.95] {
            let got = nu_z.density_at(x);
            let expected = 1.0 / (std::f64::consts::PI * x * (x * (4.0 - x)).sqrt());
            assert!(
                (got - expected).abs() <= 1e-4 * expected,
                "x={x}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn bdlp_levy_density_mu_p_matches_closed_form() {
        let e = catalog::get("mu_p", &[("p", 0.5)]).unwrap();
        let nu_z = bdlp_levy_density(&e.spec).unwrap();
        let oracle = e.bdlp_levy.unwrap();
        for x in [0.05, 0.3, 0.6, 0.9] {
            let got = nu_z.density_at(x);
            let expected = oracle.density_at(x);
            assert!(
                (got - expected).abs() <= 1e-4 * expected.abs(),
                "x={x}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn bdlp_levy_density_fuss_catalan_matches_closed_form() {
        let e = catalog::get("fuss_catalan", &[("p", 1.5)]).unwrap();
        let nu_z = bdlp_levy_density(&e.spec).unwrap();
        let oracle = e.bdlp_levy.unwrap();
        for x in [-0.9, -0.5, -0.2, -0.05] {
            let got = nu_z.density_at(x);
            let expected = oracle.density_at(x);
            assert!(
                (got - expected).abs() <= 1e-4 * expected.abs(),
                "x={x}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn stochastic_integral_constant_is_marginal() {
        // f ≡ 1 on [0, T] telescopes to marginal(T) at every refinement level
        let p = SelfSimilarProcess::new(gamma11(), 0.7).unwrap();
        let law = stochastic_integral_law(
            &Integrator::SelfSimilar(&p),
            IntegrandFamily::Const(1.0),
            0.0,
            2.0,
            &RefinementConfig::default(),
        )
        .unwrap();
        let m = p.marginal(2.0).unwrap();
        for z in default_cminus_grid() {
            let v = eval_cumulant(&law, z).unwrap();
            let expected = eval_cumulant(&m, z).unwrap();
            assert!((v - expected).norm() < 1e-12, "{v} vs {expected}");
        }
    }

    #[test]
    fn stochastic_integral_power_gives_driving_levy_marginal() {
        // ∫₁^{eᵗ} u^{-H} dX_u has cumulant t·H·z·C'(z)
        let h = 0.7;
        let p = SelfSimilarProcess::new(gamma11(), h).unwrap();
        let t = 0.5f64;
        let law = stochastic_integral_law(
            &Integrator::SelfSimilar(&p),
            IntegrandFamily::Power { theta: -h },
            1.0,
            t.exp(),
            &RefinementConfig {
                tol: 1e-7,
                max_depth: 20,
            },
        )
        .unwrap();
        let zmarg = p.driving_levy().unwrap().marginal(t).unwrap();
        for z in default_cminus_grid() {
            let v = eval_cumulant(&law, z).unwrap();
            let expected = eval_cumulant(&zmarg, z).unwrap();
            assert!((v - expected).norm() < 1e-4, "{v} vs {expected}");
        }
    }

    #[test]
    fn stochastic_integral_stationarity_of_bdlp_increments() {
        // ∫_{e^s}^{e^t} u^{-H} dX_u and ∫₁^{e^{t-s}} u^{-H} dX_u agree
        let h = 0.6;
        let p = SelfSimilarProcess::new(gamma11(), h).unwrap();
        let cfg = RefinementConfig {
            tol: 1e-7,
            max_depth: 20,
        };
        for (s, t) in [(0.2f64, 0.9f64), (0.5, 1.0)] {
            let lhs = stochastic_integral_law(
                &Integrator::SelfSimilar(&p),
                IntegrandFamily::Power { theta: -h },
                s.exp(),
                t.exp(),
                &cfg,
            )
            .unwrap();
            let rhs = stochastic_integral_law(
                &Integrator::SelfSimilar(&p),
                IntegrandFamily::Power { theta: -h },
                1.0,
                (t - s).exp(),
                &cfg,
            )
            .unwrap();
            for z in default_cminus_grid() {
                let l = eval_cumulant(&lhs, z).unwrap();
                let r = eval_cumulant(&rhs, z).unwrap();
                assert!((l - r).norm() < 1e-4, "({s},{t}) at {z}: {l} vs {r}");
            }
        }
    }

    #[test]
    fn riemann_sum_against_levy_process_is_time_linear() {
        // f ≡ 1 on [0, t] against a free Lévy process gives t·C_{L(Z₁)}
        // exactly at every refinement level
        let lp = bdlp(&gamma11()).unwrap();
        let t = 1.3;
        let law = stochastic_integral_law(
            &Integrator::Levy(&lp),
            IntegrandFamily::Const(1.0),
            0.0,
            t,
            &RefinementConfig::default(),
        )
        .unwrap();
        for z in default_cminus_grid() {
            let v = eval_cumulant(&law, z).unwrap();
            let expected = t * eval_cumulant(&lp.one_dim_marginal, z).unwrap();
            assert!((v - expected).norm() < 1e-12 * (1.0 + expected.norm()));
        }
    }

    #[test]
    fn levy_integral_constant_scales_time() {
        let lp = bdlp(&gamma11()).unwrap();
        let z = C64::new(-0.22, -0.41);
        let t = 1.7;
        let v = levy_integral_cumulant(&lp, IntegrandFamily::Const(1.0), 0.0, t, z, 1e-9).unwrap();
        let expected = t * eval_cumulant(&lp.one_dim_marginal, z).unwrap();
        assert!((v - expected).norm() < 1e-9, "{v} vs {expected}");
    }

    #[test]
    fn levy_integral_ou_recovers_gamma() {
        // ∫₀^∞ C_{L(Z₁)}(e^{-t}z) dt = C_{γ(1,1)}(z)
        let lp = bdlp(&gamma11()).unwrap();
        let g = gamma11();
        for z in [C64::new(-0.3, -0.4), C64::new(-1.0, -1.0)] {
            let v = levy_integral_cumulant(
                &lp,
                IntegrandFamily::Exp { theta: -1.0 },
                0.0,
                f64::INFINITY,
                z,
                1e-8,
            )
            .unwrap();
            let expected = eval_cumulant(&g, z).unwrap();
            assert!((v - expected).norm() < 1e-6, "{v} vs {expected}");
        }
    }

    #[test]
    fn levy_integral_ou_semicircle() {
        // Z₁ = w(η, 2a): ∫₀^∞ (ηe^{-t}z + 2ae^{-2t}z²) dt = ηz + az²
        let e = catalog::get("semicircle", &[("eta", 0.5), ("a", 1.2)])
            .unwrap()
            .spec;
        let lp = bdlp(&e).unwrap();
        let z = C64::new(-0.4, -0.6);
        let v = levy_integral_cumulant(
            &lp,
            IntegrandFamily::Exp { theta: -1.0 },
            0.0,
            f64::INFINITY,
            z,
            1e-9,
        )
        .unwrap();
        let expected = 0.5 * z + 1.2 * z * z;
        assert!((v - expected).norm() < 1e-8, "{v} vs {expected}");
    }

    #[test]
    fn levy_integral_rejects_growing_infinite_horizon() {
        let lp = bdlp(&gamma11()).unwrap();
        let r = levy_integral_cumulant(
            &lp,
            IntegrandFamily::Const(1.0),
            0.0,
            f64::INFINITY,
            C64::new(-0.1, -0.1),
            1e-6,
        );
        assert!(matches!(r, Err(Error::DivergentIntegral { .. })));
    }
}
