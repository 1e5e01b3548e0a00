//! The complex-analytic engine.
//!
//! Evaluates free cumulant transforms C_μ on the lower half-plane, solves
//! u + φ_μ(u) = w for u = F_μ(w) on the upper half-plane (damped fixed point
//! with Newton acceleration), forms Cauchy transforms G_μ = 1/F_μ, and
//! recovers densities through the Stieltjes inversion
//! f(x) = -(1/π)·lim_{ε↓0} Im G(x+iε) along an ε-ladder with Richardson
//! extrapolation.

use crate::error::{Error, Result};
use crate::jet::{Jet2, C64};
use crate::measures::CharTriplet;
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

/// Closed algebra of free cumulant transforms.
///
/// Catalog laws are leaves; convolution, dilation, convolution powers,
/// selfdecomposable factors, BDLP extraction and frozen Riemann sums are
/// interior nodes, so every derived law evaluates exactly — no refitting.
#[derive(Clone, Debug)]
pub enum CumulantExpr {
    /// ηz + az² (semicircle w(η, a); a point mass when a = 0).
    Quadratic { eta: f64, a: f64 },
    /// t(1 - √(1-4cz))/2, the free gamma law γ(t, c).
    FreeGamma { t: f64, c: f64 },
    /// tcz/√(1-4cz), the BDLP cumulant of γ(t, c).
    FreeGammaBdlp { t: f64, c: f64 },
    /// 1 - (1-z)^p.
    MuP { p: f64 },
    /// pz(1-z)^{p-1}, the BDLP cumulant of μ(p).
    MuPBdlp { p: f64 },
    /// pz + (z+1)^p - 1, the Fuss-Catalan law μ(p, p).
    FussCatalan { p: f64 },
    /// pz + pz(z+1)^{p-1}, the BDLP cumulant of μ(p, p).
    FussCatalanBdlp { p: f64 },
    /// λz/(1-z), the free Poisson (Marchenko-Pastur) law.
    FreePoisson { lambda: f64 },
    /// Free Lévy-Khintchine integral over a characteristic triplet.
    Triplet(Arc<CharTriplet>),
    /// The BDLP triplet formula ηz + 2az² + z∫(x/(1-zx)² - x·1_{[-1,1]})dν.
    TripletBdlp(Arc<CharTriplet>),
    /// C₁ + C₂ + …, the cumulant of a free additive convolution.
    Sum(Vec<CumulantExpr>),
    /// C(cz), the cumulant of the dilation D_c.
    Dilated(f64, Box<CumulantExpr>),
    /// w·C(z) for w ≥ 0, a ⊞-convolution power (Lévy marginal at time w).
    Scaled(f64, Box<CumulantExpr>),
    /// C₁ - C₂ (selfdecomposable factors, process increments).
    Diff(Box<CumulantExpr>, Box<CumulantExpr>),
    /// z·dC/dz of the inner law. Its own second derivative is not carried;
    /// constructors must not nest this node.
    ZDeriv(Box<CumulantExpr>),
    /// Σ_j w_j·C(a_j·z): a frozen Riemann sum over one base law.
    PartitionSum {
        base: Box<CumulantExpr>,
        terms: Arc<Vec<(f64, f64)>>,
    },
}

fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

impl fmt::Display for CumulantExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CumulantExpr::Quadratic { eta, a } => match (*eta, *a) {
                (e, a) if a == 0.0 => write!(f, "{}*z", fmt_num(e)),
                (e, a) if e == 0.0 => write!(f, "{}*z^2", fmt_num(a)),
                (e, a) => write!(f, "{}*z + {}*z^2", fmt_num(e), fmt_num(a)),
            },
            CumulantExpr::FreeGamma { t, c } => {
                write!(f, "{}*(1-sqrt(1-{}z))/2", fmt_num(*t), fmt_num(4.0 * c))
            }
            CumulantExpr::FreeGammaBdlp { t, c } => {
                let k = t * c;
                if k == 1.0 {
                    write!(f, "z/sqrt(1-{}z)", fmt_num(4.0 * c))
                } else {
                    write!(f, "{}*z/sqrt(1-{}z)", fmt_num(k), fmt_num(4.0 * c))
                }
            }
            CumulantExpr::MuP { p } => write!(f, "1-(1-z)^{}", fmt_num(*p)),
            CumulantExpr::MuPBdlp { p } => {
                write!(f, "{}*z*(1-z)^{}", fmt_num(*p), fmt_num(p - 1.0))
            }
            CumulantExpr::FussCatalan { p } => {
                write!(f, "{}*z + (z+1)^{} - 1", fmt_num(*p), fmt_num(*p))
            }
            CumulantExpr::FussCatalanBdlp { p } => {
                write!(
                    f,
                    "{}*z + {}*z*(z+1)^{}",
                    fmt_num(*p),
                    fmt_num(*p),
                    fmt_num(p - 1.0)
                )
            }
            CumulantExpr::FreePoisson { lambda } => {
                write!(f, "{}*z/(1-z)", fmt_num(*lambda))
            }
            CumulantExpr::Triplet(t) => {
                write!(f, "LK-triplet(a={}, eta={})", fmt_num(t.a), fmt_num(t.eta))
            }
            CumulantExpr::TripletBdlp(t) => {
                write!(
                    f,
                    "bdlp-of-triplet(a={}, eta={})",
                    fmt_num(t.a),
                    fmt_num(t.eta)
                )
            }
            CumulantExpr::Sum(es) => {
                let parts: Vec<String> = es.iter().map(|e| format!("({e})")).collect();
                write!(f, "{}", parts.join(" + "))
            }
            CumulantExpr::Dilated(c, e) => write!(f, "dilate[{}]({e})", fmt_num(*c)),
            CumulantExpr::Scaled(w, e) => write!(f, "{}*({e})", fmt_num(*w)),
            CumulantExpr::Diff(a, b) => write!(f, "({a}) - ({b})"),
            CumulantExpr::ZDeriv(e) => write!(f, "z*d/dz({e})"),
            CumulantExpr::PartitionSum { base, terms } => {
                write!(f, "riemann-sum[n={}]({base})", terms.len())
            }
        }
    }
}

impl CumulantExpr {
    /// Evaluate C with first and second z-derivatives, at any non-real z
    /// (and boundary-real z where the formulas/integrals extend).
    ///
    /// All closed forms use principal branches with cuts on the real axis,
    /// which makes them the Schwarz reflections of their ℂ⁻ restrictions, so
    /// evaluation on ℂ⁺ (needed for negative dilations) is automatic.
    pub fn eval_jet(&self, z: C64) -> Result<Jet2> {
        let zj = Jet2::var(z);
        let one = Jet2::real(1.0);
        Ok(match self {
            CumulantExpr::Quadratic { eta, a } => zj * *eta + zj * zj * *a,
            CumulantExpr::FreeGamma { t, c } => (one - (one - zj * (4.0 * c)).sqrt()) * (0.5 * t),
            CumulantExpr::FreeGammaBdlp { t, c } => {
                zj * (t * c) * (one - zj * (4.0 * c)).sqrt().recip()
            }
            CumulantExpr::MuP { p } => one - (one - zj).powf(*p),
            CumulantExpr::MuPBdlp { p } => zj * *p * (one - zj).powf(p - 1.0),
            CumulantExpr::FussCatalan { p } => zj * *p + (zj + one).powf(*p) - one,
            CumulantExpr::FussCatalanBdlp { p } => zj * *p + zj * *p * (zj + one).powf(p - 1.0),
            CumulantExpr::FreePoisson { lambda } => zj * *lambda / (one - zj),
            CumulantExpr::Triplet(t) => t.cumulant_jet(z)?,
            CumulantExpr::TripletBdlp(t) => t.bdlp_cumulant_jet(z)?,
            CumulantExpr::Sum(es) => {
                let mut acc = Jet2::ZERO;
                for e in es {
                    acc += e.eval_jet(z)?;
                }
                acc
            }
            CumulantExpr::Dilated(c, e) => {
                let inner = e.eval_jet(*c * z)?;
                Jet2 {
                    v: inner.v,
                    d: *c * inner.d,
                    dd: *c * *c * inner.dd,
                }
            }
            CumulantExpr::Scaled(w, e) => e.eval_jet(z)? * *w,
            CumulantExpr::Diff(a, b) => a.eval_jet(z)? - b.eval_jet(z)?,
            CumulantExpr::ZDeriv(e) => {
                let inner = e.eval_jet(z)?;
                Jet2 {
                    v: z * inner.d,
                    d: inner.d + z * inner.dd,
                    // would need the third derivative of the inner law;
                    // constructors keep ZDeriv un-nested so nothing reads this
                    dd: C64::new(f64::NAN, f64::NAN),
                }
            }
            CumulantExpr::PartitionSum { base, terms } => {
                let mut acc = Jet2::ZERO;
                for &(w, a) in terms.iter() {
                    let inner = base.eval_jet(a * z)?;
                    acc += Jet2 {
                        v: inner.v,
                        d: a * inner.d,
                        dd: a * a * inner.dd,
                    } * w;
                }
                acc
            }
        })
    }

    /// The constant c when this expression is the cumulant cz of δ_c.
    pub fn as_point_mass(&self) -> Option<f64> {
        match self {
            CumulantExpr::Quadratic { eta, a } if *a == 0.0 => Some(*eta),
            CumulantExpr::FreeGamma { t, .. } if *t == 0.0 => Some(0.0),
            CumulantExpr::MuP { p } if *p == 0.0 => Some(0.0),
            CumulantExpr::Triplet(t) => t.as_point_mass(),
            CumulantExpr::Sum(es) => es.iter().map(|e| e.as_point_mass()).sum::<Option<f64>>(),
            CumulantExpr::Dilated(c, e) => e.as_point_mass().map(|m| c * m),
            CumulantExpr::Scaled(w, e) => e.as_point_mass().map(|m| w * m),
            CumulantExpr::Diff(a, b) => Some(a.as_point_mass()? - b.as_point_mass()?),
            _ => None,
        }
    }

    /// True if a ZDeriv node occurs anywhere in the expression.
    pub fn contains_zderiv(&self) -> bool {
        match self {
            CumulantExpr::ZDeriv(_) => true,
            CumulantExpr::Sum(es) => es.iter().any(|e| e.contains_zderiv()),
            CumulantExpr::Dilated(_, e) | CumulantExpr::Scaled(_, e) => e.contains_zderiv(),
            CumulantExpr::Diff(a, b) => a.contains_zderiv() || b.contains_zderiv(),
            CumulantExpr::PartitionSum { base, .. } => base.contains_zderiv(),
            _ => false,
        }
    }
}

/// A ⊞-infinitely divisible law: a cumulant expression, plus the
/// characteristic triplet when one is known.
#[derive(Clone, Debug)]
pub struct DistributionSpec {
    label: String,
    expr: CumulantExpr,
    triplet: Option<Arc<CharTriplet>>,
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl DistributionSpec {
    pub fn new(
        label: impl Into<String>,
        expr: CumulantExpr,
        triplet: Option<Arc<CharTriplet>>,
    ) -> Self {
        DistributionSpec {
            label: label.into(),
            expr,
            triplet,
        }
    }

    pub fn from_expr(label: impl Into<String>, expr: CumulantExpr) -> Self {
        Self::new(label, expr, None)
    }

    pub fn from_triplet(label: impl Into<String>, t: CharTriplet) -> Self {
        let t = Arc::new(t);
        Self::new(label, CumulantExpr::Triplet(t.clone()), Some(t))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn expr(&self) -> &CumulantExpr {
        &self.expr
    }

    pub fn triplet(&self) -> Option<&Arc<CharTriplet>> {
        self.triplet.as_ref()
    }

    /// Forget the closed form; evaluate through the triplet quadrature only.
    pub fn triplet_only(&self) -> Result<DistributionSpec> {
        let t = self
            .triplet
            .clone()
            .ok_or_else(|| Error::UnsupportedRepresentation {
                op: "triplet_only",
                detail: format!("`{}` carries no triplet", self.label),
            })?;
        Ok(DistributionSpec {
            label: format!("{}[triplet]", self.label),
            expr: CumulantExpr::Triplet(t.clone()),
            triplet: Some(t),
        })
    }

    pub fn as_point_mass(&self) -> Option<f64> {
        self.expr.as_point_mass()
    }

    /// C_μ(z) on the closed lower half-plane.
    pub fn cumulant(&self, z: C64) -> Result<C64> {
        if z.im > 0.0 {
            return Err(Error::Domain {
                expected: "Im z <= 0 (lower half-plane)",
                got: z,
            });
        }
        Ok(self.expr.eval_jet(z)?.v)
    }

    /// (C_μ(z), C_μ'(z)) — the derivative comes out of the same evaluation
    /// pass via jets, with no finite-difference step.
    pub fn cumulant_with_derivative(&self, z: C64) -> Result<(C64, C64)> {
        if z.im > 0.0 {
            return Err(Error::Domain {
                expected: "Im z <= 0 (lower half-plane)",
                got: z,
            });
        }
        let j = self.expr.eval_jet(z)?;
        Ok((j.v, j.d))
    }

    /// φ_μ(u) = u·C_μ(1/u) for u ∈ ℂ⁺.
    pub fn phi(&self, u: C64) -> Result<C64> {
        if u.im <= 0.0 {
            return Err(Error::Domain {
                expected: "Im u > 0 (upper half-plane)",
                got: u,
            });
        }
        Ok(u * self.expr.eval_jet(1.0 / u)?.v)
    }

    /// Check closed-form and triplet evaluations agree on a ℂ⁻ grid.
    pub fn validate_consistency(&self, tol: f64) -> Result<()> {
        let Some(t) = &self.triplet else {
            return Ok(());
        };
        if matches!(self.expr, CumulantExpr::Triplet(_)) {
            return Ok(());
        }
        for z in default_cminus_grid() {
            let closed = self.expr.eval_jet(z)?.v;
            let quad = t.cumulant_jet(z)?.v;
            if (closed - quad).norm() > tol {
                return Err(Error::InvalidParameter(format!(
                    "`{}`: closed form and triplet disagree at z={z}: {closed} vs {quad}",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// The standard 5×5 evaluation grid {-2^{-k}(1 + i·m)} in ℂ⁻,
/// k = 0..5, m = 1..=5.
pub fn default_cminus_grid() -> Vec<C64> {
    let mut grid = Vec::with_capacity(25);
    for k in 0..5 {
        let s = 2f64.powi(-k);
        for m in 1..=5 {
            grid.push(C64::new(-s, -s * m as f64));
        }
    }
    grid
}

/// Public operation: evaluate the free cumulant transform.
pub fn eval_cumulant(spec: &DistributionSpec, z: C64) -> Result<C64> {
    spec.cumulant(z)
}

/// Tolerances of the F⁻¹ solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Residual target |u + φ(u) - w| ≤ tol_rel·(1 + |w|).
    pub tol_rel: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol_rel: 1e-12,
            max_iter: 200,
        }
    }
}

/// Solve u + φ_μ(u) = w for u = F_μ(w) ∈ ℂ⁺.
///
/// The fixed-point map u ← w - φ(u) maps ℂ⁺ into itself for ⊞-ID laws
/// (φ maps ℂ⁺ into ℂ⁻∪ℝ), so it is always admissible; Newton steps are
/// taken whenever they stay in ℂ⁺.
pub fn f_inverse_solve(spec: &DistributionSpec, w: C64) -> Result<C64> {
    f_inverse_solve_cfg(spec, w, &SolverConfig::default())
}

pub fn f_inverse_solve_cfg(spec: &DistributionSpec, w: C64, cfg: &SolverConfig) -> Result<C64> {
    if w.im <= 0.0 {
        return Err(Error::Domain {
            expected: "Im w > 0 (upper half-plane)",
            got: w,
        });
    }
    // point masses short-circuit: φ ≡ c
    if let Some(c) = spec.as_point_mass() {
        return Ok(w - c);
    }
    let tol = cfg.tol_rel * (1.0 + w.norm());
    let mut u = w;
    let mut residual = f64::INFINITY;
    for it in 0..cfg.max_iter {
        let z = 1.0 / u;
        let cj = spec.expr.eval_jet(z)?;
        let phi = u * cj.v;
        let g = u + phi - w;
        residual = g.norm();
        if residual <= tol {
            return Ok(u);
        }
        // φ'(u) = C(1/u) - C'(1/u)/u
        let phi_d = cj.v - cj.d / u;
        let newton = u - g / (1.0 + phi_d);
        // after many iterations trust only the provably invariant map
        let newton_ok = newton.im > 0.0 && newton.re.is_finite() && newton.im.is_finite();
        u = if newton_ok && it < 120 {
            newton
        } else {
            w - phi
        };
    }
    Err(Error::SolverDiverged {
        iterations: cfg.max_iter,
        last: u,
        residual,
    })
}

/// G_μ(w) = 1/F_μ(w) on ℂ⁺, with values in ℂ⁻.
pub fn cauchy_transform(spec: &DistributionSpec, w: C64) -> Result<C64> {
    Ok(1.0 / f_inverse_solve(spec, w)?)
}

pub fn cauchy_transform_cfg(spec: &DistributionSpec, w: C64, cfg: &SolverConfig) -> Result<C64> {
    Ok(1.0 / f_inverse_solve_cfg(spec, w, cfg)?)
}

// ---------------------------------------------------------------------------
// Stieltjes inversion
// ---------------------------------------------------------------------------

/// Configuration of the Stieltjes inversion ε-ladder.
#[derive(Debug, Clone)]
pub struct StieltjesConfig {
    /// Geometric ladder of offsets above the real axis (each half the last).
    pub ladder: Vec<f64>,
    /// Extrapolated densities below this are clamped to zero.
    pub clamp: f64,
    /// Extrapolations in [-neg_tol, 0) clamp to zero — the ladder's
    /// smoothing floor overshoots slightly negative just outside
    /// square-root support edges. Anything below -neg_tol is a failure.
    pub neg_tol: f64,
    /// Abort when more than this fraction of points fail.
    pub max_gap_fraction: f64,
    pub solver: SolverConfig,
}

impl Default for StieltjesConfig {
    fn default() -> Self {
        StieltjesConfig {
            ladder: vec![1e-2, 5e-3, 2.5e-3],
            clamp: 1e-12,
            neg_tol: 1e-3,
            max_gap_fraction: 0.05,
            solver: SolverConfig::default(),
        }
    }
}

impl StieltjesConfig {
    /// A finer ladder for locating support endpoints.
    pub fn fine() -> Self {
        StieltjesConfig {
            ladder: vec![1e-3, 5e-4, 2.5e-4],
            ..Default::default()
        }
    }
}

/// Tabulated density with support window and normalization metadata.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub points: Vec<(f64, f64)>,
    /// x positions where the solver failed.
    pub gaps: Vec<f64>,
    pub x_lo: f64,
    pub x_hi: f64,
    /// Trapezoid mass over the grid.
    pub mass: f64,
}

impl DensityGrid {
    pub fn from_points(points: Vec<(f64, f64)>, gaps: Vec<f64>, x_lo: f64, x_hi: f64) -> Self {
        let mass = trapezoid(&points);
        DensityGrid {
            points,
            gaps,
            x_lo,
            x_hi,
            mass,
        }
    }

    /// Tabulate a closed-form density.
    pub fn from_closed_density(f: impl Fn(f64) -> f64, x_lo: f64, x_hi: f64, n: usize) -> Self {
        assert!(n >= 2 && x_lo < x_hi);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = x_lo + (x_hi - x_lo) * i as f64 / (n - 1) as f64;
                (x, f(x).max(0.0))
            })
            .collect();
        Self::from_points(pts, Vec::new(), x_lo, x_hi)
    }

    /// Piecewise-linear CDF from grid trapezoids.
    pub fn cdf(&self) -> CdfTable {
        let mut xs = Vec::with_capacity(self.points.len());
        let mut cum = Vec::with_capacity(self.points.len());
        let mut acc = 0.0;
        for (i, &(x, f)) in self.points.iter().enumerate() {
            if i > 0 {
                let (xp, fp) = self.points[i - 1];
                acc += 0.5 * (f + fp) * (x - xp);
            }
            xs.push(x);
            cum.push(acc);
        }
        CdfTable {
            xs,
            cum,
            total: acc,
        }
    }

    /// The grid point nearest to x.
    pub fn nearest(&self, x: f64) -> Option<(f64, f64)> {
        self.points
            .iter()
            .min_by(|a, b| (a.0 - x).abs().partial_cmp(&(b.0 - x).abs()).unwrap())
            .copied()
    }
}

fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum()
}

/// Monotone piecewise-linear CDF table.
#[derive(Debug, Clone)]
pub struct CdfTable {
    xs: Vec<f64>,
    cum: Vec<f64>,
    total: f64,
}

impl CdfTable {
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.xs.is_empty() || x <= self.xs[0] {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return self.total;
        }
        let i = self.xs.partition_point(|v| *v <= x);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (c0, c1) = (self.cum[i - 1], self.cum[i]);
        let t = (x - x0) / (x1 - x0);
        c0 + t * (c1 - c0)
    }

    /// Inverse CDF by table bisection (for sampling in self-tests).
    pub fn quantile(&self, q: f64) -> f64 {
        let target = q.clamp(0.0, 1.0) * self.total;
        let i = self
            .cum
            .partition_point(|c| *c < target)
            .min(self.xs.len() - 1)
            .max(1);
        let (c0, c1) = (self.cum[i - 1], self.cum[i]);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        if c1 > c0 {
            x0 + (target - c0) / (c1 - c0) * (x1 - x0)
        } else {
            x0
        }
    }
}

/// -(1/π)·Im G(x+iε) extrapolated to ε → 0 over a halving ladder.
///
/// With a three-rung ladder the two Richardson stages cancel the O(ε) and
/// O(ε²) boundary bias.
fn stieltjes_point(spec: &DistributionSpec, x: f64, cfg: &StieltjesConfig) -> Result<f64> {
    let mut vals = Vec::with_capacity(cfg.ladder.len());
    for &eps in &cfg.ladder {
        let g = cauchy_transform_cfg(spec, C64::new(x, eps), &cfg.solver)?;
        vals.push(-g.im / std::f64::consts::PI);
    }
    // successive Richardson elimination; each rung halves ε
    let mut order = 1.0;
    while vals.len() > 1 {
        let k = 2f64.powf(order);
        vals = vals
            .windows(2)
            .map(|w| (k * w[1] - w[0]) / (k - 1.0))
            .collect();
        order += 1.0;
    }
    Ok(vals[0])
}

/// Recover a density on [x_lo, x_hi] at n equally spaced points.
///
/// Per-point solver failures are recorded as gaps; more than
/// `max_gap_fraction` failing points aborts.
pub fn density_grid(
    spec: &DistributionSpec,
    x_lo: f64,
    x_hi: f64,
    n: usize,
) -> Result<DensityGrid> {
    density_grid_cfg(spec, x_lo, x_hi, n, &StieltjesConfig::default())
}

pub fn density_grid_cfg(
    spec: &DistributionSpec,
    x_lo: f64,
    x_hi: f64,
    n: usize,
    cfg: &StieltjesConfig,
) -> Result<DensityGrid> {
    if !(x_lo < x_hi) || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "density grid needs x_lo < x_hi and n ≥ 2, got [{x_lo}, {x_hi}], n={n}"
        )));
    }
    for w in cfg.ladder.windows(2) {
        if (w[0] / w[1] - 2.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "Stieltjes ladder must halve at each rung".into(),
            ));
        }
    }
    let xs: Vec<f64> = (0..n)
        .map(|i| x_lo + (x_hi - x_lo) * i as f64 / (n - 1) as f64)
        .collect();
    let raw: Vec<(f64, Result<f64>)> = xs
        .par_iter()
        .map(|&x| (x, stieltjes_point(spec, x, cfg)))
        .collect();

    let mut points = Vec::with_capacity(n);
    let mut gaps = Vec::new();
    for (x, r) in raw {
        match r {
            Ok(f) if f >= -cfg.neg_tol => {
                points.push((x, if f < cfg.clamp { 0.0 } else { f }));
            }
            _ => gaps.push(x),
        }
    }
    if gaps.len() as f64 > cfg.max_gap_fraction * n as f64 {
        return Err(Error::TooManyGaps {
            failed: gaps.len(),
            total: n,
            max_fraction: cfg.max_gap_fraction * 100.0,
        });
    }
    Ok(DensityGrid::from_points(points, gaps, x_lo, x_hi))
}

/// Locate the support endpoints of an absolutely continuous law by
/// bisecting the density's threshold crossings with a fine ε-ladder.
pub fn support_endpoints(
    spec: &DistributionSpec,
    search_lo: f64,
    search_hi: f64,
    threshold: f64,
) -> Result<(f64, f64)> {
    let cfg = StieltjesConfig::fine();
    let n = 257;
    let eval = |x: f64| stieltjes_point(spec, x, &cfg).unwrap_or(0.0);
    let xs: Vec<f64> = (0..n)
        .map(|i| search_lo + (search_hi - search_lo) * i as f64 / (n - 1) as f64)
        .collect();
    let fs: Vec<f64> = xs.par_iter().map(|&x| eval(x)).collect();
    let first = fs.iter().position(|&f| f > threshold).ok_or_else(|| {
        Error::InvalidParameter("no density above threshold in the search window".into())
    })?;
    let last = fs.iter().rposition(|&f| f > threshold).unwrap();
    if first == 0 || last == n - 1 {
        return Err(Error::InvalidParameter(
            "support reaches the search window boundary; widen the window".into(),
        ));
    }
    let bisect = |mut outside: f64, mut inside: f64| -> f64 {
        for _ in 0..40 {
            if (inside - outside).abs() < 1e-4 {
                break;
            }
            let mid = 0.5 * (outside + inside);
            if eval(mid) > threshold {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (outside + inside)
    };
    let lo = bisect(xs[first - 1], xs[first]);
    let hi = bisect(xs[last + 1], xs[last]);
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{CharTriplet, LevyMeasure};

    fn semicircle(eta: f64, a: f64) -> DistributionSpec {
        DistributionSpec::new(
            format!("w({eta},{a})"),
            CumulantExpr::Quadratic { eta, a },
            Some(Arc::new(
                CharTriplet::new(a, LevyMeasure::empty(), eta).unwrap(),
            )),
        )
    }

    fn dirac(c: f64) -> DistributionSpec {
        DistributionSpec::new(
            format!("dirac({c})"),
            CumulantExpr::Quadratic { eta: c, a: 0.0 },
            Some(Arc::new(CharTriplet::point_mass(c))),
        )
    }

    #[test]
    fn cumulant_of_point_mass() {
        // C_{δ_c}(z) = cz
        let d = dirac(3.0);
        let z = C64::new(0.0, -0.5);
        let v = eval_cumulant(&d, z).unwrap();
        assert!((v - C64::new(0.0, -1.5)).norm() < 1e-15);
    }

    #[test]
    fn cumulant_of_semicircle_triplet_path() {
        // triplet (1, 0, 0) at z = -i: az² = -1
        let t = CharTriplet::new(1.0, LevyMeasure::empty(), 0.0).unwrap();
        let d = DistributionSpec::from_triplet("w(0,1)", t);
        let v = eval_cumulant(&d, C64::new(0.0, -1.0)).unwrap();
        assert!((v - C64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_upper_half_plane() {
        let d = semicircle(0.0, 1.0);
        assert!(matches!(
            eval_cumulant(&d, C64::new(0.0, 0.5)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn f_inverse_point_mass() {
        let d = dirac(2.0);
        let w = C64::new(0.3, 1.7);
        assert_eq!(f_inverse_solve(&d, w).unwrap(), w - 2.0);
    }

    #[test]
    fn f_inverse_semicircle() {
        // u + 1/u = 2.5i has the ℂ⁺ root i(2.5+√10.25)/2
        let d = semicircle(0.0, 1.0);
        let u = f_inverse_solve(&d, C64::new(0.0, 2.5)).unwrap();
        assert!(
            (u - C64::new(0.0, 2.8507810593582122)).norm() < 1e-12,
            "{u}"
        );
    }

    #[test]
    fn cauchy_point_mass_at_origin() {
        let d = dirac(0.0);
        let g = cauchy_transform(&d, C64::new(0.0, 1.0)).unwrap();
        assert!((g - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn cauchy_semicircle_golden_ratio() {
        let d = semicircle(0.0, 1.0);
        let g = cauchy_transform(&d, C64::new(0.0, 1.0)).unwrap();
        assert!(
            (g - C64::new(0.0, -0.61803398874989485)).norm() < 1e-12,
            "{g}"
        );
    }

    #[test]
    fn round_trip_residual() {
        let d = semicircle(0.1, 0.8);
        for w in [C64::new(0.4, 0.9), C64::new(-2.0, 0.01), C64::new(3.0, 2.0)] {
            let u = f_inverse_solve(&d, w).unwrap();
            assert!(u.im > 0.0);
            let back = u + d.phi(u).unwrap();
            assert!((back - w).norm() <= 1e-10 * (1.0 + w.norm()));
        }
    }

    #[test]
    fn density_semicircle() {
        let d = semicircle(0.0, 1.0);
        let grid = density_grid(&d, -3.0, 3.0, 601).unwrap();
        assert!(grid.gaps.is_empty());
        let (x0, f0) = grid.nearest(0.0).unwrap();
        assert_eq!(x0, 0.0);
        assert!(
            (f0 - 1.0 / std::f64::consts::PI).abs() < 1e-6,
            "f(0) = {f0}"
        );
        let (_, f25) = grid.nearest(2.5).unwrap();
        assert_eq!(f25, 0.0);
        assert!((grid.mass - 1.0).abs() < 1e-3, "mass = {}", grid.mass);
    }

    #[test]
    fn partition_sum_eval() {
        let base = CumulantExpr::Quadratic { eta: 0.0, a: 1.0 };
        let e = CumulantExpr::PartitionSum {
            base: Box::new(base),
            terms: Arc::new(vec![(1.0, 1.0), (1.0, 2.0)]),
        };
        // z² + (2z)² = 5z²
        let z = C64::new(-0.3, -0.4);
        let v = e.eval_jet(z).unwrap().v;
        assert!((v - 5.0 * z * z).norm() < 1e-14);
    }
}
