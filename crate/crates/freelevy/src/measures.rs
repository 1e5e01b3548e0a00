//! Lévy measures, free characteristic triplets and free generating pairs.
//!
//! A ⊞-infinitely divisible law is carried either by its free
//! characteristic triplet (a, ν, η),
//!
//! ```text
//! C_μ(z) = ηz + az² + ∫ ( 1/(1-xz) - 1 - xz·1_{[-1,1]}(x) ) ν(dx),   z ∈ ℂ⁻,
//! ```
//!
//! or by its free generating pair (γ, σ),
//!
//! ```text
//! φ_μ(u) = γ + ∫ (1+xu)/(u-x) σ(dx),   u ∈ ℂ⁺,
//! ```
//!
//! with σ(dx) = a·δ₀(dx) + x²/(1+x²)·ν(dx) and
//! γ = η - ∫ x·(1_{[-1,1]}(x) - 1/(1+x²)) ν(dx).
//!
//! Densities are stored in endpoint-factored form
//! ℓ(x) = (x-lo)^{pow_lo} · (hi-x)^{pow_hi} · rest(x), which is what lets the
//! tanh-sinh rule integrate x^{-3/2}-type singularities against the cumulant
//! kernel without overflow or cancellation: kernels are folded in by adding
//! their vanishing order at 0 to the exponent instead of multiplying huge by
//! tiny.

use crate::error::{Error, Result};
use crate::jet::{Jet2, C64};
use crate::quad::{tail_doubling, tanh_sinh, QuadConfig, QuadNode, QuadOutput, TailOutcome};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type DensityFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// One smooth support piece of a Lévy density.
///
/// The density on (lo, hi) is `(x-lo)^{pow_lo} (hi-x)^{pow_hi} rest(x, d_lo, d_hi)`
/// with `rest` bounded on the closed piece. Pieces never straddle zero.
#[derive(Clone)]
pub struct DensityPiece {
    lo: f64,
    hi: f64,
    pow_lo: f64,
    pow_hi: f64,
    rest: DensityFn,
    /// Interior points where the density is only piecewise-smooth
    /// (e.g. knots of a tabulated grid); integration splits here.
    splits: Vec<f64>,
    label: String,
    /// The JSON this piece was built from, when it still describes it
    /// exactly (cleared by dilations and other transformations).
    provenance: Option<LevyMeasureJson>,
    /// Relative evaluation noise of the density (nonzero for numerically
    /// differentiated densities); quadrature tolerances are floored here.
    noise_floor: f64,
}

impl fmt::Debug for DensityPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DensityPiece({} on ({}, {}), pow=({}, {}))",
            self.label, self.lo, self.hi, self.pow_lo, self.pow_hi
        )
    }
}

impl DensityPiece {
    pub fn new(
        lo: f64,
        hi: f64,
        pow_lo: f64,
        pow_hi: f64,
        label: impl Into<String>,
        rest: DensityFn,
    ) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "density piece needs lo < hi, got ({lo}, {hi})"
            )));
        }
        if lo < 0.0 && hi > 0.0 {
            return Err(Error::InvalidParameter(
                "density pieces must not straddle 0; split them first".into(),
            ));
        }
        if lo.is_infinite() && pow_lo != 0.0 || hi.is_infinite() && pow_hi != 0.0 {
            return Err(Error::InvalidParameter(
                "infinite endpoints cannot carry a power factor".into(),
            ));
        }
        Ok(DensityPiece {
            lo,
            hi,
            pow_lo,
            pow_hi,
            rest,
            splits: Vec::new(),
            label: label.into(),
            provenance: None,
            noise_floor: 0.0,
        })
    }

    pub fn with_splits(mut self, splits: Vec<f64>) -> Self {
        self.splits = splits;
        self
    }

    pub fn with_provenance(mut self, json: LevyMeasureJson) -> Self {
        self.provenance = Some(json);
        self
    }

    pub fn provenance(&self) -> Option<&LevyMeasureJson> {
        self.provenance.as_ref()
    }

    pub fn with_noise_floor(mut self, noise: f64) -> Self {
        self.noise_floor = noise;
        self
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Local power-law exponent at the endpoint touching zero, if any.
    pub fn exponent_at_zero(&self) -> Option<f64> {
        if self.lo == 0.0 {
            Some(self.pow_lo)
        } else if self.hi == 0.0 {
            Some(self.pow_hi)
        } else {
            None
        }
    }

    /// Declared endpoint singularities as (location, local exponent).
    pub fn declared_singularities(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        if self.pow_lo != 0.0 {
            out.push((self.lo, self.pow_lo));
        }
        if self.pow_hi != 0.0 {
            out.push((self.hi, self.pow_hi));
        }
        out
    }

    pub fn pow_lo(&self) -> f64 {
        self.pow_lo
    }

    pub fn pow_hi(&self) -> f64 {
        self.pow_hi
    }

    /// Density value from explicitly supplied endpoint distances; callers
    /// that track distances exactly (deep quadrature nodes, numerical
    /// differentiation near singular endpoints) avoid the cancellation in
    /// x - lo / hi - x.
    pub fn eval_at(&self, x: f64, d_lo: f64, d_hi: f64) -> f64 {
        d_lo.powf(self.pow_lo) * d_hi.powf(self.pow_hi) * (self.rest)(x, d_lo, d_hi)
    }

    /// The bounded factor of the density, without the endpoint powers.
    pub fn rest_at(&self, x: f64, d_lo: f64, d_hi: f64) -> f64 {
        (self.rest)(x, d_lo, d_hi)
    }

    /// Density value at x (0 outside the open piece).
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let d_lo = x - self.lo;
        let d_hi = if self.hi.is_infinite() {
            f64::INFINITY
        } else {
            self.hi - x
        };
        d_lo.powf(self.pow_lo) * d_hi.powf(self.pow_hi) * (self.rest)(x, d_lo, d_hi)
    }

    /// The pushforward density under x ↦ c·x, i.e. the piece of D_c ν.
    pub fn dilated(&self, c: f64) -> DensityPiece {
        assert!(c != 0.0 && c.is_finite());
        let scale = c.abs().powf(-(1.0 + self.pow_lo + self.pow_hi));
        let rest = self.rest.clone();
        let ac = c.abs();
        let label = format!("dilate[{c}]({})", self.label);
        let splits = self.splits.iter().map(|s| s * c).collect::<Vec<_>>();
        if c > 0.0 {
            let (pl, ph) = (self.pow_lo, self.pow_hi);
            DensityPiece {
                lo: self.lo * c,
                hi: self.hi * c,
                pow_lo: pl,
                pow_hi: ph,
                rest: Arc::new(move |x, dl, dh| rest(x / c, dl / ac, dh / ac) * scale),
                splits,
                label,
                provenance: None,
                noise_floor: self.noise_floor,
            }
        } else {
            // orientation flips; endpoint factors swap sides
            let (pl, ph) = (self.pow_hi, self.pow_lo);
            DensityPiece {
                lo: self.hi * c,
                hi: self.lo * c,
                pow_lo: pl,
                pow_hi: ph,
                rest: Arc::new(move |x, dl, dh| rest(x / c, dh / ac, dl / ac) * scale),
                splits,
                label,
                provenance: None,
                noise_floor: self.noise_floor,
            }
        }
    }

    /// Piece scaled by a positive constant factor.
    pub fn scaled(&self, w: f64) -> DensityPiece {
        assert!(w > 0.0);
        let rest = self.rest.clone();
        DensityPiece {
            lo: self.lo,
            hi: self.hi,
            pow_lo: self.pow_lo,
            pow_hi: self.pow_hi,
            rest: Arc::new(move |x, dl, dh| w * rest(x, dl, dh)),
            splits: self.splits.clone(),
            label: format!("{w}*{}", self.label),
            provenance: None,
            noise_floor: self.noise_floor,
        }
    }

    /// Multiply by x²/(1+x²) (ν → σ direction).
    fn to_sigma(&self) -> DensityPiece {
        let rest = self.rest.clone();
        let mut out = self.clone();
        if self.lo == 0.0 {
            out.pow_lo += 2.0;
            out.rest = Arc::new(move |x, dl, dh| rest(x, dl, dh) / (1.0 + x * x));
        } else if self.hi == 0.0 {
            out.pow_hi += 2.0;
            out.rest = Arc::new(move |x, dl, dh| rest(x, dl, dh) / (1.0 + x * x));
        } else {
            out.rest = Arc::new(move |x, dl, dh| rest(x, dl, dh) * x * x / (1.0 + x * x));
        }
        out.label = format!("sigma({})", self.label);
        out.provenance = None;
        out
    }

    /// Multiply by (1+x²)/x² (σ → ν direction).
    fn to_nu(&self) -> DensityPiece {
        let rest = self.rest.clone();
        let mut out = self.clone();
        if self.lo == 0.0 {
            out.pow_lo -= 2.0;
            out.rest = Arc::new(move |x, dl, dh| rest(x, dl, dh) * (1.0 + x * x));
        } else if self.hi == 0.0 {
            out.pow_hi -= 2.0;
            out.rest = Arc::new(move |x, dl, dh| rest(x, dl, dh) * (1.0 + x * x));
        } else {
            out.rest = Arc::new(move |x, dl, dh| rest(x, dl, dh) * (1.0 + x * x) / (x * x));
        }
        out.label = format!("nu({})", self.label);
        out.provenance = None;
        out
    }
}

/// A kernel in zero-factored form: K(x) = |x|^order · reduced(x) everywhere
/// inside [-1, 1] (where the factorization is exact), with `plain` handling
/// the full kernel, indicators included, away from the zero endpoint.
pub(crate) struct ZeroFactored<V> {
    pub order: f64,
    pub reduced: Box<dyn Fn(f64) -> V + Sync>,
    pub plain: Box<dyn Fn(f64) -> V + Sync>,
    /// Additional kernel discontinuities the quadrature must split at.
    pub splits: Vec<f64>,
}

fn quad_cfg() -> QuadConfig {
    QuadConfig {
        atol: 1e-12,
        rtol: 1e-11,
        max_level: 12,
    }
}

/// A measure on ℝ∖{0} with ∫(x²∧1) ν(dx) < ∞: atoms plus density pieces.
#[derive(Clone, Debug, Default)]
pub struct LevyMeasure {
    atoms: Vec<(f64, f64)>,
    pieces: Vec<DensityPiece>,
    /// Cached ∫ (x²∧1) ν(dx), computed eagerly at construction.
    square_mass: f64,
}

impl LevyMeasure {
    pub fn empty() -> Self {
        LevyMeasure::default()
    }

    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(atoms, Vec::new())
    }

    pub fn from_pieces(pieces: Vec<DensityPiece>) -> Result<Self> {
        Self::new(Vec::new(), pieces)
    }

    pub fn new(atoms: Vec<(f64, f64)>, pieces: Vec<DensityPiece>) -> Result<Self> {
        for &(x, m) in &atoms {
            if x == 0.0 {
                return Err(Error::InvalidParameter(
                    "Levy measure cannot charge {0}".into(),
                ));
            }
            if !(m > 0.0) || !m.is_finite() || !x.is_finite() {
                return Err(Error::InvalidParameter(format!("bad atom ({x}, {m})")));
            }
        }
        for p in &pieces {
            let zero_pow = p.exponent_at_zero().unwrap_or(0.0);
            if zero_pow <= -3.0 {
                return Err(Error::InvalidParameter(format!(
                    "density exponent {zero_pow} at 0 is not x²-integrable"
                )));
            }
            for (loc, e) in p.declared_singularities() {
                if loc != 0.0 && loc.is_finite() && e <= -1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "density exponent {e} at {loc} is not integrable"
                    )));
                }
            }
            // negativity probe
            let (a, b) = (p.lo.max(-1e6), p.hi.min(1e6));
            for k in 1..8 {
                let x = a + (b - a) * k as f64 / 8.0;
                let v = p.eval(x);
                if v < 0.0 || v.is_nan() {
                    return Err(Error::InvalidParameter(format!(
                        "density `{}` evaluates to {v} at x = {x}",
                        p.label
                    )));
                }
            }
        }
        let mut nu = LevyMeasure {
            atoms,
            pieces,
            square_mass: 0.0,
        };
        nu.square_mass = nu.compute_square_mass()?;
        Ok(nu)
    }

    /// ∫ (x²∧1) dν, finite to tolerance 1e-6 under refinement doubling.
    /// Finite cells use tanh-sinh; infinite tails use interval doubling so
    /// that slowly decaying (but finite) tails still validate.
    fn compute_square_mass(&self) -> Result<f64> {
        let mut total: f64 = self.atoms.iter().map(|&(x, m)| m * (x * x).min(1.0)).sum();
        let cfg = QuadConfig {
            atol: 1e-9,
            rtol: 1e-6,
            max_level: 12,
        };
        let kern: ZeroFactored<f64> = ZeroFactored {
            order: 2.0,
            reduced: Box::new(|_x| 1.0),
            plain: Box::new(|x| if x.abs() <= 1.0 { x * x } else { 1.0 }),
            splits: Vec::new(),
        };
        for piece in &self.pieces {
            let lo = if piece.lo.is_infinite() {
                piece.hi.min(-1.0)
            } else {
                piece.lo
            };
            let hi = if piece.hi.is_infinite() {
                piece.lo.max(1.0)
            } else {
                piece.hi
            };
            if lo < hi {
                let finite_part = DensityPiece {
                    lo,
                    hi,
                    ..piece.clone()
                };
                total += piece_integral(&finite_part, &kern, &cfg)?;
            }
            let tail = |start: f64| -> Result<f64> {
                let p = piece.clone();
                let out = tail_doubling(move |n: &QuadNode| p.eval(n.x), start, 1e-6, 48)?;
                match out {
                    TailOutcome::Converged(v) => Ok(v),
                    // still-contracting increments get the benefit of the
                    // doubt (e.g. 1/(x log²x) converges too slowly to certify)
                    TailOutcome::NotConverged {
                        partial,
                        shrinking: true,
                    } => Ok(partial),
                    TailOutcome::NotConverged {
                        shrinking: false, ..
                    } => Err(Error::InvalidParameter(format!(
                        "density `{}` has non-integrable tail mass",
                        piece.label
                    ))),
                }
            };
            if piece.hi.is_infinite() {
                total += tail(piece.lo.max(1.0))?;
            }
            if piece.lo.is_infinite() {
                total += tail(piece.hi.min(-1.0))?;
            }
        }
        Ok(total)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[DensityPiece] {
        &self.pieces
    }

    pub fn square_mass(&self) -> f64 {
        self.square_mass
    }

    /// True when the measure is pure density form (usable for k-based tests).
    pub fn is_density_form(&self) -> bool {
        self.atoms.is_empty() && !self.pieces.is_empty()
    }

    /// Density value at x, if the measure has a density component there.
    pub fn density_at(&self, x: f64) -> f64 {
        self.pieces.iter().map(|p| p.eval(x)).sum()
    }

    /// k(x) = |x|·ℓ(x), the monotone-test representative of the density.
    pub fn k_at(&self, x: f64) -> f64 {
        x.abs() * self.density_at(x)
    }

    pub fn plus(&self, other: &LevyMeasure) -> LevyMeasure {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut pieces = self.pieces.clone();
        pieces.extend_from_slice(&other.pieces);
        LevyMeasure {
            atoms,
            pieces,
            square_mass: self.square_mass + other.square_mass,
        }
    }

    pub fn dilated(&self, c: f64) -> LevyMeasure {
        assert!(c != 0.0);
        let atoms = self.atoms.iter().map(|&(x, m)| (c * x, m)).collect();
        let pieces = self.pieces.iter().map(|p| p.dilated(c)).collect();
        // dilation preserves validity; recompute the cache directly
        let mut nu = LevyMeasure {
            atoms,
            pieces,
            square_mass: 0.0,
        };
        nu.square_mass = nu.compute_square_mass().unwrap_or(f64::NAN);
        nu
    }

    /// Measure scaled by w ≥ 0 (⊞-convolution power).
    pub fn scaled(&self, w: f64) -> LevyMeasure {
        assert!(w >= 0.0);
        if w == 0.0 {
            return LevyMeasure::empty();
        }
        let atoms = self.atoms.iter().map(|&(x, m)| (x, w * m)).collect();
        let pieces = self.pieces.iter().map(|p| p.scaled(w)).collect();
        LevyMeasure {
            atoms,
            pieces,
            square_mass: w * self.square_mass,
        }
    }

    /// ∫ K dν for a kernel in zero-factored form. Splits at ±1 (compensator
    /// boundary), piece knots, and handles infinite tails by inversion.
    pub(crate) fn integrate<V: QuadOutput>(&self, kern: &ZeroFactored<V>) -> Result<V> {
        let cfg = quad_cfg();
        let mut total = V::zero();
        for &(x, m) in &self.atoms {
            total = total.add((kern.plain)(x).scale(m));
        }
        for piece in &self.pieces {
            total = total.add(piece_integral(piece, kern, &cfg)?);
        }
        Ok(total)
    }

    /// Log-moment condition ∫_{|x|>1} log(1+|x|) ν(dx) < ∞.
    ///
    /// Atoms and compactly supported pieces pass outright; infinite tails are
    /// integrated with interval doubling until the increments either contract
    /// below tolerance or visibly fail to.
    pub fn log_moment(&self) -> LogMomentVerdict {
        for piece in &self.pieces {
            if piece.hi.is_infinite() {
                let lo = piece.lo.max(1.0);
                let p = piece.clone();
                match tail_doubling(
                    move |n: &QuadNode| (1.0 + n.x).ln() * p.eval(n.x),
                    lo,
                    1e-6,
                    48,
                ) {
                    Ok(TailOutcome::Converged(_)) => {}
                    Ok(TailOutcome::NotConverged { shrinking, .. }) => {
                        return LogMomentVerdict::Infinite {
                            low_confidence: shrinking,
                        };
                    }
                    Err(_) => {
                        return LogMomentVerdict::Infinite {
                            low_confidence: true,
                        }
                    }
                }
            }
            if piece.lo.is_infinite() {
                let hi = piece.hi.min(-1.0);
                let p = piece.clone();
                match tail_doubling(
                    move |n: &QuadNode| (1.0 + n.x.abs()).ln() * p.eval(n.x),
                    hi,
                    1e-6,
                    48,
                ) {
                    Ok(TailOutcome::Converged(_)) => {}
                    Ok(TailOutcome::NotConverged { shrinking, .. }) => {
                        return LogMomentVerdict::Infinite {
                            low_confidence: shrinking,
                        };
                    }
                    Err(_) => {
                        return LogMomentVerdict::Infinite {
                            low_confidence: true,
                        }
                    }
                }
            }
        }
        LogMomentVerdict::Finite
    }
}

/// Verdict of the log-moment condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogMomentVerdict {
    Finite,
    Infinite { low_confidence: bool },
}

impl LogMomentVerdict {
    pub fn is_finite(self) -> bool {
        matches!(self, LogMomentVerdict::Finite)
    }
}

pub fn log_moment_check(nu: &LevyMeasure) -> LogMomentVerdict {
    nu.log_moment()
}

/// Integrate one density piece against a factored kernel.
fn piece_integral<V: QuadOutput>(
    piece: &DensityPiece,
    kern: &ZeroFactored<V>,
    cfg: &QuadConfig,
) -> Result<V> {
    // Cell boundaries: piece ends, ±1, declared splits.
    let mut cuts: Vec<f64> = vec![piece.lo, piece.hi];
    for c in [-1.0, 1.0] {
        if c > piece.lo && c < piece.hi {
            cuts.push(c);
        }
    }
    for &s in piece.splits.iter().chain(&kern.splits) {
        if s > piece.lo && s < piece.hi {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let cfg_eff = QuadConfig {
        atol: cfg.atol.max(piece.noise_floor),
        rtol: cfg.rtol.max(piece.noise_floor),
        max_level: cfg.max_level,
    };
    let mut total = V::zero();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        total = total.add(cell_integral(piece, kern, a, b, &cfg_eff)?);
    }
    Ok(total)
}

fn cell_integral<V: QuadOutput>(
    piece: &DensityPiece,
    kern: &ZeroFactored<V>,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<V> {
    // Infinite tails: substitute x = 1/u so the tail becomes a finite cell.
    // u is kept above UMIN; mass beyond |x| = 1/UMIN is immaterial for any
    // finite Levy measure at the tolerances used here.
    const UMIN: f64 = 1e-60;
    if b.is_infinite() {
        let p = piece.clone();
        let f = |n: &QuadNode| {
            let x = 1.0 / n.x;
            let w = p.eval(x) / (n.x * n.x);
            if w.is_finite() {
                (kern.plain)(x).scale(w)
            } else {
                V::zero()
            }
        };
        return Ok(tanh_sinh(f, UMIN, 1.0 / a, cfg)?.value);
    }
    if a.is_infinite() {
        let p = piece.clone();
        let f = |n: &QuadNode| {
            let x = 1.0 / n.x;
            let w = p.eval(x) / (n.x * n.x);
            if w.is_finite() {
                (kern.plain)(x).scale(w)
            } else {
                V::zero()
            }
        };
        return Ok(tanh_sinh(f, 1.0 / b, -UMIN, cfg)?.value);
    }

    let zero_at_lo = piece.lo == 0.0 && a == 0.0;
    let zero_at_hi = piece.hi == 0.0 && b == 0.0;
    let (plo, phi) = (piece.pow_lo, piece.pow_hi);
    let rest = piece.rest.clone();
    let (piece_lo, piece_hi) = (piece.lo, piece.hi);

    let f = |n: &QuadNode| -> V {
        let d_lo = if a == piece_lo {
            n.d_lo
        } else {
            n.x - piece_lo
        };
        let d_hi = if b == piece_hi {
            n.d_hi
        } else {
            piece_hi - n.x
        };
        if zero_at_lo {
            // x ≡ d_lo on this side of zero
            let x = d_lo;
            let red = (kern.reduced)(x);
            if red.norm() == 0.0 {
                // kernels that vanish near 0 must not touch the (possibly
                // overflowing) factored weight
                return V::zero();
            }
            let weight = d_lo.powf(plo + kern.order) * d_hi.powf(phi) * rest(x, d_lo, d_hi);
            red.scale(weight)
        } else if zero_at_hi {
            let x = -d_hi;
            let red = (kern.reduced)(x);
            if red.norm() == 0.0 {
                return V::zero();
            }
            let weight = d_hi.powf(phi + kern.order) * d_lo.powf(plo) * rest(x, d_lo, d_hi);
            red.scale(weight)
        } else {
            let dens = d_lo.powf(plo) * d_hi.powf(phi) * rest(n.x, d_lo, d_hi);
            (kern.plain)(n.x).scale(dens)
        }
    };
    Ok(tanh_sinh(f, a, b, cfg)?.value)
}

// ---------------------------------------------------------------------------
// Free characteristic triplet
// ---------------------------------------------------------------------------

/// Free characteristic triplet (a, ν, η) of a ⊞-infinitely divisible law.
#[derive(Clone, Debug)]
pub struct CharTriplet {
    pub a: f64,
    pub nu: LevyMeasure,
    pub eta: f64,
}

impl CharTriplet {
    pub fn new(a: f64, nu: LevyMeasure, eta: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "triplet needs finite a ≥ 0 and finite η, got a={a}, η={eta}"
            )));
        }
        Ok(CharTriplet { a, nu, eta })
    }

    /// Pure point mass δ_c has triplet (0, 0, c).
    pub fn point_mass(c: f64) -> Self {
        CharTriplet {
            a: 0.0,
            nu: LevyMeasure::empty(),
            eta: c,
        }
    }

    pub fn as_point_mass(&self) -> Option<f64> {
        (self.a == 0.0 && self.nu.is_zero()).then_some(self.eta)
    }

    /// C_μ(z) with first and second z-derivatives, by quadrature over ν.
    ///
    /// Valid for any non-real z (and real z with 1/z off the support); the
    /// integral defines the Schwarz reflection automatically on ℂ⁺.
    pub fn cumulant_jet(&self, z: C64) -> Result<Jet2> {
        let zj = Jet2::var(z);
        let mut out = zj * self.eta + zj * zj * self.a;
        if !self.nu.is_zero() {
            let kern = cumulant_kernel(z);
            out = out + self.nu.integrate(&kern)?;
        }
        Ok(out)
    }

    /// Background-driving cumulant C_{L(Z₁)}(z) by the triplet formula
    ///
    /// ```text
    /// C_{L(Z₁)}(z) = η z + 2a z² + z ∫ ( x/(1-zx)² - x·1_{[-1,1]}(x) ) ν(dx).
    /// ```
    pub fn bdlp_cumulant_jet(&self, z: C64) -> Result<Jet2> {
        let zj = Jet2::var(z);
        let mut out = zj * self.eta + zj * zj * (2.0 * self.a);
        if !self.nu.is_zero() {
            let kern = bdlp_kernel(z);
            let integral = self.nu.integrate(&kern)?;
            out = out + zj * integral;
        }
        Ok(out)
    }

    /// Triplet of D_c μ: (c²a, ν∘(·/c), cη + c∫x(1_{[-1,1]}(cx) - 1_{[-1,1]}(x))ν(dx)).
    pub fn dilated(&self, c: f64) -> Result<CharTriplet> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be finite nonzero, got {c}"
            )));
        }
        let corr = if self.nu.is_zero() {
            0.0
        } else {
            let kern: ZeroFactored<f64> = ZeroFactored {
                order: 1.0,
                // both indicators are 1 near zero, so the kernel vanishes
                reduced: Box::new(|_x| 0.0),
                plain: Box::new(move |x| {
                    let ind = |t: f64| if t.abs() <= 1.0 { 1.0 } else { 0.0 };
                    x * (ind(c * x) - ind(x))
                }),
                splits: vec![-1.0 / c.abs(), 1.0 / c.abs()],
            };
            self.nu.integrate(&kern)?
        };
        Ok(CharTriplet {
            a: c * c * self.a,
            nu: self.nu.dilated(c),
            eta: c * self.eta + c * corr,
        })
    }

    /// Component-wise sum: the triplet of μ₁ ⊞ μ₂.
    pub fn plus(&self, other: &CharTriplet) -> CharTriplet {
        CharTriplet {
            a: self.a + other.a,
            nu: self.nu.plus(&other.nu),
            eta: self.eta + other.eta,
        }
    }

    /// ⊞-convolution power: triplet of the law with cumulant w·C_μ.
    pub fn scaled(&self, w: f64) -> CharTriplet {
        assert!(w >= 0.0);
        CharTriplet {
            a: w * self.a,
            nu: self.nu.scaled(w),
            eta: w * self.eta,
        }
    }
}

/// Real location of the kernel pole 1/(1-xz): quadrature cells split here so
/// the near-singularity (for z close to the real axis) sits at a cell
/// endpoint, where the double-exponential rule clusters its nodes.
fn kernel_pole_split(z: C64) -> Vec<f64> {
    if z.norm() == 0.0 {
        return Vec::new();
    }
    let pole = (1.0 / z).re;
    if pole.is_finite() {
        vec![pole]
    } else {
        Vec::new()
    }
}

/// Kernel of the free Lévy–Khintchine integral, factored at zero:
/// 1/(1-xz) - 1 - xz = x²·z²/(1-xz) inside [-1,1].
fn cumulant_kernel(z: C64) -> ZeroFactored<Jet2> {
    let reduced = move |x: f64| {
        let zj = Jet2::var(z);
        let one = Jet2::real(1.0);
        zj * zj / (one - zj * x)
    };
    let plain = move |x: f64| {
        let zj = Jet2::var(z);
        let one = Jet2::real(1.0);
        if x.abs() <= 1.0 {
            zj * zj * (x * x) / (one - zj * x)
        } else {
            zj * x / (one - zj * x)
        }
    };
    ZeroFactored {
        order: 2.0,
        reduced: Box::new(reduced),
        plain: Box::new(plain),
        splits: kernel_pole_split(z),
    }
}

/// Kernel of the BDLP triplet formula, factored at zero:
/// x/(1-zx)² - x = x²·z(2-zx)/(1-zx)² inside [-1,1].
fn bdlp_kernel(z: C64) -> ZeroFactored<Jet2> {
    let reduced = move |x: f64| {
        let zj = Jet2::var(z);
        let one = Jet2::real(1.0);
        let den = one - zj * x;
        zj * (Jet2::real(2.0) - zj * x) / (den * den)
    };
    let plain = move |x: f64| {
        let zj = Jet2::var(z);
        let one = Jet2::real(1.0);
        let den = one - zj * x;
        if x.abs() <= 1.0 {
            zj * (Jet2::real(2.0) - zj * x) * (x * x) / (den * den)
        } else {
            (Jet2::real(1.0) / (den * den)) * x
        }
    };
    ZeroFactored {
        order: 2.0,
        reduced: Box::new(reduced),
        plain: Box::new(plain),
        splits: kernel_pole_split(z),
    }
}

// ---------------------------------------------------------------------------
// Free generating pair
// ---------------------------------------------------------------------------

/// A finite measure on ℝ (atoms at 0 allowed), the σ of a generating pair.
#[derive(Clone, Debug, Default)]
pub struct FiniteMeasure {
    pub atoms: Vec<(f64, f64)>,
    pub pieces: Vec<DensityPiece>,
    total_mass: f64,
}

impl FiniteMeasure {
    pub fn new(atoms: Vec<(f64, f64)>, pieces: Vec<DensityPiece>) -> Result<Self> {
        for &(x, m) in &atoms {
            if !(m > 0.0) || !m.is_finite() || !x.is_finite() {
                return Err(Error::InvalidParameter(format!("bad atom ({x}, {m})")));
            }
        }
        let mut sigma = FiniteMeasure {
            atoms,
            pieces,
            total_mass: 0.0,
        };
        sigma.total_mass = sigma.integrate_plain(&|_x| 1.0)?;
        if !sigma.total_mass.is_finite() {
            return Err(Error::InvalidParameter("sigma has infinite mass".into()));
        }
        Ok(sigma)
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn mass_at_zero(&self) -> f64 {
        self.atoms
            .iter()
            .filter(|(x, _)| *x == 0.0)
            .map(|(_, m)| m)
            .sum()
    }

    /// ∫ g dσ for a kernel bounded on the support.
    pub fn integrate_plain<V: QuadOutput>(&self, g: &dyn Fn(f64) -> V) -> Result<V> {
        let cfg = quad_cfg();
        let mut total = V::zero();
        for &(x, m) in &self.atoms {
            total = total.add(g(x).scale(m));
        }
        for piece in &self.pieces {
            let p = piece.clone();
            if piece.hi.is_infinite() || piece.lo.is_infinite() {
                const UMIN: f64 = 1e-60;
                let (a, b) = if piece.hi.is_infinite() {
                    (UMIN, 1.0 / piece.lo.max(1.0))
                } else {
                    (1.0 / piece.hi.min(-1.0), -UMIN)
                };
                let f = |n: &QuadNode| {
                    let x = 1.0 / n.x;
                    let w = p.eval(x) / (n.x * n.x);
                    if w.is_finite() {
                        g(x).scale(w)
                    } else {
                        V::zero()
                    }
                };
                total = total.add(tanh_sinh(f, a, b, &cfg)?.value);
                // finite remainder of a tail piece
                let (fa, fb) = if piece.hi.is_infinite() {
                    (piece.lo, piece.lo.max(1.0))
                } else {
                    (piece.hi.min(-1.0), piece.hi)
                };
                if fa < fb {
                    let p2 = piece.clone();
                    let f2 = |n: &QuadNode| g(n.x).scale(p2.eval(n.x));
                    total = total.add(tanh_sinh(f2, fa, fb, &cfg)?.value);
                }
            } else {
                let f = |n: &QuadNode| g(n.x).scale(p.eval(n.x));
                total = total.add(tanh_sinh(f, piece.lo, piece.hi, &cfg)?.value);
            }
        }
        Ok(total)
    }
}

/// Free generating pair (γ, σ).
#[derive(Clone, Debug)]
pub struct GeneratingPair {
    pub gamma: f64,
    pub sigma: FiniteMeasure,
}

impl GeneratingPair {
    /// φ_μ(u) = γ + ∫ (1+xu)/(u-x) σ(dx), u off the real line.
    pub fn phi(&self, u: C64) -> Result<C64> {
        let g = move |x: f64| (1.0 + x * u) / (u - x);
        let integral: C64 = self.sigma.integrate_plain(&g)?;
        Ok(self.gamma + integral)
    }
}

/// The correction integral ∫ x(1_{[-1,1]}(x) - 1/(1+x²)) ν(dx) linking η and γ.
fn eta_gamma_correction(nu: &LevyMeasure) -> Result<f64> {
    if nu.is_zero() {
        return Ok(0.0);
    }
    let kern: ZeroFactored<f64> = ZeroFactored {
        order: 3.0,
        reduced: Box::new(|x| x.signum() / (1.0 + x * x)),
        plain: Box::new(|x| {
            if x.abs() <= 1.0 {
                x * x * x / (1.0 + x * x)
            } else {
                -x / (1.0 + x * x)
            }
        }),
        splits: Vec::new(),
    };
    nu.integrate(&kern)
}

/// (a, ν, η) → (γ, σ) with σ = a·δ₀ + x²/(1+x²)·ν.
pub fn pair_from_triplet(t: &CharTriplet) -> Result<GeneratingPair> {
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    if t.a > 0.0 {
        atoms.push((0.0, t.a));
    }
    for &(x, m) in t.nu.atoms() {
        atoms.push((x, m * x * x / (1.0 + x * x)));
    }
    let pieces = t.nu.pieces().iter().map(|p| p.to_sigma()).collect();
    let sigma = FiniteMeasure::new(atoms, pieces)?;
    let gamma = t.eta - eta_gamma_correction(&t.nu)?;
    Ok(GeneratingPair { gamma, sigma })
}

/// (γ, σ) → (a, ν, η), the inverse of [`pair_from_triplet`].
pub fn triplet_from_pair(p: &GeneratingPair) -> Result<CharTriplet> {
    let a = p.sigma.mass_at_zero();
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    for &(x, m) in &p.sigma.atoms {
        if x != 0.0 {
            atoms.push((x, m * (1.0 + x * x) / (x * x)));
        }
    }
    let pieces: Vec<DensityPiece> = p.sigma.pieces.iter().map(|q| q.to_nu()).collect();
    let nu = LevyMeasure::new(atoms, pieces)?;
    let eta = p.gamma + eta_gamma_correction(&nu)?;
    CharTriplet::new(a, nu, eta)
}

// ---------------------------------------------------------------------------
// Classical Lévy–Khintchine with the same triplet
// ---------------------------------------------------------------------------

/// log μ̂(θ) = iηθ - aθ²/2 + ∫ (e^{iθx} - 1 - iθx·1_{[-1,1]}(x)) ν(dx).
pub fn eval_classical_cumulant(t: &CharTriplet, theta: f64) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let mut out = i * t.eta * theta - 0.5 * t.a * theta * theta;
    if !t.nu.is_zero() {
        let kern = classical_kernel(theta);
        out += t.nu.integrate(&kern)?;
    }
    Ok(out)
}

/// (e^{it} - 1 - it)/t², stable for small |t|.
fn expi_reduced(tt: f64) -> C64 {
    if tt == 0.0 {
        return C64::new(-0.5, 0.0);
    }
    let re = -2.0 * (0.5 * tt).sin().powi(2) / (tt * tt);
    let im = if tt.abs() < 0.1 {
        // (sin t - t)/t² = -t/6 · (1 - t²/20 (1 - t²/42))
        let t2 = tt * tt;
        -tt / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0))
    } else {
        (tt.sin() - tt) / (tt * tt)
    };
    C64::new(re, im)
}

fn classical_kernel(theta: f64) -> ZeroFactored<C64> {
    let reduced = move |x: f64| expi_reduced(theta * x) * (theta * theta);
    let plain = move |x: f64| {
        let t = theta * x;
        if x.abs() <= 1.0 {
            expi_reduced(t) * (t * t)
        } else {
            C64::new(t.cos() - 1.0, t.sin())
        }
    };
    ZeroFactored {
        order: 2.0,
        reduced: Box::new(reduced),
        plain: Box::new(plain),
        splits: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

/// JSON form of a Lévy measure component.
///
/// - `{"kind":"density","name":"free_gamma","params":{"t":1,"c":1}}` — a
///   named catalog density;
/// - `{"kind":"density","support":[lo,hi],"coef":c,"pow_x":α,"pow_lo":β,
///   "pow_hi":γ,"poly":[c0,c1,…]}` — inline
///   c·|x|^α·(x-lo)^β·(hi-x)^γ·Σ cₖxᵏ on (lo, hi);
/// - `{"kind":"atoms","atoms":[[x,m],…]}`;
/// - `{"kind":"grid","x":[…],"f":[…]}` — tabulated, linearly interpolated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevyMeasureJson {
    Density {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        params: BTreeMap<String, f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coef: Option<f64>,
        #[serde(default)]
        pow_x: f64,
        #[serde(default)]
        pow_lo: f64,
        #[serde(default)]
        pow_hi: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        poly: Vec<f64>,
    },
    Atoms {
        atoms: Vec<(f64, f64)>,
    },
    Grid {
        x: Vec<f64>,
        f: Vec<f64>,
    },
}

/// One measure or a sum of components.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NuJson {
    One(LevyMeasureJson),
    Many(Vec<LevyMeasureJson>),
}

/// JSON form of a free characteristic triplet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripletJson {
    pub a: f64,
    pub eta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<NuJson>,
}

fn grid_pieces(xs: &[f64], fs: &[f64]) -> Result<Vec<DensityPiece>> {
    if xs.len() != fs.len() || xs.len() < 2 {
        return Err(Error::BadInput(
            "grid needs matching x/f arrays of length ≥ 2".into(),
        ));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadInput(
            "grid x values must be strictly increasing".into(),
        ));
    }
    if fs.iter().any(|f| *f < 0.0 || !f.is_finite()) {
        return Err(Error::BadInput(
            "grid density values must be finite and ≥ 0".into(),
        ));
    }
    let make = |xs: Vec<f64>, fs: Vec<f64>| -> Result<DensityPiece> {
        let (lo, hi) = (xs[0], *xs.last().unwrap());
        let splits = xs[1..xs.len() - 1].to_vec();
        let interp = move |x: f64| -> f64 {
            match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                Ok(i) => fs[i],
                Err(0) => fs[0],
                Err(i) if i >= xs.len() => *fs.last().unwrap(),
                Err(i) => {
                    let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                    fs[i - 1] * (1.0 - w) + fs[i] * w
                }
            }
        };
        DensityPiece::new(lo, hi, 0.0, 0.0, "grid", Arc::new(move |x, _, _| interp(x)))
            .map(|p| p.with_splits(splits))
    };
    let (lo, hi) = (xs[0], *xs.last().unwrap());
    if lo < 0.0 && hi > 0.0 {
        // split at 0 so pieces never straddle it
        let mut left_x = vec![];
        let mut left_f = vec![];
        let mut right_x = vec![];
        let mut right_f = vec![];
        for (x, f) in xs.iter().zip(fs) {
            if *x < 0.0 {
                left_x.push(*x);
                left_f.push(*f);
            } else if *x > 0.0 {
                right_x.push(*x);
                right_f.push(*f);
            }
        }
        // interpolated boundary value at 0 from the original grid
        let i = xs.iter().position(|x| *x > 0.0).unwrap();
        let w = (0.0 - xs[i - 1]) / (xs[i] - xs[i - 1]);
        let f0 = fs[i - 1] * (1.0 - w) + fs[i] * w;
        left_x.push(0.0);
        left_f.push(f0);
        right_x.insert(0, 0.0);
        right_f.insert(0, f0);
        Ok(vec![make(left_x, left_f)?, make(right_x, right_f)?])
    } else {
        Ok(vec![make(xs.to_vec(), fs.to_vec())?])
    }
}

fn inline_density_pieces(
    support: [f64; 2],
    coef: f64,
    pow_x: f64,
    pow_lo: f64,
    pow_hi: f64,
    poly: Vec<f64>,
) -> Result<Vec<DensityPiece>> {
    let [lo, hi] = support;
    if !(lo < hi) {
        return Err(Error::BadInput(format!("bad support [{lo}, {hi}]")));
    }
    let poly = if poly.is_empty() { vec![1.0] } else { poly };
    let poly_captured = poly.clone();
    let eval_poly: Arc<dyn Fn(f64) -> f64 + Send + Sync> =
        Arc::new(move |x: f64| poly_captured.iter().rev().fold(0.0, |acc, c| acc * x + c));
    let make = |a: f64, b: f64| -> Result<DensityPiece> {
        // fold |x|^pow_x into the endpoint factor when an endpoint is 0
        let (mut pl, mut ph) = (pow_lo, pow_hi);
        let x_factor_folded = a == 0.0 || b == 0.0;
        if a == 0.0 {
            pl = pow_lo + pow_x;
        }
        if b == 0.0 {
            ph = pow_hi + pow_x;
        }
        let ep = eval_poly.clone();
        DensityPiece::new(
            a,
            b,
            pl,
            ph,
            format!("inline[{coef}·|x|^{pow_x}·(x-{a})^{pow_lo}·({b}-x)^{pow_hi}·P]"),
            Arc::new(move |x, _dl, _dh| {
                let base = coef * ep(x);
                if x_factor_folded {
                    base
                } else {
                    base * x.abs().powf(pow_x)
                }
            }),
        )
    };
    let original = LevyMeasureJson::Density {
        name: None,
        params: BTreeMap::new(),
        support: Some(support),
        coef: Some(coef),
        pow_x,
        pow_lo,
        pow_hi,
        poly: poly.clone(),
    };
    if lo < 0.0 && hi > 0.0 {
        // the original endpoint factors stay anchored at lo/hi, so the halves
        // carry them as plain (bounded) terms
        let mk_half = |a: f64, b: f64| -> Result<DensityPiece> {
            let ep = eval_poly.clone();
            let pz = pow_x;
            let (pl, ph) = if a == 0.0 { (pz, 0.0) } else { (0.0, pz) };
            DensityPiece::new(
                a,
                b,
                pl,
                ph,
                "inline-half",
                Arc::new(move |x, _dl, _dh| {
                    coef * ep(x) * (x - lo).powf(pow_lo) * (hi - x).powf(pow_hi)
                }),
            )
        };
        Ok(vec![mk_half(lo, 0.0)?, mk_half(0.0, hi)?])
    } else {
        Ok(vec![make(lo, hi)?.with_provenance(original)])
    }
}

impl LevyMeasureJson {
    fn build(&self) -> Result<(Vec<(f64, f64)>, Vec<DensityPiece>)> {
        match self {
            LevyMeasureJson::Atoms { atoms } => Ok((atoms.clone(), Vec::new())),
            LevyMeasureJson::Grid { x, f } => Ok((Vec::new(), grid_pieces(x, f)?)),
            LevyMeasureJson::Density {
                name,
                params,
                support,
                coef,
                pow_x,
                pow_lo,
                pow_hi,
                poly,
            } => {
                if let Some(name) = name {
                    let pieces = crate::catalog::named_levy_density(name, params)?;
                    Ok((Vec::new(), pieces))
                } else if let (Some(support), Some(coef)) = (support, coef) {
                    Ok((
                        Vec::new(),
                        inline_density_pieces(
                            *support,
                            *coef,
                            *pow_x,
                            *pow_lo,
                            *pow_hi,
                            poly.clone(),
                        )?,
                    ))
                } else {
                    Err(Error::BadInput(
                        "density needs either a `name` or `support`+`coef`".into(),
                    ))
                }
            }
        }
    }
}

impl TryFrom<&TripletJson> for CharTriplet {
    type Error = Error;

    fn try_from(j: &TripletJson) -> Result<CharTriplet> {
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        let components: Vec<&LevyMeasureJson> = match &j.nu {
            None => vec![],
            Some(NuJson::One(m)) => vec![m],
            Some(NuJson::Many(ms)) => ms.iter().collect(),
        };
        for comp in components {
            let (mut a, mut p) = comp.build()?;
            atoms.append(&mut a);
            pieces.append(&mut p);
        }
        CharTriplet::new(j.a, LevyMeasure::new(atoms, pieces)?, j.eta)
    }
}

pub fn triplet_from_json(json: &str) -> Result<CharTriplet> {
    let dto: TripletJson =
        serde_json::from_str(json).map_err(|e| Error::BadInput(format!("triplet JSON: {e}")))?;
    CharTriplet::try_from(&dto)
}

/// Serialize a triplet back to the JSON schema. Pieces that still carry
/// their construction JSON round-trip exactly; transformed pieces are
/// exported as tabulated grids on `grid_points` interior points.
pub fn triplet_to_json(t: &CharTriplet, grid_points: usize) -> TripletJson {
    let mut components = Vec::new();
    if !t.nu.atoms().is_empty() {
        components.push(LevyMeasureJson::Atoms {
            atoms: t.nu.atoms().to_vec(),
        });
    }
    for piece in t.nu.pieces() {
        if let Some(json) = piece.provenance() {
            components.push(json.clone());
            continue;
        }
        let (lo, hi) = (piece.lo(), piece.hi());
        let (lo, hi) = if hi.is_infinite() || lo.is_infinite() {
            (lo.max(-1e6), hi.min(1e6))
        } else {
            (lo, hi)
        };
        let inset = (hi - lo) * 1e-6;
        let n = grid_points.max(8);
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + inset + (hi - lo - 2.0 * inset) * i as f64 / (n - 1) as f64)
            .collect();
        let fs: Vec<f64> = xs.iter().map(|&x| piece.eval(x)).collect();
        components.push(LevyMeasureJson::Grid { x: xs, f: fs });
    }
    let nu = match components.len() {
        0 => None,
        1 => Some(NuJson::One(components.pop().unwrap())),
        _ => Some(NuJson::Many(components)),
    };
    TripletJson {
        a: t.a,
        eta: t.eta,
        nu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(x: f64, m: f64) -> LevyMeasure {
        LevyMeasure::from_atoms(vec![(x, m)]).unwrap()
    }

    #[test]
    fn rejects_atom_at_zero() {
        assert!(LevyMeasure::from_atoms(vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn pair_from_triplet_semicircle() {
        // (a=1, ν=0, η=0) → (γ=0, σ=δ₀)
        let t = CharTriplet::new(1.0, LevyMeasure::empty(), 0.0).unwrap();
        let p = pair_from_triplet(&t).unwrap();
        assert_eq!(p.gamma, 0.0);
        assert_eq!(p.sigma.atoms, vec![(0.0, 1.0)]);
        assert!((p.sigma.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_from_triplet_free_poisson() {
        // (a=0, ν=δ₁, η=0) → (γ=-1/2, σ = atom at 1 with mass 1/2)
        let t = CharTriplet::new(0.0, delta(1.0, 1.0), 0.0).unwrap();
        let p = pair_from_triplet(&t).unwrap();
        assert!((p.gamma + 0.5).abs() < 1e-14, "gamma = {}", p.gamma);
        assert_eq!(p.sigma.atoms.len(), 1);
        assert!((p.sigma.atoms[0].0 - 1.0).abs() < 1e-15);
        assert!((p.sigma.atoms[0].1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pair_from_triplet_atom_at_two_sign() {
        // (a=0, ν=δ₂, η=0): γ = -∫x(1_{[-1,1]} - 1/(1+x²))dν = -2(0 - 1/5) = +2/5,
        // confirmed below by matching φ through both representations.
        let t = CharTriplet::new(0.0, delta(2.0, 1.0), 0.0).unwrap();
        let p = pair_from_triplet(&t).unwrap();
        assert!((p.gamma - 0.4).abs() < 1e-14, "gamma = {}", p.gamma);
        assert!((p.sigma.atoms[0].1 - 0.8).abs() < 1e-14);

        // φ from the triplet: u·C(1/u) with C(z) = 1/(1-2z) - 1
        for u in [C64::new(0.3, 1.2), C64::new(-1.0, 0.5)] {
            let z = 1.0 / u;
            let phi_t = u * (1.0 / (1.0 - 2.0 * z) - 1.0);
            let phi_p = p.phi(u).unwrap();
            assert!((phi_t - phi_p).norm() < 1e-10, "{phi_t} vs {phi_p}");
        }
    }

    #[test]
    fn triplet_pair_round_trip() {
        let t = CharTriplet::new(0.7, delta(2.0, 0.3).plus(&delta(-0.4, 1.1)), -0.2).unwrap();
        let p = pair_from_triplet(&t).unwrap();
        let t2 = triplet_from_pair(&p).unwrap();
        assert!((t.a - t2.a).abs() < 1e-12);
        assert!((t.eta - t2.eta).abs() < 1e-9);
        for (orig, back) in t.nu.atoms().iter().zip(t2.nu.atoms()) {
            assert!((orig.0 - back.0).abs() < 1e-12);
            assert!((orig.1 - back.1).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_drift_pair() {
        // (γ=c, σ=0) → (0, 0, c)
        let p = GeneratingPair {
            gamma: 3.0,
            sigma: FiniteMeasure::default(),
        };
        let t = triplet_from_pair(&p).unwrap();
        assert_eq!(t.as_point_mass(), Some(3.0));
    }

    #[test]
    fn log_moment_compact_is_finite() {
        let nu = delta(1.0, 1.0);
        assert!(log_moment_check(&nu).is_finite());
    }

    #[test]
    fn log_moment_inverse_square_tail_is_finite() {
        // density x^{-2} on (1, ∞)
        let piece = DensityPiece::new(
            1.0,
            f64::INFINITY,
            0.0,
            0.0,
            "x^-2 tail",
            Arc::new(|x, _, _| x.powi(-2)),
        )
        .unwrap();
        let nu = LevyMeasure::from_pieces(vec![piece]).unwrap();
        assert!(log_moment_check(&nu).is_finite());
    }

    #[test]
    fn log_moment_log_tail_is_infinite() {
        // density 1/(x log²x) on (e, ∞): ∫ log(1+x)/(x log²x) diverges
        let piece = DensityPiece::new(
            std::f64::consts::E,
            f64::INFINITY,
            0.0,
            0.0,
            "1/(x log^2 x)",
            Arc::new(|x, _, _| 1.0 / (x * x.ln().powi(2))),
        )
        .unwrap();
        let nu = LevyMeasure::from_pieces(vec![piece]).unwrap();
        assert!(!log_moment_check(&nu).is_finite());
    }

    #[test]
    fn classical_cumulant_gaussian_part() {
        let t = CharTriplet::new(1.0, LevyMeasure::empty(), 0.0).unwrap();
        let v = eval_classical_cumulant(&t, 1.0).unwrap();
        assert!((v - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn classical_cumulant_drift() {
        let t = CharTriplet::point_mass(2.5);
        let theta = 0.7;
        let v = eval_classical_cumulant(&t, theta).unwrap();
        assert!((v - C64::new(0.0, 2.5 * theta)).norm() < 1e-15);
    }

    #[test]
    fn classical_cumulant_poisson() {
        // (0, δ₁, 1) at θ=π: iθ + (e^{iθ} - 1 - iθ) = e^{iπ} - 1 = -2
        let t = CharTriplet::new(0.0, delta(1.0, 1.0), 1.0).unwrap();
        let v = eval_classical_cumulant(&t, std::f64::consts::PI).unwrap();
        assert!((v - C64::new(-2.0, 0.0)).norm() < 1e-12, "got {v}");
    }

    #[test]
    fn dilation_eta_correction_for_atom() {
        // free-Poisson-style triplet (0, δ₁, η): dilation by 2 moves the atom
        // outside [-1,1], so η₂ = 2η + 2·1·(0-1)
        let eta = 0.6;
        let t = CharTriplet::new(0.0, delta(1.0, 1.0), eta).unwrap();
        let d = t.dilated(2.0).unwrap();
        assert!((d.eta - (2.0 * eta - 2.0)).abs() < 1e-14);
        assert_eq!(d.nu.atoms(), &[(2.0, 1.0)]);
        // and the cumulant matches C(2z)
        let z = C64::new(-0.21, -0.37);
        let lhs = d.cumulant_jet(z).unwrap().v;
        let rhs = t.cumulant_jet(2.0 * z).unwrap().v;
        assert!((lhs - rhs).norm() < 1e-11, "{lhs} vs {rhs}");
    }

    #[test]
    fn triplet_json_round_trip() {
        let json = r#"{"a":0.0,"eta":1.0,"nu":{"kind":"atoms","atoms":[[1.0,1.0]]}}"#;
        let t = triplet_from_json(json).unwrap();
        assert_eq!(t.a, 0.0);
        assert_eq!(t.eta, 1.0);
        assert_eq!(t.nu.atoms(), &[(1.0, 1.0)]);
    }

    #[test]
    fn inline_density_json() {
        // ℓ(x) = x^{-1/2} (1-x)^{1/2} on (0,1), a Beta-like shape
        let json = r#"{"a":0.0,"eta":0.0,"nu":{"kind":"density","support":[0.0,1.0],
            "coef":1.0,"pow_x":-0.5,"pow_hi":0.5}}"#;
        let t = triplet_from_json(json).unwrap();
        let v = t.nu.density_at(0.25);
        assert!((v - 0.25f64.powf(-0.5) * 0.75f64.sqrt()).abs() < 1e-12);
    }
}
