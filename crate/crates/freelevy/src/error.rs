//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong while evaluating transforms, building
/// measures, or running processes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument was handed to a transform outside its half-plane domain.
    #[error("argument {got} outside required domain {expected}")]
    Domain {
        expected: &'static str,
        got: Complex64,
    },

    /// A quadrature refinement stalled above the requested tolerance.
    #[error("quadrature stalled: last delta {last_delta:.3e} above tolerance {tol:.3e} after {levels} refinement levels")]
    QuadratureStalled {
        last_delta: f64,
        tol: f64,
        levels: u32,
    },

    /// The F-inverse solver did not converge.
    #[error("solver did not converge after {iterations} iterations; last iterate {last}, residual {residual:.3e}")]
    SolverDiverged {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    /// An operation requiring free selfdecomposability was handed a law
    /// that fails the test.
    #[error("distribution `{label}` is not freely selfdecomposable: {reason}")]
    NotSelfdecomposable { label: String, reason: String },

    /// The Levy measure fails the log-moment condition required for
    /// background-driving-process constructions.
    #[error("Levy measure of `{label}` has infinite log-moment")]
    InfiniteLogMoment { label: String },

    /// Operation needs a representation the spec does not carry.
    #[error("unsupported representation for {op}: {detail}")]
    UnsupportedRepresentation { op: &'static str, detail: String },

    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Too many per-point failures while tabulating a density.
    #[error(
        "density grid aborted: {failed} of {total} points failed (> {max_fraction:.0}% allowed)"
    )]
    TooManyGaps {
        failed: usize,
        total: usize,
        max_fraction: f64,
    },

    /// Dyadic refinement of a Riemann-sum law did not reach the tolerance.
    #[error("Riemann-sum refinement did not converge within depth {max_depth}; deltas {trace:?}")]
    RefinementDepthExceeded { max_depth: u32, trace: Vec<f64> },

    /// An improper integral failed its tail test.
    #[error("integral over [{lo}, inf) diverges or fails the tail test: {detail}")]
    DivergentIntegral { lo: f64, detail: String },

    /// A comparison grid does not cover the sample it is compared against.
    #[error("grid does not cover the sample: {detail}")]
    InsufficientCoverage { detail: String },

    /// Numerical differentiation of a Levy density failed.
    #[error("numerical differentiation failed at x = {x}: {detail}")]
    DifferentiationFailed { x: f64, detail: String },

    /// Malformed JSON input for a spec or measure.
    #[error("bad input: {0}")]
    BadInput(String),
}

impl Error {
    /// CLI exit code class: 1 = configuration, 2 = math/domain rejection,
    /// 3 = convergence failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadInput(_) => 1,
            Error::Domain { .. }
            | Error::NotSelfdecomposable { .. }
            | Error::InfiniteLogMoment { .. }
            | Error::UnsupportedRepresentation { .. }
            | Error::InvalidParameter(_)
            | Error::InsufficientCoverage { .. } => 2,
            Error::QuadratureStalled { .. }
            | Error::SolverDiverged { .. }
            | Error::TooManyGaps { .. }
            | Error::RefinementDepthExceeded { .. }
            | Error::DivergentIntegral { .. }
            | Error::DifferentiationFailed { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
