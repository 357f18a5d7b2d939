//! Numerical laboratory for the half-line Fourier-Laplace transform
//!
//! For a decaying function f on [0, ∞) the transform
//!
//! ```text
//! f̂(z) = ∫₀^∞ e^{-izt} f(t) dt,     Im z ≤ 0,
//! ```
//!
//! is analytic in the open lower half-plane and smooth up to the real axis.
//! This crate computes f̂ and its boundary derivatives for a catalog of
//! function families built from e^{-√(t+c)}, e^{-t^p} and t^ν e^{-σt},
//! estimates radii of convergence of the boundary Taylor series
//! (Cauchy–Hadamard on C(f,α,n) = (|f̂⁽ⁿ⁾(α)|/n!)^{1/n}), evaluates explicit
//! analytic continuations past the axis, and produces finite-budget witnesses
//! for the perturbation construction f ↦ f + (1/j)·φ_α that forces divergent
//! Taylor coefficients at a chosen boundary point.
//!
//! Boundary derivatives grow like (2n+1)! and worse, so every transform-side
//! quantity is carried in log-magnitude/phase form ([`LogComplex`]); quadrature
//! accumulates in scaled complex panels and never materialises raw magnitudes.
//!
//! Modules follow the pipeline:
//!
//! * [`logcx`] — log-domain complex arithmetic,
//! * [`gamma`] — log-gamma and log-factorial helpers,
//! * [`catalog`] — the function families and their exact derivatives,
//! * [`parse`] — the compact textual grammar for function specs,
//! * [`quadrature`] — double-exponential and adaptive rules, contour rotation,
//! * [`transform`] — f̂, boundary derivatives, integration-by-parts data,
//! * [`taylor`] — Taylor tables and radius estimation,
//! * [`seminorm`] — Schwartz-class seminorms and the Fréchet metric,
//! * [`continuation`] — continuations of χ̂₀, φ̂_α, ψ̂_p and Cauchy sampling,
//! * [`baire`] — perturbation witnesses and the factorial-gap inequality,
//! * [`verify`] — the constant-verification protocol and provenance ledger.

pub mod baire;
pub mod catalog;
pub mod continuation;
pub mod gamma;
pub mod logcx;
pub mod parse;
pub mod quadrature;
pub mod seminorm;
pub mod taylor;
pub mod transform;
pub mod verify;

pub use catalog::HalfLineFunction;
pub use logcx::LogComplex;
pub use quadrature::{ContourSpec, QuadratureResult};
pub use taylor::{RadiusEstimate, TaylorTable};

use num_complex::Complex64;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's domain (t < 0, Im z > 0, bad parameter).
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested derivative does not extend continuously to t = 0.
    #[error("not C^{k} at 0: {what}")]
    NotCk { k: usize, what: String },

    /// Quadrature node budget exhausted before reaching the tolerance.
    /// Carries the best estimate and its estimated relative error.
    #[error("quadrature budget exhausted (best rel. error {rel_error:.3e})")]
    BudgetExhausted {
        best: LogComplex,
        rel_error: f64,
        nodes_used: usize,
    },

    /// The integrand tail grows instead of decaying.
    #[error("divergent tail: integrand violates its decay envelope")]
    DivergentTail,

    /// A rotated contour fails the sector/decay precondition.
    #[error("invalid contour: {0}")]
    InvalidContour(String),

    /// Oscillatory cancellation ate the requested precision.
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    /// A continuation was evaluated too close to its excluded ray.
    #[error("point within {dist:.3e} of the excluded ray at alpha={alpha}")]
    CutProximity { alpha: f64, dist: f64 },

    /// Circle samples do not stabilise under node doubling.
    #[error("analyticity suspect: {0}")]
    AnalyticitySuspect(String),

    /// A Taylor-table fit range contains entries flagged for precision loss.
    #[error("fit range [{lo}, {hi}] contains flagged entries; choose a cleaner range")]
    FlaggedEntries { lo: usize, hi: usize },

    /// Function-spec or complex-literal parse failure.
    #[error("parse error: {0}")]
    Parse(String),

    /// A closed form was requested where the family admits none.
    #[error("no closed form: {0}")]
    NoClosedForm(String),

    /// The crate's internal oracle suite rejected a closed form.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Complex grid point helper used by tests and the CLI.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
