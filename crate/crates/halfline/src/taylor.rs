//! Boundary Taylor tables and radius-of-convergence estimation.
//!
//! A [`TaylorTable`] holds f̂⁽ⁿ⁾(α) for n = 0..=n_max together with the
//! Cauchy–Hadamard data C(f,α,n) = (|f̂⁽ⁿ⁾(α)|/n!)^{1/n}. The radius of the
//! boundary power series is 1/limsup C_n; a table is classified from a
//! finite window as regular (C_n flat, radius = 1/level), divergent (C_n
//! grows like n^β, no radius) or inconclusive.
//!
//! Finite n cannot certify a limsup. The classifier fits windowed maxima of
//! log C_n against two transient-aware models and reports thresholds, window
//! and residuals so a caller can audit the call:
//!
//! * divergent model  log C = b·log n + c + d/n + e·log n/n  (Stirling shape)
//! * regular model    log C = c + d/√n + e/n                 (flat + transient)
//!
//! The plain two-parameter slope (no transient terms) is kept in the result
//! as a diagnostic; its value is biased low on factorial-type data at small
//! n, which is why classification uses the corrected slope.

use crate::catalog::HalfLineFunction;
use crate::continuation::{cauchy_derivatives, phi_continuation, CutPlanePoint};
use crate::gamma::ln_factorial;
use crate::logcx::{LogComplex, LogSum};
use crate::transform::{atom_derivative, Route};
use crate::{Error, Result};
use num_complex::Complex64;

/// Provenance of one table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryMethod {
    ClosedForm,
    Quadrature,
}

impl EntryMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntryMethod::ClosedForm => "closed-form",
            EntryMethod::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TaylorEntry {
    pub n: usize,
    pub derivative: LogComplex,
    /// C(f,α,n) = exp((log|f̂⁽ⁿ⁾(α)| - log n!)/n); None at n = 0.
    pub c: Option<f64>,
    pub method: EntryMethod,
    /// Set when the value could not be computed to the requested tolerance
    /// (budget exhausted or circle samples unstable); the best estimate is
    /// kept rather than fabricated, and radius fits refuse flagged ranges.
    pub flagged: bool,
}

/// Boundary derivatives of f̂ at a real point α with Cauchy–Hadamard data.
#[derive(Debug, Clone)]
pub struct TaylorTable {
    pub function: HalfLineFunction,
    pub alpha: f64,
    pub entries: Vec<TaylorEntry>,
    pub n_max: usize,
}

/// Entry-method selection for [`taylor_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMethod {
    /// Closed forms where the family admits them, quadrature elsewhere.
    Auto,
    /// Closed forms only; error if any contribution lacks one.
    Closed,
    /// Force quadrature even where closed forms exist.
    Quadrature,
}

fn c_of(deriv: &LogComplex, n: usize) -> Option<f64> {
    if n == 0 {
        return None;
    }
    if deriv.is_zero() {
        return Some(0.0);
    }
    Some(((deriv.log_abs - ln_factorial(n as u64)) / n as f64).exp())
}

impl TaylorTable {
    /// Re-derive every C from its stored derivative; construction uses the
    /// same formula, so this can only fail if fields were mutated.
    pub fn check_invariants(&self) -> Result<()> {
        if self.entries.len() != self.n_max + 1 {
            return Err(Error::Verification("missing table entries".into()));
        }
        for e in &self.entries {
            let want = c_of(&e.derivative, e.n);
            let ok = match (want, e.c) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b || (a - b).abs() <= 1e-15 * a.abs(),
                _ => false,
            };
            if !ok {
                return Err(Error::Verification(format!(
                    "C at n={} is not exp((log|d| - log n!)/n)",
                    e.n
                )));
            }
        }
        Ok(())
    }

    /// K_M(f,α,n) = C(f,α,n)/n^M; K_0 is exactly the stored C.
    pub fn coefficient_k(&self, m: u32, n: usize) -> Result<f64> {
        if n < 1 || n > self.n_max {
            return Err(Error::Domain(format!(
                "coefficient_K needs 1 <= n <= {}, got {n}",
                self.n_max
            )));
        }
        let c = self.entries[n].c.expect("n >= 1 entries carry C");
        if m == 0 {
            return Ok(c);
        }
        Ok(c / (n as f64).powi(m as i32))
    }

    /// Build a table from Taylor coefficients aₙ = g⁽ⁿ⁾(σ)/n! (as produced by
    /// circle sampling); derivatives are aₙ·n! and unstable coefficients
    /// arrive flagged.
    pub fn from_taylor_coefficients(
        function: HalfLineFunction,
        alpha: f64,
        coeffs: &[LogComplex],
        stable: &[bool],
    ) -> Self {
        let n_max = coeffs.len().saturating_sub(1);
        let entries = coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| {
                let derivative = a.mul(&LogComplex::from_log_abs(ln_factorial(n as u64)));
                TaylorEntry {
                    n,
                    derivative,
                    c: c_of(&derivative, n),
                    method: EntryMethod::Quadrature,
                    flagged: !stable.get(n).copied().unwrap_or(false),
                }
            })
            .collect();
        Self {
            function,
            alpha,
            entries,
            n_max,
        }
    }
}

/// Assemble the boundary Taylor data of f̂ at α.
///
/// Modulation is reduced first: the table of e^{iαt}·g at α is the table of
/// g at 0, so each term is dispatched at z' = α - α_term. Entries that a
/// quadrature route could not certify are flagged, never fabricated.
pub fn taylor_table(
    f: &HalfLineFunction,
    alpha: f64,
    n_max: usize,
    method: TableMethod,
    rel_tol: f64,
) -> Result<TaylorTable> {
    if n_max < 1 {
        return Err(Error::Domain("taylor_table needs n_max >= 1".into()));
    }
    let z = Complex64::new(alpha, 0.0);
    let mut columns: Vec<(Complex64, Vec<(LogComplex, EntryMethod, bool)>)> = Vec::new();
    for (coeff, atom) in f.terms() {
        columns.push((coeff, atom_column(&atom, z, n_max, method, rel_tol)?));
    }
    let mut entries = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut sum = LogSum::new();
        let mut m = EntryMethod::ClosedForm;
        let mut flagged = false;
        for (coeff, col) in &columns {
            let (v, method_n, flag) = &col[n];
            sum.push(LogComplex::from_complex(*coeff).mul(v));
            if *method_n == EntryMethod::Quadrature {
                m = EntryMethod::Quadrature;
            }
            flagged |= flag;
        }
        let derivative = sum.value();
        entries.push(TaylorEntry {
            n,
            derivative,
            c: c_of(&derivative, n),
            method: m,
            flagged,
        });
    }
    Ok(TaylorTable {
        function: f.clone(),
        alpha,
        entries,
        n_max,
    })
}

/// All derivative orders 0..=n_max of a single atom at z.
fn atom_column(
    atom: &HalfLineFunction,
    z: Complex64,
    n_max: usize,
    method: TableMethod,
    rel_tol: f64,
) -> Result<Vec<(LogComplex, EntryMethod, bool)>> {
    let at_distinguished = z.im == 0.0 && Some(z.re) == atom.distinguished_point();
    let has_closed = matches!(atom, HalfLineFunction::PolyExp { .. })
        || (at_distinguished && !matches!(atom, HalfLineFunction::Combination(_)));
    if method == TableMethod::Closed && !has_closed {
        return Err(Error::NoClosedForm(format!(
            "{atom} admits no closed boundary data at alpha={}",
            z.re
        )));
    }

    // foreign-point Phi: batch the orders through circle samples of the
    // continuation, where rotated moment quadrature loses accuracy with n
    if method != TableMethod::Quadrature && !at_distinguished {
        if let HalfLineFunction::Phi { alpha } = atom {
            return phi_foreign_column(*alpha, z, n_max);
        }
    }

    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let item = match method {
            TableMethod::Quadrature => {
                match crate::quadrature::integrate_rotated(
                    atom,
                    z,
                    n,
                    crate::transform::DEFAULT_THETA,
                    rel_tol,
                ) {
                    Ok(q) => (q.value, EntryMethod::Quadrature, false),
                    Err(Error::BudgetExhausted { best, .. }) => {
                        (best, EntryMethod::Quadrature, true)
                    }
                    Err(e) => return Err(e),
                }
            }
            _ => match atom_derivative(atom, n, z, rel_tol) {
                Ok((v, Route::ClosedForm)) => (v, EntryMethod::ClosedForm, false),
                Ok((v, Route::Quadrature)) => (v, EntryMethod::Quadrature, false),
                Err(Error::BudgetExhausted { best, .. }) => (best, EntryMethod::Quadrature, true),
                Err(e) => return Err(e),
            },
        };
        out.push(item);
    }
    Ok(out)
}

/// Derivatives of φ̂_{α_m} at a real point α ≠ α_m: sample the analytic
/// continuation Φ_{α_m} on a circle of radius |α - α_m|/2 around α.
fn phi_foreign_column(
    alpha_m: f64,
    z: Complex64,
    n_max: usize,
) -> Result<Vec<(LogComplex, EntryMethod, bool)>> {
    let dist = (z.re - alpha_m).abs();
    let r = dist / 2.0;
    let g = |w: Complex64| -> Result<LogComplex> {
        phi_continuation(alpha_m, &CutPlanePoint::new(w, alpha_m)?)
    };
    let cd = cauchy_derivatives(&g, z, r, n_max)?;
    Ok(cd
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            (
                a.mul(&LogComplex::from_log_abs(ln_factorial(n as u64))),
                EntryMethod::Quadrature,
                !cd.stable[n],
            )
        })
        .collect())
}

/// Predicted slope of log C_n against log n for families whose boundary
/// derivatives follow a closed factorial law: 1/p - 1 for e^{-t^p} (p < 1),
/// 1 for the √t profile, M² - 1 for the slow-variation profile.
pub fn expected_growth_exponent(f: &HalfLineFunction) -> Option<f64> {
    match f {
        HalfLineFunction::Chi { .. } => Some(1.0),
        HalfLineFunction::PsiP { p } if *p < 1.0 => Some(1.0 / p - 1.0),
        HalfLineFunction::XAlphaM { m, .. } => {
            let m2 = (*m as f64) * (*m as f64);
            Some(m2 - 1.0)
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Radius estimation
// ---------------------------------------------------------------------------

/// Finite-budget classification of a boundary point.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiusClass {
    /// C_n levels off: the series converges with the estimated radius.
    Regular { radius_hat: f64 },
    /// C_n grows like n^β: the coefficients force a vanishing radius.
    Divergent { growth_exponent_hat: f64 },
    /// The window supports neither call at the documented thresholds.
    Inconclusive,
}

/// Result of fitting a table's C_n data over a window.
#[derive(Debug, Clone)]
pub struct RadiusEstimate {
    pub classification: RadiusClass,
    pub fit_window: (usize, usize),
    /// RMS residual of the plain log C = b·log n + c fit.
    pub residual: f64,
    /// Slope b of the plain fit (diagnostic; biased at small n).
    pub slope: f64,
    /// Slope from the transient-corrected divergent-model fit; this is what
    /// the thresholds are applied to.
    pub corrected_slope: f64,
    /// Windowed-maxima points (n, log C_n) the fits consumed.
    pub series_c: Vec<(usize, f64)>,
}

/// Classification thresholds: corrected slope above [`DIVERGENT_SLOPE`] with
/// a small residual reports divergent; magnitude below [`REGULAR_SLOPE`]
/// reports regular; the band between is inconclusive.
pub const DIVERGENT_SLOPE: f64 = 0.2;
pub const REGULAR_SLOPE: f64 = 0.05;
pub const DIVERGENT_RESIDUAL_MAX: f64 = 0.1;

/// Sliding window width for the limsup-flavoured maxima.
pub const MAX_WINDOW: usize = 5;

/// Estimate the radius of convergence (or its absence) from a table window.
///
/// Refuses windows containing flagged entries.
pub fn estimate_radius(table: &TaylorTable, fit_range: (usize, usize)) -> Result<RadiusEstimate> {
    let (lo, hi) = fit_range;
    if lo < 1 || hi > table.n_max || hi <= lo {
        return Err(Error::Domain(format!(
            "fit range [{lo}, {hi}] outside table (n_max {})",
            table.n_max
        )));
    }
    if hi - lo < 8 {
        return Err(Error::Domain("fit range must span at least 8 orders".into()));
    }
    if table.entries[lo..=hi].iter().any(|e| e.flagged) {
        return Err(Error::FlaggedEntries { lo, hi });
    }
    let pts: Vec<(usize, f64)> = table.entries[lo..=hi]
        .iter()
        .filter_map(|e| e.c.map(|c| (e.n, c.ln())))
        .filter(|(_, y)| y.is_finite())
        .collect();
    if pts.len() < 8 {
        return Err(Error::Domain(
            "too few finite C_n values in the fit range".into(),
        ));
    }
    let wm = windowed_maxima(&pts, MAX_WINDOW);

    // plain 2-parameter diagnostic fit
    let (plain, plain_resid) = least_squares(&wm, &[|n: f64| n.ln(), |_| 1.0]);
    // divergent model with the Stirling transient
    let (div, div_resid) = least_squares(
        &wm,
        &[|n: f64| n.ln(), |_| 1.0, |n: f64| 1.0 / n, |n: f64| n.ln() / n],
    );
    // regular model: flat level plus algebraic transient in 1/√n
    let (reg, _reg_resid) = least_squares(
        &wm,
        &[|_| 1.0, |n: f64| n.powf(-0.5), |n: f64| 1.0 / n],
    );

    let corrected_slope = div[0];
    let classification = if corrected_slope > DIVERGENT_SLOPE && div_resid < DIVERGENT_RESIDUAL_MAX
    {
        RadiusClass::Divergent {
            growth_exponent_hat: corrected_slope,
        }
    } else if corrected_slope.abs() < REGULAR_SLOPE {
        RadiusClass::Regular {
            radius_hat: (-reg[0]).exp(),
        }
    } else {
        RadiusClass::Inconclusive
    };
    Ok(RadiusEstimate {
        classification,
        fit_window: fit_range,
        residual: plain_resid,
        slope: plain[0],
        corrected_slope,
        series_c: wm,
    })
}

/// Maxima of y over a sliding window, keyed by the n where each max is
/// attained (so monotone data keeps its true abscissae).
fn windowed_maxima(pts: &[(usize, f64)], window: usize) -> Vec<(usize, f64)> {
    if pts.len() <= window {
        return pts.to_vec();
    }
    let mut out: Vec<(usize, f64)> = Vec::new();
    for i in 0..=(pts.len() - window) {
        let best = pts[i..i + window]
            .iter()
            .cloned()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if out.last().map(|l| l.0) != Some(best.0) {
            out.push(best);
        }
    }
    out
}

/// Least squares over basis functions of n; returns coefficients and the RMS
/// residual. Normal equations with partial pivoting; the bases here are tiny
/// (≤ 4 columns) and the data exact to f64, so this is plenty.
fn least_squares(pts: &[(usize, f64)], basis: &[fn(f64) -> f64]) -> (Vec<f64>, f64) {
    let k = basis.len();
    let mut ata = vec![vec![0.0f64; k]; k];
    let mut aty = vec![0.0f64; k];
    for &(n, y) in pts {
        let x: Vec<f64> = basis.iter().map(|b| b(n as f64)).collect();
        for i in 0..k {
            aty[i] += x[i] * y;
            for j in 0..k {
                ata[i][j] += x[i] * x[j];
            }
        }
    }
    let coef = solve(&mut ata, &mut aty);
    let mut ss = 0.0;
    for &(n, y) in pts {
        let pred: f64 = basis
            .iter()
            .zip(&coef)
            .map(|(b, c)| b(n as f64) * c)
            .sum();
        ss += (y - pred) * (y - pred);
    }
    (coef, (ss / pts.len() as f64).sqrt())
}

fn solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        if d == 0.0 {
            continue;
        }
        for row in (col + 1)..k {
            let f = a[row][col] / d;
            for j in col..k {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut s = b[col];
        for j in (col + 1)..k {
            s -= a[col][j] * x[j];
        }
        x[col] = if a[col][col] != 0.0 { s / a[col][col] } else { 0.0 };
    }
    x
}
