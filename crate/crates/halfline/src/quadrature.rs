//! Quadrature for decaying (possibly oscillatory) integrands.
//!
//! Semi-infinite integrals use the double-exponential substitution
//! t = exp(κ sinh u), κ = π/2, whose trapezoid sums converge geometrically
//! per refinement level and tolerate integrable endpoint behaviour like the
//! infinite slope of e^{-√t} at 0. Node sums accumulate in scaled complex
//! form per level (scale = running max log-magnitude), so moment integrands
//! the size of (2n+1)! never overflow while phase cancellation still happens
//! in ordinary arithmetic.
//!
//! Oscillatory moment integrals ∫₀^∞ e^{-izt}(-it)ⁿ f(t) dt are evaluated on
//! the rotated ray t = r·e^{-iθ}, which turns the oscillation into decay;
//! the sector/decay precondition is checked per catalog family before any
//! node is placed.
//!
//! Finite segments use adaptive bisection with the Gauss(7)/Kronrod(15) pair.

use crate::catalog::HalfLineFunction;
use crate::logcx::{normalize_phase, LogComplex, LogSum};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Integration contour actually used for a result.
#[derive(Debug, Clone, PartialEq)]
pub enum ContourSpec {
    RealAxis,
    /// t = r·e^{-iθ}; positive θ rotates into the lower sector, negative into
    /// the upper one. |θ| < π/2 always, and the integrand must be analytic
    /// with decay on the closed sector swept between the ray and the axis.
    RotatedRay { theta: f64 },
    FiniteSegment { a: f64, b: f64 },
}

/// A quadrature value with its error estimate.
///
/// `abs_error_estimate` is the estimated absolute error expressed on the
/// value's own log scale: (absolute error) / exp(value.log_abs), i.e. a
/// relative error for nonzero values. This keeps the field finite and
/// nonnegative even when the value itself is ~e^±1000.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: LogComplex,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
    pub contour: ContourSpec,
}

/// Hard cap on refinement levels (h = 2^-level); level 11 means ~3·10⁴ nodes.
pub const MAX_LEVEL_DEFAULT: u32 = 11;

/// Documented safety factor for the monotone refinement contract: doubling
/// the node budget never increases the error estimate by more than this
/// (wobble at the rounding plateau stays well inside it).
pub const REFINEMENT_SAFETY_FACTOR: f64 = 8.0;

const DE_KAPPA: f64 = PI / 2.0;
// u-range guards: t = exp(κ sinh u) must stay a normal f64
const DE_U_MAX: f64 = 6.7;
const DE_U_MIN: f64 = -6.5;
// a node this far (in nats) below the level's peak cannot move the sum
const DE_LOG_CUTOFF: f64 = 60.0;

/// ∫₀^∞ integrand(t) dt for a log-domain integrand, by double-exponential
/// trapezoid sums with node-doubling refinement.
pub fn integrate_halfline_log(
    integrand: &dyn Fn(f64) -> LogComplex,
    rel_tol: f64,
    max_level: u32,
) -> Result<QuadratureResult> {
    check_tol(rel_tol)?;
    let mut nodes_total = 0usize;
    let mut prev: Option<LogComplex> = None;
    let mut best: Option<(LogComplex, f64)> = None;
    for level in 3..=max_level {
        let h = 0.5f64.powi(level as i32);
        let (value, nodes) = de_level_sum(integrand, h)?;
        nodes_total += nodes;
        if let Some(p) = prev {
            let err = rel_diff(&value, &p);
            if best.map_or(true, |(_, e)| err <= e) {
                best = Some((value, err));
            }
            if err <= rel_tol && level >= 5 {
                return Ok(QuadratureResult {
                    value,
                    abs_error_estimate: err,
                    nodes_used: nodes_total,
                    contour: ContourSpec::RealAxis,
                });
            }
        }
        prev = Some(value);
    }
    let (value, err) = best.unwrap_or((prev.unwrap(), f64::INFINITY));
    Err(Error::BudgetExhausted {
        best: value,
        rel_error: err,
        nodes_used: nodes_total,
    })
}

/// ∫₀^∞ f(t) dt for an ordinary complex integrand.
pub fn integrate_halfline(
    integrand: &dyn Fn(f64) -> Complex64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_halfline_log(
        &|t| LogComplex::from_complex(integrand(t)),
        rel_tol,
        MAX_LEVEL_DEFAULT,
    )
}

/// One trapezoid level of the double-exponential rule.
fn de_level_sum(integrand: &dyn Fn(f64) -> LogComplex, h: f64) -> Result<(LogComplex, usize)> {
    let mut sum = LogSum::new();
    let mut nodes = 0usize;

    for side in [1.0f64, -1.0] {
        let mut peak = f64::NEG_INFINITY;
        let mut below = 0u32;
        let mut rising = 0u32;
        let mut last_log = f64::NEG_INFINITY;
        let mut j: u64 = if side > 0.0 { 0 } else { 1 };
        loop {
            let u = side * (j as f64) * h;
            if u > DE_U_MAX || u < DE_U_MIN {
                // ran off the representable range while terms still matter
                if last_log > peak - DE_LOG_CUTOFF && rising >= 2 {
                    return Err(Error::DivergentTail);
                }
                if last_log > peak - DE_LOG_CUTOFF {
                    return Err(Error::DivergentTail);
                }
                break;
            }
            let sh = DE_KAPPA * u.sinh();
            let t = sh.exp();
            let log_weight = sh + (DE_KAPPA * u.cosh()).ln() + h.ln();
            let fv = integrand(t);
            nodes += 1;
            let term = LogComplex::new(fv.log_abs + log_weight, fv.phase);
            sum.push(term);
            let lt = term.log_abs;
            rising = if lt > last_log && lt > f64::NEG_INFINITY {
                rising + 1
            } else {
                0
            };
            last_log = lt;
            if lt > peak {
                peak = lt;
                below = 0;
            } else if lt < peak - DE_LOG_CUTOFF {
                below += 1;
                if below >= 3 {
                    break;
                }
            } else {
                below = 0;
            }
            j += 1;
        }
        sum.renormalize();
    }
    Ok((sum.value(), nodes))
}

fn rel_diff(a: &LogComplex, b: &LogComplex) -> f64 {
    if a.is_zero() && b.is_zero() {
        return 0.0;
    }
    if a.is_zero() || b.is_zero() {
        return f64::INFINITY;
    }
    (a.sub(b).log_abs - a.log_abs).exp()
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Domain(format!(
            "rel_tol must lie in (0,1), got {rel_tol}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Rotated moment integrals
// ---------------------------------------------------------------------------

/// ∫₀^∞ e^{-izt} (-it)ⁿ f(t) dt on the ray t = r·e^{-iθ}.
///
/// Each modulated term e^{iαt}·g first folds its frequency into z' = z - α;
/// the rotation sign then follows sign(Re z') so that e^{-iz't} decays along
/// the ray. The precondition Re(i z' e^{-iθ}) ≥ 0 (strict for pure
/// exponential profiles, which get their own rate σ added) is checked before
/// integrating; failures are `invalid contour` errors.
pub fn integrate_rotated(
    f: &HalfLineFunction,
    z: Complex64,
    n: usize,
    theta: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    check_tol(rel_tol)?;
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::InvalidContour(format!(
            "theta must lie in (0, pi/2), got {theta}"
        )));
    }
    if z.im > 0.0 {
        return Err(Error::Domain(
            "moment integrals require Im z <= 0; use the continuation module".into(),
        ));
    }
    let mut sum = LogSum::new();
    let mut err_abs_log = f64::NEG_INFINITY; // log of summed absolute errors
    let mut nodes_total = 0usize;
    let mut theta_used = theta;
    let mut result: Result<()> = Ok(());
    f.for_each_term(|c, atom| {
        if result.is_err() {
            return;
        }
        match rotated_term(atom, z, n, theta, rel_tol, MAX_LEVEL_DEFAULT) {
            Ok((v, e_rel, nodes, th)) => {
                let cv = LogComplex::from_complex(c).mul(&v);
                sum.push(cv);
                // absolute error of c·v on the global scale
                let e_log = cv.log_abs + e_rel.max(1e-300).ln();
                err_abs_log = log_add(err_abs_log, e_log);
                nodes_total += nodes;
                theta_used = th;
            }
            Err(e) => result = Err(e),
        }
    });
    result?;
    let value = sum.value();
    let abs_error_estimate = if value.is_zero() {
        if err_abs_log == f64::NEG_INFINITY {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (err_abs_log - value.log_abs).exp()
    };
    Ok(QuadratureResult {
        value,
        abs_error_estimate,
        nodes_used: nodes_total,
        contour: ContourSpec::RotatedRay { theta: theta_used },
    })
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// One atom's rotated moment integral (demodulated).
fn rotated_term(
    atom: &HalfLineFunction,
    z: Complex64,
    n: usize,
    theta: f64,
    rel_tol: f64,
    max_level: u32,
) -> Result<(LogComplex, f64, usize, f64)> {
    let zp = z - Complex64::new(atom.modulation(), 0.0);
    // rotate away from the oscillation: downward for Re z' >= 0, upward else
    let theta_eff = if zp.re >= 0.0 { theta } else { -theta };
    check_ray_validity(atom, zp, theta_eff)?;

    let dir = Complex64::from_polar(1.0, -theta_eff);
    let arg_minus_it = normalize_phase(-theta_eff - PI / 2.0);
    let nn = n as f64;
    let integrand = move |r: f64| -> LogComplex {
        let t = r * dir;
        let exponent = -Complex64::new(0.0, 1.0) * zp * t + atom.base_exponent(t);
        if exponent.re == f64::NEG_INFINITY {
            return LogComplex::zero();
        }
        LogComplex::new(
            exponent.re + nn * r.ln(),
            exponent.im + nn * arg_minus_it - theta_eff,
        )
    };
    match integrate_halfline_log(&integrand, rel_tol, max_level) {
        Ok(r) => Ok((r.value, r.abs_error_estimate, r.nodes_used, theta_eff)),
        Err(e) => Err(e),
    }
}

/// Decay precondition along the ray t = r e^{-iθ}: the combined linear rate
/// Re((iz' + σ) e^{-iθ}) must be positive, or nonnegative when the profile
/// has stretched-exponential decay of its own.
fn check_ray_validity(atom: &HalfLineFunction, zp: Complex64, theta_eff: f64) -> Result<()> {
    let dir = Complex64::from_polar(1.0, -theta_eff);
    let rate = ((Complex64::new(0.0, 1.0) * zp + atom.linear_rate()) * dir).re;
    let ok = if atom.has_stretched_decay() {
        rate >= 0.0
    } else {
        rate > 0.0
    };
    if !ok {
        return Err(Error::InvalidContour(format!(
            "e^{{-izt}} grows along the ray (rate {rate:.3e} at theta={theta_eff:.4}, z'={zp})"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Finite segments: adaptive Gauss-Kronrod 7/15
// ---------------------------------------------------------------------------

/// Kronrod nodes on [0,1] (symmetric half), Kronrod weights, embedded Gauss
/// weights (QUADPACK G7K15 constants).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    let err = ((kronrod - gauss) * half).norm();
    (kronrod * half, err)
}

/// ∫ₐᵇ f(t) dt by adaptive bisection, tolerant of integrable endpoint
/// singularities of e^{-√t} type.
pub fn integrate_finite(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    check_tol(rel_tol)?;
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    const MAX_INTERVALS: usize = 4000;
    let (v0, e0) = gk15(f, a, b);
    let mut intervals = vec![(a, b, v0, e0)];
    let mut nodes = 15usize;
    loop {
        let total: Complex64 = intervals.iter().map(|x| x.2).sum();
        let err: f64 = intervals.iter().map(|x| x.3).sum();
        let goal = rel_tol * total.norm().max(f64::MIN_POSITIVE);
        if err <= goal {
            return Ok(QuadratureResult {
                value: LogComplex::from_complex(total),
                abs_error_estimate: if total.norm() == 0.0 {
                    err
                } else {
                    err / total.norm()
                },
                nodes_used: nodes,
                contour: ContourSpec::FiniteSegment { a, b },
            });
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::BudgetExhausted {
                best: LogComplex::from_complex(total),
                rel_error: if total.norm() == 0.0 {
                    f64::INFINITY
                } else {
                    err / total.norm()
                },
                nodes_used: nodes,
            });
        }
        // split the worst interval
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.3.total_cmp(&y.3))
            .map(|(i, _)| i)
            .unwrap();
        let (ia, ib, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        let left = gk15(f, ia, mid);
        let right = gk15(f, mid, ib);
        nodes += 30;
        intervals.push((ia, mid, left.0, left.1));
        intervals.push((mid, ib, right.0, right.1));
    }
}

// ---------------------------------------------------------------------------
// erf-type integral
// ---------------------------------------------------------------------------

/// Switchover point between the alternating Maclaurin series and the
/// complementary continued fraction.
pub const ERF_SWITCHOVER: f64 = 3.0;

/// ∫₀ˣ e^{-u²} du, accurate to ~1e-13 relative for |x| ≤ 10.
///
/// |x| ≤ 3 sums Σ (-1)ⁿ x^{2n+1}/(n!(2n+1)); beyond that the tail
/// ∫ₓ^∞ = ½Γ(½, x²) is evaluated by the Lentz continued fraction for the
/// upper incomplete gamma (the divergent Poincaré expansion of the tail
/// cannot reach the accuracy contract at x = 3, so the convergent fraction
/// stands in for it).
pub fn erf_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= ERF_SWITCHOVER {
        erf_series(x)
    } else {
        let sqrt_pi_half = PI.sqrt() / 2.0;
        let emx2 = (-x * x).exp();
        if emx2 == 0.0 {
            return sqrt_pi_half;
        }
        sqrt_pi_half - 0.5 * emx2 * x * upper_gamma_cf(0.5, x * x)
    }
}

fn erf_series(x: f64) -> f64 {
    let mut term = x; // x^{2n+1}/n!
    let mut sum = 0.0;
    let mut n = 0u32;
    loop {
        sum += term / (2.0 * n as f64 + 1.0);
        n += 1;
        term *= -x * x / n as f64;
        if term.abs() / (2.0 * n as f64 + 1.0) < 1e-18 * sum.abs() || n > 400 {
            return sum;
        }
    }
}

/// H(a,x) with Γ(a,x) = e^{-x} x^a H(a,x), by the modified Lentz algorithm;
/// rapidly convergent for x ≳ a + 1.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=200 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::gamma::ln_factorial;

    #[test]
    fn exponential_is_one() {
        let r = integrate_halfline(&|t| c64((-t).exp(), 0.0), 1e-10).unwrap();
        assert!((r.value.to_complex() - c64(1.0, 0.0)).norm() < 1e-10);
        assert_eq!(r.value.phase, 0.0); // positive integrand keeps phase 0
        assert!(r.nodes_used >= 1);
    }

    #[test]
    fn sqrt_profile_is_two() {
        let r = integrate_halfline(&|t| c64((-t.sqrt()).exp(), 0.0), 1e-10).unwrap();
        assert!((r.value.to_complex() - c64(2.0, 0.0)).norm() < 2e-10);
    }

    #[test]
    fn factorial_moment_in_log_domain() {
        // ∫ t^21 e^-t dt = 21!; oracle = exact u128 integer
        let r = integrate_halfline_log(
            &|t| LogComplex::from_log_abs(21.0 * t.ln() - t),
            1e-11,
            MAX_LEVEL_DEFAULT,
        )
        .unwrap();
        let exact: u128 = (1..=21u128).product();
        let exact_log = (exact as f64).ln();
        assert!(
            (r.value.log_abs - exact_log).abs() < 1e-9,
            "{} vs {}",
            r.value.log_abs,
            exact_log
        );
        assert_eq!(r.value.phase, 0.0);
        // same via ln_factorial
        assert!((r.value.log_abs - ln_factorial(21)).abs() < 1e-9);
    }

    #[test]
    fn budget_exhausted_carries_best_estimate() {
        let err = integrate_halfline_log(
            &|t| LogComplex::from_log_abs(-t.sqrt()),
            1e-10,
            5, // far too few levels
        )
        .unwrap_err();
        match err {
            Error::BudgetExhausted { best, rel_error, .. } => {
                assert!((best.to_complex().re - 2.0).abs() < 0.05);
                assert!(rel_error > 1e-10);
            }
            other => panic!("expected BudgetExhausted, got {other:?}"),
        }
    }

    #[test]
    fn divergent_tail_detected() {
        let err = integrate_halfline(&|t| c64(t.exp(), 0.0), 1e-8).unwrap_err();
        assert!(matches!(err, Error::DivergentTail));
    }

    #[test]
    fn refinement_error_is_monotone_within_safety_factor() {
        let integrand = |t: f64| LogComplex::from_log_abs(-t.sqrt());
        let mut prev_err: Option<f64> = None;
        for max_level in 7..=10 {
            let r = integrate_halfline_log(&integrand, 1e-300, max_level);
            let err = match r {
                Ok(q) => q.abs_error_estimate,
                Err(Error::BudgetExhausted { rel_error, .. }) => rel_error,
                other => panic!("{other:?}"),
            };
            if let Some(p) = prev_err {
                assert!(
                    err <= p * REFINEMENT_SAFETY_FACTOR,
                    "error went up too much: {p} -> {err}"
                );
            }
            prev_err = Some(err);
        }
    }

    #[test]
    fn rotated_moment_of_sqrt_profile() {
        // n = 5 at z = 0: log|value| = log(2·11!) and phase of (-i)^5
        let f = HalfLineFunction::chi(0.0);
        let r = integrate_rotated(&f, c64(0.0, 0.0), 5, PI / 4.0, 1e-9).unwrap();
        let exact: u128 = (1..=11u128).product();
        let exact_log = (2.0 * exact as f64).ln();
        assert!((r.value.log_abs - exact_log).abs() < 1e-7 * exact_log);
        let want = LogComplex::phase_of_minus_i_pow(1); // (-i)^5 = -i
        assert!((r.value.phase - want).abs() < 1e-7);
        assert!(matches!(r.contour, ContourSpec::RotatedRay { theta } if theta == PI / 4.0));
    }

    #[test]
    fn rotation_angle_invariance() {
        let f = HalfLineFunction::chi(0.0);
        let a = integrate_rotated(&f, c64(0.0, 0.0), 5, PI / 6.0, 1e-10).unwrap();
        let b = integrate_rotated(&f, c64(0.0, 0.0), 5, PI / 3.0, 1e-10).unwrap();
        assert!(a.value.rel_distance(&b.value) < 1e-8);
        assert!((a.value.phase - b.value.phase).abs() < 1e-8);
    }

    #[test]
    fn rotated_pole_family() {
        // ∫ e^{-it} e^{-t} dt = 1/(1+i) = (1-i)/2
        let f = HalfLineFunction::poly_exp(0, c64(1.0, 0.0)).unwrap();
        let r = integrate_rotated(&f, c64(1.0, 0.0), 0, PI / 4.0, 1e-10).unwrap();
        assert!((r.value.to_complex() - c64(0.5, -0.5)).norm() < 1e-9);
    }

    #[test]
    fn invalid_contour_rejected() {
        // e^{-izt} with z' = -2 grows along the downward ray; the negative
        // modulation flips the rotation, but a PolyExp with tiny decay and a
        // big positive real z' must fail when sin θ · Re z' > Re σ.
        let f = HalfLineFunction::poly_exp(0, c64(0.01, 0.0)).unwrap();
        // upward-forced rotation: Re z' < 0 means rate = |Re z'| sinθ + σcosθ > 0, fine;
        // so use Im z > 0 rejection and bad theta instead
        assert!(matches!(
            integrate_rotated(&f, c64(0.0, 1.0), 0, PI / 4.0, 1e-8),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate_rotated(&f, c64(0.0, 0.0), 0, 2.0, 1e-8),
            Err(Error::InvalidContour(_))
        ));
        // z' = 0 with a pure oscillation rate: PolyExp at exactly its pole
        // frequency still decays through σ, so pick σ with hostile imaginary
        // part to trip the rate check
        let g = HalfLineFunction::poly_exp(0, c64(0.01, -10.0)).unwrap();
        assert!(matches!(
            integrate_rotated(&g, c64(0.0, 0.0), 0, PI / 4.0, 1e-8),
            Err(Error::InvalidContour(_))
        ));
    }

    #[test]
    fn finite_segment_basics() {
        let one = integrate_finite(&|_| c64(1.0, 0.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((one.value.to_complex() - c64(1.0, 0.0)).norm() < 1e-12);

        // ∫₀¹ e^{-√t} dt = 2 - 4/e by the antiderivative -2(√t+1)e^{-√t}
        let v = integrate_finite(&|t| c64((-t.sqrt()).exp(), 0.0), 0.0, 1.0, 1e-12).unwrap();
        let exact = 2.0 - 4.0 / 1f64.exp();
        assert!((v.value.to_complex().re - exact).abs() < 1e-10);

        // ∫₀¹ e^{-it} dt = (1 - e^{-i})/i
        let w = integrate_finite(&|t| c64(0.0, -t).exp(), 0.0, 1.0, 1e-12).unwrap();
        let exact = (c64(1.0, 0.0) - c64(0.0, -1.0).exp()) / c64(0.0, 1.0);
        assert!((w.value.to_complex() - exact).norm() < 1e-12);
    }

    #[test]
    fn erf_integral_examples() {
        assert_eq!(erf_integral(0.0), 0.0);
        let sqrt_pi_half = PI.sqrt() / 2.0;
        assert!((erf_integral(40.0) - sqrt_pi_half).abs() < 1e-15);
        // series oracle at x = 0.5, digits frozen from a 40-digit evaluation
        let expect = 0.4612810064127924;
        assert!((erf_integral(0.5) - expect).abs() < 1e-14);
        // reference values (40-digit): x = 1, 2.5, 3.5, 5, 10
        for (x, v) in [
            (1.0, 0.7468241328124270),
            (2.5, 0.8858662736175309),
            (3.5, 0.8862262668989722),
            (5.0, 0.8862269254513955),
            (10.0, 0.8862269254527580),
        ] {
            assert!(
                (erf_integral(x) - v).abs() <= 1e-12 * v,
                "x={x}: {} vs {v}",
                erf_integral(x)
            );
        }
    }

    #[test]
    fn erf_branches_agree_at_switchover() {
        let x = ERF_SWITCHOVER;
        let series = erf_series(x);
        let cf = PI.sqrt() / 2.0 - 0.5 * (-x * x).exp() * x * upper_gamma_cf(0.5, x * x);
        assert!(
            (series - cf).abs() < 1e-10 * series.abs(),
            "series {series} vs complementary {cf}"
        );
    }

    #[test]
    fn erf_is_odd_and_increasing() {
        let mut prev = -erf_integral(6.0);
        let mut x = -6.0;
        while x <= 6.0 {
            let v = erf_integral(x);
            assert!((v + erf_integral(-x)).abs() < 1e-15);
            if x > -6.0 {
                assert!(v > prev, "not increasing at {x}");
            }
            prev = v;
            x += 0.25;
        }
    }
}
