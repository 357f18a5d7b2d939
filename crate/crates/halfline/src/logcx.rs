//! Log-domain complex arithmetic.
//!
//! A nonzero complex number w is stored as (log|w|, arg w). Magnitudes like
//! (2n+1)! then stay representable far past f64 overflow, while phases keep
//! full cancellation information. Zero is `log_abs = -∞` with phase 0.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Complex number in log-magnitude + phase form.
///
/// Invariants: `phase ∈ (-π, π]`; `log_abs = -∞` represents exactly zero and
/// then `phase == 0` by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub log_abs: f64,
    pub phase: f64,
}

/// Normalize an angle to (-π, π].
pub fn normalize_phase(phi: f64) -> f64 {
    if phi > -PI && phi <= PI {
        // also rewrites -0.0 as 0.0
        return phi + 0.0;
    }
    let mut p = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if p <= -PI {
        p = PI;
    }
    p + 0.0
}

impl LogComplex {
    pub fn new(log_abs: f64, phase: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            return Self::zero();
        }
        Self {
            log_abs,
            phase: normalize_phase(phase),
        }
    }

    pub fn zero() -> Self {
        Self {
            log_abs: f64::NEG_INFINITY,
            phase: 0.0,
        }
    }

    pub fn one() -> Self {
        Self {
            log_abs: 0.0,
            phase: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    /// Positive real number from its natural log.
    pub fn from_log_abs(log_abs: f64) -> Self {
        Self::new(log_abs, 0.0)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else if x > 0.0 {
            Self::new(x.ln(), 0.0)
        } else {
            Self::new((-x).ln(), PI)
        }
    }

    pub fn from_complex(w: Complex64) -> Self {
        let n = w.norm();
        if n == 0.0 {
            Self::zero()
        } else {
            Self::new(n.ln(), w.arg())
        }
    }

    /// Exponential of a complex number given directly: e^{g} has
    /// log_abs = Re g and phase = Im g. This is how catalog integrands are
    /// evaluated without ever forming e^{Re g}.
    pub fn exp_of(g: Complex64) -> Self {
        Self::new(g.re, g.im)
    }

    /// Materialize as an ordinary complex number (may overflow to ±∞).
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.log_abs + other.log_abs, self.phase + other.phase)
    }

    pub fn div(&self, other: &Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.log_abs - other.log_abs, self.phase - other.phase)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self::new(self.log_abs, self.phase + PI)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_abs, -self.phase)
    }

    /// Scale by a real factor (sign respected).
    pub fn scale(&self, c: f64) -> Self {
        self.mul(&Self::from_real(c))
    }

    /// Integer power.
    pub fn powi(&self, n: i32) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::one() } else { Self::zero() };
        }
        Self::new(self.log_abs * n as f64, self.phase * n as f64)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = LogSum::new();
        s.push(*self);
        s.push(*other);
        s.value()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// |self - other| / |other| without leaving the log domain.
    pub fn rel_distance(&self, other: &Self) -> f64 {
        if other.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        (self.sub(other).log_abs - other.log_abs).exp()
    }

    /// Phase of (-i)^n, normalized.
    pub fn phase_of_minus_i_pow(n: u32) -> f64 {
        normalize_phase(-(n as f64) * PI / 2.0)
    }
}

/// Scaled accumulator for sums of [`LogComplex`] values.
///
/// The running sum is held as `e^{scale} * acc` with `scale` tracking the
/// largest term magnitude seen, so panels of wildly different scales combine
/// without overflow while phase cancellation still happens in ordinary
/// complex arithmetic.
#[derive(Debug, Clone)]
pub struct LogSum {
    scale: f64,
    acc: Complex64,
}

impl LogSum {
    pub fn new() -> Self {
        Self {
            scale: f64::NEG_INFINITY,
            acc: Complex64::new(0.0, 0.0),
        }
    }

    pub fn push(&mut self, v: LogComplex) {
        if v.is_zero() {
            return;
        }
        if self.scale == f64::NEG_INFINITY {
            self.scale = v.log_abs;
            self.acc = Complex64::from_polar(1.0, v.phase);
            return;
        }
        if v.log_abs <= self.scale {
            self.acc += Complex64::from_polar((v.log_abs - self.scale).exp(), v.phase);
        } else {
            self.acc *= (self.scale - v.log_abs).exp();
            self.scale = v.log_abs;
            self.acc += Complex64::from_polar(1.0, v.phase);
        }
    }

    /// Renormalize so the held accumulator has unit magnitude. Called between
    /// quadrature panels to keep `acc` away from overflow/underflow when a
    /// panel contributes very many same-scale terms.
    pub fn renormalize(&mut self) {
        let n = self.acc.norm();
        if n > 0.0 && n.is_finite() {
            self.scale += n.ln();
            self.acc /= n;
        }
    }

    pub fn value(&self) -> LogComplex {
        let n = self.acc.norm();
        if self.scale == f64::NEG_INFINITY || n == 0.0 {
            return LogComplex::zero();
        }
        LogComplex::new(self.scale + n.ln(), self.acc.arg())
    }
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn zero_and_one() {
        assert!(LogComplex::zero().is_zero());
        assert_eq!(LogComplex::one().to_complex(), Complex64::new(1.0, 0.0));
        assert_eq!(LogComplex::from_real(0.0).phase, 0.0);
    }

    #[test]
    fn phase_always_normalized() {
        let v = LogComplex::new(0.0, 3.0 * PI);
        assert!(v.phase > -PI && v.phase <= PI);
        assert!(close(v.phase, PI, 1e-12));
        // -π maps to +π
        assert!(close(normalize_phase(-PI), PI, 0.0));
        assert_eq!(normalize_phase(-0.0), 0.0);
        assert!(normalize_phase(-0.0).is_sign_positive());
    }

    #[test]
    fn mul_adds_logs_and_phases() {
        let a = LogComplex::from_complex(Complex64::new(3.0, 4.0));
        let b = LogComplex::from_complex(Complex64::new(-1.0, 2.0));
        let p = a.mul(&b).to_complex();
        let q = Complex64::new(3.0, 4.0) * Complex64::new(-1.0, 2.0);
        assert!((p - q).norm() < 1e-12 * q.norm());
    }

    #[test]
    fn huge_scale_sum() {
        // e^1000 + e^998 stays finite in log form
        let mut s = LogSum::new();
        s.push(LogComplex::from_log_abs(1000.0));
        s.push(LogComplex::from_log_abs(998.0));
        let v = s.value();
        let expected = 1000.0 + (1.0 + (-2.0f64).exp()).ln();
        assert!(close(v.log_abs, expected, 1e-12));
        assert_eq!(v.phase, 0.0);
    }

    #[test]
    fn cancellation_keeps_phase_information() {
        let a = LogComplex::from_real(1.0);
        let b = LogComplex::from_real(-1.0);
        assert!(a.add(&b).is_zero());
        let c = LogComplex::from_complex(Complex64::new(1.0, 1.0));
        let d = c.sub(&LogComplex::from_real(1.0)).to_complex();
        assert!((d - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn rel_distance_matches_linear() {
        let a = LogComplex::from_real(1.0 + 1e-9);
        let b = LogComplex::from_real(1.0);
        assert!(close(a.rel_distance(&b), 1e-9, 1e-12));
    }

    #[test]
    fn minus_i_powers() {
        assert!(close(LogComplex::phase_of_minus_i_pow(0), 0.0, 0.0));
        assert!(close(LogComplex::phase_of_minus_i_pow(1), -PI / 2.0, 1e-15));
        assert!(close(LogComplex::phase_of_minus_i_pow(2), PI, 1e-15));
        assert!(close(LogComplex::phase_of_minus_i_pow(3), PI / 2.0, 1e-15));
        assert!(close(LogComplex::phase_of_minus_i_pow(4), 0.0, 1e-15));
    }
}
