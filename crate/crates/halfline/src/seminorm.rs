//! Schwartz-class seminorms and the Fréchet metric.
//!
//! ρ_ℓ(f)   = sup { (1+t)^ℓ |f⁽ᵏ⁾(t)| : k ≤ ℓ, t ≥ 0 }
//! ρ_{ℓ,k}(f) = sup_{t≥0} t^ℓ |f⁽ᵏ⁾(t)|
//! ρ(f,g)   = Σ_ℓ 2^{-ℓ} ρ_ℓ(f-g)/(1+ρ_ℓ(f-g)),   truncated at L_max with
//!            tail ≤ 2^{-L_max}.
//!
//! Suprema run on the exact symbolic derivative representation over a
//! geometric grid with golden-section refinement; a supremum is declared
//! infinite exactly when the representation shows a negative power of t
//! surviving at 0 against the weight. The blow-up analysis is per atom, so a
//! combination engineered to cancel its atoms' singular terms at 0 would be
//! reported ∞ pessimistically; exact duplicate atoms do merge away in
//! normalization first.

use crate::catalog::{AtomDerivative, HalfLineFunction};
use crate::logcx::{LogComplex, LogSum};
use crate::Result;
use num_complex::Complex64;

/// A computed supremum; `value` may be `f64::INFINITY` (symbolic blow-up),
/// in which case `attained_at` is None.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormValue {
    pub value: f64,
    /// ln of `value`, usable even when `value` would overflow f64.
    pub log_value: f64,
    pub attained_at: Option<f64>,
}

impl SeminormValue {
    fn infinite() -> Self {
        Self {
            value: f64::INFINITY,
            log_value: f64::INFINITY,
            attained_at: None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.log_value == f64::INFINITY
    }
}

enum Weight {
    /// (1+t)^ℓ
    OnePlusT(usize),
    /// t^ℓ
    PowT(usize),
}

impl Weight {
    fn log_at(&self, t: f64) -> f64 {
        match self {
            Weight::OnePlusT(l) => (*l as f64) * t.ln_1p(),
            Weight::PowT(l) => {
                if *l == 0 {
                    0.0
                } else if t == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (*l as f64) * t.ln()
                }
            }
        }
    }

    /// Whether weight × t^min_exp stays bounded as t → 0+.
    fn tames(&self, min_exp: f64) -> bool {
        match self {
            Weight::OnePlusT(_) => min_exp >= 0.0,
            Weight::PowT(l) => min_exp + (*l as f64) >= 0.0,
        }
    }
}

/// ρ_ℓ(f): supremum of (1+t)^ℓ |f⁽ᵏ⁾(t)| over k ≤ ℓ and t ≥ 0.
pub fn seminorm_rho(f: &HalfLineFunction, ell: usize) -> Result<SeminormValue> {
    let mut best = SeminormValue {
        value: 0.0,
        log_value: f64::NEG_INFINITY,
        attained_at: None,
    };
    for k in 0..=ell {
        let s = weighted_derivative_sup(f, Weight::OnePlusT(ell), k)?;
        if s.is_infinite() {
            return Ok(s);
        }
        if s.log_value > best.log_value {
            best = s;
        }
    }
    Ok(best)
}

/// ρ_{ℓ,k}(f): supremum of t^ℓ |f⁽ᵏ⁾(t)|.
pub fn seminorm_rho_lk(f: &HalfLineFunction, ell: usize, k: usize) -> Result<SeminormValue> {
    weighted_derivative_sup(f, Weight::PowT(ell), k)
}

/// sup_t (1+t)^ℓ |f(t)|, the k = 0 weighted supremum used by transform
/// bounds.
pub fn weighted_sup(f: &HalfLineFunction, ell: usize) -> Result<SeminormValue> {
    weighted_derivative_sup(f, Weight::OnePlusT(ell), 0)
}

/// Fréchet metric ρ(f,g), truncated at ℓ = L_max (tail ≤ 2^{-L_max}).
pub fn metric_rho(f: &HalfLineFunction, g: &HalfLineFunction, l_max: usize) -> Result<f64> {
    let diff = HalfLineFunction::combination(vec![
        (Complex64::new(1.0, 0.0), f.clone()),
        (Complex64::new(-1.0, 0.0), g.clone()),
    ]);
    let mut total = 0.0;
    for ell in 0..=l_max {
        let rho = seminorm_rho(&diff, ell)?;
        let contribution = if rho.is_infinite() {
            1.0
        } else if rho.log_value > 40.0 {
            // x/(1+x) = 1 - 1/(1+x); indistinguishable from 1 beyond e^40
            1.0
        } else {
            let x = rho.log_value.exp();
            x / (1.0 + x)
        };
        total += 0.5f64.powi(ell as i32) * contribution;
    }
    Ok(total)
}

fn weighted_derivative_sup(
    f: &HalfLineFunction,
    weight: Weight,
    k: usize,
) -> Result<SeminormValue> {
    let terms = f.terms();
    if terms.is_empty() {
        return Ok(SeminormValue {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            attained_at: None,
        });
    }
    let derivs: Vec<(Complex64, AtomDerivative)> = terms
        .iter()
        .map(|(c, atom)| (*c, AtomDerivative::build(atom, k)))
        .collect();
    for (c, d) in &derivs {
        if c.norm() != 0.0 && !weight.tames(d.min_exponent_at_zero()) {
            return Ok(SeminormValue::infinite());
        }
    }
    let objective = |t: f64| -> f64 {
        let mut sum = LogSum::new();
        for (c, d) in &derivs {
            sum.push(LogComplex::from_complex(*c).mul(&d.eval_log(Complex64::new(t, 0.0))));
        }
        let v = sum.value();
        if v.is_zero() {
            f64::NEG_INFINITY
        } else {
            weight.log_at(t) + v.log_abs
        }
    };

    // geometric grid over [1e-12, 1e6] plus the endpoint t = 0
    let mut best_t = 0.0f64;
    let mut best = objective(0.0);
    let pts_per_decade = 20;
    let decades = 18; // 1e-12 .. 1e6
    let mut grid_prev = 0.0f64;
    let mut prev_of_best = 0.0f64;
    let mut next_of_best = f64::NAN;
    for i in 0..=(pts_per_decade * decades) {
        let t = 1e-12 * 10f64.powf(i as f64 / pts_per_decade as f64);
        let v = objective(t);
        if v > best {
            best = v;
            prev_of_best = grid_prev;
            best_t = t;
            next_of_best = f64::NAN;
        } else if t > best_t && next_of_best.is_nan() {
            next_of_best = t;
        }
        grid_prev = t;
    }
    // golden-section refinement around the best grid point
    if best_t > 0.0 {
        let lo = prev_of_best.max(1e-300);
        let hi = if next_of_best.is_nan() {
            best_t * 10.0
        } else {
            next_of_best
        };
        let (t_star, v_star) = golden_max(&objective, lo, hi);
        if v_star > best {
            best = v_star;
            best_t = t_star;
        }
    }
    Ok(SeminormValue {
        value: best.exp(),
        log_value: best,
        attained_at: Some(best_t),
    })
}

/// Golden-section maximization in log-t coordinates.
fn golden_max(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c.exp());
    let mut fd = f(d.exp());
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d.exp());
        }
    }
    let t = (0.5 * (a + b)).exp();
    (t, f(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn rho0_of_phi_attained_at_origin() {
        // (1+t)⁰ e^{-√(t+1)} is decreasing: sup = e^{-1} at t = 0
        let phi = HalfLineFunction::phi(0.0);
        let s = seminorm_rho(&phi, 0).unwrap();
        assert!((s.value - (-1f64).exp()).abs() < 1e-12);
        assert!(s.attained_at.unwrap() < 1e-9);
    }

    #[test]
    fn rho1_of_chi_is_infinite() {
        let chi = HalfLineFunction::chi(0.0);
        let s = seminorm_rho(&chi, 1).unwrap();
        assert!(s.is_infinite());
        assert_eq!(s.attained_at, None);
    }

    #[test]
    fn rho_lk_weight_can_tame_blowup() {
        // t¹ · |d/dt e^{-√t}| = t · e^{-√t}/(2√t) = √t e^{-√t}/2: finite sup
        let chi = HalfLineFunction::chi(0.0);
        let s = seminorm_rho_lk(&chi, 1, 1).unwrap();
        assert!(!s.is_infinite());
        // sup of (√t/2)e^{-√t} is at √t = 1: value e^{-1}/2
        assert!((s.value - 0.5 * (-1f64).exp()).abs() < 1e-8);
        // ...but the plain sup without weight is infinite
        assert!(seminorm_rho_lk(&chi, 0, 1).unwrap().is_infinite());
    }

    #[test]
    fn metric_basics() {
        let f = HalfLineFunction::phi(0.0);
        assert_eq!(metric_rho(&f, &f, 10).unwrap(), 0.0);
        let g = HalfLineFunction::poly_exp(0, c64(1.0, 0.0)).unwrap();
        let d1 = metric_rho(&f, &g, 10).unwrap();
        let d2 = metric_rho(&g, &f, 10).unwrap();
        assert_eq!(d1, d2);
        assert!(d1 > 0.0 && d1 < 2.0);
    }

    #[test]
    fn metric_triangle_on_samples() {
        let f = HalfLineFunction::phi(0.0);
        let g = HalfLineFunction::poly_exp(0, c64(1.0, 0.0)).unwrap();
        let h = HalfLineFunction::poly_exp(1, c64(2.0, 0.0)).unwrap();
        let fg = metric_rho(&f, &g, 12).unwrap();
        let gh = metric_rho(&g, &h, 12).unwrap();
        let fh = metric_rho(&f, &h, 12).unwrap();
        assert!(fh <= fg + gh + 1e-9);
    }

    #[test]
    fn weighted_sup_polyexp() {
        // sup (1+t)² t e^{-t}: smooth unimodal, compare against a dense scan
        let pe = HalfLineFunction::poly_exp(1, c64(1.0, 0.0)).unwrap();
        let s = weighted_sup(&pe, 2).unwrap();
        let mut brute: f64 = 0.0;
        let mut t = 0.0;
        while t < 50.0 {
            brute = brute.max((1.0 + t).powi(2) * t * (-t).exp());
            t += 1e-4;
        }
        assert!((s.value - brute).abs() < 1e-6 * brute);
    }
}
