//! The explicit function families and their exact derivatives.
//!
//! Five atoms are supported, each a modulated decaying profile on [0, ∞):
//!
//! * `Chi(α)`      = e^{iαt} e^{-√t}
//! * `Phi(α)`      = e^{iαt} e^{-√(t+1)}
//! * `PsiP(p)`     = e^{-t^p},              p > 0
//! * `XAlphaM(α,M)`= e^{iαt} e^{-t^{1/M²}}, M ≥ 2
//! * `PolyExp(ν,σ)`= t^ν e^{-σt},           Re σ > 0
//!
//! plus flat finite linear combinations. Derivatives in t are exact via a
//! small term calculus: d/dt maps Σ a_j (t+c)^{-j/2} e^{-√(t+c)} and
//! Σ a t^{up-v} e^{-t^p} into the same shape, so seminorm suprema and
//! integration-by-parts data never touch finite differences.

use crate::gamma::{ln_binomial, ln_gamma};
use crate::logcx::{LogComplex, LogSum};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A catalog function or a flat finite linear combination of them.
#[derive(Debug, Clone, PartialEq)]
pub enum HalfLineFunction {
    /// e^{iαt} e^{-√t}
    Chi { alpha: f64 },
    /// e^{iαt} e^{-√(t+1)}
    Phi { alpha: f64 },
    /// e^{-t^p}, p > 0
    PsiP { p: f64 },
    /// e^{iαt} e^{-t^{1/M²}}, M ≥ 2
    XAlphaM { alpha: f64, m: u32 },
    /// t^ν e^{-σt}, Re σ > 0
    PolyExp { nu: u32, sigma: Complex64 },
    /// Flat linear combination; kept normalized (no nesting, duplicates
    /// merged, zero coefficients dropped).
    Combination(Vec<(Complex64, HalfLineFunction)>),
}

impl HalfLineFunction {
    pub fn chi(alpha: f64) -> Self {
        Self::Chi { alpha }
    }

    pub fn phi(alpha: f64) -> Self {
        Self::Phi { alpha }
    }

    pub fn psi_p(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("psi requires p > 0, got {p}")));
        }
        Ok(Self::PsiP { p })
    }

    pub fn x_alpha_m(alpha: f64, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("x requires M >= 2, got {m}")));
        }
        Ok(Self::XAlphaM { alpha, m })
    }

    pub fn poly_exp(nu: u32, sigma: Complex64) -> Result<Self> {
        if !(sigma.re > 0.0) {
            return Err(Error::Domain(format!(
                "polyexp requires Re sigma > 0, got {sigma}"
            )));
        }
        Ok(Self::PolyExp { nu, sigma })
    }

    /// Build a normalized combination: nesting flattened, identical atoms
    /// merged, zero coefficients dropped. A single surviving unit-coefficient
    /// term collapses to the atom itself; an empty sum is the zero function
    /// `Combination([])`.
    pub fn combination(terms: Vec<(Complex64, HalfLineFunction)>) -> Self {
        let mut flat: Vec<(Complex64, HalfLineFunction)> = Vec::new();
        fn absorb(acc: &mut Vec<(Complex64, HalfLineFunction)>, c: Complex64, f: HalfLineFunction) {
            match f {
                HalfLineFunction::Combination(inner) => {
                    for (ci, fi) in inner {
                        absorb(acc, c * ci, fi);
                    }
                }
                atom => {
                    if let Some(slot) = acc.iter_mut().find(|(_, g)| *g == atom) {
                        slot.0 += c;
                    } else {
                        acc.push((c, atom));
                    }
                }
            }
        }
        for (c, f) in terms {
            absorb(&mut flat, c, f);
        }
        flat.retain(|(c, _)| c.norm() != 0.0);
        if flat.len() == 1 && flat[0].0 == Complex64::new(1.0, 0.0) {
            return flat.pop().unwrap().1;
        }
        Self::Combination(flat)
    }

    /// Visit the atoms of `self` with their coefficients (1 for a bare atom).
    pub fn for_each_term<F: FnMut(Complex64, &HalfLineFunction)>(&self, mut visit: F) {
        match self {
            Self::Combination(terms) => {
                for (c, f) in terms {
                    visit(*c, f);
                }
            }
            atom => visit(Complex64::new(1.0, 0.0), atom),
        }
    }

    pub fn terms(&self) -> Vec<(Complex64, HalfLineFunction)> {
        let mut out = Vec::new();
        self.for_each_term(|c, f| out.push((c, f.clone())));
        out
    }

    /// Modulation frequency α of an atom (0 for PsiP and PolyExp).
    pub fn modulation(&self) -> f64 {
        match self {
            Self::Chi { alpha } | Self::Phi { alpha } | Self::XAlphaM { alpha, .. } => *alpha,
            Self::PsiP { .. } | Self::PolyExp { .. } => 0.0,
            Self::Combination(_) => 0.0,
        }
    }

    /// The point α₀ at which the family admits closed boundary Taylor data
    /// (the modulation frequency; 0 for PsiP/PolyExp). None for combinations.
    pub fn distinguished_point(&self) -> Option<f64> {
        match self {
            Self::Combination(_) => None,
            atom => Some(atom.modulation()),
        }
    }

    /// Whether the demodulated profile decays like exp(-c·t^q) with q ∈ (0,1]
    /// along every ray in the sector |arg t| < π/2. True for all atoms; the
    /// PolyExp rate is the separate linear exponent σ.
    pub(crate) fn has_stretched_decay(&self) -> bool {
        !matches!(self, Self::PolyExp { .. })
    }

    /// Linear decay rate of the demodulated atom (σ for PolyExp, 0 otherwise).
    pub(crate) fn linear_rate(&self) -> Complex64 {
        match self {
            Self::PolyExp { sigma, .. } => *sigma,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Exponent g(t) of the demodulated profile written as e^{g(t)}, at a
    /// complex point t with |arg t| < π/2 (principal powers). For PolyExp the
    /// polynomial factor is folded in as ν·log t.
    pub(crate) fn base_exponent(&self, t: Complex64) -> Complex64 {
        match self {
            Self::Chi { .. } => -t.sqrt(),
            Self::Phi { .. } => -(t + 1.0).sqrt(),
            Self::PsiP { p } => -cpow(t, *p),
            Self::XAlphaM { m, .. } => -cpow(t, 1.0 / ((*m as f64) * (*m as f64))),
            Self::PolyExp { nu, sigma } => {
                if *nu == 0 {
                    -sigma * t
                } else if t == Complex64::new(0.0, 0.0) {
                    Complex64::new(f64::NEG_INFINITY, 0.0)
                } else {
                    -sigma * t + (*nu as f64) * t.ln()
                }
            }
            Self::Combination(_) => unreachable!("base_exponent is per-atom"),
        }
    }

    /// Pointwise value at real t ≥ 0.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        if t < 0.0 {
            return Err(Error::Domain(format!("eval requires t >= 0, got {t}")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_term(|c, atom| {
            let g = atom.base_exponent(Complex64::new(t, 0.0));
            let modulated = g + Complex64::new(0.0, atom.modulation() * t);
            acc += c * if modulated.re == f64::NEG_INFINITY {
                Complex64::new(0.0, 0.0)
            } else {
                modulated.exp()
            };
        });
        Ok(acc)
    }

    /// Log-domain value of coefficient · atom at complex t (|arg t| < π/2),
    /// with the e^{-izt} factor left to the caller.
    pub(crate) fn term_value_log(c: Complex64, atom: &HalfLineFunction, t: Complex64) -> LogComplex {
        let g = atom.base_exponent(t) + Complex64::new(0.0, 1.0) * (atom.modulation() * t);
        LogComplex::from_complex(c).mul(&LogComplex::exp_of(g))
    }

    /// k-th derivative at real t (exact, via the symbolic term calculus).
    ///
    /// At t = 0 the derivative must extend continuously; otherwise this is
    /// the `not C^k at 0` error (e.g. Chi for any k ≥ 1).
    pub fn eval_derivative(&self, k: usize, t: f64) -> Result<Complex64> {
        if t < 0.0 {
            return Err(Error::Domain(format!(
                "eval_derivative requires t >= 0, got {t}"
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, atom) in self.terms() {
            let d = AtomDerivative::build(&atom, k);
            if t == 0.0 && d.blows_up_at_zero() {
                return Err(Error::NotCk {
                    k,
                    what: format!("{atom:?} has unbounded derivative as t -> 0+"),
                });
            }
            acc += c * d.eval_real(t);
        }
        Ok(acc)
    }

    /// Closed-form n-th boundary derivative f̂⁽ⁿ⁾(α₀) at the distinguished
    /// point, when the family admits one. Phi and combinations return None.
    pub fn closed_taylor_coeff(&self, n: usize) -> Option<LogComplex> {
        let phase = LogComplex::phase_of_minus_i_pow((n % 4) as u32);
        match self {
            Self::Chi { .. } => {
                // 2 (-i)^n (2n+1)!
                Some(LogComplex::new(
                    2f64.ln() + ln_gamma(2.0 * n as f64 + 2.0),
                    phase,
                ))
            }
            Self::PsiP { p } => {
                // (-i)^n (1/p) Γ((n+1)/p)
                Some(LogComplex::new(
                    -p.ln() + ln_gamma((n as f64 + 1.0) / p),
                    phase,
                ))
            }
            Self::XAlphaM { m, .. } => {
                // (-i)^n M² (M²n + M² - 1)! = (-i)^n M² Γ(M²(n+1))
                let m2 = (*m as f64) * (*m as f64);
                Some(LogComplex::new(
                    m2.ln() + ln_gamma(m2 * (n as f64 + 1.0)),
                    phase,
                ))
            }
            Self::PolyExp { nu, sigma } => {
                Some(polyexp_hft_derivative(*nu, *sigma, n, Complex64::new(0.0, 0.0)))
            }
            Self::Phi { .. } | Self::Combination(_) => None,
        }
    }

    /// Schwartz-class membership and the first derivative order that fails
    /// to extend continuously to t = 0 (None when all orders do).
    pub fn smoothness_report(&self) -> SmoothnessReport {
        let (member, first_fail) = match self {
            Self::Chi { .. } => (false, Some(1)),
            Self::Phi { .. } | Self::PolyExp { .. } => (true, None),
            // e^{-t^p}: smooth at 0 exactly when p is a positive integer;
            // otherwise the ⌈p⌉-th derivative carries a t^{p-⌈p⌉} term.
            Self::PsiP { p } => {
                if (p.round() - p).abs() == 0.0 && *p >= 1.0 {
                    (true, None)
                } else {
                    (false, Some(p.ceil() as usize))
                }
            }
            // 1/M² ∈ (0,1), so the first derivative already blows up at 0+.
            Self::XAlphaM { .. } => (false, Some(1)),
            Self::Combination(terms) => {
                let mut fail: Option<usize> = None;
                for (_, f) in terms {
                    if let Some(k) = f.smoothness_report().first_failing_derivative {
                        fail = Some(fail.map_or(k, |cur: usize| cur.min(k)));
                    }
                }
                (fail.is_none(), fail)
            }
        };
        SmoothnessReport {
            function: self.clone(),
            schwartz_member: member,
            first_failing_derivative: first_fail,
        }
    }
}

/// Principal power t^q with the convention arg t ∈ (-π, π].
fn cpow(t: Complex64, q: f64) -> Complex64 {
    if t == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(t.norm().powf(q), principal_arg(t) * q)
}

/// arg t normalized so the negative real axis gets +π (not -π from a -0.0
/// imaginary part).
pub(crate) fn principal_arg(t: Complex64) -> f64 {
    let a = t.arg();
    if a == -PI {
        PI
    } else {
        a
    }
}

/// Classification of a function's membership in the half-line Schwartz class.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessReport {
    pub function: HalfLineFunction,
    pub schwartz_member: bool,
    pub first_failing_derivative: Option<usize>,
}

/// Global closed form for the PolyExp transform derivatives:
/// f̂⁽ⁿ⁾(z) = (-i)^n (ν+n)! / (σ+iz)^{ν+n+1}, valid for every z with
/// σ + iz ≠ 0 (the pole sits at z = iσ in the upper half-plane).
pub fn polyexp_hft_derivative(nu: u32, sigma: Complex64, n: usize, z: Complex64) -> LogComplex {
    let denom = sigma + Complex64::new(0.0, 1.0) * z;
    let pw = (nu as f64) + (n as f64) + 1.0;
    LogComplex::new(
        ln_gamma((nu + n as u32) as f64 + 1.0) - pw * denom.norm().ln(),
        LogComplex::phase_of_minus_i_pow((n % 4) as u32) - pw * principal_arg(denom),
    )
}

// ---------------------------------------------------------------------------
// Exact derivative calculus
// ---------------------------------------------------------------------------

/// Derivative of one demodulated profile in closed term form.
#[derive(Debug, Clone)]
enum BaseDerivative {
    /// Σ a_j (t+c)^{-j/2} · e^{-√(t+c)}
    SqrtExp { offset: f64, terms: Vec<(f64, u32)> },
    /// Σ a t^{u·p - v} · e^{-t^p}
    PowExp { p: f64, terms: Vec<(f64, u32, i64)> },
    /// Σ a t^m · e^{-σt}
    PolyExp {
        sigma: Complex64,
        terms: Vec<(Complex64, u32)>,
    },
}

impl BaseDerivative {
    fn order_zero(atom: &HalfLineFunction) -> Self {
        match atom {
            HalfLineFunction::Chi { .. } => Self::SqrtExp {
                offset: 0.0,
                terms: vec![(1.0, 0)],
            },
            HalfLineFunction::Phi { .. } => Self::SqrtExp {
                offset: 1.0,
                terms: vec![(1.0, 0)],
            },
            HalfLineFunction::PsiP { p } => Self::PowExp {
                p: *p,
                terms: vec![(1.0, 0, 0)],
            },
            HalfLineFunction::XAlphaM { m, .. } => Self::PowExp {
                p: 1.0 / ((*m as f64) * (*m as f64)),
                terms: vec![(1.0, 0, 0)],
            },
            HalfLineFunction::PolyExp { nu, sigma } => Self::PolyExp {
                sigma: *sigma,
                terms: vec![(Complex64::new(1.0, 0.0), *nu)],
            },
            HalfLineFunction::Combination(_) => unreachable!("per-atom only"),
        }
    }

    fn differentiate(&self) -> Self {
        match self {
            Self::SqrtExp { offset, terms } => {
                // d/dt [a (t+c)^{-j/2} e^{-√(t+c)}]
                //   = -a(j/2) (t+c)^{-(j+2)/2} e^… - (a/2) (t+c)^{-(j+1)/2} e^…
                let mut next: Vec<(f64, u32)> = Vec::new();
                let mut add = |coeff: f64, j: u32| {
                    if coeff == 0.0 {
                        return;
                    }
                    if let Some(slot) = next.iter_mut().find(|(_, jj)| *jj == j) {
                        slot.0 += coeff;
                    } else {
                        next.push((coeff, j));
                    }
                };
                for &(a, j) in terms {
                    add(-a * (j as f64) / 2.0, j + 2);
                    add(-a / 2.0, j + 1);
                }
                next.retain(|(a, _)| *a != 0.0);
                next.sort_by_key(|&(_, j)| j);
                Self::SqrtExp {
                    offset: *offset,
                    terms: next,
                }
            }
            Self::PowExp { p, terms } => {
                // d/dt [a t^{up-v} e^{-t^p}] = a(up-v) t^{up-v-1} e^… - a p t^{(u+1)p-v-1} e^…
                let mut next: Vec<(f64, u32, i64)> = Vec::new();
                let mut add = |coeff: f64, u: u32, v: i64| {
                    if coeff == 0.0 {
                        return;
                    }
                    if let Some(slot) = next.iter_mut().find(|(_, uu, vv)| *uu == u && *vv == v) {
                        slot.0 += coeff;
                    } else {
                        next.push((coeff, u, v));
                    }
                };
                for &(a, u, v) in terms {
                    let e = (u as f64) * p - v as f64;
                    add(a * e, u, v + 1);
                    add(-a * p, u + 1, v + 1);
                }
                next.retain(|(a, _, _)| *a != 0.0);
                next.sort_by_key(|&(_, u, v)| (u, v));
                Self::PowExp { p: *p, terms: next }
            }
            Self::PolyExp { sigma, terms } => {
                let mut next: Vec<(Complex64, u32)> = Vec::new();
                let mut add = |coeff: Complex64, m: u32| {
                    if coeff.norm() == 0.0 {
                        return;
                    }
                    if let Some(slot) = next.iter_mut().find(|(_, mm)| *mm == m) {
                        slot.0 += coeff;
                    } else {
                        next.push((coeff, m));
                    }
                };
                for &(a, m) in terms {
                    if m > 0 {
                        add(a * m as f64, m - 1);
                    }
                    add(-a * sigma, m + 1);
                }
                next.sort_by_key(|&(_, m)| m);
                Self::PolyExp {
                    sigma: *sigma,
                    terms: next,
                }
            }
        }
    }

    /// Most negative power-of-t exponent carried by the term list; derivative
    /// orders whose minimum exponent is negative blow up as t → 0+.
    fn min_exponent_at_zero(&self) -> f64 {
        match self {
            Self::SqrtExp { offset, terms } => {
                if *offset > 0.0 {
                    return 0.0;
                }
                terms
                    .iter()
                    .map(|&(_, j)| -(j as f64) / 2.0)
                    .fold(0.0, f64::min)
            }
            Self::PowExp { p, terms } => {
                // merge near-equal exponents so dyadic p (e.g. 1/2) cannot
                // fake a blow-up through cancelling lattice points
                let mut exps: Vec<(f64, f64)> = Vec::new();
                for &(a, u, v) in terms {
                    let e = (u as f64) * p - v as f64;
                    if let Some(slot) = exps.iter_mut().find(|(ee, _)| (*ee - e).abs() < 1e-12) {
                        slot.1 += a;
                    } else {
                        exps.push((e, a));
                    }
                }
                exps.iter()
                    .filter(|(_, a)| a.abs() > 1e-300)
                    .map(|(e, _)| *e)
                    .fold(0.0, f64::min)
            }
            Self::PolyExp { .. } => 0.0,
        }
    }

    fn eval_real(&self, t: f64) -> Complex64 {
        match self {
            Self::SqrtExp { offset, terms } => {
                let s = t + offset;
                let root = s.sqrt();
                let mut poly = 0.0;
                for &(a, j) in terms {
                    poly += a * root.powi(-(j as i32));
                }
                Complex64::new(poly * (-root).exp(), 0.0)
            }
            Self::PowExp { p, terms } => {
                let mut poly = 0.0;
                for &(a, u, v) in terms {
                    let e = (u as f64) * p - v as f64;
                    let val = if t == 0.0 {
                        if e == 0.0 {
                            1.0
                        } else if e > 0.0 {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        t.powf(e)
                    };
                    poly += a * val;
                }
                Complex64::new(poly * (-t.powf(*p)).exp(), 0.0)
            }
            Self::PolyExp { sigma, terms } => {
                let mut poly = Complex64::new(0.0, 0.0);
                for &(a, m) in terms {
                    poly += a * t.powi(m as i32);
                }
                poly * (-sigma * t).exp()
            }
        }
    }

    /// Log-domain evaluation at complex t (|arg t| < π/2), used when the
    /// derivative itself is integrated along a rotated ray.
    fn eval_log(&self, t: Complex64) -> LogComplex {
        match self {
            Self::SqrtExp { offset, terms } => {
                let root = (t + offset).sqrt();
                let mut sum = LogSum::new();
                for &(a, j) in terms {
                    let pw = root.powi(-(j as i32));
                    sum.push(LogComplex::from_complex(Complex64::new(a, 0.0) * pw));
                }
                sum.value().mul(&LogComplex::exp_of(-root))
            }
            Self::PowExp { p, terms } => {
                let la = t.norm().ln();
                let arg = principal_arg(t);
                let mut sum = LogSum::new();
                for &(a, u, v) in terms {
                    let e = (u as f64) * p - v as f64;
                    sum.push(
                        LogComplex::from_real(a).mul(&LogComplex::new(e * la, e * arg)),
                    );
                }
                sum.value().mul(&LogComplex::exp_of(-cpow(t, *p)))
            }
            Self::PolyExp { sigma, terms } => {
                let la = t.norm().ln();
                let arg = principal_arg(t);
                let mut sum = LogSum::new();
                for &(a, m) in terms {
                    sum.push(
                        LogComplex::from_complex(a)
                            .mul(&LogComplex::new(m as f64 * la, m as f64 * arg)),
                    );
                }
                sum.value().mul(&LogComplex::exp_of(-sigma * t))
            }
        }
    }
}

/// k-th derivative of a modulated atom e^{iαt}·g(t): by the Leibniz rule a
/// weighted stack of the base derivatives g⁽⁰⁾ … g⁽ᵏ⁾.
pub(crate) struct AtomDerivative {
    alpha: f64,
    order: usize,
    bases: Vec<BaseDerivative>,
}

impl AtomDerivative {
    pub fn build(atom: &HalfLineFunction, k: usize) -> Self {
        let mut bases = Vec::with_capacity(k + 1);
        let mut cur = BaseDerivative::order_zero(atom);
        bases.push(cur.clone());
        for _ in 0..k {
            cur = cur.differentiate();
            bases.push(cur.clone());
        }
        Self {
            alpha: atom.modulation(),
            order: k,
            bases,
        }
    }

    pub fn blows_up_at_zero(&self) -> bool {
        self.min_exponent_at_zero() < 0.0
    }

    /// Most negative power of t present at 0 across the Leibniz stack.
    pub fn min_exponent_at_zero(&self) -> f64 {
        self.bases
            .iter()
            .map(|b| b.min_exponent_at_zero())
            .fold(0.0, f64::min)
    }

    pub fn eval_real(&self, t: f64) -> Complex64 {
        let k = self.order;
        if self.alpha == 0.0 {
            return self.bases[k].eval_real(t);
        }
        let ia = Complex64::new(0.0, self.alpha);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut ia_pow = Complex64::new(1.0, 0.0);
        for j in 0..=k {
            let binom = ln_binomial(k as u64, j as u64).exp();
            acc += binom * ia_pow * self.bases[k - j].eval_real(t);
            ia_pow *= ia;
        }
        acc * Complex64::new(0.0, self.alpha * t).exp()
    }

    pub fn eval_log(&self, t: Complex64) -> LogComplex {
        let k = self.order;
        let modulation = LogComplex::exp_of(Complex64::new(0.0, 1.0) * (self.alpha * t));
        if self.alpha == 0.0 {
            return self.bases[k].eval_log(t);
        }
        let ia = LogComplex::from_complex(Complex64::new(0.0, self.alpha));
        let mut sum = LogSum::new();
        for j in 0..=k {
            let w = LogComplex::from_log_abs(ln_binomial(k as u64, j as u64))
                .mul(&ia.powi(j as i32));
            sum.push(w.mul(&self.bases[k - j].eval_log(t)));
        }
        sum.value().mul(&modulation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn eval_examples() {
        let chi0 = HalfLineFunction::chi(0.0);
        assert!(close(chi0.eval(0.0).unwrap(), c64(1.0, 0.0), 1e-15));
        let phi0 = HalfLineFunction::phi(0.0);
        assert!(close(phi0.eval(0.0).unwrap(), c64((-1f64).exp(), 0.0), 1e-15));
        let psi = HalfLineFunction::psi_p(0.5).unwrap();
        assert!(close(psi.eval(4.0).unwrap(), c64((-2f64).exp(), 0.0), 1e-15));
        assert!(chi0.eval(-1.0).is_err());
    }

    #[test]
    fn modulation_is_exact() {
        let a = 2.5;
        let chi_a = HalfLineFunction::chi(a);
        let chi_0 = HalfLineFunction::chi(0.0);
        for &t in &[0.0, 0.3, 1.0, 7.5, 100.0] {
            let lhs = chi_a.eval(t).unwrap();
            let rhs = c64(0.0, a * t).exp() * chi_0.eval(t).unwrap();
            assert!((lhs - rhs).norm() <= 1e-15 * rhs.norm().max(1e-300));
        }
    }

    #[test]
    fn derivative_examples() {
        // Phi(0)' at 0 = -e^{-1}/2
        let phi0 = HalfLineFunction::phi(0.0);
        let d = phi0.eval_derivative(1, 0.0).unwrap();
        assert!(close(d, c64(-(-1f64).exp() / 2.0, 0.0), 1e-14));

        // d/dt (t e^{-t}) at 0 = 1
        let pe = HalfLineFunction::poly_exp(1, c64(1.0, 0.0)).unwrap();
        assert!(close(pe.eval_derivative(1, 0.0).unwrap(), c64(1.0, 0.0), 1e-14));

        // Chi is not C^1 at 0
        let chi0 = HalfLineFunction::chi(0.0);
        assert!(matches!(
            chi0.eval_derivative(1, 0.0),
            Err(Error::NotCk { k: 1, .. })
        ));
        // ... but is evaluable for t > 0
        let d = chi0.eval_derivative(1, 1.0).unwrap();
        assert!(close(d, c64(-0.5 * (-1f64).exp(), 0.0), 1e-13));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let funcs: Vec<HalfLineFunction> = vec![
            HalfLineFunction::chi(0.0),
            HalfLineFunction::chi(1.5),
            HalfLineFunction::phi(0.7),
            HalfLineFunction::psi_p(0.5).unwrap(),
            HalfLineFunction::psi_p(0.3).unwrap(),
            HalfLineFunction::x_alpha_m(0.4, 2).unwrap(),
            HalfLineFunction::poly_exp(2, c64(1.0, 0.5)).unwrap(),
        ];
        for f in &funcs {
            for k in 1..=4usize {
                for &t in &[0.5, 1.0, 5.0] {
                    let exact = f.eval_derivative(k, t).unwrap();
                    // five-point central stencil on the (k-1)-th derivative
                    let h = 1e-3 * t.max(1.0);
                    let g = |x: f64| f.eval_derivative(k - 1, x).unwrap();
                    let fd = (-g(t + 2.0 * h) + 8.0 * g(t + h) - 8.0 * g(t - h)
                        + g(t - 2.0 * h))
                        / (12.0 * h);
                    assert!(
                        (exact - fd).norm() <= 1e-6 * exact.norm().max(1e-6),
                        "{f:?} k={k} t={t}: exact {exact} vs fd {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_coeffs() {
        // Chi(0), n = 4 -> 2·9!, phase 0
        let v = HalfLineFunction::chi(0.0).closed_taylor_coeff(4).unwrap();
        let exact: u128 = (1..=9u128).product();
        assert!((v.log_abs - (2.0 * exact as f64).ln()).abs() < 1e-10);
        assert_eq!(v.phase, 0.0);

        // PsiP(1/3), n = 2 -> 3·Γ(9) = 3·8!, phase of (-1)
        let v = HalfLineFunction::psi_p(1.0 / 3.0)
            .unwrap()
            .closed_taylor_coeff(2)
            .unwrap();
        let exact: u128 = (1..=8u128).product();
        assert!((v.log_abs - (3.0 * exact as f64).ln()).abs() < 1e-9);
        assert!((v.phase - PI).abs() < 1e-12);

        // XAlphaM(0,2), n = 1 -> 4·7!, phase of (-i)
        let v = HalfLineFunction::x_alpha_m(0.0, 2)
            .unwrap()
            .closed_taylor_coeff(1)
            .unwrap();
        assert!((v.log_abs - (4.0 * 5040.0f64).ln()).abs() < 1e-10);
        assert!((v.phase + PI / 2.0).abs() < 1e-12);

        assert!(HalfLineFunction::phi(0.0).closed_taylor_coeff(3).is_none());
    }

    #[test]
    fn psi_half_equals_chi_law() {
        // (1/p)Γ((n+1)/p) at p = 1/2 is 2(2n+1)!
        let psi = HalfLineFunction::psi_p(0.5).unwrap();
        let chi = HalfLineFunction::chi(0.0);
        for n in 0..=30 {
            let a = psi.closed_taylor_coeff(n).unwrap();
            let b = chi.closed_taylor_coeff(n).unwrap();
            assert!(
                (a.log_abs - b.log_abs).abs() <= 1e-12 * b.log_abs.abs().max(1.0),
                "n={n}"
            );
            assert_eq!(a.phase, b.phase);
        }
    }

    #[test]
    fn smoothness_reports() {
        let r = HalfLineFunction::chi(2.0).smoothness_report();
        assert!(!r.schwartz_member);
        assert_eq!(r.first_failing_derivative, Some(1));

        let r = HalfLineFunction::phi(2.0).smoothness_report();
        assert!(r.schwartz_member);
        assert_eq!(r.first_failing_derivative, None);

        let r = HalfLineFunction::poly_exp(3, c64(1.0, 0.5))
            .unwrap()
            .smoothness_report();
        assert!(r.schwartz_member);

        // e^{-t^p} for p in (0,1) fails at k = 1; between 1 and 2 at k = 2;
        // integer p is smooth
        assert_eq!(
            HalfLineFunction::psi_p(0.5)
                .unwrap()
                .smoothness_report()
                .first_failing_derivative,
            Some(1)
        );
        assert_eq!(
            HalfLineFunction::psi_p(1.5)
                .unwrap()
                .smoothness_report()
                .first_failing_derivative,
            Some(2)
        );
        assert_eq!(
            HalfLineFunction::psi_p(2.0)
                .unwrap()
                .smoothness_report()
                .first_failing_derivative,
            None
        );

        // the slow-variation profile e^{-t^{1/M²}} is continuous but not C¹
        let r = HalfLineFunction::x_alpha_m(0.0, 2).unwrap().smoothness_report();
        assert!(!r.schwartz_member);
        assert_eq!(r.first_failing_derivative, Some(1));
    }

    #[test]
    fn combination_normalization() {
        let f = HalfLineFunction::combination(vec![
            (c64(1.0, 0.0), HalfLineFunction::chi(0.0)),
            (
                c64(2.0, 0.0),
                HalfLineFunction::combination(vec![
                    (c64(0.5, 0.0), HalfLineFunction::chi(0.0)),
                    (c64(1.0, 0.0), HalfLineFunction::phi(1.0)),
                ]),
            ),
        ]);
        match &f {
            HalfLineFunction::Combination(terms) => {
                assert_eq!(terms.len(), 2);
                assert_eq!(terms[0].0, c64(2.0, 0.0)); // 1 + 2·0.5 on chi
            }
            _ => panic!("expected combination"),
        }
        // exact cancellation drops the term
        let g = HalfLineFunction::combination(vec![
            (c64(1.0, 0.0), HalfLineFunction::chi(0.0)),
            (c64(-1.0, 0.0), HalfLineFunction::chi(0.0)),
        ]);
        assert_eq!(g, HalfLineFunction::Combination(vec![]));

        let m_err = HalfLineFunction::x_alpha_m(0.0, 1);
        assert!(m_err.is_err());
    }

    #[test]
    fn polyexp_global_law_at_real_points() {
        // n = 0, z = 1, σ = 1: 1/(1+i)
        let v = polyexp_hft_derivative(0, c64(1.0, 0.0), 0, c64(1.0, 0.0)).to_complex();
        assert!(close(v, c64(0.5, -0.5), 1e-14));
        // n = 3, z = 0, σ = 1: (-i)³ 3! = 6i
        let v = polyexp_hft_derivative(0, c64(1.0, 0.0), 3, c64(0.0, 0.0)).to_complex();
        assert!(close(v, c64(0.0, 6.0), 1e-13));
    }
}
