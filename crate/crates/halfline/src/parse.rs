//! Compact textual grammar for function specs and complex literals.
//!
//! ```text
//! spec     := atom | "sum:" term ("+" term)*
//! term     := "(" complex ")" "*" atom
//! atom     := "chi:alpha=" real
//!           | "phi:alpha=" real
//!           | "psi:p=" real
//!           | "x:alpha=" real ",M=" integer
//!           | "polyexp:nu=" integer ",sigma=" complex
//! complex  := real | real sign unsigned-real "i" | [real] sign? unsigned-real "i" | "i"-forms
//! ```
//!
//! Complex literals accept `1`, `2i`, `-3.5e-2+1i`, `1-0.5i`. The canonical
//! form printed by [`format_function_spec`] parses back to the same value
//! (`parse ∘ format = id`), which the fuzz targets exercise.

use crate::catalog::HalfLineFunction;
use crate::{Error, Result};
use num_complex::Complex64;

/// Parse `a+bi` style complex literals.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // split at the last top-level sign that separates re and im
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            parse_real(re_str)?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(parse_real(s)?, 0.0))
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad real literal {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite literal {s:?}")));
    }
    Ok(v)
}

/// Canonical complex literal: always `a+bi` / `a-bi`, shortest round-trip
/// float formatting.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

/// Parse the compact function-spec grammar.
pub fn parse_function_spec(s: &str) -> Result<HalfLineFunction> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("sum:") {
        let mut terms = Vec::new();
        for piece in split_sum_terms(body)? {
            terms.push(parse_sum_term(piece)?);
        }
        if terms.is_empty() {
            return Ok(HalfLineFunction::Combination(vec![]));
        }
        Ok(HalfLineFunction::combination(terms))
    } else {
        parse_atom(s)
    }
}

/// Terms are `(coeff)*atom` joined by `+`. A `+` starts a new term exactly
/// when the next character opens the coefficient parenthesis, so complex
/// parameters like `sigma=1+2i` never split.
fn split_sum_terms(body: &str) -> Result<Vec<&str>> {
    if body.trim().is_empty() {
        return Ok(vec![]);
    }
    let bytes = body.as_bytes();
    let mut starts = vec![0usize];
    for i in 1..bytes.len() {
        if bytes[i - 1] == b'+' && bytes[i] == b'(' {
            starts.push(i);
        }
    }
    let mut pieces = Vec::new();
    for (k, &st) in starts.iter().enumerate() {
        let end = if k + 1 < starts.len() {
            starts[k + 1] - 1 // drop the joining '+'
        } else {
            bytes.len()
        };
        pieces.push(body[st..end].trim());
    }
    Ok(pieces)
}

fn parse_sum_term(piece: &str) -> Result<(Complex64, HalfLineFunction)> {
    let piece = piece.trim();
    let rest = piece
        .strip_prefix('(')
        .ok_or_else(|| Error::Parse(format!("sum term must start with '(': {piece:?}")))?;
    let close = rest
        .find(')')
        .ok_or_else(|| Error::Parse(format!("unterminated coefficient in {piece:?}")))?;
    let coeff = parse_complex(&rest[..close])?;
    let tail = rest[close + 1..].trim_start();
    let atom_str = tail
        .strip_prefix('*')
        .ok_or_else(|| Error::Parse(format!("expected '*' after coefficient in {piece:?}")))?;
    Ok((coeff, parse_atom(atom_str.trim())?))
}

fn parse_atom(s: &str) -> Result<HalfLineFunction> {
    let (head, params) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("unknown function spec {s:?}")))?;
    let kv = parse_params(params)?;
    let get = |key: &str| -> Result<&str> {
        kv.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Parse(format!("{head}: missing parameter {key:?}")))
    };
    let expect_keys = |keys: &[&str]| -> Result<()> {
        for (k, _) in &kv {
            if !keys.contains(k) {
                return Err(Error::Parse(format!("{head}: unknown parameter {k:?}")));
            }
        }
        Ok(())
    };
    match head {
        "chi" => {
            expect_keys(&["alpha"])?;
            Ok(HalfLineFunction::chi(parse_real(get("alpha")?)?))
        }
        "phi" => {
            expect_keys(&["alpha"])?;
            Ok(HalfLineFunction::phi(parse_real(get("alpha")?)?))
        }
        "psi" => {
            expect_keys(&["p"])?;
            HalfLineFunction::psi_p(parse_real(get("p")?)?)
        }
        "x" => {
            expect_keys(&["alpha", "M"])?;
            let m: u32 = get("M")?
                .parse()
                .map_err(|_| Error::Parse(format!("x: bad integer M={:?}", get("M").unwrap())))?;
            HalfLineFunction::x_alpha_m(parse_real(get("alpha")?)?, m)
        }
        "polyexp" => {
            expect_keys(&["nu", "sigma"])?;
            let nu: u32 = get("nu")?
                .parse()
                .map_err(|_| Error::Parse(format!("polyexp: bad integer nu={:?}", get("nu").unwrap())))?;
            HalfLineFunction::poly_exp(nu, parse_complex(get("sigma")?)?)
        }
        other => Err(Error::Parse(format!("unknown function family {other:?}"))),
    }
}

fn parse_params(s: &str) -> Result<Vec<(&str, &str)>> {
    let mut out = Vec::new();
    for piece in s.split(',') {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {piece:?}")))?;
        out.push((k.trim(), v.trim()));
    }
    Ok(out)
}

/// Canonical spec string; `parse_function_spec(format_function_spec(f)) == f`.
pub fn format_function_spec(f: &HalfLineFunction) -> String {
    match f {
        HalfLineFunction::Chi { alpha } => format!("chi:alpha={alpha}"),
        HalfLineFunction::Phi { alpha } => format!("phi:alpha={alpha}"),
        HalfLineFunction::PsiP { p } => format!("psi:p={p}"),
        HalfLineFunction::XAlphaM { alpha, m } => format!("x:alpha={alpha},M={m}"),
        HalfLineFunction::PolyExp { nu, sigma } => {
            format!("polyexp:nu={nu},sigma={}", format_complex(*sigma))
        }
        HalfLineFunction::Combination(terms) => {
            let body: Vec<String> = terms
                .iter()
                .map(|(c, f)| format!("({})*{}", format_complex(*c), format_function_spec(f)))
                .collect();
            format!("sum:{}", body.join("+"))
        }
    }
}

impl std::fmt::Display for HalfLineFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_function_spec(self))
    }
}

impl std::str::FromStr for HalfLineFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_function_spec(s)
    }
}
