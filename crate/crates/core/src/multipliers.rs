//! Spectral symbols of 𝒫_s, 𝒫̃_s and their difference, bottoms of spectrum, b_s and the gap.

use core::f64::consts::PI;

use crate::special::{gamma, ln_abs_gamma_sq, sin_pi};
use crate::{Error, MultiplierKind, Params, Result, TOLERANCES};
#[allow(unused_imports)]
use num_traits::Float;

/// True when s = 3/2 + 2k, where the GJMS denominator has a pole at β = 0.
pub fn is_exceptional_order(s: f64) -> bool {
    let k = (s - 1.5) / 2.0;
    k > -TOLERANCES.pole && (k - k.round()).abs() < TOLERANCES.pole / 2.0
}

fn intertwined(s: f64, beta: f64) -> Result<f64> {
    Ok((ln_abs_gamma_sq(s + 0.5, beta)? - ln_abs_gamma_sq(0.5, beta)?).exp())
}

fn remainder(s: f64, beta: f64) -> Result<f64> {
    let sp = sin_pi(s);
    if sp == 0.0 {
        return Ok(0.0);
    }
    Ok(sp / PI * ln_abs_gamma_sq(s + 0.5, beta)?.exp())
}

fn gjms(s: f64, beta: f64) -> Result<f64> {
    // At integer s the remainder vanishes identically and both symbols coincide.
    if is_exceptional_order(s) || sin_pi(s) == 0.0 {
        return Ok(intertwined(s, beta)? + remainder(s, beta)?);
    }
    let num = ln_abs_gamma_sq((3.0 + 2.0 * s) / 4.0, beta / 2.0)?;
    let den = ln_abs_gamma_sq((3.0 - 2.0 * s) / 4.0, beta / 2.0)?;
    Ok((2.0 * s * core::f64::consts::LN_2 + num - den).exp())
}

/// Value of the chosen spectral symbol at frequency β.
pub fn multiplier(kind: MultiplierKind, p: &Params, beta: f64) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::Domain {
            what: "frequency",
            value: beta,
        });
    }
    let beta = beta.abs();
    let s = p.s();
    match kind {
        MultiplierKind::Gjms => gjms(s, beta),
        MultiplierKind::Intertwined => intertwined(s, beta),
        MultiplierKind::Remainder => remainder(s, beta),
    }
}

/// k when s is a positive integer k (both symbols are then polynomials in β²).
fn integer_order(s: f64) -> Option<u32> {
    (s == s.round() && (1.0..=64.0).contains(&s)).then_some(s as u32)
}

/// Multiplier value for tables: the product form at integer s (exact on rational β², and the
/// remainder vanishes), the Gamma ratio otherwise.
pub fn tabulated_multiplier(kind: MultiplierKind, p: &Params, beta: f64) -> Result<f64> {
    match integer_order(p.s()) {
        Some(k) if beta.is_finite() => Ok(match kind {
            MultiplierKind::Remainder => 0.0,
            _ => integer_multiplier(k, beta),
        }),
        _ => multiplier(kind, p, beta),
    }
}

/// Bottom of the L² spectrum: the symbol at β = 0.
pub fn spectral_bottom(kind: MultiplierKind, p: &Params) -> Result<f64> {
    let s = p.s();
    if let (Some(k), false) = (integer_order(s), kind == MultiplierKind::Remainder) {
        return Ok(integer_multiplier(k, 0.0));
    }
    match kind {
        MultiplierKind::Intertwined => Ok(gamma(s + 0.5)?.powi(2) / PI),
        MultiplierKind::Gjms => {
            if is_exceptional_order(s) {
                return Ok(0.0);
            }
            let num = gamma((3.0 + 2.0 * s) / 4.0)?;
            let den = gamma((3.0 - 2.0 * s) / 4.0)?;
            Ok(4f64.powf(s) * (num / den).powi(2))
        }
        MultiplierKind::Remainder => Err(Error::InvalidParameter {
            what: "spectral bottom of the remainder symbol",
            value: s,
        }),
    }
}

/// b_s = max{0, sin(πs)/π}·Γ(s+½)².
pub fn b_constant(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter {
            what: "order s",
            value: s,
        });
    }
    let sp = sin_pi(s);
    if sp <= 0.0 {
        return Ok(0.0);
    }
    Ok(sp / PI * gamma(s + 0.5)?.powi(2))
}

/// Optimal lower shift: λ₀ − b_s in closed form.
pub fn gap_constant(s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter {
            what: "order s",
            value: s,
        });
    }
    if let Some(k) = integer_order(s) {
        return Ok(integer_multiplier(k, 0.0));
    }
    let g2 = gamma(s + 0.5)?.powi(2);
    let sp = sin_pi(s);
    if sp > 0.0 {
        Ok(g2 / PI)
    } else {
        Ok((1.0 + sp) / PI * g2)
    }
}

/// ∏_{j=1}^{k} (β² + (j − ½)²).
pub fn integer_multiplier(k: u32, beta: f64) -> f64 {
    let b2 = beta * beta;
    (1..=k).map(|j| b2 + (j as f64 - 0.5).powi(2)).product()
}

/// Max over a uniform β-grid of |m − m̃ − remainder| / (1 + m).
pub fn verify_decomposition(p: &Params, beta_max: f64, count: usize) -> Result<f64> {
    if !(beta_max > 0.0) || count < 2 {
        return Err(Error::InvalidParameter {
            what: "decomposition grid",
            value: beta_max,
        });
    }
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let beta = beta_max * i as f64 / (count - 1) as f64;
        let m = multiplier(MultiplierKind::Gjms, p, beta)?;
        let mt = multiplier(MultiplierKind::Intertwined, p, beta)?;
        let r = multiplier(MultiplierKind::Remainder, p, beta)?;
        worst = worst.max((m - mt - r).abs() / (1.0 + m));
    }
    Ok(worst)
}
