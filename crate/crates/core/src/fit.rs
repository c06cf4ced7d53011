//! Least-squares line fits used by the rate experiments.

use alloc::vec::Vec;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Ordinary least-squares fit y ≈ slope·x + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual standard deviation (0 for two points).
    pub sigma: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::DegenerateData(
            "line fit needs at least two paired points",
        ));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateData("non-finite value in line fit"));
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateData("line fit abscissae coincide"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sigma = if x.len() > 2 {
        let ss: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - slope * a - intercept).powi(2))
            .sum();
        (ss / (m - 2.0)).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        sigma,
    })
}

/// Fit of log|y| against x. Fails if any |y| underflows.
pub fn log_linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let logs = log_abs(y)?;
    let fit = linear_fit(x, &logs)?;
    Ok((fit.slope, fit.intercept))
}

/// Fit of log|y| against log x.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::DegenerateData(
            "log-log fit needs positive abscissae",
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &log_abs(y)?)
}

/// Log-log fit that drops the point with the largest abscissa when its residual against the
/// fit of the remaining points exceeds twice that fit's σ. Needs four points to test.
pub fn robust_log_log_fit(x: &[f64], y: &[f64]) -> Result<(LineFit, bool)> {
    let fit = log_log_fit(x, y)?;
    if x.len() < 4 {
        return Ok((fit, false));
    }
    let imax = (0..x.len()).max_by(|&a, &b| x[a].total_cmp(&x[b])).unwrap();
    let xs: Vec<f64> = (0..x.len()).filter(|&i| i != imax).map(|i| x[i]).collect();
    let ys: Vec<f64> = (0..y.len()).filter(|&i| i != imax).map(|i| y[i]).collect();
    let rest = log_log_fit(&xs, &ys)?;
    let resid = y[imax].abs().ln() - rest.slope * x[imax].ln() - rest.intercept;
    if resid.abs() > 2.0 * rest.sigma {
        Ok((rest, true))
    } else {
        Ok((fit, false))
    }
}

fn log_abs(y: &[f64]) -> Result<Vec<f64>> {
    y.iter()
        .map(|&v| {
            let a = v.abs();
            if a < f64::MIN_POSITIVE || !a.is_finite() {
                Err(Error::DegenerateData("value underflows or is not finite"))
            } else {
                Ok(a.ln())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_lines() {
        let f = linear_fit(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.sigma < 1e-14);
        let (s, _) = log_linear_fit(
            &[2.0, 3.0, 4.0, 5.0],
            &[
                (-2.0f64).exp(),
                (-3.0f64).exp(),
                (-4.0f64).exp(),
                (-5.0f64).exp(),
            ],
        )
        .unwrap();
        assert!((s + 1.0).abs() < 1e-13);
        assert!(log_linear_fit(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn outlier_at_largest_abscissa_is_dropped() {
        let x = [0.01, 0.02, 0.04, 0.08, 0.16];
        let mut y: Vec<f64> = x
            .iter()
            .map(|v: &f64| 3.0 * v.powf(1.5) * (1.0 + 0.001 * v.sin()))
            .collect();
        y[4] *= 3.0;
        let (fit, dropped) = robust_log_log_fit(&x, &y).unwrap();
        assert!(dropped);
        assert!((fit.slope - 1.5).abs() < 1e-3);
        let clean: Vec<f64> = x
            .iter()
            .map(|v: &f64| 3.0 * v.powf(1.5) * (1.0 + 0.01 * (40.0 * v).sin()))
            .collect();
        assert!(!robust_log_log_fit(&x, &clean).unwrap().1);
    }

    proptest! {
        #[test]
        fn slope_ignores_scaling(c in 0.01f64..100.0, a in -3.0f64..-0.1) {
            let x = [2.0, 3.0, 4.0, 5.0, 6.0];
            let y: Vec<f64> = x.iter().map(|r: &f64| (a * r).exp() * (1.0 + 0.1 * r.cos())).collect();
            let scaled: Vec<f64> = y.iter().map(|v| c * v).collect();
            let (s1, _) = log_linear_fit(&x, &y).unwrap();
            let (s2, _) = log_linear_fit(&x, &scaled).unwrap();
            prop_assert!((s1 - s2).abs() < 1e-12);
        }
    }
}
