//! Cubic interpolating spline with a clamped left end and a natural right end.

use alloc::vec::Vec;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Interpolates (x_k, y_k) with S'(x_0) = `slope0` and S''(x_last) = 0.
    pub fn clamped_natural(x: &[f64], y: &[f64], slope0: f64) -> Result<Self> {
        let k = x.len();
        if k < 2 || y.len() != k {
            return Err(Error::InvalidParameter {
                what: "spline knot count",
                value: k as f64,
            });
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                what: "spline knots (need increasing)",
                value: f64::NAN,
            });
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        // Tridiagonal system for the second derivatives m_0..m_{k-1}, with m_{k-1} = 0.
        let mut sub = alloc::vec![0.0; k];
        let mut diag = alloc::vec![0.0; k];
        let mut sup = alloc::vec![0.0; k];
        let mut rhs = alloc::vec![0.0; k];
        diag[0] = h[0] / 3.0;
        sup[0] = h[0] / 6.0;
        rhs[0] = (y[1] - y[0]) / h[0] - slope0;
        for i in 1..k - 1 {
            sub[i] = h[i - 1] / 6.0;
            diag[i] = (h[i - 1] + h[i]) / 3.0;
            sup[i] = h[i] / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
        }
        diag[k - 1] = 1.0;
        rhs[k - 1] = 0.0;
        for i in 1..k {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = alloc::vec![0.0; k];
        m[k - 1] = rhs[k - 1] / diag[k - 1];
        for i in (0..k - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    /// Value at t; constant extension outside the knot range.
    pub fn eval(&self, t: f64) -> f64 {
        let k = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[k - 1] {
            return self.y[k - 1];
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// First derivative at t inside the knot range.
    pub fn derivative(&self, t: f64) -> f64 {
        let k = self.x.len();
        let t = t.clamp(self.x[0], self.x[k - 1]);
        let i = (self.x.partition_point(|&v| v <= t).max(1) - 1).min(k - 2);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0
    }
}
