//! Radial profiles sampled on composite Gauss–Legendre grids.

use alloc::vec::Vec;

use crate::geometry::sphere_area;
use crate::quadrature::{gauss_legendre, GridKind, RadialGrid};
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A radial profile on ℍⁿ (geodesic radius) or ℝⁿ (Euclidean radius).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
    support_radius: f64,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>, support_radius: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter {
                what: "sample count",
                value: values.len() as f64,
            });
        }
        if !(support_radius >= 0.0) {
            return Err(Error::Support {
                radius: support_radius,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "non-finite sample",
                value: f64::NAN,
            });
        }
        if grid
            .nodes()
            .iter()
            .zip(&values)
            .any(|(&r, &v)| r > support_radius && v != 0.0)
        {
            return Err(Error::Support {
                radius: support_radius,
            });
        }
        Ok(RadialFunction {
            grid,
            values,
            support_radius,
        })
    }

    /// Samples `f` at the grid nodes, zeroing every node beyond the support radius.
    pub fn sample<F: FnMut(f64) -> f64>(
        grid: RadialGrid,
        support_radius: f64,
        mut f: F,
    ) -> Result<Self> {
        let values = grid
            .nodes()
            .iter()
            .map(|&r| if r > support_radius { 0.0 } else { f(r) })
            .collect();
        Self::new(grid, values, support_radius)
    }

    pub fn zero(grid: RadialGrid) -> Self {
        let values = alloc::vec![0.0; grid.len()];
        let support_radius = grid.upper();
        RadialFunction {
            grid,
            values,
            support_radius,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn space(&self) -> GridKind {
        self.grid.kind()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        RadialFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            support_radius: self.support_radius,
        }
    }

    /// Measure density at radius r: ω_{n−1} r^{n−1} or ω_{n−1} sinh^{n−1} r.
    pub fn volume_density(&self, n: u32, r: f64) -> f64 {
        volume_density(self.space(), n, r)
    }

    /// ∫ |f|^q over the space.
    pub fn lp_integral(&self, n: u32, q: f64) -> f64 {
        let kind = self.space();
        self.grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(&self.values)
            .map(|((&r, &w), &v)| {
                if v == 0.0 {
                    0.0
                } else {
                    w * v.abs().powf(q) * volume_density(kind, n, r)
                }
            })
            .sum()
    }

    /// ∫ |f|² over the space.
    pub fn l2_norm_sq(&self, n: u32) -> f64 {
        self.lp_integral(n, 2.0)
    }

    /// Value at r by Lagrange interpolation on the containing panel (0 outside the grid).
    pub fn eval(&self, r: f64) -> f64 {
        let rule = gauss_legendre(self.panel_size());
        self.eval_with(&rule, r)
    }

    /// Values at many radii, sharing one interpolation rule.
    pub fn eval_many(&self, radii: &[f64]) -> Vec<f64> {
        let rule = gauss_legendre(self.panel_size());
        radii.iter().map(|&r| self.eval_with(&rule, r)).collect()
    }

    fn panel_size(&self) -> usize {
        self.grid.len() / (self.grid.breaks().len() - 1)
    }

    fn eval_with(&self, rule: &(Vec<f64>, Vec<f64>), r: f64) -> f64 {
        let breaks = self.grid.breaks();
        if r < breaks[0] || r > breaks[breaks.len() - 1] || r > self.support_radius {
            return 0.0;
        }
        let panel = match breaks.binary_search_by(|b| b.total_cmp(&r)) {
            Ok(i) => i.min(breaks.len() - 2),
            Err(i) => i - 1,
        };
        let per_panel = rule.0.len();
        let values = &self.values[panel * per_panel..(panel + 1) * per_panel];
        let (a, b) = (breaks[panel], breaks[panel + 1]);
        let t = (2.0 * r - a - b) / (b - a);
        barycentric(&rule.0, &rule.1, values, t).unwrap_or_else(|j| values[j])
    }
}

/// Barycentric interpolation through Gauss–Legendre nodes; Err(j) when t hits node j.
fn barycentric(x: &[f64], w: &[f64], values: &[f64], t: f64) -> core::result::Result<f64, usize> {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..x.len() {
        let d = t - x[j];
        if d == 0.0 {
            return Err(j);
        }
        let lam = if j % 2 == 0 { 1.0 } else { -1.0 } * ((1.0 - x[j] * x[j]) * w[j]).sqrt();
        num += lam / d * values[j];
        den += lam / d;
    }
    Ok(num / den)
}

/// ω_{n−1} r^{n−1} (Euclidean) or ω_{n−1} sinh^{n−1} r (hyperbolic).
pub fn volume_density(kind: GridKind, n: u32, r: f64) -> f64 {
    let base = match kind {
        GridKind::Euclidean => r,
        GridKind::HyperbolicGeodesic => r.sinh(),
    };
    sphere_area(n) * base.powi(n as i32 - 1)
}
