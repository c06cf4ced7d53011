//! Ball-model geometry and the conformal lift between ℝⁿ and ℍⁿ profiles.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::quadrature::{GridKind, RadialGrid};
use crate::radial::RadialFunction;
use crate::special::gamma;
use crate::{Error, Params, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A point of the open unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        if coords.is_empty() || !(norm_sq < 1.0) || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain {
                what: "ball point norm",
                value: norm_sq.sqrt(),
            });
        }
        Ok(BallPoint { coords })
    }

    pub fn origin(n: usize) -> Self {
        BallPoint {
            coords: alloc::vec![0.0; n],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn same_dim(x: &BallPoint, y: &BallPoint) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::Domain {
            what: "dimension mismatch",
            value: y.dim() as f64,
        });
    }
    Ok(())
}

/// Surface area ω_{n−1} = 2π^{n/2}/Γ(n/2) of the unit sphere in ℝⁿ.
pub fn sphere_area(n: u32) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h).expect("Gamma is finite at positive half-integers")
}

/// φ(x) = 2/(1 − |x|²).
pub fn conformal_factor(x: &BallPoint) -> f64 {
    2.0 / (1.0 - x.norm_sq())
}

/// φ at Euclidean radius t.
pub fn conformal_factor_radius(t: f64) -> Result<f64> {
    if !(t.abs() < 1.0) {
        return Err(Error::Domain {
            what: "ball radius",
            value: t,
        });
    }
    Ok(2.0 / (1.0 - t * t))
}

/// Möbius map T_y(x) = (|x−y|² y − (1−|y|²)(x−y)) / (1 − 2x·y + |x|²|y|²).
pub fn mobius(y: &BallPoint, x: &BallPoint) -> Result<BallPoint> {
    same_dim(x, y)?;
    let (xs, ys) = (x.coords(), y.coords());
    let d2 = dist_sq(xs, ys);
    let y2 = y.norm_sq();
    let den = 1.0 - 2.0 * dot(xs, ys) + x.norm_sq() * y2;
    let coords: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(&xi, &yi)| (d2 * yi - (1.0 - y2) * (xi - yi)) / den)
        .collect();
    let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
    if !(norm_sq < 1.0) {
        // Rounding can only push points of norm ≈ 1; rescale onto the open ball.
        let scale = (1.0 - 1e-16) / norm_sq.sqrt();
        return BallPoint::new(coords.into_iter().map(|c| c * scale).collect());
    }
    Ok(BallPoint { coords })
}

/// Hyperbolic distance: cosh d = 1 + 2|x−y|²/((1−|x|²)(1−|y|²)).
pub fn distance(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    same_dim(x, y)?;
    let delta = 2.0 * dist_sq(x.coords(), y.coords()) / ((1.0 - x.norm_sq()) * (1.0 - y.norm_sq()));
    Ok((delta + (delta * (delta + 2.0)).sqrt()).ln_1p())
}

/// Geodesic radius of the Euclidean radius t: log((1+t)/(1−t)).
pub fn geodesic_radius(t: f64) -> f64 {
    2.0 * t.atanh()
}

/// Euclidean radius of the geodesic radius r: tanh(r/2).
pub fn euclidean_radius(r: f64) -> f64 {
    (r / 2.0).tanh()
}

/// Lift a Euclidean profile w (support inside the ball) to u = φ^{s−n/2} w on ℍⁿ.
///
/// The hyperbolic grid is the image of w's panels under r = log((1+t)/(1−t)), so the lift is
/// resolved wherever w is.
pub fn conformal_lift(w: &RadialFunction, p: &Params) -> Result<RadialFunction> {
    if w.space() != GridKind::Euclidean {
        return Err(Error::InvalidParameter {
            what: "lift source must be Euclidean",
            value: 0.0,
        });
    }
    let support = w.support_radius().min(w.grid().upper());
    if !(support < 1.0) {
        return Err(Error::Support { radius: support });
    }
    let mut breaks: Vec<f64> = w
        .grid()
        .breaks()
        .iter()
        .copied()
        .filter(|&t| t < support)
        .map(geodesic_radius)
        .collect();
    let r_support = geodesic_radius(support);
    if breaks.last().is_none_or(|&b| b < r_support) {
        breaks.push(r_support);
    }
    if breaks.len() < 2 {
        breaks.insert(0, 0.0);
    }
    let per_panel = w.grid().len() / (w.grid().breaks().len() - 1);
    let grid = RadialGrid::from_breaks(&breaks, per_panel, GridKind::HyperbolicGeodesic)?;
    let exponent = p.s() - p.dim() / 2.0;
    let radii: Vec<f64> = grid.nodes().iter().map(|&r| euclidean_radius(r)).collect();
    let samples = w.eval_many(&radii);
    let values = radii
        .iter()
        .zip(samples)
        .map(|(&t, v)| {
            if v == 0.0 {
                0.0
            } else {
                (2.0 / (1.0 - t * t)).powf(exponent) * v
            }
        })
        .collect();
    RadialFunction::new(grid, values, r_support)
}
