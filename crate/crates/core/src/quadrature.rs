//! Gauss–Legendre rules, composite radial grids and an adaptive integrator.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = alloc::vec![0.0; k];
    let mut weights = alloc::vec![0.0; k];
    let m = k.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(k, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Which radial variable a grid discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    HyperbolicGeodesic,
    Euclidean,
}

/// Composite Gauss–Legendre grid on [breaks[0], breaks[last]].
///
/// Weights are for plain `dr`; measure factors are applied by callers.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    breaks: Vec<f64>,
    kind: GridKind,
}

/// Nodes per panel used by the default grids.
pub const PANEL_NODES: usize = 16;
/// Default panel width of hyperbolic grids.
pub const DEFAULT_PANEL_WIDTH: f64 = 0.05;

impl RadialGrid {
    /// Grid with one Gauss–Legendre panel between consecutive break points.
    pub fn from_breaks(breaks: &[f64], per_panel: usize, kind: GridKind) -> Result<Self> {
        if breaks.len() < 2 || per_panel == 0 {
            return Err(Error::InvalidParameter {
                what: "grid break count",
                value: breaks.len() as f64,
            });
        }
        if !(breaks[0] >= 0.0) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "grid lower end",
                value: breaks[0],
            });
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                what: "grid breaks (must increase)",
                value: f64::NAN,
            });
        }
        let (x, w) = gauss_legendre(per_panel);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let half = (pair[1] - pair[0]) / 2.0;
            let mid = (pair[1] + pair[0]) / 2.0;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Ok(RadialGrid {
            nodes,
            weights,
            breaks: breaks.to_vec(),
            kind,
        })
    }

    /// Uniform panels of width at most `width` on [a, b].
    pub fn uniform(a: f64, b: f64, width: f64, per_panel: usize, kind: GridKind) -> Result<Self> {
        if !(b > a) || !(width > 0.0) {
            return Err(Error::InvalidParameter {
                what: "grid interval",
                value: b - a,
            });
        }
        let panels = ((b - a) / width).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::from_breaks(&breaks, per_panel, kind)
    }

    /// The default hyperbolic grid on [0, radius]: 16 nodes per panel of width 0.05.
    pub fn default_hyperbolic(radius: f64) -> Result<Self> {
        Self::uniform(
            0.0,
            radius,
            DEFAULT_PANEL_WIDTH,
            PANEL_NODES,
            GridKind::HyperbolicGeodesic,
        )
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.breaks[0]
    }

    pub fn upper(&self) -> f64 {
        self.breaks[self.breaks.len() - 1]
    }

    pub fn max_panel_width(&self) -> f64 {
        self.breaks
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// ∫ f dr over the grid interval.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Σ wᵢ vᵢ for values sampled at the nodes.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Break points that are geometric on [first, split] and uniform (width ≤ `width`) on [split, end].
pub fn graded_breaks(first: f64, split: f64, end: f64, geometric: usize, width: f64) -> Vec<f64> {
    let mut out = alloc::vec![0.0];
    if geometric > 0 && first < split {
        let ratio = (split / first).powf(1.0 / geometric as f64);
        let mut x = first;
        for _ in 0..geometric {
            out.push(x);
            x *= ratio;
        }
    }
    let start = split.min(end);
    if start > *out.last().unwrap() {
        out.push(start);
    }
    if end > start {
        let panels = ((end - start) / width).ceil().max(1.0) as usize;
        for i in 1..=panels {
            out.push(start + (end - start) * i as f64 / panels as f64);
        }
    }
    out
}

fn gl16_panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, x: &[f64], w: &[f64]) -> f64 {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Adaptive composite Gauss–Legendre integration of f on [a, b].
///
/// A panel is accepted when its 16-point value and the sum over its halves differ by at most
/// `abs_tol`·(panel length)/(b − a). Fails with `NonConvergence` past `max_panels` panels.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    initial_panels: usize,
    max_panels: usize,
) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let (x, w) = gauss_legendre(PANEL_NODES);
    let n0 = initial_panels.max(1);
    let mut stack: Vec<(f64, f64, f64)> = Vec::with_capacity(64);
    for i in (0..n0).rev() {
        let lo = a + (b - a) * i as f64 / n0 as f64;
        let hi = a + (b - a) * (i + 1) as f64 / n0 as f64;
        let whole = gl16_panel(&mut f, lo, hi, &x, &w);
        stack.push((lo, hi, whole));
    }
    let mut total = 0.0;
    let mut panels = n0;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = (lo + hi) / 2.0;
        let left = gl16_panel(&mut f, lo, mid, &x, &w);
        let right = gl16_panel(&mut f, mid, hi, &x, &w);
        let refined = left + right;
        if (refined - whole).abs() <= abs_tol * (hi - lo) / (b - a) || hi - lo < 1e-12 * (b - a) {
            total += refined;
            continue;
        }
        panels += 1;
        if panels > max_panels {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: panels,
            });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(total)
}
