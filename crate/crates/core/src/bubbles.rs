//! The standard bubble family on ℝⁿ, smooth cut-offs, fractional energies through the radial
//! Fourier (Hankel) transform, and the cut-off asymptotics experiments.

use crate::fit::{robust_log_log_fit, LineFit};
use crate::geometry::sphere_area;
use crate::quadrature::{gauss_legendre, GridKind, RadialGrid, PANEL_NODES};
use crate::radial::RadialFunction;
use crate::special::{bessel_j, bessel_k, gamma};
use crate::spherical::SpectralProfile;
use crate::{Error, Params, Result, TOLERANCES};
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Scale ε and cut-off radius δ of a cut-off bubble η U_ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleParams {
    eps: f64,
    delta: f64,
}

impl BubbleParams {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter {
                what: "bubble scale eps (need 0 < eps < 1)",
                value: eps,
            });
        }
        if !(delta > 0.0 && delta < 0.25) {
            return Err(Error::InvalidParameter {
                what: "cut-off radius delta (need 0 < delta < 1/4)",
                value: delta,
            });
        }
        Ok(BubbleParams { eps, delta })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// δ/ε: the cut-off radius in bubble coordinates y = x/ε.
    pub fn core_radius(&self) -> f64 {
        self.delta / self.eps
    }
}

/// U(y) = (1 + y²)^{−(n−2s)/2}.
pub fn standard_bubble(p: &Params, y: f64) -> f64 {
    (1.0 + y * y).powf(-p.bubble_exponent())
}

/// U_ε(r) = ε^{−(n−2s)/2} U(r/ε) for any scale ε > 0.
pub fn bubble_at_scale(p: &Params, eps: f64, r: f64) -> f64 {
    eps.powf(-p.bubble_exponent()) * standard_bubble(p, r / eps)
}

/// U_ε at radius r.
pub fn bubble(p: &Params, bp: &BubbleParams, r: f64) -> f64 {
    bubble_at_scale(p, bp.eps, r)
}

/// Radial derivative ∂_r^k U_ε(r) for k ≤ 2.
pub fn bubble_derivative(p: &Params, eps: f64, r: f64, order: u32) -> Result<f64> {
    let a = p.bubble_exponent();
    let x = 1.0 + (r / eps).powi(2);
    let front = eps.powf(-a);
    match order {
        0 => Ok(front * x.powf(-a)),
        1 => Ok(front * -2.0 * a * r / (eps * eps) * x.powf(-a - 1.0)),
        2 => {
            let e2 = eps * eps;
            Ok(front
                * (-2.0 * a / e2 * x.powf(-a - 1.0)
                    + 4.0 * a * (a + 1.0) * r * r / (e2 * e2) * x.powf(-a - 2.0)))
        }
        _ => Err(Error::InvalidParameter {
            what: "derivative order (need <= 2)",
            value: order as f64,
        }),
    }
}

/// ∫₀^{½} exp(−1/(t(1−t))) dt.
const MOLLIFIER_HALF_MASS: f64 = 0.003_514_929_203_304_828_1;

fn mollifier_mass(t: f64) -> f64 {
    // t ≤ ½; the integrand vanishes to all orders at 0, so plain panels suffice.
    if t <= 0.0 {
        return 0.0;
    }
    let (x, w) = gauss_legendre(PANEL_NODES);
    let panels = 8;
    let h = t / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            let tau = mid + 0.5 * h * xi;
            acc += wi * (-1.0 / (tau * (1.0 - tau))).exp();
        }
    }
    acc * 0.5 * h
}

/// Smooth step H(t): 0 for t ≤ 0, 1 for t ≥ 1, H(½) = ½, H(1 − t) = 1 − H(t).
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else if t <= 0.5 {
        mollifier_mass(t) / (2.0 * MOLLIFIER_HALF_MASS)
    } else {
        1.0 - mollifier_mass(1.0 - t) / (2.0 * MOLLIFIER_HALF_MASS)
    }
}

/// η(r) = 1 − H((r − δ)/δ): 1 on [0, δ], 0 from 2δ on.
pub fn cutoff(delta: f64, r: f64) -> f64 {
    1.0 - smooth_step((r - delta) / delta)
}

/// M∞ = ∫_{ℝⁿ} (1+|y|²)^{−n} dy = ω_{n−1}·½B(n/2, n/2).
pub fn critical_mass_limit(p: &Params) -> f64 {
    let h = p.dim() / 2.0;
    sphere_area(p.n()) * 0.5 * gamma(h).unwrap().powi(2) / gamma(p.dim()).unwrap()
}

/// Panel breaks in bubble coordinates for a cut-off at `core` (transition on [core, 2·core]).
fn scaled_breaks(core: f64) -> Vec<f64> {
    let mut b = alloc::vec![0.0];
    let mut y = 0.5;
    while y < core {
        b.push(y);
        y = if y < 1.0 { 1.0 } else { y * 1.25 };
    }
    b.push(core);
    for j in 1..=16 {
        b.push(core * (1.0 + j as f64 / 16.0));
    }
    b
}

fn scaled_grid(core: f64) -> RadialGrid {
    RadialGrid::from_breaks(&scaled_breaks(core), PANEL_NODES, GridKind::Euclidean)
        .expect("scaled breaks increase")
}

/// ∫_{ℝⁿ} |η U_ε|^{2*} dx.
pub fn crit_mass(p: &Params, bp: &BubbleParams) -> f64 {
    // Scale-free in y = x/ε: ∫ |η(εy) U(y)|^{2*} dy.
    truncated_crit_mass(p, bp.core_radius())
}

/// ∫ |η_L U|^{2*} dy with the cut-off transition on [L, 2L].
pub fn truncated_crit_mass(p: &Params, core: f64) -> f64 {
    let q = p.critical_exponent();
    let n = p.n();
    let grid = scaled_grid(core);
    sphere_area(n)
        * grid.integrate(|y| {
            (cutoff(core, y) * standard_bubble(p, y)).abs().powf(q) * y.powi(n as i32 - 1)
        })
}

/// Hyperbolic L² mass of the lift of η U_ε: ∫ |η U_ε|² φ^{2s} dx over the ball.
pub fn hyperbolic_l2_mass(p: &Params, bp: &BubbleParams) -> f64 {
    let (eps, core) = (bp.eps, bp.core_radius());
    let n = p.n();
    let s = p.s();
    let grid = scaled_grid(core);
    let integral = grid.integrate(|y| {
        let t = eps * y;
        let v = cutoff(core, y) * standard_bubble(p, y);
        v * v * (2.0 / (1.0 - t * t)).powf(2.0 * s) * y.powi(n as i32 - 1)
    });
    sphere_area(n) * eps.powf(2.0 * s) * integral
}

/// Euclidean samples of w_ε = η U_ε on a grid graded at scale ε, support 2δ.
pub fn cutoff_bubble_profile(p: &Params, bp: &BubbleParams) -> Result<RadialFunction> {
    let breaks: Vec<f64> = scaled_breaks(bp.core_radius())
        .iter()
        .map(|y| y * bp.eps)
        .collect();
    let grid = RadialGrid::from_breaks(&breaks, PANEL_NODES, GridKind::Euclidean)?;
    let support = 2.0 * bp.delta;
    RadialFunction::sample(grid, support, |r| cutoff(bp.delta, r) * bubble(p, bp, r))
}

/// Largest frequency the adaptive energy quadrature may reach.
const RHO_CAP: f64 = 8000.0;
/// Accepted share of the energy integrand in the last tenth of the frequency range.
pub const ENERGY_TAIL: f64 = 1e-10;

/// Unitary radial Fourier transform ŵ(ρ) = ρ^{−ν} ∫ w J_ν(rρ) r^{ν+1} dr, ν = (n−2)/2,
/// from quadrature coefficients c_j = w_j f(r_j) r_j^{ν+1}.
struct Hankel {
    order: f64,
    nodes: Vec<f64>,
    coef: Vec<f64>,
}

impl Hankel {
    fn new<F: Fn(f64) -> f64>(n: u32, grid: &RadialGrid, f: F) -> Self {
        let order = (n as f64 - 2.0) / 2.0;
        let mut nodes = Vec::with_capacity(grid.len());
        let mut coef = Vec::with_capacity(grid.len());
        for (&r, &w) in grid.nodes().iter().zip(grid.weights()) {
            let v = f(r);
            if v != 0.0 {
                nodes.push(r);
                coef.push(w * v * r.powf(order + 1.0));
            }
        }
        Hankel { order, nodes, coef }
    }

    fn at(&self, rho: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (&r, &c) in self.nodes.iter().zip(&self.coef) {
            acc += c * bessel_j(self.order, r * rho)?;
        }
        Ok(acc * rho.powf(-self.order))
    }
}

/// Frequency grid on [0, rho_max] with geometric panels near 0 and panels of width ≤ `width`.
pub(crate) fn rho_grid(rho_max: f64, width: f64) -> Result<RadialGrid> {
    let h = width.min(rho_max);
    let mut breaks = alloc::vec![0.0];
    for k in (1..=8).rev() {
        breaks.push(h / (1u32 << k) as f64);
    }
    let panels = ((rho_max - h) / h).ceil().max(0.0) as usize;
    breaks.push(h);
    for i in 1..=panels {
        breaks.push(h + (rho_max - h) * i as f64 / panels as f64);
    }
    RadialGrid::from_breaks(&breaks, PANEL_NODES, GridKind::Euclidean)
}

/// Refine `features` so that no panel is wider than `width`.
fn refine(features: &[f64], width: f64) -> Vec<f64> {
    let mut out = alloc::vec![features[0]];
    for pair in features.windows(2) {
        let k = ((pair[1] - pair[0]) / width).ceil().max(1.0) as usize;
        for j in 1..=k {
            out.push(pair[0] + (pair[1] - pair[0]) * j as f64 / k as f64);
        }
    }
    out
}

pub(crate) fn last_tenth_share(grid: &RadialGrid, terms: &[f64]) -> f64 {
    let cut = 0.9 * grid.upper();
    let total: f64 = terms.iter().map(|t| t.abs()).sum();
    if total == 0.0 {
        return 0.0;
    }
    grid.nodes()
        .iter()
        .zip(terms)
        .filter(|(r, _)| **r >= cut)
        .map(|(_, t)| t.abs())
        .sum::<f64>()
        / total
}

/// ω ∫ ρ^{2s+n−1} |ŵ|² dρ for a profile given by a closure, adapting the frequency range.
fn energy_of<F: Fn(f64) -> f64>(
    n: u32,
    s: f64,
    f: F,
    features: &[f64],
    rho_start: f64,
) -> Result<f64> {
    energy_with_cutoff(n, s, f, features, rho_start).map(|(e, _)| e)
}

/// Same as `energy_of`, also returning the frequency cut-off that met the tail criterion.
pub(crate) fn energy_with_cutoff<F: Fn(f64) -> f64>(
    n: u32,
    s: f64,
    f: F,
    features: &[f64],
    rho_start: f64,
) -> Result<(f64, f64)> {
    let support = *features.last().unwrap();
    let mut rho_max = rho_start.max(40.0);
    loop {
        let r_grid = RadialGrid::from_breaks(
            &refine(features, 10.0 / rho_max),
            PANEL_NODES,
            GridKind::Euclidean,
        )?;
        let hankel = Hankel::new(n, &r_grid, &f);
        if hankel.coef.is_empty() {
            return Ok((0.0, rho_max));
        }
        let grid = rho_grid(rho_max, (10.0 / support).min(1.0))?;
        let mut terms = Vec::with_capacity(grid.len());
        for (&rho, &w) in grid.nodes().iter().zip(grid.weights()) {
            let fh = hankel.at(rho)?;
            terms.push(w * rho.powf(2.0 * s + n as f64 - 1.0) * fh * fh);
        }
        let tail = last_tenth_share(&grid, &terms);
        if tail < ENERGY_TAIL {
            return Ok((sphere_area(n) * terms.iter().sum::<f64>(), rho_max));
        }
        rho_max *= 2.0;
        if rho_max > RHO_CAP {
            return Err(Error::Tail { relative: tail });
        }
    }
}

fn require_euclidean(w: &RadialFunction) -> Result<f64> {
    if w.space() != GridKind::Euclidean {
        return Err(Error::InvalidParameter {
            what: "profile must live on Euclidean space",
            value: 0.0,
        });
    }
    let support = w.support_radius().min(w.grid().upper());
    if !support.is_finite() {
        return Err(Error::Support { radius: support });
    }
    Ok(support)
}

/// Radial Fourier transform of a Euclidean profile on the given frequency grid.
pub fn radial_fourier(
    w: &RadialFunction,
    n: u32,
    rho_grid: &RadialGrid,
) -> Result<SpectralProfile> {
    require_euclidean(w)?;
    let hankel = Hankel::new(n, w.grid(), |r| w.eval(r));
    let values: Vec<f64> = rho_grid
        .nodes()
        .iter()
        .map(|&rho| {
            if hankel.coef.is_empty() {
                Ok(0.0)
            } else {
                hankel.at(rho)
            }
        })
        .collect::<Result<_>>()?;
    let terms: Vec<f64> = rho_grid
        .nodes()
        .iter()
        .zip(rho_grid.weights())
        .zip(&values)
        .map(|((&rho, &wt), &v)| wt * v * v * rho.powi(n as i32 - 1))
        .collect();
    let tail = last_tenth_share(rho_grid, &terms);
    if tail > TOLERANCES.spectral_tail {
        return Err(Error::Tail { relative: tail });
    }
    SpectralProfile::new(rho_grid.clone(), values)
}

/// ‖(−Δ)^{s/2} w‖² = ω ∫ ρ^{2s+n−1} |ŵ(ρ)|² dρ.
pub fn fractional_energy(w: &RadialFunction, p: &Params) -> Result<f64> {
    require_euclidean(w)?;
    if w.is_zero() {
        return Ok(0.0);
    }
    let support = w.support_radius().min(w.grid().upper());
    let features: Vec<f64> = w
        .grid()
        .breaks()
        .iter()
        .copied()
        .filter(|&b| b < support)
        .chain([support])
        .collect();
    energy_of(p.n(), p.s(), |r| w.eval(r), &features, 40.0)
}

/// E(η_L U) with the cut-off transition on [L, 2L] in bubble coordinates.
pub fn truncated_bubble_energy(p: &Params, core: f64) -> Result<f64> {
    if !(core > 0.0) {
        return Err(Error::InvalidParameter {
            what: "truncation radius",
            value: core,
        });
    }
    // The cut-off's Fourier tail decays like exp(−c√(ρL)).
    let start = (700.0 / core).max(40.0);
    energy_of(
        p.n(),
        p.s(),
        |y| cutoff(core, y) * standard_bubble(p, y),
        &scaled_breaks(core),
        start,
    )
}

/// E(η U_ε), computed in bubble coordinates (the energy is scale invariant).
pub fn bubble_energy(p: &Params, bp: &BubbleParams) -> Result<f64> {
    truncated_bubble_energy(p, bp.core_radius())
}

/// E(U) from truncations at L ∈ {12.5, 25, 50} extrapolated in 1/L.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBaseline {
    pub value: f64,
    /// |three-point − two-point| extrapolation.
    pub error_bar: f64,
    pub radii: Vec<f64>,
    pub raw: Vec<f64>,
}

pub const BASELINE_RADII: [f64; 3] = [12.5, 25.0, 50.0];

/// Extrapolate E(L) = E + Σ c_k L^{−e_k} from len(exponents)+1 samples.
fn richardson(radii: &[f64], values: &[f64], exponents: &[f64]) -> f64 {
    let m = exponents.len() + 1;
    let (radii, values) = (&radii[radii.len() - m..], &values[values.len() - m..]);
    // Solve the m×m system by Gaussian elimination with partial pivoting.
    let mut a: Vec<Vec<f64>> = radii
        .iter()
        .zip(values)
        .map(|(&l, &v)| {
            let mut row = alloc::vec![1.0];
            row.extend(exponents.iter().map(|&e| l.powf(-e)));
            row.push(v);
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..=m {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = alloc::vec![0.0; m];
    for row in (0..m).rev() {
        let mut acc = a[row][m];
        for k in row + 1..m {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x[0]
}

pub fn bubble_energy_baseline(p: &Params) -> Result<EnergyBaseline> {
    bubble_energy_baseline_on(p, &BASELINE_RADII)
}

/// Richardson baseline from truncations at three increasing radii.
pub fn bubble_energy_baseline_on(p: &Params, radii: &[f64; 3]) -> Result<EnergyBaseline> {
    if !(radii[0] >= 1.0 && radii[0] < radii[1] && radii[1] < radii[2]) {
        return Err(Error::InvalidParameter {
            what: "baseline radii (increasing, >= 1)",
            value: radii[0],
        });
    }
    let raw: Vec<f64> = radii
        .iter()
        .map(|&l| truncated_bubble_energy(p, l))
        .collect::<Result<_>>()?;
    let n = p.dim();
    let lead = n - 2.0 * p.s();
    let next = (lead + 2.0).min(n);
    let three = richardson(radii, &raw, &[lead, next]);
    let two = richardson(radii, &raw, &[lead]);
    Ok(EnergyBaseline {
        value: three,
        error_bar: (three - two).abs(),
        radii: radii.to_vec(),
        raw,
    })
}

/// Radial Fourier transform of U itself: 2^{1−a}/Γ(a) ρ^{−s} K_s(ρ), a = (n−2s)/2.
pub fn bubble_fourier(p: &Params, rho: f64) -> Result<f64> {
    let a = p.bubble_exponent();
    Ok(2f64.powf(1.0 - a) / gamma(a)? * rho.powf(-p.s()) * bessel_k(p.s(), rho)?)
}

fn check_ladder(eps_ladder: &[f64]) -> Result<()> {
    if eps_ladder.len() < 4 {
        return Err(Error::InvalidParameter {
            what: "eps ladder length (need >= 4)",
            value: eps_ladder.len() as f64,
        });
    }
    if eps_ladder.windows(2).any(|w| !(w[1] < w[0]))
        || eps_ladder.iter().any(|&e| !(e > 0.0 && e < 1.0))
    {
        return Err(Error::InvalidParameter {
            what: "eps ladder (need decreasing values in (0, 1))",
            value: f64::NAN,
        });
    }
    Ok(())
}

fn ladder_params(delta: f64, eps_ladder: &[f64]) -> Result<Vec<BubbleParams>> {
    check_ladder(eps_ladder)?;
    eps_ladder
        .iter()
        .map(|&e| BubbleParams::new(e, delta))
        .collect()
}

/// A rate fit over an ε-ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub fit: LineFit,
    pub dropped_largest: bool,
}

impl RateFit {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }
}

/// Robust log-log fit of `values` against the ladder.
pub fn rate_fit(eps: &[f64], values: Vec<f64>) -> Result<RateFit> {
    let (fit, dropped_largest) = robust_log_log_fit(eps, &values)?;
    Ok(RateFit {
        eps: eps.to_vec(),
        values,
        fit,
        dropped_largest,
    })
}

/// Slope of log|crit_mass(ε) − M∞| against log ε.
pub fn crit_mass_experiment(p: &Params, delta: f64, eps_ladder: &[f64]) -> Result<RateFit> {
    let limit = critical_mass_limit(p);
    let values = ladder_params(delta, eps_ladder)?
        .iter()
        .map(|bp| crit_mass(p, bp) - limit)
        .collect();
    rate_fit(eps_ladder, values)
}

/// Which L² asymptotic regime (n vs 4s) the parameters fall in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L2Regime {
    /// n > 4s: mass ~ ε^{2s}
    Concentrated,
    /// n = 4s: mass ~ ε^{2s}|log ε|
    Logarithmic,
    /// n < 4s: mass ~ ε^{n−2s}
    Spread,
}

impl L2Regime {
    pub fn of(p: &Params) -> Self {
        let d = p.dim() - 4.0 * p.s();
        if d.abs() < 1e-12 {
            L2Regime::Logarithmic
        } else if d > 0.0 {
            L2Regime::Concentrated
        } else {
            L2Regime::Spread
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            L2Regime::Concentrated => "n>4s",
            L2Regime::Logarithmic => "n=4s",
            L2Regime::Spread => "n<4s",
        }
    }

    /// Power of ε in the leading term.
    pub fn exponent(&self, p: &Params) -> f64 {
        match self {
            L2Regime::Concentrated | L2Regime::Logarithmic => 2.0 * p.s(),
            L2Regime::Spread => p.dim() - 2.0 * p.s(),
        }
    }
}

/// L² mass ladder with the regime-appropriate diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Experiment {
    pub regime: L2Regime,
    pub target_exponent: f64,
    pub rate: RateFit,
    /// mass/(ε^{2s}|log ε|)
    pub log_ratios: Vec<f64>,
    /// Increments of mass/ε^{2s} per unit of |log ε| between consecutive ladder entries.
    pub log_increments: Vec<f64>,
    /// Limit of the increments in the logarithmic regime: 2^{2s} ω_{n−1}.
    pub increment_limit: f64,
}

impl L2Experiment {
    /// (max − min)/mean of the log increments.
    pub fn increment_spread(&self) -> f64 {
        let lo = self
            .log_increments
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .log_increments
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let mean = self.log_increments.iter().sum::<f64>() / self.log_increments.len() as f64;
        (hi - lo) / mean.abs()
    }
}

pub fn l2_mass_experiment(p: &Params, delta: f64, eps_ladder: &[f64]) -> Result<L2Experiment> {
    let masses: Vec<f64> = ladder_params(delta, eps_ladder)?
        .iter()
        .map(|bp| hyperbolic_l2_mass(p, bp))
        .collect();
    let two_s = 2.0 * p.s();
    let log_ratios = eps_ladder
        .iter()
        .zip(&masses)
        .map(|(&e, &m)| m / (e.powf(two_s) * e.ln().abs()))
        .collect();
    let log_increments = eps_ladder
        .windows(2)
        .zip(masses.windows(2))
        .map(|(e, m)| {
            (m[1] / e[1].powf(two_s) - m[0] / e[0].powf(two_s))
                / (e[1].ln().abs() - e[0].ln().abs())
        })
        .collect();
    let regime = L2Regime::of(p);
    Ok(L2Experiment {
        regime,
        target_exponent: regime.exponent(p),
        rate: rate_fit(eps_ladder, masses)?,
        log_ratios,
        log_increments,
        increment_limit: 2f64.powf(two_s) * sphere_area(p.n()),
    })
}

/// Energy differences |E(ηU_ε) − E(U)| over the ladder with their rate fit.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyExperiment {
    pub baseline: EnergyBaseline,
    pub energies: Vec<f64>,
    pub rate: RateFit,
}

pub fn energy_experiment(p: &Params, delta: f64, eps_ladder: &[f64]) -> Result<EnergyExperiment> {
    let params = ladder_params(delta, eps_ladder)?;
    let baseline = bubble_energy_baseline(p)?;
    let energies: Vec<f64> = params
        .iter()
        .map(|bp| bubble_energy(p, bp))
        .collect::<Result<_>>()?;
    let diffs = energies
        .iter()
        .map(|e| (e - baseline.value).abs())
        .collect();
    Ok(EnergyExperiment {
        baseline,
        rate: rate_fit(eps_ladder, diffs)?,
        energies,
    })
}

/// Fitted slope of log|E(ηU_ε) − E(U)| against log ε.
pub fn energy_asymptotics_experiment(p: &Params, delta: f64, eps_ladder: &[f64]) -> Result<f64> {
    Ok(energy_experiment(p, delta, eps_ladder)?.rate.slope())
}

/// sup_{δ ≤ r < 1} |∂^k U_ε| / ε^{(n−2s)/2} for each ε.
pub fn derivative_bound_check(
    p: &Params,
    delta: f64,
    eps_ladder: &[f64],
    order: u32,
) -> Result<Vec<f64>> {
    if order > 2 {
        return Err(Error::InvalidParameter {
            what: "derivative order (need <= 2)",
            value: order as f64,
        });
    }
    if eps_ladder.is_empty() || eps_ladder.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter {
            what: "eps ladder (need decreasing values)",
            value: f64::NAN,
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter {
            what: "delta",
            value: delta,
        });
    }
    let a = p.bubble_exponent();
    eps_ladder
        .iter()
        .map(|&eps| {
            let mut sup: f64 = 0.0;
            let samples = 2000;
            for i in 0..samples {
                let r = delta + (1.0 - delta) * i as f64 / samples as f64;
                sup = sup.max(bubble_derivative(p, eps, r, order)?.abs());
            }
            Ok(sup / eps.powf(a))
        })
        .collect()
}

/// |E(ηU_ε) − E(U_ε) − E((η−1)U_ε)| = 2|⟨U_ε, (η−1)U_ε⟩_s| for each ε, using the exact
/// transform of U.
pub fn cross_term_check(p: &Params, delta: f64, eps_ladder: &[f64]) -> Result<Vec<f64>> {
    let n = p.n();
    let s = p.s();
    ladder_params(delta, eps_ladder)?
        .iter()
        .map(|bp| {
            let core = bp.core_radius();
            let rho_max = 50.0;
            let features = scaled_breaks(core);
            let r_grid = RadialGrid::from_breaks(
                &refine(&features, 10.0 / rho_max),
                PANEL_NODES,
                GridKind::Euclidean,
            )?;
            let hankel = Hankel::new(n, &r_grid, |y| cutoff(core, y) * standard_bubble(p, y));
            let mut breaks = alloc::vec![0.0];
            for k in (0..40).rev() {
                breaks.push(0.5f64.powi(k));
            }
            let width = (5.0 / core).min(0.5);
            let panels = ((rho_max - 1.0) / width).ceil() as usize;
            for i in 1..=panels {
                breaks.push(1.0 + (rho_max - 1.0) * i as f64 / panels as f64);
            }
            let grid = RadialGrid::from_breaks(&breaks, PANEL_NODES, GridKind::Euclidean)?;
            let mut acc = 0.0;
            for (&rho, &w) in grid.nodes().iter().zip(grid.weights()) {
                let fu = bubble_fourier(p, rho)?;
                let fc = hankel.at(rho)?;
                acc += w * rho.powf(2.0 * s + n as f64 - 1.0) * fu * (fc - fu);
            }
            Ok(2.0 * sphere_area(n) * acc.abs())
        })
        .collect()
}

/// Closed form of ‖(−Δ)^{s/2}U‖² used as an independent reference.
pub fn bubble_energy_closed_form(p: &Params) -> f64 {
    let n = p.dim();
    let s = p.s();
    let a = p.bubble_exponent();
    let c = 2f64.powf(1.0 - a) / gamma(a).unwrap();
    let g = |x: f64| gamma(x).unwrap();
    sphere_area(p.n())
        * c
        * c
        * 2f64.powf(n - 3.0)
        * g(n / 2.0 + s)
        * g(n / 2.0 - s)
        * g(n / 2.0).powi(2)
        / g(n)
}
