//! Radial spherical transform on ℍⁿ: Plancherel density, spherical functions, forward and
//! inverse transforms, spectral quadratic forms and the regularized radial kernel.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::geometry::sphere_area;
use crate::multipliers::multiplier;
use crate::quadrature::{gauss_legendre, integrate_adaptive, GridKind, RadialGrid, PANEL_NODES};
use crate::radial::RadialFunction;
use crate::special::{gamma, hyp2f1_series, ln_abs_gamma_sq, log_gamma};
use crate::{Error, MultiplierKind, Params, Result, TOLERANCES};
#[allow(unused_imports)]
use num_traits::Float;

/// |c(β)|⁻² = 2^{1−n}/(Γ(n/2)π^{n/2}) · |Γ(ρ+iβ)|²/|Γ(iβ)|².
pub fn plancherel_density(n: u32, beta: f64) -> f64 {
    let beta = beta.abs();
    if beta == 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    let rho = (nf - 1.0) / 2.0;
    let ln_const =
        (1.0 - nf) * LN_2 - gamma(nf / 2.0).expect("positive argument").ln() - nf / 2.0 * PI.ln();
    // 1/|Γ(iβ)|² = β sinh(πβ)/π
    let x = PI * beta;
    let ln_sinh = if x > 20.0 {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    };
    let ln_inv_gamma_sq = beta.ln() + ln_sinh - PI.ln();
    let ln_num = ln_abs_gamma_sq(rho, beta).expect("rho + i beta is never a pole for beta > 0");
    (ln_const + ln_num + ln_inv_gamma_sq).exp()
}

/// coth r − 1/r = Σ d_j r^{2j−1}
const COTH_COEF: [f64; 6] = [
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638_512_875.0,
];

fn spherical_taylor(n: u32, lambda: f64, r: f64) -> f64 {
    let nf = n as f64;
    let mut c = [0.0f64; 8];
    c[0] = 1.0;
    let r2 = r * r;
    let mut sum = 1.0;
    let mut pow = 1.0;
    for m in 1..8usize {
        let mut acc = lambda * c[m - 1];
        for j in 1..m {
            acc += (nf - 1.0) * COTH_COEF[j - 1] * 2.0 * (m - j) as f64 * c[m - j];
        }
        let mf = m as f64;
        c[m] = -acc / (2.0 * mf * (2.0 * mf + nf - 2.0));
        pow *= r2;
        sum += c[m] * pow;
    }
    sum
}

/// Φ_β(r) = cosh(r/2)^{2−n} ₂F₁(½−iβ, ½+iβ; n/2; −sinh²(r/2)), the Legendre representation
/// after the half-angle simplification. After the Pfaff transformation the series runs in
/// tanh²(r/2) with a real lower parameter, so each term costs one complex product.
fn spherical_legendre(n: u32, beta: f64, r: f64) -> Result<f64> {
    let half = r / 2.0;
    let t = half.tanh().powi(2);
    let c = n as f64 / 2.0;
    let a = Complex64::new(0.5, -beta);
    let b = Complex64::new(c - 0.5, -beta);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term = term * (a + kf) * (b + kf) * (t / ((c + kf) * (kf + 1.0)));
        sum += term;
        k += 1;
        let next =
            (a + kf + 1.0).norm() * (b + kf + 1.0).norm() * t / ((c + kf + 1.0) * (kf + 2.0));
        if next < 1.0 && term.norm() * next / (1.0 - next) <= TOLERANCES.hyp2f1_term * sum.norm() {
            break;
        }
        if k >= TOLERANCES.hyp2f1_max_terms {
            return Err(Error::NonConvergence {
                what: "Legendre series",
                iterations: k,
            });
        }
    }
    // (1 − x)^{−a} with 1 − x = cosh²(r/2)
    let lead = (a * (-2.0 * half.cosh().ln())).exp();
    Ok((lead * sum).re * half.cosh().powf(2.0 - n as f64))
}

fn ln_two_cosh(t: f64) -> f64 {
    t + (-2.0 * t).exp().ln_1p()
}

fn ln_sinh(x: f64) -> f64 {
    if x > 1.0 {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// Jacobi-function expansion at argument sech²(r/2), converging for every r > 0 and
/// well-conditioned when β·sech²(r/2) is moderate.
struct JacobiCoefficient {
    ln_c: Complex64,
}

impl JacobiCoefficient {
    fn new(n: u32, beta: f64) -> Result<Self> {
        let lam = 2.0 * beta;
        let rho = n as f64 - 1.0;
        let alpha = (n as f64 - 2.0) / 2.0;
        let il = Complex64::new(0.0, lam);
        let ln_c = Complex64::new(rho * LN_2, -lam * LN_2)
            + log_gamma(Complex64::new(alpha + 1.0, 0.0))?
            + log_gamma(il)?
            - log_gamma((il + rho) / 2.0)?
            - log_gamma((il + 1.0) / 2.0)?;
        Ok(JacobiCoefficient { ln_c })
    }

    fn eval(&self, n: u32, beta: f64, r: f64) -> Result<f64> {
        let lam = 2.0 * beta;
        let rho = n as f64 - 1.0;
        let t = r / 2.0;
        let x = 1.0 / t.cosh().powi(2);
        let il = Complex64::new(0.0, lam);
        let one = Complex64::new(1.0, 0.0);
        let f = hyp2f1_series((il * -1.0 + rho) / 2.0, (one - il) / 2.0, one - il, x)?;
        let ln_pref = (il - rho) * ln_two_cosh(t);
        Ok(2.0 * ((self.ln_c + ln_pref).exp() * f).re)
    }
}

/// Mehler–Dirichlet integral
/// Φ_β(r) = C_n sinh^{2−n} r ∫₀^r cos(βt)(cosh r − cosh t)^{(n−3)/2} dt, with t = r(1−w²).
///
/// The quadrature nodes depend only on r and the largest frequency, so a column of the
/// table shares them: Φ_β(r) = Σ a_k cos(β t_k).
struct MehlerRule {
    t: Vec<f64>,
    a: Vec<f64>,
}

impl MehlerRule {
    fn new(n: u32, r: f64, beta_max: f64) -> Self {
        let nf = n as f64;
        let ln_cn = (nf - 1.0) / 2.0 * LN_2 + gamma(nf / 2.0).unwrap().ln()
            - 0.5 * PI.ln()
            - gamma((nf - 1.0) / 2.0).unwrap().ln();
        let front = (ln_cn + (2.0 - nf) * ln_sinh(r)).exp();
        // (n−3)/2 = whole + (½ if n is even)
        let (whole, half_power) = if n % 2 == 1 {
            ((n as i32 - 3) / 2, false)
        } else {
            ((n as i32 - 4) / 2, true)
        };
        let panels = ((2.0 * beta_max * r) / 8.0).ceil() as usize + 2;
        let (x, w) = gauss_legendre(PANEL_NODES);
        let mut t = Vec::with_capacity(panels * PANEL_NODES);
        let mut a = Vec::with_capacity(panels * PANEL_NODES);
        for k in 0..panels {
            let lo = k as f64 / panels as f64;
            let hi = (k + 1) as f64 / panels as f64;
            let half = (hi - lo) / 2.0;
            let mid = (lo + hi) / 2.0;
            for (xi, wi) in x.iter().zip(&w) {
                let v = mid + half * xi;
                let v2 = v * v;
                let gap = 2.0 * (r * (1.0 - v2 / 2.0)).sinh() * (r * v2 / 2.0).sinh();
                let mut weight = gap.powi(whole);
                if half_power {
                    weight *= gap.sqrt();
                }
                t.push(r * (1.0 - v2));
                a.push(front * wi * half * weight * 2.0 * r * v);
            }
        }
        MehlerRule { t, a }
    }

    fn eval(&self, beta: f64) -> f64 {
        self.t
            .iter()
            .zip(&self.a)
            .map(|(t, a)| a * (beta * t).cos())
            .sum()
    }
}

fn spherical_mehler(n: u32, beta: f64, r: f64) -> f64 {
    MehlerRule::new(n, r, beta).eval(beta)
}

/// Route limits on β·tanh(r/2) (Legendre, r ≤ 2 and r ≤ 3) and β·sech²(r/2) (Jacobi).
#[derive(Debug, Clone, Copy)]
struct RouteLimits {
    legendre_near: f64,
    legendre_far: f64,
    jacobi: f64,
}

/// Pointwise use: cancellation in every series stays near 1e-13 of the amplitude.
const STRICT: RouteLimits = RouteLimits {
    legendre_near: 4.0,
    legendre_far: 4.0,
    jacobi: 8.0,
};
/// Table use: ~1e-11 of the amplitude (sinh r·β)^{−ρ}, far fewer direct integrals.
const RELAXED: RouteLimits = RouteLimits {
    legendre_near: 6.0,
    legendre_far: 4.0,
    jacobi: 20.0,
};

fn route(n: u32, beta: f64, r: f64, limits: RouteLimits) -> Route {
    let rho = (n as f64 - 1.0) / 2.0;
    let lambda = beta * beta + rho * rho;
    let half = r / 2.0;
    let jacobi_ok = r >= 1.0 && beta >= 0.25 && beta / half.cosh().powi(2) <= limits.jacobi;
    let legendre_limit = if r <= 2.0 {
        limits.legendre_near
    } else {
        limits.legendre_far
    };
    if r == 0.0 {
        Route::Origin
    } else if r < TOLERANCES.taylor_radius && lambda * r * r <= 0.25 {
        Route::Taylor
    } else if r >= 2.0 && jacobi_ok {
        Route::Jacobi
    } else if r <= 3.0 && beta * half.tanh() <= legendre_limit {
        Route::Legendre
    } else if jacobi_ok {
        Route::Jacobi
    } else {
        Route::Mehler
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Origin,
    Taylor,
    Legendre,
    Jacobi,
    Mehler,
}

fn evaluate(n: u32, beta: f64, r: f64, limits: RouteLimits) -> f64 {
    let rho = (n as f64 - 1.0) / 2.0;
    match route(n, beta, r, limits) {
        Route::Origin => 1.0,
        Route::Taylor => spherical_taylor(n, beta * beta + rho * rho, r),
        Route::Legendre => {
            spherical_legendre(n, beta, r).unwrap_or_else(|_| spherical_mehler(n, beta, r))
        }
        Route::Jacobi => JacobiCoefficient::new(n, beta)
            .and_then(|c| c.eval(n, beta, r))
            .unwrap_or_else(|_| spherical_mehler(n, beta, r)),
        Route::Mehler => spherical_mehler(n, beta, r),
    }
}

/// Spherical function Φ_β(r): the radial eigenfunction with eigenvalue β² + ρ², Φ_β(0) = 1.
pub fn spherical_function(n: u32, beta: f64, r: f64) -> f64 {
    evaluate(n, beta.abs(), r.abs(), STRICT)
}

/// Samples of a spherical transform on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    beta_grid: RadialGrid,
    values: Vec<f64>,
}

impl SpectralProfile {
    pub fn new(beta_grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != beta_grid.len() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "spectral samples",
                value: values.len() as f64,
            });
        }
        Ok(SpectralProfile { beta_grid, values })
    }

    pub fn beta_grid(&self) -> &RadialGrid {
        &self.beta_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Frequency grid on [0, b_max] whose panels resolve transforms of profiles supported in
/// [0, support].
pub fn frequency_grid(b_max: f64, support: f64) -> Result<RadialGrid> {
    let width = (8.0 / support.max(1e-3)).min(1.0);
    RadialGrid::uniform(0.0, b_max, width, PANEL_NODES, GridKind::Euclidean)
}

/// Cached table of Φ_β(r) for one radial grid and one frequency grid.
#[derive(Debug, Clone)]
pub struct SphericalBasis {
    n: u32,
    r_grid: RadialGrid,
    beta_grid: RadialGrid,
    table: Vec<f64>,
    volume: Vec<f64>,
    spectral_weight: Vec<f64>,
}

impl SphericalBasis {
    pub fn new(n: u32, r_grid: RadialGrid, beta_grid: RadialGrid) -> Self {
        let omega = sphere_area(n);
        let volume = r_grid
            .nodes()
            .iter()
            .zip(r_grid.weights())
            .map(|(&r, &w)| w * omega * r.sinh().powi(n as i32 - 1))
            .collect();
        let spectral_weight = beta_grid
            .nodes()
            .iter()
            .zip(beta_grid.weights())
            .map(|(&b, &w)| w * plancherel_density(n, b))
            .collect();
        let m = r_grid.len();
        let mut table = Vec::with_capacity(m * beta_grid.len());
        let mut mehler: Vec<(usize, usize)> = Vec::new();
        for (i, &beta) in beta_grid.nodes().iter().enumerate() {
            let mut coef: Option<Option<JacobiCoefficient>> = None;
            for (j, &r) in r_grid.nodes().iter().enumerate() {
                let value = match route(n, beta, r, RELAXED) {
                    Route::Mehler => {
                        mehler.push((j, i));
                        f64::NAN
                    }
                    Route::Jacobi => {
                        let c = coef.get_or_insert_with(|| JacobiCoefficient::new(n, beta).ok());
                        match c.as_ref().and_then(|c| c.eval(n, beta, r).ok()) {
                            Some(v) => v,
                            None => {
                                mehler.push((j, i));
                                f64::NAN
                            }
                        }
                    }
                    _ => evaluate(n, beta, r, RELAXED),
                };
                table.push(value);
            }
        }
        // Mehler entries column by column, sharing one quadrature rule per radius.
        mehler.sort_unstable_by_key(|&(j, i)| (j, core::cmp::Reverse(i)));
        let mut k = 0;
        while k < mehler.len() {
            let j = mehler[k].0;
            let r = r_grid.nodes()[j];
            let rule = MehlerRule::new(n, r, beta_grid.nodes()[mehler[k].1]);
            while k < mehler.len() && mehler[k].0 == j {
                let i = mehler[k].1;
                table[i * m + j] = rule.eval(beta_grid.nodes()[i]);
                k += 1;
            }
        }
        SphericalBasis {
            n,
            r_grid,
            beta_grid,
            table,
            volume,
            spectral_weight,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r_grid(&self) -> &RadialGrid {
        &self.r_grid
    }

    pub fn beta_grid(&self) -> &RadialGrid {
        &self.beta_grid
    }

    fn row(&self, i: usize) -> &[f64] {
        let m = self.r_grid.len();
        &self.table[i * m..(i + 1) * m]
    }

    /// f̂(β_i) = ω ∫ f Φ_{β_i} sinh^{n−1} r dr for samples at the radial nodes.
    pub fn forward(&self, values: &[f64]) -> Vec<f64> {
        let weighted: Vec<f64> = values
            .iter()
            .zip(&self.volume)
            .map(|(v, w)| v * w)
            .collect();
        (0..self.beta_grid.len())
            .map(|i| self.row(i).iter().zip(&weighted).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// f(r_j) = ∫₀^{B} F(β) Φ_β(r_j) |c(β)|⁻² dβ.
    pub fn inverse(&self, spectrum: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.r_grid.len()];
        for (i, (&f, &w)) in spectrum.iter().zip(&self.spectral_weight).enumerate() {
            let c = f * w;
            if c == 0.0 {
                continue;
            }
            for (o, phi) in out.iter_mut().zip(self.row(i)) {
                *o += c * phi;
            }
        }
        out
    }

    /// ∫₀^{B} σ(β) |F(β)|² |c(β)|⁻² dβ for symbol samples σ at the frequency nodes.
    pub fn form(&self, symbol: &[f64], spectrum: &[f64]) -> f64 {
        symbol
            .iter()
            .zip(spectrum)
            .zip(&self.spectral_weight)
            .map(|((m, f), w)| m * f * f * w)
            .sum()
    }

    /// Per-node integrand |σ| |F|² |c|⁻² w, used for tail diagnostics.
    pub fn form_terms(&self, symbol: &[f64], spectrum: &[f64]) -> Vec<f64> {
        symbol
            .iter()
            .zip(spectrum)
            .zip(&self.spectral_weight)
            .map(|((m, f), w)| m * f * f * w)
            .collect()
    }
}

fn require_hyperbolic(f: &RadialFunction) -> Result<()> {
    if f.space() != GridKind::HyperbolicGeodesic {
        return Err(Error::InvalidParameter {
            what: "profile must live on hyperbolic space",
            value: 0.0,
        });
    }
    if !f.support_radius().is_finite() {
        return Err(Error::Support {
            radius: f.support_radius(),
        });
    }
    Ok(())
}

/// Radial spherical transform f̂(β) = ω_{n−1} ∫ f Φ_β sinh^{n−1} r dr.
pub fn spherical_transform(
    f: &RadialFunction,
    n: u32,
    beta_grid: &RadialGrid,
) -> Result<SpectralProfile> {
    require_hyperbolic(f)?;
    let basis = SphericalBasis::new(n, f.grid().clone(), beta_grid.clone());
    SpectralProfile::new(beta_grid.clone(), basis.forward(f.values()))
}

/// Fraction of the spectral mass carried by the last tenth of the frequency range.
fn last_decade_fraction(grid: &RadialGrid, terms: &[f64]) -> f64 {
    let cut = 0.9 * grid.upper();
    let total: f64 = terms.iter().map(|t| t.abs()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = grid
        .nodes()
        .iter()
        .zip(terms)
        .filter(|(b, _)| **b >= cut)
        .map(|(_, t)| t.abs())
        .sum();
    tail / total
}

/// Inverse transform f(r) = ∫₀^{B} F(β) Φ_β(r) |c(β)|⁻² dβ on the given radial grid.
pub fn inverse_spherical_transform(
    spectrum: &SpectralProfile,
    n: u32,
    r_grid: &RadialGrid,
) -> Result<RadialFunction> {
    let grid = spectrum.beta_grid();
    let terms: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(spectrum.values())
        .map(|((&b, &w), &v)| w * v.abs() * plancherel_density(n, b))
        .collect();
    let tail = last_decade_fraction(grid, &terms);
    if tail > TOLERANCES.inverse_tail {
        return Err(Error::Tail { relative: tail });
    }
    let per_panel = r_grid.len() / (r_grid.breaks().len() - 1);
    let r_grid = RadialGrid::from_breaks(r_grid.breaks(), per_panel, GridKind::HyperbolicGeodesic)?;
    let basis = SphericalBasis::new(n, r_grid.clone(), grid.clone());
    let values = basis.inverse(spectrum.values());
    let support = r_grid.upper();
    RadialFunction::new(r_grid, values, support)
}

/// Frequency cut-offs tried by the spectral forms before declaring a tail error.
const FORM_CUTOFFS: [f64; 5] = [20.0, 60.0, 120.0, 240.0, 480.0];

/// Spectral quadratic form ∫ (σ(β) − λ)|f̂|² |c|⁻² dβ for an arbitrary symbol σ.
pub fn quadratic_form_with<S: Fn(f64) -> Result<f64>>(
    symbol: S,
    n: u32,
    lambda: f64,
    f: &RadialFunction,
) -> Result<f64> {
    require_hyperbolic(f)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let support = f.support_radius().min(f.grid().upper());
    let mut last_tail = f64::INFINITY;
    for &b_max in FORM_CUTOFFS.iter() {
        let grid = frequency_grid(b_max, support)?;
        let basis = SphericalBasis::new(n, f.grid().clone(), grid.clone());
        let spectrum = basis.forward(f.values());
        let sym: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&b| symbol(b).map(|m| m - lambda))
            .collect::<Result<_>>()?;
        let terms = basis.form_terms(&sym, &spectrum);
        last_tail = last_decade_fraction(&grid, &terms);
        if last_tail < TOLERANCES.spectral_tail {
            return Ok(terms.iter().sum());
        }
    }
    Err(Error::Tail {
        relative: last_tail,
    })
}

/// ⟨(𝒫 − λ)f, f⟩ through the spectral representation with the chosen symbol.
pub fn quadratic_form(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    f: &RadialFunction,
) -> Result<f64> {
    quadratic_form_with(|b| multiplier(kind, p, b), p.n(), lambda, f)
}

/// Regularized radial kernel k^ε(r) = ∫₀^∞ m(β) e^{−εβ²} Φ_β(r) |c(β)|⁻² dβ for r ≥ 0.5.
pub fn regularized_kernel(kind: MultiplierKind, p: &Params, r: f64, eps_reg: f64) -> Result<f64> {
    regularized_kernel_with(|b| multiplier(kind, p, b), p.n(), r, eps_reg)
}

/// Same as [`regularized_kernel`] for an arbitrary symbol.
pub fn regularized_kernel_with<S: Fn(f64) -> Result<f64>>(
    symbol: S,
    n: u32,
    r: f64,
    eps_reg: f64,
) -> Result<f64> {
    if !(r >= 0.5) {
        return Err(Error::Domain {
            what: "kernel radius (need r >= 0.5)",
            value: r,
        });
    }
    if !(eps_reg > 0.0) {
        return Err(Error::Domain {
            what: "kernel regularization",
            value: eps_reg,
        });
    }
    let b_cut = (-TOLERANCES.kernel_gaussian_floor.ln() / eps_reg).sqrt();
    let mut failure = None;
    let mut integrand = |b: f64| match symbol(b) {
        Ok(m) => {
            m * (-eps_reg * b * b).exp() * spherical_function(n, b, r) * plancherel_density(n, b)
        }
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let initial = ((b_cut * r) / 6.0).ceil() as usize + 4;
    // Scale of the integrand for the absolute tolerance.
    let coarse = RadialGrid::uniform(
        0.0,
        b_cut,
        b_cut / initial as f64,
        PANEL_NODES,
        GridKind::Euclidean,
    )?;
    let scale = coarse.integrate(|b| integrand(b).abs());
    let value = integrate_adaptive(
        &mut integrand,
        0.0,
        b_cut,
        1e-13 * scale,
        initial,
        TOLERANCES.kernel_max_panels,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(value)
}

/// Raw regularized kernels on an ε-ladder and their polynomial extrapolation to ε = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelExtrapolation {
    pub eps: Vec<f64>,
    pub raw: Vec<f64>,
    pub extrapolated: f64,
}

/// Kernel at ε ∈ {0.02, 0.01, 0.005} with Richardson (Neville) extrapolation to ε = 0.
pub fn regularized_kernel_extrapolated(
    kind: MultiplierKind,
    p: &Params,
    r: f64,
) -> Result<KernelExtrapolation> {
    let eps = alloc::vec![0.02, 0.01, 0.005];
    let raw: Vec<f64> = eps
        .iter()
        .map(|&e| regularized_kernel(kind, p, r, e))
        .collect::<Result<_>>()?;
    let extrapolated = neville_at_zero(&eps, &raw);
    Ok(KernelExtrapolation {
        eps,
        raw,
        extrapolated,
    })
}

fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut t = y.to_vec();
    let m = x.len();
    for level in 1..m {
        for i in 0..m - level {
            let j = i + level;
            t[i] = (x[j] * t[i] - x[i] * t[i + 1]) / (x[j] - x[i]);
        }
    }
    t[0]
}

/// Log-linear fit of a kernel's decay.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

/// Least-squares slope of log|k^ε(r)| against r.
pub fn decay_rate_fit(
    kind: MultiplierKind,
    p: &Params,
    r_values: &[f64],
    eps_reg: f64,
) -> Result<DecayFit> {
    if r_values.len() < 4 || r_values.iter().any(|r| !(2.0..=8.0).contains(r)) {
        return Err(Error::InvalidParameter {
            what: "decay fit radii (need >= 4 points in [2, 8])",
            value: r_values.len() as f64,
        });
    }
    let values: Vec<f64> = r_values
        .iter()
        .map(|&r| regularized_kernel(kind, p, r, eps_reg))
        .collect::<Result<_>>()?;
    let (slope, intercept) = crate::fit::log_linear_fit(r_values, &values)?;
    Ok(DecayFit {
        slope,
        intercept,
        radii: r_values.to_vec(),
        values,
    })
}
