//! Poincaré–Sobolev quotients on ℍⁿ for the GJMS and intertwined operators, trial families and
//! their minimization, λ-scans, the multi-bump blow-down bound and the sharp-constant estimate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bubbles::{
    bubble_energy, bubble_energy_baseline, crit_mass, critical_mass_limit, cutoff,
    cutoff_bubble_profile, energy_with_cutoff, hyperbolic_l2_mass, last_tenth_share, rho_grid,
    BubbleParams, EnergyBaseline,
};
use crate::fit::{log_log_fit, LineFit};
use crate::geometry::{conformal_lift, euclidean_radius, geodesic_radius, sphere_area};
use crate::multipliers::multiplier;
use crate::optimize::{golden_section, nelder_mead_capped};
use crate::quadrature::{GridKind, RadialGrid, PANEL_NODES};
use crate::radial::RadialFunction;
use crate::special::{bessel_j, sin_pi};
use crate::spherical::{
    decay_rate_fit, frequency_grid, quadratic_form, spherical_function, SphericalBasis,
};
use crate::spline::CubicSpline;
use crate::{Error, MultiplierKind, Params, Result, TOLERANCES};
#[allow(unused_imports)]
use num_traits::Float;

/// One evaluated Rayleigh quotient (energy − λ·L²)/‖u‖²_{2*}.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    pub lambda: f64,
    /// ⟨𝒫u, u⟩ for the chosen operator (λ = 0).
    pub energy: f64,
    pub l2_mass: f64,
    /// (∫|u|^{2*} dV)^{2/2*}
    pub crit_norm: f64,
    pub quotient: f64,
    pub trial_descriptor: String,
}

impl QuotientReport {
    fn assemble(
        lambda: f64,
        energy: f64,
        l2_mass: f64,
        crit_norm: f64,
        trial_descriptor: String,
    ) -> Result<Self> {
        if !(crit_norm > 0.0) {
            return Err(Error::ZeroTrial);
        }
        let quotient = (energy - lambda * l2_mass) / crit_norm;
        Ok(QuotientReport {
            lambda,
            energy,
            l2_mass,
            crit_norm,
            quotient,
            trial_descriptor,
        })
    }

    /// energy − λ·l2_mass
    pub fn numerator(&self) -> f64 {
        self.energy - self.lambda * self.l2_mass
    }

    /// The same trial evaluated at another λ.
    pub fn at_lambda(&self, lambda: f64) -> QuotientReport {
        QuotientReport {
            lambda,
            quotient: (self.energy - lambda * self.l2_mass) / self.crit_norm,
            ..self.clone()
        }
    }

    /// Rescaled so that crit_norm = 1 (the quotient is unchanged).
    pub fn normalized(&self) -> QuotientReport {
        let c = self.crit_norm;
        QuotientReport {
            energy: self.energy / c,
            l2_mass: self.l2_mass / c,
            crit_norm: 1.0,
            quotient: (self.energy - self.lambda * self.l2_mass) / c,
            ..self.clone()
        }
    }
}

fn check_kind(kind: MultiplierKind) -> Result<()> {
    if kind == MultiplierKind::Remainder {
        return Err(Error::InvalidParameter {
            what: "quotient operator (GJMS or intertwined)",
            value: 0.0,
        });
    }
    Ok(())
}

fn has_remainder(kind: MultiplierKind, p: &Params) -> bool {
    kind == MultiplierKind::Gjms && sin_pi(p.s()) != 0.0
}

/// ⟨(𝒫 − 𝒫̃)u, u⟩ through the spectral representation.
pub fn remainder_energy(p: &Params, u: &RadialFunction) -> Result<f64> {
    if sin_pi(p.s()) == 0.0 {
        return Ok(0.0);
    }
    quadratic_form(MultiplierKind::Remainder, p, 0.0, u)
}

fn crit_norm_of(p: &Params, u: &RadialFunction) -> f64 {
    let q = p.critical_exponent();
    u.lp_integral(p.n(), q).powf(2.0 / q)
}

/// Quotient of a hyperbolic radial trial, all energies through the spherical transform.
pub fn sobolev_quotient(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    u: &RadialFunction,
) -> Result<QuotientReport> {
    check_kind(kind)?;
    if u.space() != GridKind::HyperbolicGeodesic {
        return Err(Error::InvalidParameter {
            what: "trial must live on hyperbolic space",
            value: 0.0,
        });
    }
    if u.is_zero() {
        return Err(Error::ZeroTrial);
    }
    let mut energy = quadratic_form(MultiplierKind::Intertwined, p, 0.0, u)?;
    if has_remainder(kind, p) {
        energy += remainder_energy(p, u)?;
    }
    QuotientReport::assemble(
        lambda,
        energy,
        u.l2_norm_sq(p.n()),
        crit_norm_of(p, u),
        String::from("radial trial"),
    )
}

/// Quotient of the lifted cut-off bubble. The intertwined energy is the Euclidean fractional
/// energy of η U_ε; the remainder form uses the spherical transform of the lift.
pub fn bubble_quotient(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    bp: &BubbleParams,
) -> Result<QuotientReport> {
    check_kind(kind)?;
    let mut energy = bubble_energy(p, bp)?;
    if has_remainder(kind, p) {
        let u = conformal_lift(&cutoff_bubble_profile(p, bp)?, p)?;
        energy += remainder_energy(p, &u)?;
    }
    let q = p.critical_exponent();
    QuotientReport::assemble(
        lambda,
        energy,
        hyperbolic_l2_mass(p, bp),
        crit_mass(p, bp).powf(2.0 / q),
        format!("bubble eps={} delta={}", bp.eps(), bp.delta()),
    )
}

/// Search box for the bubble family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleBox {
    pub eps_min: f64,
    pub eps_max: f64,
    pub delta_min: f64,
    pub delta_max: f64,
}

impl BubbleBox {
    pub fn new(eps_min: f64, eps_max: f64, delta_min: f64, delta_max: f64) -> Result<Self> {
        BubbleParams::new(eps_min, delta_min)?;
        BubbleParams::new(eps_max, delta_max)?;
        if !(eps_min < eps_max && delta_min < delta_max) {
            return Err(Error::InvalidParameter {
                what: "bubble box bounds",
                value: eps_min,
            });
        }
        Ok(BubbleBox {
            eps_min,
            eps_max,
            delta_min,
            delta_max,
        })
    }
}

impl Default for BubbleBox {
    fn default() -> Self {
        BubbleBox {
            eps_min: 0.01,
            eps_max: 0.2,
            delta_min: 0.05,
            delta_max: 0.24,
        }
    }
}

/// Profile multiplied by the spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineSeed {
    /// Φ₀, the β = 0 spherical function.
    GroundState,
    /// The conformal lift of U_ε, normalized to 1 at the origin.
    BubbleLift { eps: f64 },
}

/// How the intertwined energy of a spline trial is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyRoute {
    /// Euclidean for widths up to `EUCLIDEAN_WIDTH_LIMIT`, spectral beyond.
    Auto,
    Spectral,
    /// Hankel transform of the pulled-back Euclidean profile.
    Euclidean,
}

pub const EUCLIDEAN_WIDTH_LIMIT: f64 = 4.0;

/// Admitted last-tenth share of the spline energy spectrum. Splines are only C², so their
/// spectra decay algebraically.
pub const SPLINE_TAIL: f64 = 1e-5;

/// Trials u = η_R · g · S on geodesic radii [0, R]: η_R is the flat cut-off with transition on
/// [R/2, R], g the seed profile and S a cubic spline with S(0) = 1, S'(0) = 0, natural at R,
/// through knots r_k = R (k/m)^γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineFamily {
    pub knots: usize,
    pub width: f64,
    pub grading: f64,
    pub seed: SplineSeed,
    pub route: EnergyRoute,
}

impl Default for SplineFamily {
    fn default() -> Self {
        SplineFamily {
            knots: 12,
            width: 8.0,
            grading: 1.0,
            seed: SplineSeed::GroundState,
            route: EnergyRoute::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrialFamily {
    Bubble(BubbleBox),
    Spline(SplineFamily),
}

/// Evaluation cap and stopping tolerance for the minimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub budget: usize,
    pub tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            budget: TOLERANCES.optimizer_budget,
            tol: TOLERANCES.optimizer_tol,
        }
    }
}

/// Best report of a minimization run together with its evaluation trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimization {
    pub report: QuotientReport,
    pub evaluations: usize,
    pub trace: Vec<f64>,
    pub converged: bool,
    /// Optimizer coordinates of the best trial (log ε, δ for bubbles; knot values for splines).
    pub point: Vec<f64>,
}

enum IntertwinedRoute {
    Spectral {
        basis: SphericalBasis,
        symbol: Vec<f64>,
    },
    /// Row-major table T[i][j] mapping hyperbolic samples to ŵ(ρ_i), and weights ω W_i ρ_i^{2s+n−1}.
    Euclidean {
        table: Vec<f64>,
        rho: RadialGrid,
        weights: Vec<f64>,
    },
}

/// Cached evaluator for one spline family and one (kind, p).
pub struct SplineTrials {
    kind: MultiplierKind,
    p: Params,
    family: SplineFamily,
    knots: Vec<f64>,
    grid: RadialGrid,
    base: Vec<f64>,
    intertwined: IntertwinedRoute,
    remainder: Option<(SphericalBasis, Vec<f64>)>,
}

fn seed_value(p: &Params, seed: SplineSeed, r: f64) -> f64 {
    match seed {
        SplineSeed::GroundState => spherical_function(p.n(), 0.0, r),
        SplineSeed::BubbleLift { eps } => {
            let t = euclidean_radius(r);
            (2.0 / (1.0 - t * t)).powf(p.s() - p.dim() / 2.0) / 2f64.powf(p.s() - p.dim() / 2.0)
                * (1.0 + (t / eps).powi(2)).powf(-p.bubble_exponent())
        }
    }
}

fn refine_to(breaks: &[f64], width: f64) -> Vec<f64> {
    let mut out = alloc::vec![breaks[0]];
    for w in breaks.windows(2) {
        let k = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        for j in 1..=k {
            out.push(w[0] + (w[1] - w[0]) * j as f64 / k as f64);
        }
    }
    out
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    v
}

impl SplineTrials {
    pub fn new(kind: MultiplierKind, p: &Params, family: SplineFamily) -> Result<Self> {
        check_kind(kind)?;
        let m = family.knots;
        let r_max = family.width;
        if m < 2 || !(r_max > 0.0 && r_max.is_finite()) || !(family.grading >= 1.0) {
            return Err(Error::InvalidParameter {
                what: "spline family (knots >= 2, width > 0, grading >= 1)",
                value: r_max,
            });
        }
        if let SplineSeed::BubbleLift { eps } = family.seed {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidParameter {
                    what: "seed bubble scale",
                    value: eps,
                });
            }
        }
        let knots: Vec<f64> = (0..=m)
            .map(|k| r_max * (k as f64 / m as f64).powf(family.grading))
            .collect();
        let mut breaks = knots.clone();
        for j in 1..8 {
            breaks.push(r_max * (0.5 + 0.5 * j as f64 / 8.0));
        }
        if let SplineSeed::BubbleLift { eps } = family.seed {
            let mut r = eps / 4.0;
            while r < r_max {
                breaks.push(r);
                r *= 1.3;
            }
        }
        let breaks = sorted_unique(breaks);
        let half = r_max / 2.0;
        let base_fn = |r: f64| cutoff(half, r) * seed_value(p, family.seed, r);
        let route = match family.route {
            EnergyRoute::Auto if r_max <= EUCLIDEAN_WIDTH_LIMIT => EnergyRoute::Euclidean,
            EnergyRoute::Auto => EnergyRoute::Spectral,
            other => other,
        };
        let (grid, intertwined) = match route {
            EnergyRoute::Euclidean => {
                if !(euclidean_radius(r_max) < 1.0) {
                    return Err(Error::Support { radius: r_max });
                }
                let exponent = p.dim() / 2.0 - p.s();
                let features: Vec<f64> = breaks.iter().map(|&r| euclidean_radius(r)).collect();
                let pulled = |t: f64| {
                    if t >= euclidean_radius(r_max) {
                        return 0.0;
                    }
                    (2.0 / (1.0 - t * t)).powf(exponent) * base_fn(geodesic_radius(t))
                };
                let (_, rho_max) = energy_with_cutoff(p.n(), p.s(), pulled, &features, 40.0)?;
                // one more doubling leaves room for the spline modulation
                let rho_max = 2.0 * rho_max;
                let grid = RadialGrid::from_breaks(
                    &refine_to(&breaks, (20.0 / rho_max).min(0.25)),
                    PANEL_NODES,
                    GridKind::HyperbolicGeodesic,
                )?;
                let t_support = euclidean_radius(r_max);
                let rho = rho_grid(rho_max, (10.0 / t_support).min(1.0))?;
                let nu = (p.dim() - 2.0) / 2.0;
                let cols: Vec<(f64, f64)> = grid
                    .nodes()
                    .iter()
                    .zip(grid.weights())
                    .map(|(&r, &w)| {
                        let t = euclidean_radius(r);
                        let dt = w * (1.0 - t * t) / 2.0;
                        (
                            t,
                            dt * (2.0 / (1.0 - t * t)).powf(exponent) * t.powf(nu + 1.0),
                        )
                    })
                    .collect();
                let mut table = Vec::with_capacity(rho.len() * cols.len());
                for &k in rho.nodes() {
                    let scale = k.powf(-nu);
                    for &(t, c) in &cols {
                        table.push(scale * c * bessel_j(nu, t * k)?);
                    }
                }
                let omega = sphere_area(p.n());
                let weights = rho
                    .nodes()
                    .iter()
                    .zip(rho.weights())
                    .map(|(&k, &w)| omega * w * k.powf(2.0 * p.s() + p.dim() - 1.0))
                    .collect();
                (
                    grid,
                    IntertwinedRoute::Euclidean {
                        table,
                        rho,
                        weights,
                    },
                )
            }
            _ => {
                let grid = RadialGrid::from_breaks(
                    &refine_to(&breaks, 0.25),
                    PANEL_NODES,
                    GridKind::HyperbolicGeodesic,
                )?;
                let seed: Vec<f64> = grid.nodes().iter().map(|&r| base_fn(r)).collect();
                let mut chosen = None;
                for b_max in [20.0, 60.0, 120.0, 240.0] {
                    let beta = frequency_grid(b_max, r_max)?;
                    let basis = SphericalBasis::new(p.n(), grid.clone(), beta.clone());
                    let symbol: Vec<f64> = beta
                        .nodes()
                        .iter()
                        .map(|&b| multiplier(MultiplierKind::Intertwined, p, b))
                        .collect::<Result<_>>()?;
                    let terms = basis.form_terms(&symbol, &basis.forward(&seed));
                    if last_tenth_share(&beta, &terms) < 1e-2 * TOLERANCES.spectral_tail {
                        chosen = Some(IntertwinedRoute::Spectral { basis, symbol });
                        break;
                    }
                }
                let route = chosen.ok_or(Error::Tail { relative: f64::NAN })?;
                (grid, route)
            }
        };
        let remainder = if has_remainder(kind, p) {
            let beta = frequency_grid(20.0, r_max)?;
            let basis = SphericalBasis::new(p.n(), grid.clone(), beta.clone());
            let symbol: Vec<f64> = beta
                .nodes()
                .iter()
                .map(|&b| multiplier(MultiplierKind::Remainder, p, b))
                .collect::<Result<_>>()?;
            Some((basis, symbol))
        } else {
            None
        };
        let base = grid.nodes().iter().map(|&r| base_fn(r)).collect();
        Ok(SplineTrials {
            kind,
            p: *p,
            family,
            knots,
            grid,
            base,
            intertwined,
            remainder,
        })
    }

    pub fn family(&self) -> &SplineFamily {
        &self.family
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of free knot values (all knots but the origin).
    pub fn dimension(&self) -> usize {
        self.knots.len() - 1
    }

    /// The trial for knot values v_1..v_m (v_0 = 1).
    pub fn trial(&self, values: &[f64]) -> Result<RadialFunction> {
        if values.len() != self.dimension() {
            return Err(Error::InvalidParameter {
                what: "knot value count",
                value: values.len() as f64,
            });
        }
        let mut y = alloc::vec![1.0];
        y.extend_from_slice(values);
        let spline = CubicSpline::clamped_natural(&self.knots, &y, 0.0)?;
        let samples = self
            .grid
            .nodes()
            .iter()
            .zip(&self.base)
            .map(|(&r, &b)| b * spline.eval(r))
            .collect();
        RadialFunction::new(self.grid.clone(), samples, self.family.width)
    }

    fn intertwined_energy(&self, u: &[f64]) -> Result<f64> {
        match &self.intertwined {
            IntertwinedRoute::Spectral { basis, symbol } => {
                let terms = basis.form_terms(symbol, &basis.forward(u));
                let tail = last_tenth_share(basis.beta_grid(), &terms);
                if tail > SPLINE_TAIL {
                    return Err(Error::Tail { relative: tail });
                }
                Ok(terms.iter().sum())
            }
            IntertwinedRoute::Euclidean {
                table,
                rho,
                weights,
            } => {
                let m = u.len();
                let terms: Vec<f64> = weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| {
                        let f: f64 = table[i * m..(i + 1) * m]
                            .iter()
                            .zip(u)
                            .map(|(a, b)| a * b)
                            .sum();
                        w * f * f
                    })
                    .collect();
                let tail = last_tenth_share(rho, &terms);
                if tail > SPLINE_TAIL {
                    return Err(Error::Tail { relative: tail });
                }
                Ok(terms.iter().sum())
            }
        }
    }

    /// Remainder form of a trial on this family's grid (0 unless GJMS at non-integer s).
    pub fn remainder_energy(&self, u: &RadialFunction) -> f64 {
        match &self.remainder {
            Some((basis, symbol)) => basis.form(symbol, &basis.forward(u.values())),
            None => 0.0,
        }
    }

    /// Quotient report of the trial with the given knot values.
    pub fn evaluate(&self, lambda: f64, values: &[f64]) -> Result<QuotientReport> {
        let u = self.trial(values)?;
        if u.is_zero() {
            return Err(Error::ZeroTrial);
        }
        let energy = self.intertwined_energy(u.values())? + self.remainder_energy(&u);
        let descriptor = format!(
            "spline m={} R={} grading={} seed={} values={:?}",
            self.family.knots,
            self.family.width,
            self.family.grading,
            match self.family.seed {
                SplineSeed::GroundState => String::from("ground"),
                SplineSeed::BubbleLift { eps } => format!("bubble:{eps}"),
            },
            values
        );
        let report = QuotientReport::assemble(
            lambda,
            energy,
            u.l2_norm_sq(self.p.n()),
            crit_norm_of(&self.p, &u),
            descriptor,
        )?;
        Ok(report.normalized())
    }

    /// Nelder–Mead over the knot values starting from `start` (all ones when `None`).
    pub fn minimize(
        &self,
        lambda: f64,
        start: Option<&[f64]>,
        options: MinimizeOptions,
    ) -> Result<Minimization> {
        let ones = alloc::vec![1.0; self.dimension()];
        let x0 = start.unwrap_or(&ones);
        let objective = |x: &[f64]| {
            self.evaluate(lambda, x)
                .map(|r| r.quotient)
                .unwrap_or(f64::INFINITY)
        };
        let s = nelder_mead_capped(objective, x0, 0.2, options.tol, options.budget)?;
        let report = self.evaluate(lambda, &s.x)?;
        Ok(Minimization {
            report,
            evaluations: s.evaluations,
            trace: s.trace,
            converged: s.converged,
            point: s.x,
        })
    }

    pub fn kind(&self) -> MultiplierKind {
        self.kind
    }
}

fn bubble_objective(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    log_eps: f64,
    delta: f64,
) -> f64 {
    BubbleParams::new(log_eps.exp(), delta)
        .and_then(|bp| bubble_quotient(kind, p, lambda, &bp))
        .map(|r| r.quotient)
        .unwrap_or(f64::INFINITY)
}

const GOLDEN_STEPS: usize = 12;

fn minimize_bubble(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    bx: &BubbleBox,
    start: Option<(f64, f64)>,
    options: MinimizeOptions,
) -> Result<Minimization> {
    let (lo_x, hi_x) = (bx.eps_min.ln(), bx.eps_max.ln());
    let (mut x, mut d) =
        start.unwrap_or((0.5 * (lo_x + hi_x), 0.5 * (bx.delta_min + bx.delta_max)));
    let mut best = bubble_objective(kind, p, lambda, x, d);
    let mut evaluations = 1;
    let mut trace = alloc::vec![best];
    let mut converged = false;
    while evaluations < options.budget {
        let before = best;
        let (nx, vx, ex) = golden_section(
            |t| bubble_objective(kind, p, lambda, t, d),
            lo_x,
            hi_x,
            GOLDEN_STEPS,
        );
        evaluations += ex;
        if vx < best {
            x = nx;
            best = vx;
        }
        let (nd, vd, ed) = golden_section(
            |t| bubble_objective(kind, p, lambda, x, t),
            bx.delta_min,
            bx.delta_max,
            GOLDEN_STEPS,
        );
        evaluations += ed;
        if vd < best {
            d = nd;
            best = vd;
        }
        trace.push(best);
        if (before - best).abs() <= options.tol * best.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    let report = bubble_quotient(kind, p, lambda, &BubbleParams::new(x.exp(), d)?)?;
    Ok(Minimization {
        report,
        evaluations,
        trace,
        converged,
        point: alloc::vec![x, d],
    })
}

/// Minimization with trace; `converged` is false when the evaluation cap was reached first.
pub fn minimize_quotient_traced(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    family: &TrialFamily,
    options: MinimizeOptions,
) -> Result<Minimization> {
    check_kind(kind)?;
    match family {
        TrialFamily::Bubble(bx) => minimize_bubble(kind, p, lambda, bx, None, options),
        TrialFamily::Spline(sf) => SplineTrials::new(kind, p, *sf)?.minimize(lambda, None, options),
    }
}

/// Best quotient over the family; `BudgetExceeded` if the cap is hit before the tolerance.
pub fn minimize_quotient(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    family: &TrialFamily,
    options: MinimizeOptions,
) -> Result<QuotientReport> {
    let m = minimize_quotient_traced(kind, p, lambda, family, options)?;
    if !m.converged {
        return Err(Error::BudgetExceeded {
            evaluations: m.evaluations,
            best: m.report.quotient,
        });
    }
    Ok(m.report)
}

/// One minimized report per λ, in the order given. Grid points are processed in increasing λ,
/// each warm-started from the previous optimum; the previous best trial re-evaluated at the new
/// λ competes with the new optimum, so the minimized quotient is non-increasing in λ.
pub fn gap_scan(
    kind: MultiplierKind,
    p: &Params,
    lambdas: &[f64],
    family: &TrialFamily,
    options: MinimizeOptions,
) -> Result<Vec<QuotientReport>> {
    check_kind(kind)?;
    if lambdas.is_empty() || lambdas.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidParameter {
            what: "lambda grid",
            value: lambdas.len() as f64,
        });
    }
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]));
    let mut out: Vec<Option<QuotientReport>> = alloc::vec![None; lambdas.len()];
    let mut prev: Option<Minimization> = None;
    let spline = match family {
        TrialFamily::Spline(sf) => Some(SplineTrials::new(kind, p, *sf)?),
        TrialFamily::Bubble(_) => None,
    };
    for &i in &order {
        let lambda = lambdas[i];
        let run = match (family, &spline) {
            (TrialFamily::Spline(_), Some(trials)) => {
                trials.minimize(lambda, prev.as_ref().map(|m| m.point.as_slice()), options)?
            }
            (TrialFamily::Bubble(bx), _) => minimize_bubble(
                kind,
                p,
                lambda,
                bx,
                prev.as_ref().map(|m| (m.point[0], m.point[1])),
                options,
            )?,
            _ => unreachable!("spline evaluator is built for spline families"),
        };
        let best = match prev {
            Some(old) if old.report.at_lambda(lambda).quotient < run.report.quotient => {
                Minimization {
                    report: old.report.at_lambda(lambda),
                    ..old
                }
            }
            _ => run,
        };
        out[i] = Some(best.report.clone());
        prev = Some(best);
    }
    Ok(out
        .into_iter()
        .map(|r| r.expect("every grid point is processed"))
        .collect())
}

/// Internal reference value S_est = E(U)/M∞^{2/2*} with its extrapolation error bar.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpConstant {
    pub value: f64,
    pub error_bar: f64,
    pub energy: EnergyBaseline,
    pub crit_mass: f64,
}

pub fn sharp_constant_estimate(p: &Params) -> Result<SharpConstant> {
    if !(2..=10).contains(&p.n()) {
        return Err(Error::InvalidParameter {
            what: "dimension for the sharp-constant estimate (2..=10)",
            value: p.dim(),
        });
    }
    let energy = bubble_energy_baseline(p)?;
    let crit_mass = critical_mass_limit(p);
    let norm = crit_mass.powf(2.0 / p.critical_exponent());
    Ok(SharpConstant {
        value: energy.value / norm,
        error_bar: energy.error_bar / norm,
        energy,
        crit_mass,
    })
}

/// Inputs of the multi-bump bound Q_λ(u_N) ≤ −Nq + 2CN²e^{−αR_N}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowdownInputs {
    /// −numerator of the single-bump trial (> 0).
    pub q: f64,
    /// Kernel decay constant and rate: |k(r)| ≤ C e^{−αr}.
    pub c: f64,
    pub alpha: f64,
    pub r0: f64,
    /// crit_norm of the single bump.
    pub crit_norm: f64,
}

impl BlowdownInputs {
    /// Smallest R₀ ≥ 0 with 2Ce^{−αR₀} ≤ q/4.
    pub fn minimal_r0(q: f64, c: f64, alpha: f64) -> f64 {
        ((8.0 * c / q).ln() / alpha).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowdownRow {
    pub bumps: u64,
    pub separation: f64,
    pub bound: f64,
    pub scaled_bound: f64,
}

pub fn multibump_blowdown(
    p: &Params,
    lambda: f64,
    inputs: &BlowdownInputs,
    n_values: &[u64],
) -> Result<Vec<BlowdownRow>> {
    let BlowdownInputs {
        q,
        c,
        alpha,
        r0,
        crit_norm,
    } = *inputs;
    if !(q > 0.0) {
        return Err(Error::InvalidParameter {
            what: "single-bump deficit q (need q > 0)",
            value: q,
        });
    }
    if !(c >= 0.0 && alpha > 0.0 && r0 >= 0.0 && crit_norm > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            what: "blow-down constants",
            value: alpha,
        });
    }
    if n_values.is_empty() || n_values.contains(&0) {
        return Err(Error::InvalidParameter {
            what: "bump counts (need N >= 1)",
            value: n_values.len() as f64,
        });
    }
    let exponent = 2.0 / p.critical_exponent();
    Ok(n_values
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let separation = 2.0 / alpha * nf.ln() + r0;
            let bound = -nf * q + 2.0 * c * nf * nf * (-alpha * separation).exp();
            BlowdownRow {
                bumps: n,
                separation,
                bound,
                scaled_bound: bound / (nf.powf(exponent) * crit_norm),
            }
        })
        .collect())
}

/// Slope of log(−scaled bound) against log N.
pub fn blowdown_slope(rows: &[BlowdownRow]) -> Result<LineFit> {
    let n: Vec<f64> = rows.iter().map(|r| r.bumps as f64).collect();
    let v: Vec<f64> = rows.iter().map(|r| r.scaled_bound).collect();
    if v.iter().any(|&x| !(x < 0.0)) {
        return Err(Error::DegenerateData("scaled bound is not negative"));
    }
    log_log_fit(&n, &v)
}

/// Width of the wide low-frequency trial.
pub const WIDE_WIDTH: f64 = 40.0;

/// The ground-state spline family of width `WIDE_WIDTH`.
pub fn wide_family() -> SplineFamily {
    SplineFamily {
        width: WIDE_WIDTH,
        ..SplineFamily::default()
    }
}

/// The wide ground-state trial (all knot values 1) at λ, used as the single bump.
pub fn wide_trial(kind: MultiplierKind, p: &Params, lambda: f64) -> Result<QuotientReport> {
    let trials = SplineTrials::new(kind, p, wide_family())?;
    trials.evaluate(lambda, &alloc::vec![1.0; trials.dimension()])
}

/// q from the wide trial, (C, α) from the kernel decay fit on r ∈ {2, …, 6}, and the minimal R₀.
pub fn calibrate_blowdown(
    kind: MultiplierKind,
    p: &Params,
    lambda: f64,
    eps_reg: f64,
) -> Result<BlowdownInputs> {
    let bump = wide_trial(kind, p, lambda)?;
    let q = -bump.numerator();
    if !(q > 0.0) {
        return Err(Error::InvalidParameter {
            what: "lambda (no negative-numerator trial; need lambda above the spectral bottom)",
            value: lambda,
        });
    }
    let fit = decay_rate_fit(kind, p, &[2.0, 3.0, 4.0, 5.0, 6.0], eps_reg)?;
    let alpha = -fit.slope;
    if !(alpha > 0.0) {
        return Err(Error::DegenerateData(
            "kernel does not decay on the fitted range",
        ));
    }
    let c = fit
        .radii
        .iter()
        .zip(&fit.values)
        .map(|(&r, &k)| k.abs() * (alpha * r).exp())
        .fold(0.0, f64::max);
    let r0 = BlowdownInputs::minimal_r0(q, c, alpha);
    Ok(BlowdownInputs {
        q,
        c,
        alpha,
        r0,
        crit_norm: bump.crit_norm,
    })
}
