use chrono::{SecondsFormat, Utc};
use gjms_core::bubbles::{
    bubble_energy, bubble_energy_baseline, crit_mass, crit_mass_experiment, critical_mass_limit,
    l2_mass_experiment, rate_fit, BubbleParams, L2Regime,
};
use gjms_core::fit::linear_fit;
use gjms_core::multipliers::{b_constant, gap_constant, spectral_bottom, tabulated_multiplier};
use gjms_core::quotient::{
    blowdown_slope, calibrate_blowdown, gap_scan, multibump_blowdown, sharp_constant_estimate,
    BubbleBox, EnergyRoute, MinimizeOptions, SplineFamily, SplineSeed, TrialFamily,
};
use gjms_core::spherical::regularized_kernel;
use gjms_core::{MultiplierKind, Params};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::*;
use crate::error::{LabError, LabResult};
use crate::output::{real, summary_path, to_sorted_json, write_csv, write_json, RunManifest};

fn params(n: u32, s: f64) -> LabResult<Params> {
    Ok(Params::new(n, s)?)
}

fn kind(name: &str, allow_remainder: bool) -> LabResult<MultiplierKind> {
    let k: MultiplierKind = name
        .parse()
        .map_err(|_| LabError::Input(format!("unknown operator kind `{name}`")))?;
    if k == MultiplierKind::Remainder && !allow_remainder {
        return Err(LabError::Input(
            "this subcommand takes --kind gjms or intertwined".into(),
        ));
    }
    Ok(k)
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[derive(Serialize)]
struct Constants {
    n: u32,
    s: f64,
    lambda0: f64,
    lambda0_tilde: f64,
    b: f64,
    gap: f64,
    critical_exponent: f64,
    rho: f64,
}

pub fn constants(a: &ConstantsArgs) -> LabResult<()> {
    let p = params(a.n, a.s)?;
    let c = Constants {
        n: a.n,
        s: a.s,
        lambda0: spectral_bottom(MultiplierKind::Gjms, &p)?,
        lambda0_tilde: spectral_bottom(MultiplierKind::Intertwined, &p)?,
        b: b_constant(a.s)?,
        gap: gap_constant(a.s)?,
        critical_exponent: p.critical_exponent(),
        rho: p.rho(),
    };
    print!("{}", to_sorted_json(&c));
    Ok(())
}

pub fn multiplier_table(a: &MultiplierArgs) -> LabResult<()> {
    let started = now();
    let k = kind(&a.kind, true)?;
    let p = params(a.n, a.s)?;
    if a.count < 2 || !(a.beta_max > 0.0 && a.beta_max.is_finite()) {
        return Err(LabError::Input(
            "need --count >= 2 and a finite --beta-max > 0".into(),
        ));
    }
    let rows = (0..a.count)
        .into_par_iter()
        .map(|i| {
            let beta = a.beta_max * i as f64 / (a.count - 1) as f64;
            tabulated_multiplier(k, &p, beta).map(|m| vec![real(beta), real(m)])
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_csv(&a.out, &["beta", "value"], &rows)?;
    RunManifest::new("multiplier", a, started, &[&a.out]).write(&a.out)?;
    Ok(())
}

#[derive(Serialize)]
struct SlopeCheck {
    slope: f64,
    target: f64,
    /// Admitted |slope − target|.
    tolerance: f64,
    dropped_largest_eps: bool,
    pass: bool,
}

impl SlopeCheck {
    fn new(slope: f64, target: f64, tolerance: f64, dropped_largest_eps: bool) -> Self {
        SlopeCheck {
            slope,
            target,
            tolerance,
            dropped_largest_eps,
            pass: (slope - target).abs() <= tolerance,
        }
    }
}

#[derive(Serialize)]
struct L2Summary {
    regime: &'static str,
    log_corrected: bool,
    #[serde(flatten)]
    slope: SlopeCheck,
    /// Increments of mass/ε^{2s} per unit |log ε| and their limit 2^{2s}ω.
    log_increments: Vec<f64>,
    increment_limit: f64,
    increment_spread: f64,
}

#[derive(Serialize)]
struct BubbleSummary {
    manifest: String,
    n: u32,
    s: f64,
    delta: f64,
    eps: Vec<f64>,
    crit_mass_limit: f64,
    crit_mass: SlopeCheck,
    l2_mass: L2Summary,
    energy_baseline: f64,
    energy_baseline_error_bar: f64,
    energy: SlopeCheck,
    pass: bool,
}

pub fn bubble_asymptotics(a: &BubbleArgs) -> LabResult<()> {
    let started = now();
    let p = params(a.n, a.s)?;
    let eps = parse_reals(&a.eps, "eps ladder")?;
    let crit_fit = crit_mass_experiment(&p, a.delta, &eps)?;
    let l2 = l2_mass_experiment(&p, a.delta, &eps)?;
    let bps = eps
        .iter()
        .map(|&e| BubbleParams::new(e, a.delta))
        .collect::<Result<Vec<_>, _>>()?;
    let (baseline, energies) = rayon::join(
        || bubble_energy_baseline(&p),
        || {
            bps.par_iter()
                .map(|bp| bubble_energy(&p, bp))
                .collect::<Result<Vec<f64>, _>>()
        },
    );
    let (baseline, energies) = (baseline?, energies?);
    let energy_fit = rate_fit(
        &eps,
        energies
            .iter()
            .map(|e| (e - baseline.value).abs())
            .collect(),
    )?;

    let rows: Vec<Vec<String>> = bps
        .iter()
        .zip(&l2.rate.values)
        .zip(&energies)
        .map(|((bp, m), e)| vec![real(bp.eps()), real(crit_mass(&p, bp)), real(*m), real(*e)])
        .collect();
    write_csv(&a.out, &["eps", "crit_mass", "l2_mass", "energy"], &rows)?;

    let summary_file = summary_path(&a.out);
    let manifest = RunManifest::new("bubble-asymptotics", a, started, &[&a.out, &summary_file])
        .write(&a.out)?;
    let n = p.dim();
    let lead = n - 2.0 * p.s();
    let crit = SlopeCheck::new(crit_fit.slope(), n, 0.3, crit_fit.dropped_largest);
    let mut l2_slope = SlopeCheck::new(
        l2.rate.slope(),
        l2.target_exponent,
        0.05 * l2.target_exponent,
        l2.rate.dropped_largest,
    );
    let log_corrected = l2.regime == L2Regime::Logarithmic;
    if log_corrected {
        l2_slope.pass = l2.increment_spread() < 0.1;
    }
    let energy_tol = if lead < 2.0 { 0.15 } else { 0.10 };
    let energy = SlopeCheck::new(
        energy_fit.slope(),
        lead,
        energy_tol * lead,
        energy_fit.dropped_largest,
    );
    let pass = crit.pass && l2_slope.pass && energy.pass;
    let failed: Vec<&str> = [
        ("crit_mass", crit.pass),
        ("l2_mass", l2_slope.pass),
        ("energy", energy.pass),
    ]
    .iter()
    .filter(|(_, ok)| !ok)
    .map(|(name, _)| *name)
    .collect();
    let summary = BubbleSummary {
        manifest,
        n: a.n,
        s: a.s,
        delta: a.delta,
        eps,
        crit_mass_limit: critical_mass_limit(&p),
        crit_mass: crit,
        l2_mass: L2Summary {
            regime: l2.regime.name(),
            log_corrected,
            increment_spread: l2.increment_spread(),
            log_increments: l2.log_increments.clone(),
            increment_limit: l2.increment_limit,
            slope: l2_slope,
        },
        energy_baseline: baseline.value,
        energy_baseline_error_bar: baseline.error_bar,
        energy,
        pass,
    };
    write_json(&summary_file, &summary)?;
    if !pass {
        return Err(LabError::Fit(format!(
            "rate fit outside its window: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn spline_seed(spec: &str) -> LabResult<SplineSeed> {
    if spec == "ground" {
        return Ok(SplineSeed::GroundState);
    }
    spec.strip_prefix("bubble:")
        .and_then(|e| e.parse::<f64>().ok())
        .map(|eps| SplineSeed::BubbleLift { eps })
        .ok_or_else(|| LabError::Input(format!("bad --seed `{spec}` (ground or bubble:<eps>)")))
}

#[derive(Serialize)]
struct GapSummary {
    manifest: String,
    s_est: f64,
    s_est_error_bar: f64,
    /// min margin over λ ≤ 0 (intertwined operator only)
    floor_margin: Option<f64>,
    floor_ok: bool,
}

pub fn gap(a: &GapScanArgs) -> LabResult<()> {
    let started = now();
    let k = kind(&a.kind, false)?;
    let p = params(a.n, a.s)?;
    let lambdas = parse_reals(&a.lambda, "lambda grid")?;
    let family = match a.family.as_str() {
        "bubble" => TrialFamily::Bubble(BubbleBox::new(
            a.eps_min,
            a.eps_max,
            a.delta_min,
            a.delta_max,
        )?),
        "spline" => TrialFamily::Spline(SplineFamily {
            knots: a.knots,
            width: a.width,
            grading: a.grading,
            seed: spline_seed(&a.seed)?,
            route: EnergyRoute::Auto,
        }),
        other => {
            return Err(LabError::Input(format!(
                "unknown family `{other}` (bubble or spline)"
            )))
        }
    };
    if a.budget == 0 || !(a.tol > 0.0) {
        return Err(LabError::Input("need --budget > 0 and --tol > 0".into()));
    }
    let options = MinimizeOptions {
        budget: a.budget,
        tol: a.tol,
    };
    let (sharp, reports) = rayon::join(
        || sharp_constant_estimate(&p),
        || gap_scan(k, &p, &lambdas, &family, options),
    );
    let (sharp, reports) = (sharp?, reports?);
    let margin = |q: f64| q / sharp.value - 1.0;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                real(r.lambda),
                real(r.quotient),
                real(margin(r.quotient)),
                r.trial_descriptor.clone(),
            ]
        })
        .collect();
    write_csv(
        &a.out,
        &["lambda", "quotient", "margin_vs_Sest", "trial_descriptor"],
        &rows,
    )?;
    let summary_file = summary_path(&a.out);
    let manifest =
        RunManifest::new("gap-scan", a, started, &[&a.out, &summary_file]).write(&a.out)?;
    let floor_margin = (k == MultiplierKind::Intertwined)
        .then(|| {
            reports
                .iter()
                .filter(|r| r.lambda <= 0.0)
                .map(|r| margin(r.quotient))
                .reduce(f64::min)
        })
        .flatten();
    let floor_ok = floor_margin.is_none_or(|m| m >= -2e-3);
    write_json(
        &summary_file,
        &GapSummary {
            manifest,
            s_est: sharp.value,
            s_est_error_bar: sharp.error_bar,
            floor_margin,
            floor_ok,
        },
    )?;
    if !floor_ok {
        return Err(LabError::Fit(format!(
            "quotient below S_est(1 - 2e-3) at lambda <= 0 (margin {floor_margin:?})"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct KernelSummary {
    manifest: String,
    slope: f64,
    target: f64,
    /// Pass when slope ≤ 0.8·target.
    threshold: f64,
    monotone: bool,
    pass: bool,
}

pub fn kernel_decay(a: &KernelArgs) -> LabResult<()> {
    let started = now();
    let k = kind(&a.kind, true)?;
    let p = params(a.n, a.s)?;
    let radii = parse_reals(&a.r, "radius list")?;
    if let Some(r) = radii.iter().find(|&&r| r < 0.5) {
        return Err(LabError::Input(format!("kernel radius {r} < 0.5")));
    }
    if !(a.eps_reg > 0.0) {
        return Err(LabError::Input("need --eps-reg > 0".into()));
    }
    let values = radii
        .par_iter()
        .map(|&r| regularized_kernel(k, &p, r, a.eps_reg))
        .collect::<Result<Vec<f64>, _>>()?;
    let logs: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let rows: Vec<Vec<String>> = radii
        .iter()
        .zip(&values)
        .zip(&logs)
        .map(|((r, v), l)| vec![real(*r), real(*v), real(*l)])
        .collect();
    write_csv(&a.out, &["r", "k_eps", "log_abs_k"], &rows)?;
    let summary_file = summary_path(&a.out);
    let manifest =
        RunManifest::new("kernel-decay", a, started, &[&a.out, &summary_file]).write(&a.out)?;
    let fit = linear_fit(&radii, &logs)?;
    let target = -p.rho();
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&i, &j| radii[i].total_cmp(&radii[j]));
    let monotone = order
        .windows(2)
        .all(|w| values[w[1]].abs() <= values[w[0]].abs());
    let pass = fit.slope <= 0.8 * target;
    write_json(
        &summary_file,
        &KernelSummary {
            manifest,
            slope: fit.slope,
            target,
            threshold: 0.8 * target,
            monotone,
            pass,
        },
    )?;
    if !pass {
        return Err(LabError::Fit(format!(
            "decay slope {} above {}",
            fit.slope,
            0.8 * target
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BlowdownSummary {
    manifest: String,
    q: f64,
    c: f64,
    alpha: f64,
    r0: f64,
    crit_norm: f64,
    slope: f64,
    target: f64,
    relative_tolerance: f64,
    pass: bool,
}

pub fn blowdown(a: &BlowdownArgs) -> LabResult<()> {
    let started = now();
    let k = kind(&a.kind, false)?;
    let p = params(a.n, a.s)?;
    let bumps = parse_counts(&a.bumps)?;
    if bumps.len() < 2 {
        return Err(LabError::Input("need at least two bump counts".into()));
    }
    let bottom = spectral_bottom(k, &p)?;
    if !(a.lambda > bottom) {
        return Err(LabError::Input(format!(
            "lambda = {} is not above the spectral bottom {bottom} of the {} operator: <(P - lambda)u, u> >= 0 \
             for every u if and only if lambda <= {bottom}, so no trial has a negative numerator",
            a.lambda,
            k.name()
        )));
    }
    if !(a.eps_reg > 0.0) {
        return Err(LabError::Input("need --eps-reg > 0".into()));
    }
    let inputs = calibrate_blowdown(k, &p, a.lambda, a.eps_reg)?;
    let rows = multibump_blowdown(&p, a.lambda, &inputs, &bumps)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.bumps.to_string(),
                real(r.separation),
                real(r.bound),
                real(r.scaled_bound),
            ]
        })
        .collect();
    write_csv(&a.out, &["N", "R_N", "bound", "scaled_bound"], &table)?;
    let summary_file = summary_path(&a.out);
    let manifest =
        RunManifest::new("blowdown", a, started, &[&a.out, &summary_file]).write(&a.out)?;
    let slope = blowdown_slope(&rows)?.slope;
    let target = 2.0 * p.s() / p.dim();
    let pass = ((slope - target) / target).abs() <= 0.1;
    write_json(
        &summary_file,
        &BlowdownSummary {
            manifest,
            q: inputs.q,
            c: inputs.c,
            alpha: inputs.alpha,
            r0: inputs.r0,
            crit_norm: inputs.crit_norm,
            slope,
            target,
            relative_tolerance: 0.1,
            pass,
        },
    )?;
    if !pass {
        return Err(LabError::Fit(format!(
            "blow-down slope {slope} not within 10% of {target}"
        )));
    }
    Ok(())
}
