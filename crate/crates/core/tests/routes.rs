use gjms_core::bubbles::{
    bubble_energy_baseline, bubble_energy_baseline_on, critical_mass_limit, BASELINE_RADII,
};
use gjms_core::multipliers::{
    integer_multiplier, multiplier, spectral_bottom, tabulated_multiplier,
};
use gjms_core::quadrature::RadialGrid;
use gjms_core::quotient::{sharp_constant_estimate, sobolev_quotient, SplineFamily, SplineTrials};
use gjms_core::radial::RadialFunction;
use gjms_core::spherical::{quadratic_form, regularized_kernel};
use gjms_core::{MultiplierKind, Params};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn baseline_is_stable_under_doubling_radii() {
    for (n, s) in [(3, 1.0), (5, 0.8), (4, 0.75)] {
        let p = Params::new(n, s).unwrap();
        let a = bubble_energy_baseline(&p).unwrap();
        let b = bubble_energy_baseline_on(&p, &[25.0, 50.0, 100.0]).unwrap();
        assert!(
            rel(a.value, b.value) < 1e-4,
            "({n},{s}): {} vs {}",
            a.value,
            b.value
        );
        assert_eq!(a.radii, BASELINE_RADII.to_vec());
    }
    let p = Params::new(3, 1.0).unwrap();
    assert!(bubble_energy_baseline_on(&p, &[25.0, 12.5, 50.0]).is_err());
}

#[test]
fn sharp_constant_matches_its_parts() {
    let p = Params::new(5, 0.8).unwrap();
    let s = sharp_constant_estimate(&p).unwrap();
    let norm = critical_mass_limit(&p).powf(2.0 / p.critical_exponent());
    assert!(rel(s.value, s.energy.value / norm) < 1e-14);
    assert!(s.error_bar >= 0.0 && s.error_bar < 1e-3 * s.value);
}

#[test]
fn tables_follow_the_gamma_route() {
    let p = Params::new(5, 0.8).unwrap();
    for kind in [
        MultiplierKind::Gjms,
        MultiplierKind::Intertwined,
        MultiplierKind::Remainder,
    ] {
        for beta in [0.0, 0.3, 7.0, 42.0] {
            assert_eq!(
                tabulated_multiplier(kind, &p, beta).unwrap(),
                multiplier(kind, &p, beta).unwrap()
            );
        }
    }
    let p = Params::new(5, 2.0).unwrap();
    for beta in [0.0, 0.5, 3.0, 20.0] {
        let gamma_route = multiplier(MultiplierKind::Gjms, &p, beta).unwrap();
        let table = tabulated_multiplier(MultiplierKind::Gjms, &p, beta).unwrap();
        assert_eq!(table, integer_multiplier(2, beta));
        assert!(rel(gamma_route, table) < 1e-12);
    }
}

#[test]
fn quadratic_form_is_bounded_below_by_the_bottom() {
    let p = Params::new(4, 0.75).unwrap();
    for width in [0.4, 1.0, 2.0] {
        let support = 6.0;
        let grid = RadialGrid::default_hyperbolic(support).unwrap();
        let u = RadialFunction::sample(grid, support, |r| {
            (-(r * r) / (2.0 * width * width)).exp() * (1.0 - (r / support).powi(2)).powi(6)
        })
        .unwrap();
        for kind in [MultiplierKind::Gjms, MultiplierKind::Intertwined] {
            let bottom = spectral_bottom(kind, &p).unwrap();
            let form = quadratic_form(kind, &p, bottom, &u).unwrap();
            assert!(
                form >= -1e-9 * u.l2_norm_sq(4),
                "{kind:?} width {width}: {form}"
            );
        }
    }
}

#[test]
fn spline_trial_and_direct_quotient_agree() {
    let p = Params::new(5, 0.7).unwrap();
    let family = SplineFamily {
        width: 6.0,
        ..SplineFamily::default()
    };
    let trials = SplineTrials::new(MultiplierKind::Gjms, &p, family).unwrap();
    let values: Vec<f64> = (1..=trials.dimension())
        .map(|k| 1.0 - 0.05 * k as f64)
        .collect();
    let u = trials.trial(&values).unwrap();
    let a = trials.evaluate(0.05, &values).unwrap();
    let b = sobolev_quotient(MultiplierKind::Gjms, &p, 0.05, &u).unwrap();
    assert!(
        rel(a.quotient, b.quotient) < 1e-6,
        "{} vs {}",
        a.quotient,
        b.quotient
    );
}

#[test]
fn kernel_decays_and_is_smoothing_stable() {
    let p = Params::new(3, 0.6).unwrap();
    let near = regularized_kernel(MultiplierKind::Gjms, &p, 2.0, 0.01).unwrap();
    let far = regularized_kernel(MultiplierKind::Gjms, &p, 5.0, 0.01).unwrap();
    assert!(far.abs() < near.abs());
    let halved = regularized_kernel(MultiplierKind::Gjms, &p, 5.0, 0.005).unwrap();
    assert!(rel(halved, far) < 0.05, "{far} vs {halved}");
}
