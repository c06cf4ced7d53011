//! Complex Gamma, Gauss hypergeometric, associated Legendre and Bessel functions.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result, TOLERANCES};
#[allow(unused_imports)]
use num_traits::Float;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_2: f64 = core::f64::consts::LN_2;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Below this real part the recurrence is replaced by the reflection formula.
const RECURRENCE_FLOOR: f64 = -60.0;

fn is_pole(z: Complex64) -> bool {
    let tol = TOLERANCES.pole;
    z.im.abs() < tol && z.re < tol && (z.re - z.re.round()).abs() < tol
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + (LANCZOS_G + 0.5);
    (z + 0.5) * t.ln() - t + acc.ln() + LN_SQRT_2PI
}

/// log(sin(πz)), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 5.0 {
        return (z * PI).sin().ln();
    }
    let w = z * PI;
    let i = Complex64::i();
    if z.im > 0.0 {
        let e2 = (i * w * 2.0).exp();
        Complex64::new(-LN_2, PI / 2.0) - i * w + (Complex64::new(1.0, 0.0) - e2).ln()
    } else {
        let e2 = (-i * w * 2.0).exp();
        Complex64::new(-LN_2, -PI / 2.0) + i * w + (Complex64::new(1.0, 0.0) - e2).ln()
    }
}

/// Principal branch of log Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            what: "log_gamma argument",
            value: z.re,
        });
    }
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    if z.re >= RECURRENCE_FLOOR {
        // Γ(z) = Γ(z + k) / (z (z+1) … (z+k−1)); summing principal logs keeps the branch continuous.
        let k = (0.5 - z.re).ceil() as usize;
        let mut acc = lanczos(z + k as f64);
        for j in 0..k {
            acc -= (z + j as f64).ln();
        }
        return Ok(acc);
    }
    Ok(Complex64::new(LN_PI, 0.0) - ln_sin_pi(z) - lanczos(Complex64::new(1.0, 0.0) - z))
}

/// 2·Re log Γ(a + ib), i.e. log |Γ(a+ib)|².
pub fn ln_abs_gamma_sq(a: f64, b: f64) -> Result<f64> {
    Ok(2.0 * log_gamma(Complex64::new(a, b))?.re)
}

/// |Γ(a + ib)|².
pub fn abs_gamma_sq(a: f64, b: f64) -> Result<f64> {
    Ok(ln_abs_gamma_sq(a, b)?.exp())
}

/// Real Γ(x).
pub fn gamma(x: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(x, 0.0))?;
    let sign = if x > 0.0 || (-x).ceil() as i64 % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    Ok(sign * lg.re.exp())
}

/// 1/Γ(x), zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    (PI * r).sin()
}

fn check_lower_parameter(c: f64) -> Result<()> {
    if c <= 0.0 && (c - c.round()).abs() < TOLERANCES.pole {
        return Err(Error::ParameterPole { c });
    }
    Ok(())
}

/// Defining series of ₂F₁(a, b; c; t) for 0 ≤ t < 1.
fn series_real(a: f64, b: f64, c: f64, t: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..TOLERANCES.hyp2f1_max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * t;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * t).abs();
        if ratio < 1.0 && term.abs() <= TOLERANCES.hyp2f1_term * (1.0 - ratio) * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "hyp2f1 series",
        iterations: TOLERANCES.hyp2f1_max_terms,
    })
}

/// Defining series of ₂F₁(a, b; c; x) for complex parameters and real |x| < 1.
pub fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain {
            what: "hyp2f1 series argument",
            value: x,
        });
    }
    if c.im.abs() < TOLERANCES.pole {
        check_lower_parameter(c.re)?;
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..TOLERANCES.hyp2f1_max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        let ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * x).norm();
        if ratio < 1.0 && term.norm() <= TOLERANCES.hyp2f1_term * (1.0 - ratio) * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "hyp2f1 series",
        iterations: TOLERANCES.hyp2f1_max_terms,
    })
}

/// Gauss hypergeometric ₂F₁(a, b; c; x) for x ≤ 0.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    check_lower_parameter(c)?;
    if !(x <= 0.0) {
        return Err(Error::Domain {
            what: "hyp2f1 argument (need x <= 0)",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    // Pfaff: F(a,b;c;x) = (1−x)^{−a} F(a, c−b; c; x/(x−1)); pick the slower-growing variant.
    let t = x / (x - 1.0);
    let (lead, other) = if a - b <= b - a { (a, b) } else { (b, a) };
    let prefactor = (1.0 - x).powf(-lead);
    Ok(prefactor * series_real(lead, c - other, c, t)?)
}

/// ₂F₁(a, b; c; x) for complex a, b, real c, and x ≤ 0 (Pfaff-transformed series).
pub fn hyp2f1_complex(a: Complex64, b: Complex64, c: f64, x: f64) -> Result<Complex64> {
    check_lower_parameter(c)?;
    if !(x <= 0.0) {
        return Err(Error::Domain {
            what: "hyp2f1 argument (need x <= 0)",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let t = x / (x - 1.0);
    let (lead, other) = if (a - b).re <= (b - a).re {
        (a, b)
    } else {
        (b, a)
    };
    let prefactor = (-lead * (1.0 - x).ln()).exp();
    let cc = Complex64::new(c, 0.0);
    Ok(prefactor * hyp2f1_series(lead, cc - other, cc, t)?)
}

/// Associated Legendre function of the first kind P_ν^μ(z) for z > 1.
pub fn legendre_p(nu: Complex64, mu: f64, z: f64) -> Result<Complex64> {
    if !(z > 1.0) {
        return Err(Error::Domain {
            what: "legendre_p argument (need z > 1)",
            value: z,
        });
    }
    check_lower_parameter(1.0 - mu)?;
    let ratio = ((z + 1.0) / (z - 1.0)).powf(mu / 2.0);
    let f = hyp2f1_complex(-nu, nu + 1.0, 1.0 - mu, (1.0 - z) / 2.0)?;
    Ok(f * (recip_gamma(1.0 - mu) * ratio))
}

fn half_integer_index(order: f64) -> Result<(usize, bool)> {
    if !(order >= 0.0) || !order.is_finite() {
        return Err(Error::UnsupportedOrder(order));
    }
    let twice = 2.0 * order;
    if (twice - twice.round()).abs() > 1e-12 || twice > 1.0e4 {
        return Err(Error::UnsupportedOrder(order));
    }
    let k = twice.round() as usize;
    Ok((k / 2, k % 2 == 1))
}

/// Bessel function of the first kind J_order(x) for order in {0, ½, 1, 3/2, …}, x ≥ 0.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    let (l, half) = half_integer_index(order)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "bessel_j argument",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(if order == 0.0 { 1.0 } else { 0.0 });
    }
    if half {
        Ok((2.0 * x / PI).sqrt() * spherical_bessel_j(l, x))
    } else if x <= BESSEL_SERIES_LIMIT {
        Ok(bessel_series(l as f64, x))
    } else if x < BESSEL_HANKEL_FROM {
        Ok(bessel_integer_miller(l, x))
    } else {
        Ok(bessel_hankel(l as f64, x))
    }
}

/// Power series for integer orders is used up to this argument.
pub const BESSEL_SERIES_LIMIT: f64 = 12.0;
/// Hankel asymptotic expansion from this argument on; Miller recursion in between.
pub const BESSEL_HANKEL_FROM: f64 = 30.0;

/// Integer order via downward recursion normalized by J₀ + 2ΣJ_{2k} = 1.
fn bessel_integer_miller(l: usize, x: f64) -> f64 {
    let mut start = l.max(x as usize) + 40;
    if start % 2 == 1 {
        start += 1;
    }
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut at_l = 0.0;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == l {
            at_l = cur;
        }
        if idx % 2 == 0 {
            norm += if idx == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_l *= 1e-250;
            norm *= 1e-250;
        }
    }
    at_l / norm
}

/// Spherical Bessel function j_l(x), x > 0.
pub fn spherical_bessel_j(l: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    if x >= (l as f64).max(1.0) {
        let mut prev = c / x; // j_{-1}
        let mut cur = j0;
        for k in 0..l {
            let next = (2 * k + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    // Miller's downward recursion normalized by j_0.
    let start = l + 20 + x.ceil() as usize;
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut at_l = 0.0;
    for k in (1..=start).rev() {
        let below = (2 * k + 1) as f64 / x * cur - above;
        above = cur;
        cur = below;
        if k - 1 == l {
            at_l = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            at_l *= 1e-250;
        }
    }
    at_l * (j0 / cur)
}

fn bessel_series(nu: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let q = -half * half;
    let mut term = half.powf(nu) * recip_gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > half {
            break;
        }
    }
    sum
}

fn bessel_hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() >= last {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (nu / 2.0 + 0.25) * PI;
    let (sc, cc) = chi.sin_cos();
    (2.0 / (PI * x)).sqrt() * (p * cc - q * sc)
}

/// Modified Bessel function K_ν(x) for real ν and x > 0, from
/// K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt.
pub fn bessel_k(order: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "bessel_k argument",
            value: x,
        });
    }
    if !order.is_finite() {
        return Err(Error::UnsupportedOrder(order));
    }
    let nu = order.abs();
    // log of the integrand, peak at sinh t = ν/x
    let g = |t: f64| -x * t.cosh() + nu * t;
    let t_peak = (nu / x).asinh();
    let g_peak = g(t_peak);
    let mut t_end = t_peak + 1.0;
    while g(t_end) > g_peak - 45.0 {
        t_end += 1.0;
    }
    let scale = g_peak;
    let f = |t: f64| (-x * t.cosh() - scale).exp() * (nu * t).cosh();
    let panels = (t_end / 0.25).ceil() as usize;
    let value = crate::quadrature::integrate_adaptive(f, 0.0, t_end, 1e-15 * t_end, panels, 4096)?;
    Ok(value * scale.exp())
}
