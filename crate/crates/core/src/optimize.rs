//! Derivative-free minimizers: golden-section line search and Nelder–Mead.

use alloc::vec::Vec;

use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on [a, b] using `iterations` shrink steps.
/// Returns (argmin, min, evaluations).
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    iterations: usize,
) -> (f64, f64, usize) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    for _ in 0..iterations {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc <= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// Result of a Nelder–Mead run.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Best value after each iteration.
    pub trace: Vec<f64>,
    /// False when the evaluation cap stopped the run.
    pub converged: bool,
}

/// Nelder–Mead with standard coefficients (1, 2, ½, ½) and an axis-aligned start simplex.
///
/// Stops when the best value has changed by at most `tol`·max(1, |best|) over the last
/// 2·dim iterations. Non-finite objective values count as +∞. Hitting `budget` evaluations first
/// gives `BudgetExceeded`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    step: f64,
    tol: f64,
    budget: usize,
) -> Result<Simplex> {
    let s = nelder_mead_capped(f, start, step, tol, budget)?;
    if !s.converged {
        return Err(Error::BudgetExceeded {
            evaluations: s.evaluations,
            best: s.value,
        });
    }
    Ok(s)
}

/// As [`nelder_mead`], but returns the best point reached when the cap is hit.
pub fn nelder_mead_capped<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    step: f64,
    tol: f64,
    budget: usize,
) -> Result<Simplex> {
    let dim = start.len();
    if dim == 0 {
        return Err(Error::InvalidParameter {
            what: "optimizer dimension",
            value: 0.0,
        });
    }
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(start.to_vec());
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += step;
        pts.push(x);
    }
    let mut vals: Vec<f64> = pts.iter().map(|x| eval(x, &mut evals)).collect();
    let mut trace = Vec::new();
    let window = 2 * dim;
    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        trace.push(vals[0]);
        if trace.len() > window {
            let old = trace[trace.len() - 1 - window];
            if (old - vals[0]).abs() <= tol * vals[0].abs().max(1.0) {
                return Ok(Simplex {
                    x: pts[0].clone(),
                    value: vals[0],
                    evaluations: evals,
                    trace,
                    converged: true,
                });
            }
        }
        if evals >= budget {
            return Ok(Simplex {
                x: pts[0].clone(),
                value: vals[0],
                evaluations: evals,
                trace,
                converged: false,
            });
        }
        let mut centroid = alloc::vec![0.0; dim];
        for x in &pts[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < vals[0] {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                pts[dim] = xe;
                vals[dim] = fe;
            } else {
                pts[dim] = xr;
                vals[dim] = fr;
            }
        } else if fr < vals[dim - 1] {
            pts[dim] = xr;
            vals[dim] = fr;
        } else {
            let (xc, fc) = if fr < vals[dim] {
                let xc = along(0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < vals[dim].min(fr) {
                pts[dim] = xc;
                vals[dim] = fc;
            } else {
                for i in 1..=dim {
                    let x: Vec<f64> = pts[0]
                        .iter()
                        .zip(&pts[i])
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    vals[i] = eval(&x, &mut evals);
                    pts[i] = x;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v, evals) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 40);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(evals, 42);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let s = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-12, 5000).unwrap();
        assert!(
            (s.x[0] - 1.0).abs() < 1e-2 && (s.x[1] - 1.0).abs() < 1e-2 && s.value < 1e-5,
            "{:?}",
            s.x
        );
        assert!(s.trace.windows(2).all(|w| w[1] <= w[0]));
        let again = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-12, 5000).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn budget_is_enforced() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        match nelder_mead(rosen, &[-1.2, 1.0], 0.5, 1e-15, 30) {
            Err(Error::BudgetExceeded { evaluations, best }) => {
                assert!(evaluations >= 30);
                assert!(best.is_finite());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quadratic_in_many_dimensions() {
        let f = |x: &[f64]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i as f64 + 1.0) * (v - 0.5).powi(2))
                .sum::<f64>()
        };
        let s = nelder_mead(f, &[0.0; 6], 0.3, 1e-12, 20000).unwrap();
        assert!(s.value < 1e-8, "{}", s.value);
    }
}
