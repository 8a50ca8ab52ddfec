//! Least-squares fits used by the lifetime and linewidth extraction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Offset bounds of the exponential model.
pub const OFFSET_BOUNDS: (f64, f64) = (0.0, 0.05);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpFit {
    pub tau: f64,
    /// Amplitude at the first fitted sample.
    pub amplitude: f64,
    pub offset: f64,
    pub rms: f64,
}

fn linear_part(t: &[f64], y: &[f64], tau: f64) -> (f64, f64, f64) {
    let t0 = t[0];
    let e: Vec<f64> = t.iter().map(|ti| (-(ti - t0) / tau).exp()).collect();
    let n = t.len() as f64;
    let (see, se): (f64, f64) = e.iter().fold((0.0, 0.0), |(a, b), v| (a + v * v, b + v));
    let sye: f64 = y.iter().zip(&e).map(|(a, b)| a * b).sum();
    let sy: f64 = y.iter().sum();
    let det = see * n - se * se;
    let (mut amp, mut off) = if det.abs() > 1e-300 {
        ((sye * n - se * sy) / det, (see * sy - se * sye) / det)
    } else {
        (sye / see, 0.0)
    };
    if !(OFFSET_BOUNDS.0..=OFFSET_BOUNDS.1).contains(&off) {
        off = off.clamp(OFFSET_BOUNDS.0, OFFSET_BOUNDS.1);
        amp = (sye - off * se) / see;
    }
    let sse: f64 = y.iter().zip(&e).map(|(yi, ei)| (yi - amp * ei - off).powi(2)).sum();
    (amp, off, sse)
}

/// `y = A exp(-(t - t_0)/tau) + C` with `C` in [`OFFSET_BOUNDS`]: the linear
/// parameters are eliminated for each `tau`, and `log tau` is found by a
/// coarse scan followed by golden-section refinement.
pub fn fit_exponential(t: &[f64], y: &[f64]) -> Result<ExpFit> {
    if t.len() != y.len() || t.len() < 3 {
        return Err(Error::Fit("need at least 3 paired samples".into()));
    }
    let span = t[t.len() - 1] - t[0];
    if !(span > 0.0) {
        return Err(Error::Fit("samples must span a positive time".into()));
    }
    let cost = |log_tau: f64| linear_part(t, y, log_tau.exp()).2;
    let (lo, hi) = ((span * 1e-3).ln(), (span * 1e4).ln());
    let n_scan = 281;
    let grid: Vec<f64> = (0..n_scan).map(|i| lo + (hi - lo) * i as f64 / (n_scan - 1) as f64).collect();
    let costs: Vec<f64> = grid.iter().map(|&x| cost(x)).collect();
    let best = (0..n_scan).min_by(|&a, &b| costs[a].total_cmp(&costs[b])).unwrap();
    if best == 0 || best == n_scan - 1 {
        return Err(Error::Fit("decay constant is not identifiable from this window".into()));
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    while b - a > 1e-12 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = cost(x2);
        }
    }
    let tau = (0.5 * (a + b)).exp();
    let (amplitude, offset, sse) = linear_part(t, y, tau);
    Ok(ExpFit { tau, amplitude, offset, rms: (sse / t.len() as f64).sqrt() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzFit {
    pub center: f64,
    /// Full width at half maximum.
    pub fwhm: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub rms: f64,
}

fn lorentz(p: &[f64], x: f64) -> f64 {
    let q = (p[1] / 2.0).powi(2);
    p[2] * q / ((x - p[0]).powi(2) + q) + p[3]
}

/// Unweighted Levenberg-Marquardt fit of
/// `A (w/2)^2 / ((x - x0)^2 + (w/2)^2) + B`.
pub fn fit_lorentzian(x: &[f64], y: &[f64]) -> Result<LorentzFit> {
    if x.len() != y.len() || x.len() < 5 {
        return Err(Error::Fit("need at least 5 paired samples".into()));
    }
    let n = x.len();
    let imax = (0..n).max_by(|&a, &b| y[a].total_cmp(&y[b])).unwrap();
    let ymin = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let half = 0.5 * (y[imax] + ymin);
    let above: Vec<f64> = (0..n).filter(|&i| y[i] >= half).map(|i| x[i]).collect();
    let w0 = (above.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - above.iter().cloned().fold(f64::INFINITY, f64::min))
    .max((x[n - 1] - x[0]).abs() / n as f64);
    let mut p = [x[imax], w0, y[imax] - ymin, ymin];

    let residuals = |p: &[f64]| DVector::from_iterator(n, (0..n).map(|i| y[i] - lorentz(p, x[i])));
    let mut r = residuals(&p);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..500 {
        let q = (p[1] / 2.0).powi(2);
        let jac = DMatrix::from_fn(n, 4, |i, k| {
            let dx = x[i] - p[0];
            let den = dx * dx + q;
            match k {
                0 => p[2] * q * 2.0 * dx / (den * den),
                1 => p[2] * (p[1] / 2.0) * dx * dx / (den * den),
                2 => q / den,
                _ => 1.0,
            }
        });
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for k in 0..4 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2], p[3] + step[3]];
            let rt = residuals(&trial);
            let ct = rt.norm_squared();
            if ct.is_finite() && ct < cost {
                let converged = (cost - ct) <= 1e-15 * cost.max(1e-300);
                p = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 10.0).max(1e-12);
                improved = !converged;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if !p.iter().all(|v| v.is_finite()) {
        return Err(Error::Fit("Lorentzian fit diverged".into()));
    }
    Ok(LorentzFit { center: p[0], fwhm: p[1].abs(), amplitude: p[2], offset: p[3], rms: (cost / n as f64).sqrt() })
}
