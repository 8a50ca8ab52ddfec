//! Dormand-Prince 8(5,3) explicit Runge-Kutta integrator with step-size
//! control after Hairer, Norsett and Wanner. Output is produced by step
//! alignment: steps are clipped so that every requested time is hit exactly.

use crate::error::{Error, Result};
use crate::operator::{C64, ZERO};

/// Right-hand side of `y' = f(y)` for an autonomous complex system.
pub trait Rhs {
    fn eval(&mut self, y: &[C64], dy: &mut [C64]);
}

#[derive(Clone, Debug)]
pub struct Dop853Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub max_step: f64,
    pub initial_step: Option<f64>,
}

impl Default for Dop853Options {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, max_steps: 20_000_000, max_step: f64::INFINITY, initial_step: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Dop853Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const A: [&[f64]; 12] = [
    &[],
    &[0.05260015195876773],
    &[0.0197250569845379, 0.0591751709536137],
    &[0.02958758547680685, 0.0, 0.08876275643042054],
    &[0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792],
    &[0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242],
    &[0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125],
    &[0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023],
    &[0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996],
    &[0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627],
    &[-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196],
    &[2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636],
];
const B: [f64; 12] = [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259];
const ER: [f64; 12] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294];
const BHH: [f64; 3] = [0.2440944881889764, 0.7338466882816118, 0.022058823529411766];

const SAFE: f64 = 0.9;
// h_new / h is kept within [1/3, 6]
const SHRINK_LIMIT: f64 = 3.0;
const GROW_LIMIT: f64 = 1.0 / 6.0;

fn weighted_sq(v: &[C64], scale: &[f64]) -> f64 {
    v.iter().zip(scale).map(|(x, s)| x.norm_sqr() / (s * s)).sum()
}

fn initial_step<R: Rhs>(rhs: &mut R, y: &[C64], f0: &[C64], opts: &Dop853Options, stats: &mut Dop853Stats) -> f64 {
    let sk: Vec<f64> = y.iter().map(|v| opts.abs_tol + opts.rel_tol * v.norm()).collect();
    let dnf = weighted_sq(f0, &sk);
    let dny = weighted_sq(y, &sk);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * (dny / dnf).sqrt() };
    h = h.min(opts.max_step);
    let y1: Vec<C64> = y.iter().zip(f0).map(|(a, b)| a + b * h).collect();
    let mut f1 = vec![ZERO; y.len()];
    rhs.eval(&y1, &mut f1);
    stats.rhs_evals += 1;
    let diff: Vec<C64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let der2 = weighted_sq(&diff, &sk).sqrt() / h;
    let der12 = der2.max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(1.0 / 8.0) };
    (100.0 * h).min(h1).min(opts.max_step)
}

/// Integrate from `grid[0]` through every later grid time, calling
/// `output(i, y)` once per grid index in order.
pub fn integrate<R: Rhs>(
    rhs: &mut R,
    y0: &[C64],
    grid: &[f64],
    opts: &Dop853Options,
    mut output: impl FnMut(usize, &[C64]),
) -> Result<Dop853Stats> {
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::TimeGrid);
    }
    let n = y0.len();
    let mut stats = Dop853Stats::default();
    let mut y = y0.to_vec();
    let mut y_new = vec![ZERO; n];
    let mut k = vec![vec![ZERO; n]; 12];
    let mut t = grid[0];
    let mut next = 0;
    while next < grid.len() && grid[next] <= t {
        output(next, &y);
        next += 1;
    }
    if next == grid.len() {
        return Ok(stats);
    }

    rhs.eval(&y, &mut k[0]);
    stats.rhs_evals += 1;
    let mut h = match opts.initial_step {
        Some(h0) => h0.min(opts.max_step),
        None => initial_step(rhs, &y, &k[0], opts, &mut stats),
    };
    let mut last_rejected = false;

    while next < grid.len() {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::Stiff { t, reason: format!("step limit of {} reached", opts.max_steps) });
        }
        let remaining = grid[next] - t;
        let clipped = h >= remaining;
        let hs = if clipped { remaining } else { h };
        if hs <= 8.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::Stiff { t, reason: format!("step size underflow (h = {hs:.3e} ns)") });
        }

        for i in 1..12 {
            let (done, rest) = k.split_at_mut(i);
            let stage = &mut rest[0];
            for idx in 0..n {
                let mut acc = ZERO;
                for (j, &a) in A[i].iter().enumerate() {
                    if a != 0.0 {
                        acc += done[j][idx] * a;
                    }
                }
                y_new[idx] = y[idx] + acc * hs;
            }
            rhs.eval(&y_new, stage);
        }
        stats.rhs_evals += 11;

        let mut err3 = 0.0;
        let mut err5 = 0.0;
        for idx in 0..n {
            let mut inc = ZERO;
            let mut e5 = ZERO;
            for s in 0..12 {
                let ks = k[s][idx];
                if B[s] != 0.0 {
                    inc += ks * B[s];
                }
                if ER[s] != 0.0 {
                    e5 += ks * ER[s];
                }
            }
            y_new[idx] = y[idx] + inc * hs;
            let scale = opts.abs_tol + opts.rel_tol * y[idx].norm().max(y_new[idx].norm());
            let e3 = inc - k[0][idx] * BHH[0] - k[8][idx] * BHH[1] - k[11][idx] * BHH[2];
            err3 += e3.norm_sqr() / (scale * scale);
            err5 += e5.norm_sqr() / (scale * scale);
        }
        let mut deno = err5 + 0.01 * err3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let mut err = hs * err5 * (1.0 / (n as f64 * deno)).sqrt();
        if !err.is_finite() {
            err = f64::INFINITY;
        }
        let fac11 = err.powf(1.0 / 8.0);

        if err <= 1.0 {
            stats.accepted += 1;
            let fac = (fac11 / SAFE).min(SHRINK_LIMIT).max(GROW_LIMIT);
            let mut h_new = (hs / fac).min(opts.max_step);
            if last_rejected {
                h_new = h_new.min(hs);
            }
            last_rejected = false;
            std::mem::swap(&mut y, &mut y_new);
            t = if clipped { grid[next] } else { t + hs };
            rhs.eval(&y, &mut k[0]);
            stats.rhs_evals += 1;
            h = if clipped { h_new.max(h.min(opts.max_step)) } else { h_new };
            while next < grid.len() && grid[next] <= t {
                output(next, &y);
                next += 1;
            }
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h = hs / (fac11 / SAFE).min(SHRINK_LIMIT);
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;

    struct Rotor(C64);

    impl Rhs for Rotor {
        fn eval(&mut self, y: &[C64], dy: &mut [C64]) {
            for (d, v) in dy.iter_mut().zip(y) {
                *d = self.0 * v;
            }
        }
    }

    #[test]
    fn damped_rotation_matches_exponential() {
        let rate = c(-0.3, 5.0);
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let mut got = Vec::new();
        let stats = integrate(&mut Rotor(rate), &[c(1.0, 0.0)], &grid, &Dop853Options::default(), |i, y| {
            got.push((grid[i], y[0]))
        })
        .unwrap();
        assert_eq!(got.len(), grid.len());
        for (t, y) in got {
            let exact = (rate * t).exp();
            assert!((y - exact).norm() < 1e-7 * exact.norm().max(1e-2), "t={t} err={}", (y - exact).norm());
        }
        assert!(stats.accepted > 0);
    }

    #[test]
    fn repeated_and_single_grid_points() {
        let grid = [0.0, 0.0, 1.0, 1.0];
        let mut hits = Vec::new();
        integrate(&mut Rotor(c(-1.0, 0.0)), &[c(1.0, 0.0)], &grid, &Dop853Options::default(), |i, y| {
            hits.push((i, y[0].re))
        })
        .unwrap();
        assert_eq!(hits.iter().map(|h| h.0).collect::<Vec<_>>(), [0, 1, 2, 3]);
        assert!((hits[3].1 - (-1.0f64).exp()).abs() < 1e-9);
        let only = integrate(&mut Rotor(c(-1.0, 0.0)), &[c(1.0, 0.0)], &[2.0], &Dop853Options::default(), |_, _| {});
        assert!(only.is_ok());
    }

    #[test]
    fn bad_grid_and_step_limit() {
        let opts = Dop853Options::default();
        assert!(matches!(
            integrate(&mut Rotor(c(-1.0, 0.0)), &[c(1.0, 0.0)], &[1.0, 0.0], &opts, |_, _| {}),
            Err(Error::TimeGrid)
        ));
        let tight = Dop853Options { max_steps: 3, ..opts };
        assert!(matches!(
            integrate(&mut Rotor(c(0.0, 100.0)), &[c(1.0, 0.0)], &[0.0, 100.0], &tight, |_, _| {}),
            Err(Error::Stiff { .. })
        ));
    }
}
