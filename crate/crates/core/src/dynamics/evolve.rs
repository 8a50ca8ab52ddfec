//! Time evolution of the master equation.
//!
//! Both propagators first shrink the problem to the smallest set of basis
//! states that the initial state can reach under `H`, the `L_j` and the
//! `L_j^dag L_j`. The density matrix stays supported on that set for all
//! times, so the reduction is exact; for the decay of a single excitation
//! it turns the 24-level device into a 4-level problem.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{c, min_eigenvalue, trace_product, CMatrix, DensityMatrix, Operator, C64, ZERO};
use crate::slh::SlhTriplet;
use crate::space::HilbertSpace;

use super::dop853::{self, Dop853Options, Rhs};
use super::liouvillian::{effective_matrix, superoperator, unvectorize, vectorize};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Upper bound on the step size in ns.
    pub max_step: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, max_steps: 20_000_000, max_step: f64::INFINITY }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagator {
    RungeKutta,
    MatrixExponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverStats {
    pub propagator: Propagator,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evals: usize,
    /// Number of basis states the evolution was restricted to.
    pub support_dim: usize,
}

/// Density matrices on a time grid (ns).
#[derive(Clone, Debug)]
pub struct Trajectory {
    space: Arc<HilbertSpace>,
    times: Vec<f64>,
    states: Vec<CMatrix>,
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[CMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Validated density matrix at grid index `i`.
    pub fn state(&self, i: usize) -> Result<DensityMatrix> {
        DensityMatrix::new(self.space.clone(), self.states[i].clone())
    }

    /// `tr(op rho(t))` at every grid time.
    pub fn expect(&self, op: &Operator) -> Result<Vec<C64>> {
        if **op.space() != *self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.states.iter().map(|rho| trace_product(op.matrix(), rho)).collect())
    }

    /// Real part of [`Trajectory::expect`], for Hermitian observables.
    pub fn expect_real(&self, op: &Operator) -> Result<Vec<f64>> {
        Ok(self.expect(op)?.into_iter().map(|z| z.re).collect())
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.states.iter().map(|rho| (rho.trace() - c(1.0, 0.0)).norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.states.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
    }
}

/// Basis states reachable from the support of `rho0`.
fn dynamical_support(h: &CMatrix, ls: &[CMatrix], rho0: &CMatrix) -> Vec<usize> {
    let d = h.nrows();
    let mut ops: Vec<CMatrix> = vec![h.clone()];
    for l in ls {
        ops.push(l.clone());
        ops.push(l.adjoint() * l);
    }
    let mut seen = BTreeSet::new();
    let mut stack: Vec<usize> = (0..d).filter(|&i| (0..d).any(|j| rho0[(i, j)] != ZERO)).collect();
    while let Some(i) = stack.pop() {
        if !seen.insert(i) {
            continue;
        }
        for m in &ops {
            for j in 0..d {
                if m[(j, i)] != ZERO && !seen.contains(&j) {
                    stack.push(j);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn restrict(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

fn expand(m: &CMatrix, idx: &[usize], d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d, d);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out[(i, j)] = m[(a, b)];
        }
    }
    out
}

struct Reduced {
    support: Vec<usize>,
    h: CMatrix,
    ls: Vec<CMatrix>,
    rho0: CMatrix,
}

fn reduce(g: &SlhTriplet, rho0: &DensityMatrix) -> Result<Reduced> {
    if **rho0.space() != **g.space() {
        return Err(Error::SpaceMismatch);
    }
    let h = g.hamiltonian().matrix();
    let ls: Vec<CMatrix> = g.coupling().iter().map(|l| l.matrix().clone()).collect();
    let support = dynamical_support(h, &ls, rho0.matrix());
    Ok(Reduced {
        h: restrict(h, &support),
        ls: ls.iter().map(|l| restrict(l, &support)).filter(|l| l.iter().any(|z| *z != ZERO)).collect(),
        rho0: restrict(rho0.matrix(), &support),
        support,
    })
}

/// `rho' = -i Heff rho + i (Heff rho)^dag + sum_j L_j rho L_j^dag`, valid for
/// Hermitian `rho` (which the integrator preserves).
struct MasterRhs {
    r: usize,
    heff: CMatrix,
    ls: Vec<CMatrix>,
    ldag: Vec<CMatrix>,
    rho: CMatrix,
    a: CMatrix,
    tmp: CMatrix,
    out: CMatrix,
}

impl Rhs for MasterRhs {
    fn eval(&mut self, y: &[C64], dy: &mut [C64]) {
        self.rho.as_mut_slice().copy_from_slice(y);
        self.a.gemm(c(1.0, 0.0), &self.heff, &self.rho, ZERO);
        for l in 0..self.ls.len() {
            self.tmp.gemm(c(1.0, 0.0), &self.ls[l], &self.rho, ZERO);
            if l == 0 {
                self.out.gemm(c(1.0, 0.0), &self.tmp, &self.ldag[l], ZERO);
            } else {
                self.out.gemm(c(1.0, 0.0), &self.tmp, &self.ldag[l], c(1.0, 0.0));
            }
        }
        if self.ls.is_empty() {
            self.out.fill(ZERO);
        }
        let r = self.r;
        let mi = c(0.0, -1.0);
        for j in 0..r {
            for i in 0..r {
                let v = self.a[(i, j)] * mi + (self.a[(j, i)] * mi).conj() + self.out[(i, j)];
                dy[i + j * r] = v;
            }
        }
    }
}

/// Adaptive Runge-Kutta integration of the master equation of `g` from
/// `rho0`, reporting states at every time in `t_grid` (ns).
pub fn evolve(g: &SlhTriplet, rho0: &DensityMatrix, t_grid: &[f64], opts: &SolverOptions) -> Result<Trajectory> {
    let red = reduce(g, rho0)?;
    let r = red.support.len();
    let d = g.space().total_dim();
    let mut rhs = MasterRhs {
        r,
        heff: effective_matrix(&red.h, &red.ls),
        ldag: red.ls.iter().map(|l| l.adjoint()).collect(),
        ls: red.ls,
        rho: CMatrix::zeros(r, r),
        a: CMatrix::zeros(r, r),
        tmp: CMatrix::zeros(r, r),
        out: CMatrix::zeros(r, r),
    };
    let rk = Dop853Options {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_steps: opts.max_steps,
        max_step: opts.max_step,
        initial_step: None,
    };
    let mut states = Vec::with_capacity(t_grid.len());
    let stats = dop853::integrate(&mut rhs, red.rho0.as_slice(), t_grid, &rk, |_, y| {
        let m = CMatrix::from_column_slice(r, r, y);
        states.push(expand(&crate::operator::hermitize(&m), &red.support, d));
    })?;
    log::debug!("evolve: {} accepted, {} rejected steps on a {r}-state support", stats.accepted, stats.rejected);
    Ok(Trajectory {
        space: g.space().clone(),
        times: t_grid.to_vec(),
        states,
        stats: SolverStats {
            propagator: Propagator::RungeKutta,
            accepted_steps: stats.accepted,
            rejected_steps: stats.rejected,
            rhs_evals: stats.rhs_evals,
            support_dim: r,
        },
    })
}

/// Exact propagation with `exp(L dt)` between consecutive grid times.
/// Equal spacings reuse one propagator.
pub fn propagate_exact(g: &SlhTriplet, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Trajectory> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::TimeGrid);
    }
    let red = reduce(g, rho0)?;
    let r = red.support.len();
    let d = g.space().total_dim();
    let liou = superoperator(&red.h, &red.ls);
    let mut v = vectorize(&red.rho0);
    let mut states = vec![expand(&red.rho0, &red.support, d)];
    let mut cached: Option<(f64, CMatrix)> = None;
    for w in t_grid.windows(2) {
        let dt = w[1] - w[0];
        if dt > 0.0 {
            let reuse = matches!(&cached, Some((h, _)) if (h - dt).abs() <= 1e-12 * dt);
            if !reuse {
                cached = Some((dt, (&liou * c(dt, 0.0)).exp()));
            }
            v = &cached.as_ref().unwrap().1 * &v;
        }
        states.push(expand(&crate::operator::hermitize(&unvectorize(&v, r)), &red.support, d));
    }
    Ok(Trajectory {
        space: g.space().clone(),
        times: t_grid.to_vec(),
        states,
        stats: SolverStats {
            propagator: Propagator::MatrixExponential,
            accepted_steps: t_grid.len().saturating_sub(1),
            rejected_steps: 0,
            rhs_evals: 0,
            support_dim: r,
        },
    })
}
