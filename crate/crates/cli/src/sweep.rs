//! Grid evaluation of a task over the declared axes.

use rayon::prelude::*;
use slhnet::analysis::{
    dark_states, dispersive_purcell_limit, dressed_qubit_frequency, emitter_decay_rate, purcell_limit, t1_fit,
    t1_spectral, transmission, T1Method,
};
use slhnet::dynamics::{evolve, propagate_exact, Propagator, SolverStats};
use slhnet::slh::{SystemParams, JQF, QUBIT};
use slhnet::units::{ns_to_us, to_mhz, us_to_ns};
use slhnet::{DensityMatrix, Operator, SlhTriplet, C64};

use crate::config::{Param, ScenarioConfig, Task};
use crate::error::{CliError, CliResult};

/// Longest trajectory horizon chosen automatically.
pub const AUTO_HORIZON_CAP_US: f64 = 50.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub task: String,
    pub device: String,
    pub config_hash: String,
    pub version: String,
    pub created: String,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub points: usize,
    pub failed: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evals: usize,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub manifest: Manifest,
}

/// Device parameters and probe settings of one grid point.
#[derive(Clone, Debug)]
pub struct Point {
    pub params: SystemParams,
    pub probe_offset: f64,
    pub photons: Option<f64>,
}

/// Axis values of every grid point, row-major (last axis fastest).
pub fn grid(cfg: &ScenarioConfig) -> Vec<Vec<f64>> {
    let n = cfg.n_points();
    (0..n)
        .map(|mut k| {
            let mut v = vec![0.0; cfg.axes.len()];
            for (i, axis) in cfg.axes.iter().enumerate().rev() {
                v[i] = axis.values[k % axis.values.len()];
                k /= axis.values.len();
            }
            v
        })
        .collect()
}

pub fn resolve_point(cfg: &ScenarioConfig, values: &[f64]) -> slhnet::Result<Point> {
    let mut params = cfg.device.params.clone();
    let mut point = Point { params: params.clone(), probe_offset: 0.0, photons: None };
    let mut jqf_detuning = cfg.device.omega_j_dressed.then_some(0.0);
    let mut frame_explicit = cfg.device.frame_explicit;
    for (axis, &v) in cfg.axes.iter().zip(values) {
        match axis.param {
            Param::JqfDetuning => jqf_detuning = Some(v),
            Param::ProbeOffset => point.probe_offset = v,
            Param::Photons => point.photons = Some(v),
            Param::OmegaJ => {
                jqf_detuning = None;
                params.omega_j = v;
            }
            p => {
                frame_explicit |= p == Param::FrameFreq;
                crate::config::set_param(&mut params, p, v);
            }
        }
    }
    if !frame_explicit {
        params.frame_freq = params.omega_q;
    }
    if let Some(d) = jqf_detuning {
        params.omega_j = dressed_qubit_frequency(params.omega_q, params.omega_r, params.g_qr, params.kappa_r)? + d;
    }
    params.validate()?;
    point.params = params;
    Ok(point)
}

fn output_columns(task: Task, cfg: &ScenarioConfig) -> CliResult<Vec<String>> {
    let cols: Vec<String> = match task {
        Task::Purcell => vec!["t1_us".into(), "t1_dispersive_us".into(), "dressed_shift_MHz".into()],
        Task::DarkState => ["n_dark", "max_residual", "hamiltonian_residual", "energy_MHz", "qubit_weight", "jqf_weight"]
            .map(String::from)
            .to_vec(),
        Task::T1Sweep => vec!["t1_us".into(), "method".into()],
        Task::Dynamics => {
            let g = cfg.device.kind.builder()(&cfg.device.params)?;
            let mut c = vec!["t_us".to_string()];
            c.extend(g.space().subsystems().iter().map(|s| format!("pop_{}", s.label)));
            c.push("trace_drift".into());
            c
        }
        Task::Transmission => ["probe_MHz", "t_re", "t_im", "t_abs", "dip_depth"].map(String::from).to_vec(),
        Task::Saturation => ["beta", "photons_per_relaxation", "dip_depth"].map(String::from).to_vec(),
        Task::Validate => return Err(CliError::Usage("validate is not a sweep task".into())),
    };
    Ok(cols)
}

type Evaluated = (Vec<Vec<Cell>>, Option<SolverStats>);

fn excited_state(g: &SlhTriplet, label: &str) -> slhnet::Result<DensityMatrix> {
    let space = g.space();
    let pos = space.position(label).ok_or_else(|| slhnet::Error::UnknownLabel(label.to_string()))?;
    let mut levels = vec![0; space.subsystems().len()];
    levels[pos] = 1;
    DensityMatrix::basis(space.clone(), &levels)
}

fn run_trajectory(
    cfg: &ScenarioConfig,
    g: &SlhTriplet,
    label: &str,
    t_end_us: f64,
) -> slhnet::Result<slhnet::dynamics::Trajectory> {
    let rho0 = excited_state(g, label)?;
    let n = cfg.dynamics.samples;
    let t_end = us_to_ns(t_end_us);
    let grid: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
    match cfg.solver.propagator {
        Propagator::RungeKutta => evolve(g, &rho0, &grid, &cfg.solver.options),
        Propagator::MatrixExponential => propagate_exact(g, &rho0, &grid),
    }
}

/// Horizon of four spectral lifetimes of `label`, capped.
fn auto_horizon(g: &SlhTriplet, label: &str) -> f64 {
    t1_spectral(g, label).map(|r| (4.0 * r.t1_us).min(AUTO_HORIZON_CAP_US)).unwrap_or(AUTO_HORIZON_CAP_US)
}

/// Decay rate that sets the photons-per-relaxation-time scale: the JQF's
/// when it radiates, else its nominal `kappa_j`.
fn reference_rate(g: &SlhTriplet, p: &SystemParams) -> f64 {
    match emitter_decay_rate(g, JQF) {
        Ok(k) if k > 0.0 => k,
        _ => p.kappa_j,
    }
}

fn evaluate(task: Task, cfg: &ScenarioConfig, point: &Point) -> slhnet::Result<Evaluated> {
    let p = &point.params;
    let build = cfg.device.kind.builder();
    let one = |cells: Vec<Cell>| Ok((vec![cells], None));
    match task {
        Task::Purcell => {
            let t1 = purcell_limit(p.omega_q, p.omega_r, p.g_qr, p.kappa_r)?;
            let disp = dispersive_purcell_limit(p.omega_q, p.omega_r, p.g_qr, p.kappa_r);
            let shift = dressed_qubit_frequency(p.omega_q, p.omega_r, p.g_qr, p.kappa_r)? - p.omega_q;
            one(vec![Cell::Num(t1), Cell::Num(disp), Cell::Num(to_mhz(shift))])
        }
        Task::DarkState => {
            let g = build(p)?;
            let report = dark_states(&g)?;
            let weight = |s: &slhnet::analysis::DarkState, label: &str| match g.space().single_excitation_index(label, 1) {
                Ok(i) => Cell::Num(s.weight(i)),
                Err(_) => Cell::Empty,
            };
            let mut cells = vec![Cell::Int(report.states.len() as u64)];
            match report.states.first() {
                Some(s) => cells.extend([
                    Cell::Num(s.max_coupling_residual()),
                    Cell::Num(s.hamiltonian_residual),
                    Cell::Num(to_mhz(s.energy)),
                    weight(s, QUBIT),
                    weight(s, JQF),
                ]),
                None => cells.extend(std::iter::repeat_n(Cell::Empty, 5)),
            }
            one(cells)
        }
        Task::T1Sweep => {
            let g = build(p)?;
            let spectral = t1_spectral(&g, QUBIT)?;
            match cfg.solver.t1_method {
                T1Method::Spectral => one(vec![Cell::Num(spectral.t1_us), Cell::Text(spectral.method.to_string())]),
                T1Method::TrajectoryFit => {
                    let horizon = cfg.dynamics.t_end_us.unwrap_or_else(|| auto_horizon(&g, QUBIT));
                    let traj = run_trajectory(cfg, &g, QUBIT, horizon)?;
                    let pop = traj.expect_real(&Operator::number(g.space(), QUBIT)?)?;
                    let fit = t1_fit(traj.times(), &pop, cfg.solver.transient_cut_ns)?;
                    Ok((vec![vec![Cell::Num(fit.t1_us), Cell::Text(fit.method.to_string())]], Some(traj.stats)))
                }
            }
        }
        Task::Dynamics => {
            let g = build(p)?;
            let label = cfg.dynamics.initial.as_str();
            let horizon = cfg.dynamics.t_end_us.unwrap_or_else(|| auto_horizon(&g, label));
            let traj = run_trajectory(cfg, &g, label, horizon)?;
            let pops = g
                .space()
                .subsystems()
                .iter()
                .map(|s| traj.expect_real(&Operator::number(g.space(), &s.label)?))
                .collect::<slhnet::Result<Vec<_>>>()?;
            let rows = (0..traj.len())
                .map(|i| {
                    let mut r = vec![Cell::Num(ns_to_us(traj.times()[i]))];
                    r.extend(pops.iter().map(|v| Cell::Num(v[i])));
                    r.push(Cell::Num((traj.states()[i].trace() - C64::new(1.0, 0.0)).norm()));
                    r
                })
                .collect();
            Ok((rows, Some(traj.stats)))
        }
        Task::Transmission | Task::Saturation => {
            let g = build(p)?;
            let photons = point.photons.unwrap_or(cfg.probe.photons);
            let beta = (photons * reference_rate(&g, p)).sqrt();
            let probe = p.omega_j + point.probe_offset;
            let t = transmission(build, p, probe, C64::new(beta, 0.0), cfg.probe.port)?;
            let depth = (C64::new(1.0, 0.0) - t).norm();
            if task == Task::Transmission {
                one(vec![Cell::Num(to_mhz(probe)), Cell::Num(t.re), Cell::Num(t.im), Cell::Num(t.norm()), Cell::Num(depth)])
            } else {
                one(vec![Cell::Num(beta), Cell::Num(photons), Cell::Num(depth)])
            }
        }
        Task::Validate => unreachable!("validate is rejected before evaluation"),
    }
}

fn check_task_axes(task: Task, cfg: &ScenarioConfig) -> CliResult<()> {
    if task == Task::Saturation {
        let axis = cfg
            .axes
            .iter()
            .find(|a| a.param == Param::Photons)
            .ok_or_else(|| CliError::Config("saturation needs a `photons` axis in [sweep]".into()))?;
        let (lo, hi) = axis.values.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
        if !(lo > 0.0) || hi / lo < 1e3 * (1.0 - 1e-12) {
            return Err(CliError::Config("[sweep] photons must be positive and span at least 3 decades".into()));
        }
    }
    Ok(())
}

/// Evaluates `task` over the grid on a pool of `workers` threads. Row
/// order follows the grid index; failed points keep their axis values and
/// carry the message in the `error` column.
pub fn run_sweep(cfg: &ScenarioConfig, task: Task, workers: usize) -> CliResult<SweepResult> {
    check_task_axes(task, cfg)?;
    let out_cols = output_columns(task, cfg)?;
    let mut columns: Vec<String> = cfg.axes.iter().map(|a| a.param.column()).collect();
    columns.extend(out_cols.iter().cloned());
    columns.push("error".into());

    let points = grid(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<slhnet::Result<Evaluated>> = pool.install(|| {
        points.par_iter().map(|v| resolve_point(cfg, v).and_then(|pt| evaluate(task, cfg, &pt))).collect()
    });

    let mut manifest = Manifest {
        task: task.name().into(),
        device: cfg.device.kind.name().into(),
        config_hash: cfg.hash.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        created: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        rel_tol: cfg.solver.options.rel_tol,
        abs_tol: cfg.solver.options.abs_tol,
        points: points.len(),
        ..Default::default()
    };
    let mut rows = Vec::new();
    let mut first_error = None;
    for (values, res) in points.iter().zip(results) {
        let axis_cells: Vec<Cell> =
            cfg.axes.iter().zip(values).map(|(a, &v)| Cell::Num(a.param.display_value(v))).collect();
        match res {
            Ok((out, stats)) => {
                if let Some(s) = stats {
                    manifest.accepted_steps += s.accepted_steps;
                    manifest.rejected_steps += s.rejected_steps;
                    manifest.rhs_evals += s.rhs_evals;
                }
                for r in out {
                    let mut row = axis_cells.clone();
                    row.extend(r);
                    row.push(Cell::Empty);
                    rows.push(row);
                }
            }
            Err(e) => {
                manifest.failed += 1;
                first_error.get_or_insert_with(|| e.to_string());
                let mut row = axis_cells;
                row.extend(std::iter::repeat_n(Cell::Empty, out_cols.len()));
                row.push(Cell::Text(e.to_string()));
                rows.push(row);
            }
        }
    }
    if manifest.points > 0 && manifest.failed == manifest.points {
        return Err(CliError::AllFailed(manifest.points, first_error.unwrap_or_default()));
    }
    Ok(SweepResult { columns, rows, manifest })
}
