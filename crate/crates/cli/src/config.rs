//! Scenario files.
//!
//! ```toml
//! task = "t1-sweep"
//!
//! [device]
//! kind = "full-giant"      # simplified-giant | full-giant | reflective | giant-jqf
//! omega_j = "dressed"      # MHz, or the dressed qubit frequency
//! phi1 = "1.0pi"           # radians, or "<x>pi"
//!
//! [sweep]                  # axes in declaration order, row-major
//! phi2 = "linspace(-0.1pi, 0.1pi, 21)"
//! kappa_j = [10.0, 12.7]
//!
//! [solver]
//! t1_method = "spectral"
//! ```
//!
//! Frequencies and rates are plain MHz (not angular). Unknown keys are
//! errors and carry the line they were found on.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use slhnet::analysis::t1::DEFAULT_TRANSIENT_CUT_NS;
use slhnet::analysis::T1Method;
use slhnet::dynamics::{Propagator, SolverOptions};
use slhnet::slh::SystemParams;
use slhnet::units::mhz;
use toml::Spanned;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Purcell,
    DarkState,
    T1Sweep,
    Dynamics,
    Transmission,
    Saturation,
    Validate,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Purcell,
        Task::DarkState,
        Task::T1Sweep,
        Task::Dynamics,
        Task::Transmission,
        Task::Saturation,
        Task::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Purcell => "purcell",
            Task::DarkState => "dark-state",
            Task::T1Sweep => "t1-sweep",
            Task::Dynamics => "dynamics",
            Task::Transmission => "transmission",
            Task::Saturation => "saturation",
            Task::Validate => "validate",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown task `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeviceKind {
    SimplifiedGiant,
    FullGiant,
    Reflective,
    GiantJqf,
}

impl DeviceKind {
    pub fn name(self) -> &'static str {
        match self {
            DeviceKind::SimplifiedGiant => "simplified-giant",
            DeviceKind::FullGiant => "full-giant",
            DeviceKind::Reflective => "reflective",
            DeviceKind::GiantJqf => "giant-jqf",
        }
    }

    pub fn builder(self) -> fn(&SystemParams) -> slhnet::Result<slhnet::SlhTriplet> {
        use slhnet::slh::*;
        match self {
            DeviceKind::SimplifiedGiant => build_giant_atom_simplified,
            DeviceKind::FullGiant => build_full_giant_atom,
            DeviceKind::Reflective => build_reflective_jqf,
            DeviceKind::GiantJqf => build_giant_jqf,
        }
    }

    pub fn defaults(self) -> SystemParams {
        match self {
            DeviceKind::Reflective => SystemParams::reflective_chip(),
            _ => SystemParams::giant_atom_chip(),
        }
    }
}

impl FromStr for DeviceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [DeviceKind::SimplifiedGiant, DeviceKind::FullGiant, DeviceKind::Reflective, DeviceKind::GiantJqf]
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown device kind `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unit {
    /// MHz in files and output, rad/ns inside.
    Frequency,
    Phase,
    Plain,
}

/// Sweepable quantities. Besides the device parameters there are
/// `jqf_detuning` (JQF relative to the dressed qubit, MHz), `probe_offset`
/// (probe relative to the JQF, MHz) and `photons` (probe photons per JQF
/// relaxation time).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    OmegaQ,
    OmegaR,
    OmegaJ,
    Alpha,
    GQr,
    KappaR,
    KappaJ,
    KappaQ,
    Phi,
    Phi1,
    Phi2,
    FrameFreq,
    JqfDetuning,
    ProbeOffset,
    Photons,
}

impl Param {
    const ALL: [Param; 15] = [
        Param::OmegaQ,
        Param::OmegaR,
        Param::OmegaJ,
        Param::Alpha,
        Param::GQr,
        Param::KappaR,
        Param::KappaJ,
        Param::KappaQ,
        Param::Phi,
        Param::Phi1,
        Param::Phi2,
        Param::FrameFreq,
        Param::JqfDetuning,
        Param::ProbeOffset,
        Param::Photons,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::OmegaQ => "omega_q",
            Param::OmegaR => "omega_r",
            Param::OmegaJ => "omega_j",
            Param::Alpha => "alpha",
            Param::GQr => "g_qr",
            Param::KappaR => "kappa_r",
            Param::KappaJ => "kappa_j",
            Param::KappaQ => "kappa_q",
            Param::Phi => "phi",
            Param::Phi1 => "phi1",
            Param::Phi2 => "phi2",
            Param::FrameFreq => "frame_freq",
            Param::JqfDetuning => "jqf_detuning",
            Param::ProbeOffset => "probe_offset",
            Param::Photons => "photons",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Param::Phi | Param::Phi1 | Param::Phi2 => Unit::Phase,
            Param::Photons => Unit::Plain,
            _ => Unit::Frequency,
        }
    }

    /// CSV column name; frequencies carry a `_MHz` suffix.
    pub fn column(self) -> String {
        match self.unit() {
            Unit::Frequency => format!("{}_MHz", self.name()),
            _ => self.name().to_string(),
        }
    }

    /// Internal value to the unit used in files and output.
    pub fn display_value(self, v: f64) -> f64 {
        match self.unit() {
            Unit::Frequency => slhnet::units::to_mhz(v),
            _ => v,
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }

    fn device_field(self) -> bool {
        !matches!(self, Param::JqfDetuning | Param::ProbeOffset | Param::Photons)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: Param,
    /// Internal units.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct DeviceConfig {
    pub kind: DeviceKind,
    pub params: SystemParams,
    /// Place the JQF at the dressed qubit frequency of each point.
    pub omega_j_dressed: bool,
    /// Otherwise the frame follows `omega_q`.
    pub frame_explicit: bool,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub options: SolverOptions,
    pub t1_method: T1Method,
    pub transient_cut_ns: f64,
    pub propagator: Propagator,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            options: SolverOptions::default(),
            t1_method: T1Method::Spectral,
            transient_cut_ns: DEFAULT_TRANSIENT_CUT_NS,
            propagator: Propagator::RungeKutta,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DynamicsConfig {
    /// Horizon; `None` picks four spectral lifetimes.
    pub t_end_us: Option<f64>,
    pub samples: usize,
    /// Subsystem excited at `t = 0`.
    pub initial: String,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self { t_end_us: None, samples: 201, initial: slhnet::slh::QUBIT.to_string() }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// Weak-probe photons per JQF relaxation time.
    pub photons: f64,
    pub port: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { photons: 1e-4, port: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub task: Option<Task>,
    pub device: DeviceConfig,
    pub axes: Vec<Axis>,
    pub solver: SolverConfig,
    pub dynamics: DynamicsConfig,
    pub probe: ProbeConfig,
    pub output: Option<PathBuf>,
    /// sha256 of the file text and the overrides.
    pub hash: String,
}

impl ScenarioConfig {
    pub fn n_points(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<RawValue>),
}

impl fmt::Display for RawValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawValue::Bool(b) => write!(f, "{b}"),
            RawValue::Int(i) => write!(f, "{i}"),
            RawValue::Float(x) => write!(f, "{x}"),
            RawValue::Str(s) => write!(f, "\"{s}\""),
            RawValue::Array(a) => write!(f, "[{} values]", a.len()),
        }
    }
}

type RawSection = IndexMap<String, Spanned<RawValue>>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    task: Option<Spanned<String>>,
    output: Option<Spanned<String>>,
    #[serde(default)]
    device: RawSection,
    #[serde(default)]
    sweep: RawSection,
    #[serde(default)]
    solver: RawSection,
    #[serde(default)]
    dynamics: RawSection,
    #[serde(default)]
    probe: RawSection,
}

/// One key of a section, with the source line (`None` for `--set`).
struct Entry {
    key: String,
    line: Option<usize>,
    value: RawValue,
}

impl Entry {
    fn err(&self, section: &str, msg: impl fmt::Display) -> CliError {
        let at = match self.line {
            Some(l) => format!("line {l}"),
            None => "--set".to_string(),
        };
        CliError::Config(format!("{at}: [{section}] {}: {msg}", self.key))
    }

    fn number(&self, section: &str) -> CliResult<f64> {
        match &self.value {
            RawValue::Int(i) => Ok(*i as f64),
            RawValue::Float(x) => Ok(*x),
            RawValue::Str(s) => s.trim().parse().map_err(|_| self.err(section, format!("expected a number, got \"{s}\""))),
            v => Err(self.err(section, format!("expected a number, got {v}"))),
        }
    }

    fn positive(&self, section: &str) -> CliResult<f64> {
        let x = self.number(section)?;
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(self.err(section, format!("must be positive, got {x}")))
        }
    }

    fn count(&self, section: &str, min: usize) -> CliResult<usize> {
        match &self.value {
            RawValue::Int(i) if *i >= min as i64 => Ok(*i as usize),
            v => Err(self.err(section, format!("expected an integer >= {min}, got {v}"))),
        }
    }

    fn string(&self, section: &str) -> CliResult<&str> {
        match &self.value {
            RawValue::Str(s) => Ok(s),
            v => Err(self.err(section, format!("expected a string, got {v}"))),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn entries(text: &str, section: RawSection) -> Vec<Entry> {
    section
        .into_iter()
        .map(|(key, v)| Entry { key, line: Some(line_of(text, v.span().start)), value: v.into_inner() })
        .collect()
}

/// `0.8pi`, `-pi`, `1.5 pi` or plain radians.
pub fn parse_phase(s: &str) -> Option<f64> {
    let t = s.trim();
    if let Some(head) = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        let head = head.trim().trim_end_matches('*').trim();
        let k = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        return Some(k * std::f64::consts::PI);
    }
    t.parse().ok()
}

/// A scalar in file units converted to internal units.
fn scalar(unit: Unit, v: &RawValue) -> Result<f64, String> {
    let raw = match (unit, v) {
        (_, RawValue::Int(i)) => *i as f64,
        (_, RawValue::Float(x)) => *x,
        (Unit::Phase, RawValue::Str(s)) => parse_phase(s).ok_or_else(|| format!("cannot read phase \"{s}\""))?,
        (_, RawValue::Str(s)) => s.trim().parse().map_err(|_| format!("cannot read number \"{s}\""))?,
        (_, v) => return Err(format!("expected a scalar, got {v}")),
    };
    if !raw.is_finite() {
        return Err(format!("value {raw} is not finite"));
    }
    Ok(if unit == Unit::Frequency { mhz(raw) } else { raw })
}

fn scalar_str(unit: Unit, s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) => scalar(unit, &RawValue::Float(x)),
        Err(_) => scalar(unit, &RawValue::Str(s.to_string())),
    }
}

/// `linspace(a, b, n)`, `logspace(a, b, n)` (powers of ten) or a single value.
fn parse_axis_expr(param: Param, s: &str) -> Result<Vec<f64>, String> {
    let t = s.trim();
    for (name, log) in [("linspace", false), ("logspace", true)] {
        let Some(rest) = t.strip_prefix(name) else { continue };
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| format!("malformed {name}(start, stop, count)"))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("{name} takes (start, stop, count), got {} arguments", parts.len()));
        }
        let n: usize = parts[2].parse().map_err(|_| format!("count \"{}\" is not an integer", parts[2]))?;
        if n < 2 {
            return Err(format!("{name} count must be at least 2, got {n}"));
        }
        let (a, b) = if log {
            let a: f64 = parts[0].parse().map_err(|_| format!("bad exponent \"{}\"", parts[0]))?;
            let b: f64 = parts[1].parse().map_err(|_| format!("bad exponent \"{}\"", parts[1]))?;
            (a, b)
        } else {
            (scalar_str(param.unit(), parts[0])?, scalar_str(param.unit(), parts[1])?)
        };
        let values = (0..n)
            .map(|i| {
                let x = if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 };
                if log {
                    let v = 10f64.powf(x);
                    if param.unit() == Unit::Frequency { mhz(v) } else { v }
                } else {
                    x
                }
            })
            .collect();
        return Ok(values);
    }
    Ok(vec![scalar_str(param.unit(), t)?])
}

fn parse_axis(e: &Entry) -> CliResult<Axis> {
    let param = Param::from_name(&e.key).ok_or_else(|| {
        let names: Vec<_> = Param::ALL.iter().map(|p| p.name()).collect();
        e.err("sweep", format!("unknown parameter, expected one of {}", names.join(", ")))
    })?;
    let values = match &e.value {
        RawValue::Str(s) => parse_axis_expr(param, s),
        RawValue::Array(items) if !items.is_empty() => items.iter().map(|v| scalar(param.unit(), v)).collect(),
        RawValue::Array(_) => Err("empty value list".to_string()),
        v => scalar(param.unit(), v).map(|x| vec![x]),
    }
    .map_err(|m| e.err("sweep", m))?;
    Ok(Axis { param, values })
}

fn parse_device(list: &[Entry]) -> CliResult<DeviceConfig> {
    let kind = match list.iter().find(|e| e.key == "kind") {
        Some(e) => e.string("device")?.parse().map_err(|m: String| e.err("device", m))?,
        None => DeviceKind::FullGiant,
    };
    let mut dev = DeviceConfig { kind, params: kind.defaults(), omega_j_dressed: false, frame_explicit: false };
    for e in list {
        let p = &mut dev.params;
        match e.key.as_str() {
            "kind" => {}
            "omega_j" if matches!(&e.value, RawValue::Str(s) if s == "dressed") => dev.omega_j_dressed = true,
            "frame_freq" if matches!(&e.value, RawValue::Str(s) if s == "qubit") => dev.frame_explicit = false,
            key @ ("truncation_jqf" | "truncation_qubit" | "truncation_resonator") => {
                let n = e.count("device", 2)?;
                match key {
                    "truncation_jqf" => p.truncation.jqf = n,
                    "truncation_qubit" => p.truncation.qubit = n,
                    _ => p.truncation.resonator = n,
                }
            }
            key => {
                let param = Param::from_name(key).filter(|p| p.device_field()).ok_or_else(|| {
                    e.err(
                        "device",
                        "unknown key, expected kind, omega_q, omega_r, omega_j, alpha, g_qr, kappa_r, kappa_j, \
                         kappa_q, phi, phi1, phi2, frame_freq or truncation_*",
                    )
                })?;
                let v = scalar(param.unit(), &e.value).map_err(|m| e.err("device", m))?;
                if param == Param::OmegaJ {
                    dev.omega_j_dressed = false;
                }
                if param == Param::FrameFreq {
                    dev.frame_explicit = true;
                }
                set_param(p, param, v);
            }
        }
    }
    if !dev.frame_explicit {
        dev.params.frame_freq = dev.params.omega_q;
    }
    dev.params.validate().map_err(|err| CliError::Config(format!("[device]: {err}")))?;
    Ok(dev)
}

/// Sets a device field; `false` for the non-device sweep quantities.
pub fn set_param(p: &mut SystemParams, param: Param, v: f64) -> bool {
    match param {
        Param::OmegaQ => p.omega_q = v,
        Param::OmegaR => p.omega_r = v,
        Param::OmegaJ => p.omega_j = v,
        Param::Alpha => p.alpha = v,
        Param::GQr => p.g_qr = v,
        Param::KappaR => p.kappa_r = v,
        Param::KappaJ => p.kappa_j = v,
        Param::KappaQ => p.kappa_q = v,
        Param::Phi => p.phi = v,
        Param::Phi1 => p.phi1 = v,
        Param::Phi2 => p.phi2 = v,
        Param::FrameFreq => p.frame_freq = v,
        Param::JqfDetuning | Param::ProbeOffset | Param::Photons => return false,
    }
    true
}

fn parse_solver(list: &[Entry]) -> CliResult<SolverConfig> {
    let mut s = SolverConfig::default();
    for e in list {
        match e.key.as_str() {
            "rel_tol" => s.options.rel_tol = e.positive("solver")?,
            "abs_tol" => s.options.abs_tol = e.positive("solver")?,
            "max_steps" => s.options.max_steps = e.count("solver", 1)?,
            "max_step_ns" => s.options.max_step = e.positive("solver")?,
            "transient_cut_ns" => {
                let x = e.number("solver")?;
                if x < 0.0 || !x.is_finite() {
                    return Err(e.err("solver", "must be non-negative"));
                }
                s.transient_cut_ns = x;
            }
            "t1_method" => {
                s.t1_method = match e.string("solver")? {
                    "spectral" => T1Method::Spectral,
                    "fit" | "trajectory-fit" => T1Method::TrajectoryFit,
                    other => return Err(e.err("solver", format!("expected \"spectral\" or \"fit\", got \"{other}\""))),
                }
            }
            "propagator" => {
                s.propagator = match e.string("solver")? {
                    "rk" | "runge-kutta" => Propagator::RungeKutta,
                    "expm" => Propagator::MatrixExponential,
                    other => return Err(e.err("solver", format!("expected \"rk\" or \"expm\", got \"{other}\""))),
                }
            }
            _ => {
                return Err(e.err(
                    "solver",
                    "unknown key, expected rel_tol, abs_tol, max_steps, max_step_ns, transient_cut_ns, t1_method or propagator",
                ))
            }
        }
    }
    Ok(s)
}

fn parse_dynamics(list: &[Entry]) -> CliResult<DynamicsConfig> {
    let mut d = DynamicsConfig::default();
    for e in list {
        match e.key.as_str() {
            "t_end_us" => d.t_end_us = Some(e.positive("dynamics")?),
            "samples" => d.samples = e.count("dynamics", 2)?,
            "initial" => d.initial = e.string("dynamics")?.to_string(),
            _ => return Err(e.err("dynamics", "unknown key, expected t_end_us, samples or initial")),
        }
    }
    Ok(d)
}

fn parse_probe(list: &[Entry]) -> CliResult<ProbeConfig> {
    let mut p = ProbeConfig::default();
    for e in list {
        match e.key.as_str() {
            "photons" => p.photons = e.positive("probe")?,
            "port" => p.port = e.count("probe", 0)?,
            _ => return Err(e.err("probe", "unknown key, expected photons or port")),
        }
    }
    Ok(p)
}

/// A `--set section.key=value` override. The value is read as TOML, and
/// as a bare string when that fails (so `phi2=0.1pi` works unquoted).
fn parse_override(s: &str) -> CliResult<(String, String, RawValue)> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set: expected key=value, got \"{s}\"")))?;
    let (section, key) = match key.trim().split_once('.') {
        Some((sec, k)) => (sec.trim().to_string(), k.trim().to_string()),
        None if matches!(key.trim(), "task" | "output") => (String::new(), key.trim().to_string()),
        None => ("device".to_string(), key.trim().to_string()),
    };
    #[derive(Deserialize)]
    struct Wrap {
        v: RawValue,
    }
    let value = toml::from_str::<Wrap>(&format!("v = {}", value.trim()))
        .map(|w| w.v)
        .unwrap_or_else(|_| RawValue::Str(value.trim().to_string()));
    Ok((section, key, value))
}

pub fn parse_config(text: &str) -> CliResult<ScenarioConfig> {
    parse_config_with(text, &[])
}

/// Parses `text` and applies `--set` overrides on top.
pub fn parse_config_with(text: &str, overrides: &[String]) -> CliResult<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let at = e.span().map(|s| format!("line {}: ", line_of(text, s.start))).unwrap_or_default();
        CliError::Config(format!("{at}{}", e.message().trim().replace('\n', " ")))
    })?;
    let mut task = match &raw.task {
        Some(t) => Some(
            t.get_ref()
                .parse::<Task>()
                .map_err(|m| CliError::Config(format!("line {}: {m}", line_of(text, t.span().start))))?,
        ),
        None => None,
    };
    let mut output = raw.output.map(|o| PathBuf::from(o.into_inner()));
    let mut device = entries(text, raw.device);
    let mut sweep = entries(text, raw.sweep);
    let mut solver = entries(text, raw.solver);
    let mut dynamics = entries(text, raw.dynamics);
    let mut probe = entries(text, raw.probe);

    for o in overrides {
        let (section, key, value) = parse_override(o)?;
        let target = match section.as_str() {
            "" if key == "task" => {
                let RawValue::Str(s) = &value else {
                    return Err(CliError::Config(format!("--set: task must be a name, got {value}")));
                };
                task = Some(s.parse().map_err(|m| CliError::Config(format!("--set: {m}")))?);
                continue;
            }
            "" => {
                let RawValue::Str(s) = &value else {
                    return Err(CliError::Config(format!("--set: output must be a path, got {value}")));
                };
                output = Some(PathBuf::from(s));
                continue;
            }
            "device" => &mut device,
            "sweep" => &mut sweep,
            "solver" => &mut solver,
            "dynamics" => &mut dynamics,
            "probe" => &mut probe,
            other => return Err(CliError::Config(format!("--set: unknown section `{other}`"))),
        };
        match target.iter_mut().find(|e| e.key == key) {
            Some(e) => {
                e.value = value;
                e.line = None;
            }
            None => target.push(Entry { key, line: None, value }),
        }
    }

    let device = parse_device(&device)?;
    let axes = sweep.iter().map(parse_axis).collect::<CliResult<Vec<_>>>()?;
    let has = |p: Param| axes.iter().any(|a| a.param == p);
    if has(Param::OmegaJ) && has(Param::JqfDetuning) {
        return Err(CliError::Config("[sweep]: omega_j and jqf_detuning are mutually exclusive".into()));
    }

    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    for o in overrides {
        hasher.update(b"\n--set ");
        hasher.update(o.as_bytes());
    }

    Ok(ScenarioConfig {
        task,
        device,
        axes,
        solver: parse_solver(&solver)?,
        dynamics: parse_dynamics(&dynamics)?,
        probe: parse_probe(&probe)?,
        output,
        hash: hex::encode(hasher.finalize()),
    })
}
