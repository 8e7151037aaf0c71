//! Named experiment configurations, the trajectory/correlation runner, and CSV output.
//!
//! A scenario is a waveguide, an emitter separation, an initial state, a drive
//! and a time grid, optionally swept along one axis. Each sweep point yields
//! one trajectory; undriven points whose initial state lies in a solvable
//! family use the closed forms, everything else is integrated.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, ResonantSolutionParams};
use crate::correlations::{correlation_report, CorrelationReport};
use crate::dynamics::{
    self, collective_params, dressed_resonance, CollectiveParams, DriveConfig, IntegratorOptions,
    Trajectory, TrajectoryDiagnostics, WaveguideParams,
};
use crate::error::{Error, Result};
use crate::qmat::{self, max_abs_diff};
use crate::states::{
    bell_populations, bell_state, x_state, BellPopulations, BellState, DensityMatrix4, XStateParams,
};

/// Environment variable bounding the worker pool for sweeps.
pub const THREADS_ENV: &str = "PLASMON_DIMER_THREADS";

/// Largest tolerated closed-form vs integrator deviation under `--verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Ground,
    MaximallyMixed,
    ClassicalMixture,
    Bell {
        which: BellState,
    },
    /// Product-state family `c₋ = 0, η = 0, h₃ = c₊²/4`.
    Xi {
        c_plus: f64,
    },
    XState {
        a3: f64,
        b3: f64,
        eta: f64,
        h3: f64,
    },
}

impl InitialState {
    /// X-state parameters when the state belongs to the X family.
    pub fn x_params(&self) -> Option<XStateParams> {
        match *self {
            InitialState::Ground => Some(XStateParams::new(1.0, 1.0, 0.0, 1.0)),
            InitialState::MaximallyMixed => Some(XStateParams::new(0.0, 0.0, 0.0, 0.0)),
            InitialState::ClassicalMixture => Some(XStateParams::new(0.0, 0.0, 0.0, 1.0)),
            InitialState::Bell {
                which: BellState::PsiPlus,
            } => Some(XStateParams::new(0.0, 0.0, 1.0, -1.0)),
            InitialState::Bell {
                which: BellState::PsiMinus,
            } => Some(XStateParams::new(0.0, 0.0, -1.0, -1.0)),
            InitialState::Bell { .. } => None,
            InitialState::Xi { c_plus } => Some(XStateParams::xi(c_plus)),
            InitialState::XState { a3, b3, eta, h3 } => Some(XStateParams::new(a3, b3, eta, h3)),
        }
    }

    pub fn density(&self) -> Result<DensityMatrix4> {
        match *self {
            InitialState::Ground => Ok(DensityMatrix4::ground()),
            InitialState::MaximallyMixed => Ok(DensityMatrix4::maximally_mixed()),
            InitialState::ClassicalMixture => Ok(DensityMatrix4::classical_mixture()),
            InitialState::Bell { which } => Ok(bell_state(which)),
            _ => x_state(&self.x_params().expect("X family")),
        }
    }
}

/// Output times `k t_max / (samples - 1)`, `k = 0..samples`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        let n = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|k| k as f64 * self.t_max / n)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case", deny_unknown_fields)]
pub enum Sweep {
    #[default]
    None,
    /// Sweeps `ℓ₁`.
    LaserAmplitude { min: f64, max: f64, points: usize },
    /// Sweeps `δ`.
    MolecularDetuning { min: f64, max: f64, points: usize },
    /// Sweeps `c₊` of the `Xi` family.
    CPlus { min: f64, max: f64, points: usize },
}

impl Sweep {
    pub fn column(&self) -> Option<&'static str> {
        match self {
            Sweep::None => None,
            Sweep::LaserAmplitude { .. } => Some("ell"),
            Sweep::MolecularDetuning { .. } => Some("delta"),
            Sweep::CPlus { .. } => Some("c_plus"),
        }
    }

    fn range(&self) -> Option<(f64, f64, usize)> {
        match *self {
            Sweep::None => None,
            Sweep::LaserAmplitude { min, max, points }
            | Sweep::MolecularDetuning { min, max, points }
            | Sweep::CPlus { min, max, points } => Some((min, max, points)),
        }
    }

    /// Sweep values, evenly spaced and inclusive of both ends.
    pub fn values(&self) -> Vec<Option<f64>> {
        match self.range() {
            None => vec![None],
            Some((min, _, 1)) => vec![Some(min)],
            Some((min, max, n)) => (0..n)
                .map(|k| Some(min + (max - min) * k as f64 / (n - 1) as f64))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub waveguide: WaveguideParams,
    /// Emitter separation in plasmon wavelengths.
    pub zeta: f64,
    pub initial_state: InitialState,
    #[serde(default)]
    pub drive: DriveConfig,
    /// Set `Δ = √(V² + (δ/2)²)` at every sweep point.
    #[serde(default)]
    pub track_dressed_resonance: bool,
    /// Replace the plasmon-mediated `V` by zero (non-interacting control).
    #[serde(default)]
    pub zero_coupling: bool,
    pub time: TimeGrid,
    #[serde(default)]
    pub sweep: Sweep,
    /// Free-space emission wavelength in nm; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission_wavelength_nm: Option<f64>,
}

/// Fully resolved inputs of one sweep point.
#[derive(Debug, Clone)]
pub struct PointSetup {
    pub sweep_value: Option<f64>,
    pub initial: InitialState,
    pub collective: CollectiveParams,
    pub drive: DriveConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Resonant,
    GammaZero,
    Detuned,
    Integrator,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        self.waveguide.validate()?;
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(Error::config("zeta", "must be positive"));
        }
        self.drive.validate()?;
        if !(self.time.t_max > 0.0 && self.time.t_max.is_finite()) {
            return Err(Error::config("time.t_max", "must be positive"));
        }
        if self.time.samples < 2 {
            return Err(Error::config("time.samples", "must be at least 2"));
        }
        if let Some((min, max, points)) = self.sweep.range() {
            if points == 0 {
                return Err(Error::config("sweep.points", "must be positive"));
            }
            if !(min.is_finite() && max.is_finite()) || max < min {
                return Err(Error::config(
                    "sweep.max",
                    "range must be finite with min <= max",
                ));
            }
            if matches!(self.sweep, Sweep::LaserAmplitude { .. }) && min < 0.0 {
                return Err(Error::config(
                    "sweep.min",
                    "laser amplitudes must be nonnegative",
                ));
            }
        }
        if let InitialState::XState { .. } = self.initial_state {
            self.initial_state
                .density()
                .map_err(|e| Error::config("initial_state", e.to_string()))?;
        }
        Ok(())
    }

    pub fn points(&self) -> Result<Vec<PointSetup>> {
        self.sweep
            .values()
            .into_iter()
            .map(|v| self.point(v))
            .collect()
    }

    /// Inputs at one sweep value (`None` when there is no sweep).
    pub fn point(&self, sweep_value: Option<f64>) -> Result<PointSetup> {
        let mut collective = collective_params(&self.waveguide, self.zeta)?;
        if self.zero_coupling {
            collective.coupling = 0.0;
        }
        let mut drive = self.drive;
        let mut initial = self.initial_state;
        match (self.sweep, sweep_value) {
            (Sweep::LaserAmplitude { .. }, Some(v)) => drive.ell1 = v,
            (Sweep::MolecularDetuning { .. }, Some(v)) => drive.molecular_detuning = v,
            (Sweep::CPlus { .. }, Some(v)) => initial = InitialState::Xi { c_plus: v },
            _ => {}
        }
        if self.track_dressed_resonance {
            drive.laser_detuning = dressed_resonance(collective.coupling, drive.molecular_detuning);
        }
        Ok(PointSetup {
            sweep_value,
            initial,
            collective,
            drive,
        })
    }
}

impl PointSetup {
    /// Closed form applicable to this point, if any.
    pub fn method(&self) -> Method {
        if self.drive.is_driven() {
            return Method::Integrator;
        }
        let Some(x) = self.initial.x_params() else {
            return Method::Integrator;
        };
        let cp = &self.collective;
        let c_minus_zero = x.c_minus() == 0.0;
        let gamma_zero = cp.collective_decay == 0.0;
        if self.drive.molecular_detuning == 0.0 {
            if gamma_zero && c_minus_zero {
                Method::GammaZero
            } else if cp.collective_decay.abs() < cp.decay * (1.0 - 1e-9) {
                Method::Resonant
            } else {
                Method::Integrator
            }
        } else if gamma_zero
            && c_minus_zero
            && (cp.coupling != 0.0 || self.drive.molecular_detuning != 0.0)
        {
            Method::Detuned
        } else {
            Method::Integrator
        }
    }

    fn closed_form(&self, method: Method, t: f64) -> Result<DensityMatrix4> {
        let x = self
            .initial
            .x_params()
            .expect("closed forms need an X state");
        let cp = &self.collective;
        match method {
            Method::Resonant => analytic::resonant_solution(
                t,
                &ResonantSolutionParams {
                    state: x,
                    decay: cp.decay,
                    collective_decay: cp.collective_decay,
                    coupling: cp.coupling,
                },
            ),
            Method::GammaZero => analytic::gamma_zero_solution(t, &x, cp.decay),
            Method::Detuned => analytic::detuned_solution(
                t,
                &x,
                cp.decay,
                cp.coupling,
                self.drive.molecular_detuning,
            ),
            Method::Integrator => unreachable!("not a closed form"),
        }
    }

    /// Integrates the master equation regardless of the available closed forms.
    pub fn integrate(&self, times: &[f64], opts: &IntegratorOptions) -> Result<Trajectory> {
        dynamics::evolve(
            &self.initial.density()?,
            &self.collective,
            &self.drive,
            times,
            opts,
        )
    }

    /// States at `times`, from a closed form when one applies. With `verify`,
    /// closed-form trajectories are checked against the integrator.
    pub fn trajectory(
        &self,
        times: &[f64],
        opts: &IntegratorOptions,
        verify: bool,
    ) -> Result<(Method, Trajectory)> {
        let method = self.method();
        if method == Method::Integrator {
            return Ok((method, self.integrate(times, opts)?));
        }
        dynamics::validate_time_grid(times)?;
        let mut diagnostics = TrajectoryDiagnostics::default();
        let mut states = Vec::with_capacity(times.len());
        for &t in times {
            let s = self.closed_form(method, t)?;
            diagnostics.max_hermiticity_error = diagnostics
                .max_hermiticity_error
                .max(qmat::hermiticity_error(s.matrix()));
            diagnostics.max_trace_error = diagnostics
                .max_trace_error
                .max((s.matrix().trace().re - 1.0).abs());
            diagnostics.min_eigenvalue = diagnostics.min_eigenvalue.min(s.min_eigenvalue());
            states.push(s);
        }
        if verify {
            let numeric = self.integrate(times, opts)?;
            for ((t, a), b) in times.iter().zip(&states).zip(&numeric.states) {
                let deviation = max_abs_diff(a.matrix(), b.matrix());
                if deviation >= VERIFY_TOLERANCE {
                    return Err(Error::VerificationFailed {
                        time: *t,
                        deviation,
                    });
                }
            }
        }
        Ok((
            method,
            Trajectory {
                times: times.to_vec(),
                states,
                diagnostics,
            },
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub report: CorrelationReport,
    pub bell: BellPopulations,
    /// Row-major density-matrix elements, when requested.
    pub elements: Option<[qmat::C64; 16]>,
}

impl TrajectoryRecord {
    pub fn from_state(t: f64, rho: &DensityMatrix4, raw_elements: bool) -> Result<Self> {
        Ok(TrajectoryRecord {
            t,
            report: correlation_report(rho)?,
            bell: bell_populations(rho),
            elements: raw_elements.then(|| {
                let mut e = [qmat::c(0.0, 0.0); 16];
                for (k, slot) in e.iter_mut().enumerate() {
                    *slot = rho.get(k / 4, k % 4);
                }
                e
            }),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepPointOutput {
    pub sweep_value: Option<f64>,
    pub method: Method,
    pub diagnostics: TrajectoryDiagnostics,
    pub records: Vec<TrajectoryRecord>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub scenario: String,
    pub sweep_column: Option<&'static str>,
    pub points: Vec<SweepPointOutput>,
}

impl ScenarioOutput {
    pub fn record_count(&self) -> usize {
        self.points.iter().map(|p| p.records.len()).sum()
    }

    pub fn diagnostics(&self) -> TrajectoryDiagnostics {
        let mut d = TrajectoryDiagnostics::default();
        for p in &self.points {
            d.merge(&p.diagnostics);
        }
        d
    }

    /// Records of the point with the given sweep value.
    pub fn at(&self, sweep_value: f64) -> Option<&SweepPointOutput> {
        self.points.iter().find(|p| {
            p.sweep_value
                .is_some_and(|v| (v - sweep_value).abs() < 1e-9)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub integrator: IntegratorOptions,
    pub verify: bool,
    pub raw_elements: bool,
    /// Worker pool size; `None` reads [`THREADS_ENV`] or uses all cores.
    pub threads: Option<usize>,
}

/// Worker count from [`THREADS_ENV`], defaulting to the available parallelism.
pub fn worker_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::config(
                THREADS_ENV,
                format!("expected a positive integer, got `{v}`"),
            )),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub(crate) fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    let n = match threads {
        Some(n) => n.max(1),
        None => worker_threads()?,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::config(THREADS_ENV, e.to_string()))?;
    Ok(pool.install(f))
}

fn run_point(point: &PointSetup, times: &[f64], opts: &RunOptions) -> Result<SweepPointOutput> {
    let (method, traj) = point.trajectory(times, &opts.integrator, opts.verify)?;
    let records = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| TrajectoryRecord::from_state(t, s, opts.raw_elements))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepPointOutput {
        sweep_value: point.sweep_value,
        method,
        diagnostics: traj.diagnostics,
        records,
    })
}

/// Runs every sweep point, one trajectory per worker, preserving sweep order.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<ScenarioOutput> {
    let inner = || -> Result<ScenarioOutput> {
        cfg.validate()?;
        let points = cfg.points()?;
        let times = cfg.time.times();
        let outputs = with_pool(opts.threads, || {
            points
                .par_iter()
                .map(|p| run_point(p, &times, opts))
                .collect::<Result<Vec<_>>>()
        })??;
        Ok(ScenarioOutput {
            scenario: cfg.name.clone(),
            sweep_column: cfg.sweep.column(),
            points: outputs,
        })
    };
    inner().map_err(|e| e.in_scenario(&cfg.name))
}

/// Trajectories only, without correlation measures.
pub fn scenario_trajectories(
    cfg: &ScenarioConfig,
    opts: &RunOptions,
) -> Result<Vec<(PointSetup, Method, Trajectory)>> {
    cfg.validate().map_err(|e| e.in_scenario(&cfg.name))?;
    let points = cfg.points()?;
    let times = cfg.time.times();
    with_pool(opts.threads, || {
        points
            .into_par_iter()
            .map(|p| {
                let (m, t) = p.trajectory(&times, &opts.integrator, opts.verify)?;
                Ok((p, m, t))
            })
            .collect::<Result<Vec<_>>>()
    })?
    .map_err(|e| e.in_scenario(&cfg.name))
}

// ---------------------------------------------------------------------------
// Catalog

pub const CATALOG: [&str; 7] = [
    "fig1a",
    "fig1b",
    "fig2a",
    "fig2b",
    "fig3",
    "fig3-uncoupled",
    "fig4",
];

fn base(
    name: &str,
    description: &str,
    zeta: f64,
    initial_state: InitialState,
    time: TimeGrid,
) -> ScenarioConfig {
    ScenarioConfig {
        name: name.to_string(),
        description: description.to_string(),
        waveguide: WaveguideParams::V_GROOVE,
        zeta,
        initial_state,
        drive: DriveConfig::default(),
        track_dressed_resonance: false,
        zero_coupling: false,
        time,
        sweep: Sweep::None,
        emission_wavelength_nm: Some(640.0),
    }
}

/// Built-in scenario by name.
pub fn named_scenario(name: &str) -> Option<ScenarioConfig> {
    let resonant_grid = TimeGrid {
        t_max: 20.0,
        samples: 401,
    };
    let laser = DriveConfig {
        ell1: 1.5,
        t_off: Some(10.0),
        ..Default::default()
    };
    let cfg = match name {
        "fig1a" => base(
            name,
            "classically correlated start, emitters one plasmon wavelength apart (V = 0)",
            1.0,
            InitialState::ClassicalMixture,
            resonant_grid,
        ),
        "fig1b" => base(
            name,
            "maximally mixed start, emitters one plasmon wavelength apart, with Bell populations",
            1.0,
            InitialState::MaximallyMixed,
            resonant_grid,
        ),
        "fig2a" => base(
            name,
            "entropy bound (bound_lhs) for the maximally mixed start at zeta = 1",
            1.0,
            InitialState::MaximallyMixed,
            resonant_grid,
        ),
        "fig2b" => ScenarioConfig {
            sweep: Sweep::CPlus {
                min: -1.0,
                max: 1.0,
                points: 41,
            },
            ..base(
                name,
                "product-state family swept over c+, zeta = 3/4 (gamma = 0)",
                0.75,
                InitialState::Xi { c_plus: 0.0 },
                TimeGrid {
                    t_max: 10.0,
                    samples: 201,
                },
            )
        },
        "fig3" => ScenarioConfig {
            drive: laser,
            sweep: Sweep::LaserAmplitude {
                min: 0.4,
                max: 3.6,
                points: 33,
            },
            ..base(
                name,
                "laser on emitter 1 from the ground state, switched off at t = 10, zeta = 3/4",
                0.75,
                InitialState::Ground,
                TimeGrid {
                    t_max: 20.0,
                    samples: 2001,
                },
            )
        },
        "fig3-uncoupled" => ScenarioConfig {
            drive: laser,
            zero_coupling: true,
            ..base(
                name,
                "fig3 at ell = 1.5 with the dipole coupling forced to zero",
                0.75,
                InitialState::Ground,
                TimeGrid {
                    t_max: 20.0,
                    samples: 401,
                },
            )
        },
        "fig4" => ScenarioConfig {
            drive: laser,
            track_dressed_resonance: true,
            sweep: Sweep::MolecularDetuning {
                min: 0.0,
                max: 2.0,
                points: 21,
            },
            ..base(
                name,
                "detuned emitters, laser tuned to the dressed states, ell = 1.5, off at t = 10",
                0.75,
                InitialState::Ground,
                TimeGrid {
                    t_max: 20.0,
                    samples: 1001,
                },
            )
        },
        _ => return None,
    };
    Some(cfg)
}

/// Tag keys of the internally tagged enums in a config.
const ENUM_TAGS: [&str; 2] = ["kind", "axis"];

/// Objects are merged key by key, except that a patch naming a different enum
/// variant replaces the whole object.
fn merge_json(base: &mut serde_json::Value, patch: serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(b), serde_json::Value::Object(p))
            if ENUM_TAGS
                .iter()
                .all(|tag| p.get(*tag).is_none_or(|v| b.get(*tag) == Some(v))) =>
        {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge_json(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, p) => *b = p,
    }
}

/// Builds a config from a JSON document layered over the named scenario
/// (or standing alone when `name` is not in the catalog).
pub fn config_from_json(name: &str, json: &str) -> Result<ScenarioConfig> {
    let patch: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::config("<document>", e.to_string()))?;
    let mut doc = match named_scenario(name) {
        Some(cfg) => serde_json::to_value(cfg).expect("catalog configs serialize"),
        None => serde_json::json!({ "name": name }),
    };
    merge_json(&mut doc, patch);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        Error::config(
            if path == "." {
                "<document>".to_string()
            } else {
                path
            },
            e.inner().to_string(),
        )
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(name: &str, path: Option<&Path>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, &e))?;
            config_from_json(name, &text).map_err(|e| e.in_scenario(name))
        }
        None => named_scenario(name).ok_or_else(|| {
            Error::config(
                "scenario",
                format!("unknown scenario `{name}`; known: {}", CATALOG.join(", ")),
            )
        }),
    }
}

// ---------------------------------------------------------------------------
// CSV

pub const CSV_COLUMNS: [&str; 11] = [
    "t",
    "I",
    "C",
    "D",
    "EF",
    "concurrence",
    "bound_lhs",
    "pPsiPlus",
    "pPsiMinus",
    "pPhiPlus",
    "pPhiMinus",
];

fn push_float(line: &mut String, x: f64) {
    let start = line.len();
    write!(line, "{x:.12}").expect("writing to a String");
    if line[start..]
        .trim_start_matches('-')
        .bytes()
        .all(|b| b == b'0' || b == b'.')
    {
        line.truncate(start);
        line.push_str("0.000000000000");
    }
}

pub fn header(sweep_column: Option<&str>, raw_elements: bool) -> String {
    let mut cols: Vec<String> = sweep_column.into_iter().map(str::to_string).collect();
    cols.extend(CSV_COLUMNS.iter().map(|s| s.to_string()));
    if raw_elements {
        for i in 1..=4 {
            for j in 1..=4 {
                cols.push(format!("re_rho{i}{j}"));
                cols.push(format!("im_rho{i}{j}"));
            }
        }
    }
    cols.join(",")
}

/// Writes the header and one row per record. Sweep outputs lead with the sweep value.
pub fn write_csv<W: Write>(out: &ScenarioOutput, mut w: W) -> Result<()> {
    if out.record_count() == 0 {
        return Err(Error::EmptyRecords);
    }
    let raw = out
        .points
        .iter()
        .flat_map(|p| &p.records)
        .any(|r| r.elements.is_some());
    let io_err = |e: std::io::Error| Error::Io {
        path: "<output>".into(),
        message: e.to_string(),
    };
    writeln!(w, "{}", header(out.sweep_column, raw)).map_err(io_err)?;
    let mut line = String::new();
    for p in &out.points {
        for r in &p.records {
            line.clear();
            let mut fields: Vec<f64> = Vec::with_capacity(44);
            if out.sweep_column.is_some() {
                fields.push(p.sweep_value.unwrap_or(f64::NAN));
            }
            let c = &r.report;
            fields.extend([
                r.t,
                c.mutual_information,
                c.classical,
                c.discord,
                c.eof,
                c.concurrence,
                c.bound_lhs,
                r.bell.psi_plus,
                r.bell.psi_minus,
                r.bell.phi_plus,
                r.bell.phi_minus,
            ]);
            if let Some(e) = &r.elements {
                fields.extend(e.iter().flat_map(|z| [z.re, z.im]));
            }
            for (k, x) in fields.into_iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                push_float(&mut line, x);
            }
            writeln!(w, "{line}").map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)
}

/// Writes the CSV to `path`. No file is created when there are no records.
pub fn emit_csv(out: &ScenarioOutput, path: &Path) -> Result<()> {
    if out.record_count() == 0 {
        return Err(Error::EmptyRecords);
    }
    let mut buf = Vec::new();
    write_csv(out, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, &e))
}
