//! Plasmon-mediated collective parameters, the rotating-frame Hamiltonian and
//! the Lindblad generator, and a fixed-step RK4 integrator with an on/off laser.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{self, c, kron, pauli, Mat4, TRACE_TOL};
use crate::states::DensityMatrix4;

/// Separations below this many plasmon wavelengths are outside the range
/// where the closed-form collective parameters hold.
pub const MIN_RELIABLE_SEPARATION: f64 = 0.25;

/// Plasmonic channel: decay rate `Γ`, guided fraction `β`, plasmon wavelength
/// `λ_pl` and propagation length `L` (same length unit as `λ_pl`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideParams {
    pub decay_rate: f64,
    pub beta: f64,
    pub plasmon_wavelength: f64,
    pub propagation_length: f64,
}

impl WaveguideParams {
    /// V-groove / wedge channel at 640 nm emission: `β = 0.94`, `λ_pl = 542 nm`, `L = 2 μm`.
    pub const V_GROOVE: WaveguideParams = WaveguideParams {
        decay_rate: 1.0,
        beta: 0.94,
        plasmon_wavelength: 542.0,
        propagation_length: 2000.0,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.decay_rate > 0.0 && self.decay_rate.is_finite()) {
            return Err(Error::config("waveguide.decay_rate", "must be positive"));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::config("waveguide.beta", "must lie in (0, 1]"));
        }
        if !(self.plasmon_wavelength > 0.0 && self.plasmon_wavelength.is_finite()) {
            return Err(Error::config(
                "waveguide.plasmon_wavelength",
                "must be positive",
            ));
        }
        if !(self.propagation_length > 0.0 && self.propagation_length.is_finite()) {
            return Err(Error::config(
                "waveguide.propagation_length",
                "must be positive",
            ));
        }
        Ok(())
    }
}

/// Coherent coupling `V` and collective decay `γ` for emitters `ζ` plasmon
/// wavelengths apart, together with the individual decay rate `Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollectiveParams {
    pub decay: f64,
    pub coupling: f64,
    pub collective_decay: f64,
    pub zeta: f64,
}

impl CollectiveParams {
    /// Hand-picked parameters, bypassing the waveguide model.
    pub fn new(decay: f64, coupling: f64, collective_decay: f64) -> Self {
        CollectiveParams {
            decay,
            coupling,
            collective_decay,
            zeta: f64::NAN,
        }
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }
}

/// `(sin 2πζ, cos 2πζ)`, exact at quarter-integer `ζ`.
fn turn_sin_cos(zeta: f64) -> (f64, f64) {
    let quarters = 4.0 * zeta;
    if quarters == quarters.round() && quarters.abs() < 9.0e15 {
        return match quarters.rem_euclid(4.0) as u8 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    let reduced = zeta - zeta.round();
    (std::f64::consts::TAU * reduced).sin_cos()
}

/// `V = (Γ/2) β e^{-λ_pl ζ / 2L} sin 2πζ`, `γ = Γ β e^{-λ_pl ζ / 2L} cos 2πζ`.
pub fn collective_params(w: &WaveguideParams, zeta: f64) -> Result<CollectiveParams> {
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::InvalidSeparation(zeta));
    }
    w.validate()?;
    if zeta < MIN_RELIABLE_SEPARATION {
        log::warn!(
            "separation zeta = {zeta} is below {MIN_RELIABLE_SEPARATION}; vacuum contributions are not modeled"
        );
    }
    let envelope = w.beta * (-w.plasmon_wavelength / (2.0 * w.propagation_length) * zeta).exp();
    let (s, co) = turn_sin_cos(zeta);
    Ok(CollectiveParams {
        decay: w.decay_rate,
        coupling: 0.5 * w.decay_rate * envelope * s,
        collective_decay: w.decay_rate * envelope * co,
        zeta,
    })
}

/// Laser drive in the rotating-wave approximation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveConfig {
    /// Rabi amplitude on emitter 1.
    pub ell1: f64,
    /// Rabi amplitude on emitter 2.
    pub ell2: f64,
    /// `Δ = ω_L - ω₀`.
    pub laser_detuning: f64,
    /// `δ = ω₁ - ω₂`.
    pub molecular_detuning: f64,
    /// Laser switch-off time; `None` keeps it on.
    pub t_off: Option<f64>,
}

impl DriveConfig {
    pub fn undriven(molecular_detuning: f64) -> Self {
        DriveConfig {
            molecular_detuning,
            ..Default::default()
        }
    }

    pub fn is_driven(&self) -> bool {
        self.ell1 != 0.0 || self.ell2 != 0.0
    }

    pub fn laser_on_at(&self, t: f64) -> bool {
        self.is_driven() && self.t_off.is_none_or(|off| t < off)
    }

    /// Detuning of the rotating frame from `ω₀`: `Δ` with a laser, zero without.
    pub fn frame_detuning(&self) -> f64 {
        if self.is_driven() {
            self.laser_detuning
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell1 >= 0.0 && self.ell1.is_finite()) {
            return Err(Error::config(
                "drive.ell1",
                "must be finite and nonnegative",
            ));
        }
        if !(self.ell2 >= 0.0 && self.ell2.is_finite()) {
            return Err(Error::config(
                "drive.ell2",
                "must be finite and nonnegative",
            ));
        }
        if !self.laser_detuning.is_finite() {
            return Err(Error::config("drive.laser_detuning", "must be finite"));
        }
        if !self.molecular_detuning.is_finite() {
            return Err(Error::config("drive.molecular_detuning", "must be finite"));
        }
        if let Some(off) = self.t_off {
            if !(off >= 0.0 && off.is_finite()) {
                return Err(Error::config(
                    "drive.t_off",
                    "must be finite and nonnegative",
                ));
            }
        }
        Ok(())
    }
}

/// Laser detuning that tracks the dressed single-excitation states, `√(V² + (δ/2)²)`.
pub fn dressed_resonance(coupling: f64, molecular_detuning: f64) -> f64 {
    coupling.hypot(0.5 * molecular_detuning)
}

/// Single-excitation eigenstates of detuned, coupled emitters:
/// `|φ+> = α₁|01> + α₂|10>`, `|φ-> = α₂|01> - α₁|10>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedStates {
    pub alpha1: f64,
    pub alpha2: f64,
    pub kappa: f64,
    /// `ω₊ - ω₀`.
    pub omega_plus: f64,
    /// `ω₋ - ω₀`.
    pub omega_minus: f64,
}

pub fn dressed_states(molecular_detuning: f64, coupling: f64) -> Result<DressedStates> {
    let (delta, v) = (molecular_detuning, coupling);
    if delta == 0.0 && v == 0.0 {
        return Err(Error::DegenerateCase(
            "dressed states are undefined for V = δ = 0".into(),
        ));
    }
    let root = dressed_resonance(v, delta);
    // κ = δ/2 + root, rewritten to avoid cancellation when δ < 0
    let kappa = if delta >= 0.0 {
        0.5 * delta + root
    } else {
        v * v / (root - 0.5 * delta)
    };
    let norm = kappa.hypot(v);
    Ok(DressedStates {
        alpha1: v.abs() / norm,
        alpha2: kappa.abs() / norm,
        kappa,
        omega_plus: root,
        omega_minus: -root,
    })
}

/// Qubit operator `op` acting on emitter 1 (`which = 0`) or emitter 2.
fn on_emitter(which: usize, op: &qmat::Mat2) -> Mat4 {
    if which == 0 {
        kron(op, &pauli::identity())
    } else {
        kron(&pauli::identity(), op)
    }
}

fn lowering(which: usize) -> Mat4 {
    on_emitter(which, &pauli::sigma_minus())
}

/// Effective Hamiltonian (`ħ = 1`) in the frame rotating at the laser frequency
/// (at `ω₀` when there is no laser): detuned qubit terms, the dipole-dipole
/// exchange `V(σ₊σ₋ + σ₋σ₊)`, and, when `laser_on`, `Σ ℓᵢ(σ₊⁽ⁱ⁾ + σ₋⁽ⁱ⁾)`.
pub fn effective_hamiltonian(cp: &CollectiveParams, drive: &DriveConfig, laser_on: bool) -> Mat4 {
    let frame = drive.frame_detuning();
    let detunings = [
        0.5 * drive.molecular_detuning - frame,
        -0.5 * drive.molecular_detuning - frame,
    ];
    // excited state |1> sits at +ω/2, i.e. the qubit term is -(ω - ω_L)/2 · σ_z
    // with σ_z = diag(1, -1) in the (|0>, |1>) basis
    let mut h = Mat4::zeros();
    for (i, d) in detunings.iter().enumerate() {
        h -= on_emitter(i, &pauli::sigma_z()).scale(0.5 * d);
    }
    let exchange = lowering(0).adjoint() * lowering(1);
    h += (exchange + exchange.adjoint()).scale(cp.coupling);
    if laser_on {
        for (i, ell) in [drive.ell1, drive.ell2].into_iter().enumerate() {
            let sx = lowering(i) + lowering(i).adjoint();
            h += sx.scale(ell);
        }
    }
    h
}

/// Lindblad generator with individual decay `Γ` and collective decay `γ`,
/// written as `-i(H_nh ρ - ρ H_nh^†) + Σᵢⱼ Γᵢⱼ σ₋⁽ⁱ⁾ ρ σ₊⁽ʲ⁾` with
/// `H_nh = H - (i/2) Σᵢⱼ Γᵢⱼ σ₊⁽ⁱ⁾σ₋⁽ʲ⁾`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    h_nh: Mat4,
    h_nh_adj: Mat4,
    lowering: [Mat4; 2],
    raising: [Mat4; 2],
    rates: [[f64; 2]; 2],
}

impl Liouvillian {
    pub fn new(h: &Mat4, decay: f64, collective_decay: f64) -> Self {
        let lowering = [lowering(0), lowering(1)];
        let raising = [lowering[0].adjoint(), lowering[1].adjoint()];
        let rates = [[decay, collective_decay], [collective_decay, decay]];
        let mut k = Mat4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                k += (raising[i] * lowering[j]).scale(rates[i][j]);
            }
        }
        let h_nh = h - k * c(0.0, 0.5);
        Liouvillian {
            h_nh,
            h_nh_adj: h_nh.adjoint(),
            lowering,
            raising,
            rates,
        }
    }

    pub fn apply(&self, rho: &Mat4) -> Mat4 {
        let mut out = (self.h_nh * rho - rho * self.h_nh_adj) * c(0.0, -1.0);
        for i in 0..2 {
            let left = self.lowering[i] * rho;
            for j in 0..2 {
                out += (left * self.raising[j]).scale(self.rates[i][j]);
            }
        }
        out
    }
}

/// `dρ/dt` of the master equation.
pub fn lindblad_rhs(rho: &Mat4, h: &Mat4, decay: f64, collective_decay: f64) -> Mat4 {
    Liouvillian::new(h, decay, collective_decay).apply(rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Maximum RK4 step in `1/Γ`.
    pub dt: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions { dt: 1e-3 }
    }
}

/// Worst raw-state deviations observed over a trajectory, before any cleanup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryDiagnostics {
    pub max_hermiticity_error: f64,
    pub max_trace_error: f64,
    pub min_eigenvalue: f64,
}

impl Default for TrajectoryDiagnostics {
    fn default() -> Self {
        TrajectoryDiagnostics {
            max_hermiticity_error: 0.0,
            max_trace_error: 0.0,
            min_eigenvalue: f64::INFINITY,
        }
    }
}

impl TrajectoryDiagnostics {
    pub fn merge(&mut self, other: &TrajectoryDiagnostics) {
        self.max_hermiticity_error = self.max_hermiticity_error.max(other.max_hermiticity_error);
        self.max_trace_error = self.max_trace_error.max(other.max_trace_error);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix4>,
    pub diagnostics: TrajectoryDiagnostics,
}

/// Raw integrator states more negative than this abort the run.
pub const POSITIVITY_FLOOR: f64 = -1e-8;

pub(crate) fn validate_time_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::InvalidTimeGrid("empty".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::InvalidTimeGrid(format!(
                "must start at 0, starts at {t0}"
            )))
        }
        _ => {}
    }
    if let Some(w) = t_grid
        .windows(2)
        .find(|w| !w[1].is_finite() || w[1] <= w[0])
    {
        return Err(Error::InvalidTimeGrid(format!(
            "must be finite and strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn rk4_step(l: &Liouvillian, rho: &Mat4, h: f64) -> Mat4 {
    let k1 = l.apply(rho);
    let k2 = l.apply(&(rho + k1.scale(0.5 * h)));
    let k3 = l.apply(&(rho + k2.scale(0.5 * h)));
    let k4 = l.apply(&(rho + k3.scale(h)));
    rho + (k1 + (k2 + k3).scale(2.0) + k4).scale(h / 6.0)
}

/// Cleans a raw integrator state for output: Hermitian part, trace
/// renormalization past `TRACE_TOL`, and clamping of round-off negative
/// eigenvalues. The raw deviations are folded into `diag`.
fn settle(raw: &Mat4, t: f64, diag: &mut TrajectoryDiagnostics) -> Result<DensityMatrix4> {
    diag.max_hermiticity_error = diag.max_hermiticity_error.max(qmat::hermiticity_error(raw));
    let tr = raw.trace().re;
    diag.max_trace_error = diag.max_trace_error.max((tr - 1.0).abs());

    let mut m = qmat::hermitize(raw);
    if (tr - 1.0).abs() > TRACE_TOL {
        m.unscale_mut(tr);
    }
    let es = qmat::hermitian_eigensystem(&m)?;
    let min = es.min_eigenvalue();
    diag.min_eigenvalue = diag.min_eigenvalue.min(min);
    if min < POSITIVITY_FLOOR {
        return Err(Error::PositivityLost {
            time: t,
            min_eigenvalue: min,
        });
    }
    if min < 0.0 {
        m = es.map_spectrum(|x| x.max(0.0));
        let tr = m.trace().re;
        m.unscale_mut(tr);
        m = qmat::hermitize(&m);
    }
    DensityMatrix4::new(m)
}

/// Integrates the master equation from `rho0`, emitting a state at every time
/// in `t_grid`. Each interval between output times (split at the laser
/// switch-off) is covered by equal RK4 steps no longer than `opts.dt`.
pub fn evolve(
    rho0: &DensityMatrix4,
    cp: &CollectiveParams,
    drive: &DriveConfig,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    validate_time_grid(t_grid)?;
    drive.validate()?;
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::config("dt", "integrator step must be positive"));
    }
    let on = Liouvillian::new(
        &effective_hamiltonian(cp, drive, true),
        cp.decay,
        cp.collective_decay,
    );
    let off = Liouvillian::new(
        &effective_hamiltonian(cp, drive, false),
        cp.decay,
        cp.collective_decay,
    );

    let mut diagnostics = TrajectoryDiagnostics::default();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut rho = *rho0.matrix();
    states.push(settle(&rho, 0.0, &mut diagnostics)?);

    for w in t_grid.windows(2) {
        let (start, end) = (w[0], w[1]);
        let mut cuts = vec![start];
        if let Some(off_t) = drive.t_off.filter(|&t| t > start && t < end) {
            cuts.push(off_t);
        }
        cuts.push(end);
        for seg in cuts.windows(2) {
            let len = seg[1] - seg[0];
            let steps = ((len / opts.dt) - 1e-9).ceil().max(1.0) as usize;
            let h = len / steps as f64;
            let generator = if drive.laser_on_at(seg[0]) { &on } else { &off };
            for _ in 0..steps {
                rho = rk4_step(generator, &rho, h);
            }
        }
        states.push(settle(&rho, end, &mut diagnostics)?);
    }

    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_populations, bell_state, BellState};

    fn fig1() -> CollectiveParams {
        collective_params(&WaveguideParams::V_GROOVE, 1.0).unwrap()
    }

    #[test]
    fn quarter_integer_zeros_are_exact() {
        let w = WaveguideParams::V_GROOVE;
        assert_eq!(collective_params(&w, 1.0).unwrap().coupling, 0.0);
        assert_eq!(collective_params(&w, 0.75).unwrap().collective_decay, 0.0);
        for n in 0..20 {
            let zeta = (2 * n + 1) as f64 / 4.0;
            assert_eq!(collective_params(&w, zeta).unwrap().collective_decay, 0.0);
        }
    }

    #[test]
    fn fig1_collective_decay() {
        // 0.94 * exp(-542 / 4000), evaluated independently: 0.820921...
        let expected = 0.94 * (-0.1355f64).exp();
        let g = fig1().collective_decay;
        assert!((g - expected).abs() < 1e-15);
        assert!((g - 0.8209).abs() < 1e-4);
    }

    #[test]
    fn generic_separation_matches_direct_formula() {
        let w = WaveguideParams::V_GROOVE;
        let zeta = 1.37;
        let cp = collective_params(&w, zeta).unwrap();
        let env = 0.94 * (-542.0 / 4000.0 * zeta).exp();
        let arg = std::f64::consts::TAU * zeta;
        assert!((cp.coupling - 0.5 * env * arg.sin()).abs() < 1e-14);
        assert!((cp.collective_decay - env * arg.cos()).abs() < 1e-14);
        assert!(cp.collective_decay.abs() <= 1.0 && cp.coupling.abs() <= 0.5);
    }

    #[test]
    fn invalid_separation() {
        let w = WaveguideParams::V_GROOVE;
        assert!(matches!(
            collective_params(&w, 0.0),
            Err(Error::InvalidSeparation(_))
        ));
        assert!(matches!(
            collective_params(&w, -1.0),
            Err(Error::InvalidSeparation(_))
        ));
        assert!(collective_params(&w, 0.1).is_ok());
    }

    #[test]
    fn dressed_state_examples() {
        let d = dressed_states(0.0, 0.3).unwrap();
        assert!((d.alpha1 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((d.alpha2 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let d = dressed_states(1.0, 1e-9).unwrap();
        assert!(d.alpha1 < 1e-8 && (d.alpha2 - 1.0).abs() < 1e-15);

        let d = dressed_states(1.0, 0.5).unwrap();
        assert!((d.omega_plus - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((d.omega_minus + 0.5f64.sqrt()).abs() < 1e-15);
        assert!((d.alpha1.powi(2) + d.alpha2.powi(2) - 1.0).abs() < 1e-12);

        let d = dressed_states(-3.0, 0.2).unwrap();
        assert!((d.alpha1.powi(2) + d.alpha2.powi(2) - 1.0).abs() < 1e-12);
        assert!(matches!(
            dressed_states(0.0, 0.0),
            Err(Error::DegenerateCase(_))
        ));
    }

    #[test]
    fn dressed_states_diagonalize_single_excitation_block() {
        let (delta, v) = (0.8, -0.35);
        let d = dressed_states(delta, v).unwrap();
        let cp = CollectiveParams::new(1.0, v, 0.0);
        let h = effective_hamiltonian(&cp, &DriveConfig::undriven(delta), false);
        let phi_plus = nalgebra::Vector4::new(
            c(0.0, 0.0),
            c(d.alpha1 * v.signum(), 0.0),
            c(d.alpha2, 0.0),
            c(0.0, 0.0),
        );
        let hv = h * phi_plus;
        // |10> is emitter 1 excited, so its diagonal energy is +δ/2
        let energy = (phi_plus.adjoint() * hv)[(0, 0)].re;
        assert!((energy.abs() - d.omega_plus).abs() < 1e-12);
        assert!((hv - phi_plus.scale(energy)).norm() < 1e-12);
    }

    #[test]
    fn hamiltonian_examples() {
        let cp = CollectiveParams::new(1.0, 0.4, 0.0);
        let h = effective_hamiltonian(&cp, &DriveConfig::default(), false);
        let es = qmat::hermitian_eigensystem(&h).unwrap();
        let vals: Vec<f64> = es.eigenvalues.iter().copied().collect();
        assert!(vals.iter().any(|x| (x - 0.4).abs() < 1e-14));
        assert!(vals.iter().any(|x| (x + 0.4).abs() < 1e-14));
        let psi_plus = BellState::PsiPlus.vector();
        assert!(((psi_plus.adjoint() * h * psi_plus)[(0, 0)].re - 0.4).abs() < 1e-14);

        let zero = effective_hamiltonian(
            &CollectiveParams::new(1.0, 0.0, 0.5),
            &DriveConfig::default(),
            false,
        );
        assert_eq!(zero, Mat4::zeros());

        let drive = DriveConfig {
            ell1: 1.5,
            ..Default::default()
        };
        let h = effective_hamiltonian(&CollectiveParams::new(1.0, -0.42, 0.0), &drive, true);
        assert!(qmat::hermiticity_error(&h) == 0.0);
        assert_eq!(h[(0, 2)], c(1.5, 0.0));
        assert_eq!(h[(1, 3)], c(1.5, 0.0));
        assert_eq!(h[(0, 1)], c(0.0, 0.0));
        let h_off = effective_hamiltonian(&CollectiveParams::new(1.0, -0.42, 0.0), &drive, false);
        assert_eq!(h_off[(0, 2)], c(0.0, 0.0));
    }

    #[test]
    fn rhs_examples() {
        let cp = fig1();
        let h = effective_hamiltonian(&cp, &DriveConfig::default(), false);
        let ground = lindblad_rhs(
            DensityMatrix4::ground().matrix(),
            &h,
            cp.decay,
            cp.collective_decay,
        );
        assert_eq!(ground.norm(), 0.0);

        let mut top = Mat4::zeros();
        top[(3, 3)] = c(1.0, 0.0);
        let d = lindblad_rhs(&top, &h, 1.0, cp.collective_decay);
        assert!((d[(3, 3)].re + 2.0).abs() < 1e-15);

        let psi_m = BellState::PsiMinus.vector();
        let d = lindblad_rhs(
            bell_state(BellState::PsiMinus).matrix(),
            &h,
            1.0,
            cp.collective_decay,
        );
        let rate = (psi_m.adjoint() * d * psi_m)[(0, 0)].re;
        assert!((rate + (1.0 - cp.collective_decay)).abs() < 1e-14);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian() {
        let cp = CollectiveParams::new(1.0, 0.3, -0.6);
        let drive = DriveConfig {
            ell1: 1.2,
            ell2: 0.4,
            laser_detuning: 0.3,
            molecular_detuning: -0.5,
            t_off: None,
        };
        let h = effective_hamiltonian(&cp, &drive, true);
        let rho =
            crate::states::x_state(&crate::states::XStateParams::new(0.2, 0.1, 0.3, -0.2)).unwrap();
        let d = lindblad_rhs(rho.matrix(), &h, cp.decay, cp.collective_decay);
        assert!(d.trace().norm() < 1e-12);
        assert!(qmat::hermiticity_error(&d) < 1e-12);
    }

    #[test]
    fn ground_state_is_stationary() {
        let grid: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let traj = evolve(
            &DensityMatrix4::ground(),
            &fig1(),
            &DriveConfig::default(),
            &grid,
            &Default::default(),
        )
        .unwrap();
        for s in &traj.states {
            assert!(qmat::max_abs_diff(s.matrix(), DensityMatrix4::ground().matrix()) < 1e-15);
        }
    }

    #[test]
    fn laser_switch_off_returns_to_ground() {
        let cp = collective_params(&WaveguideParams::V_GROOVE, 0.75).unwrap();
        let drive = DriveConfig {
            ell1: 1.5,
            t_off: Some(10.0),
            ..Default::default()
        };
        let traj = evolve(
            &DensityMatrix4::ground(),
            &cp,
            &drive,
            &[0.0, 5.0, 10.0, 20.0],
            &Default::default(),
        )
        .unwrap();
        assert!(traj.states[2].population(0) < 0.9);
        assert!(traj.states[3].population(0) > 0.999);
    }

    #[test]
    fn switch_off_inside_an_output_interval() {
        // t_off between samples must give the same state as t_off on a sample
        let cp = collective_params(&WaveguideParams::V_GROOVE, 0.75).unwrap();
        let drive = DriveConfig {
            ell1: 1.5,
            t_off: Some(2.5),
            ..Default::default()
        };
        let a = evolve(
            &DensityMatrix4::ground(),
            &cp,
            &drive,
            &[0.0, 2.0, 4.0],
            &Default::default(),
        )
        .unwrap();
        let b = evolve(
            &DensityMatrix4::ground(),
            &cp,
            &drive,
            &[0.0, 2.0, 2.5, 4.0],
            &Default::default(),
        )
        .unwrap();
        assert!(qmat::max_abs_diff(a.states[2].matrix(), b.states[3].matrix()) < 1e-13);
    }

    #[test]
    fn subradiant_decay() {
        let cp = fig1();
        let grid = [0.0, 1.0, 2.0];
        let traj = evolve(
            &bell_state(BellState::PsiMinus),
            &cp,
            &DriveConfig::default(),
            &grid,
            &Default::default(),
        )
        .unwrap();
        for (t, s) in grid.iter().zip(&traj.states) {
            let p = bell_populations(s).psi_minus;
            let expected = (-(1.0 - cp.collective_decay) * t).exp();
            assert!((p - expected).abs() < 1e-12, "t={t}: {p} vs {expected}");
        }
    }

    #[test]
    fn bad_time_grids() {
        let cp = fig1();
        let rho = DensityMatrix4::ground();
        let d = DriveConfig::default();
        let o = IntegratorOptions::default();
        assert!(matches!(
            evolve(&rho, &cp, &d, &[], &o),
            Err(Error::InvalidTimeGrid(_))
        ));
        assert!(matches!(
            evolve(&rho, &cp, &d, &[0.5, 1.0], &o),
            Err(Error::InvalidTimeGrid(_))
        ));
        assert!(matches!(
            evolve(&rho, &cp, &d, &[0.0, 1.0, 1.0], &o),
            Err(Error::InvalidTimeGrid(_))
        ));
    }
}
