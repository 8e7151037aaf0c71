//! Correlation measures of a two-qubit state.
//!
//! Classical correlation and discord use projective measurements on qubit B,
//! parametrized by `|a> = cos θ|0> + e^{iφ} sin θ|1>` and the orthogonal
//! `|b> = e^{-iφ} sin θ|0> - cos θ|1>`. The minimum average post-measurement
//! entropy of A is found by a 64 x 64 grid over `(θ, φ)`, a few seed bases,
//! and Nelder-Mead refinement from the best candidates.

mod nelder_mead;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use nalgebra::Matrix4;
use serde::Serialize;

pub use nelder_mead::{Minimum, NelderMead};

use crate::error::{Error, Result};
use crate::qmat::{self, binary_entropy, c, psd_sqrt, shannon_entropy, Mat4, C64};
use crate::states::{partial_trace, DensityMatrix4, Qubit};

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 64;
/// Outcomes less likely than this contribute no conditional entropy.
const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// Angles of a projective measurement on qubit B, `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAngles {
    pub const COMPUTATIONAL: MeasurementAngles = MeasurementAngles {
        theta: 0.0,
        phi: 0.0,
    };

    /// Maps arbitrary real angles onto the canonical ranges. `(θ, φ)` and
    /// `(π - θ, φ + π)` describe the same projector pair, as do `θ` and `θ + π`.
    pub fn normalized(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(PI);
        let mut phi = phi;
        if theta > FRAC_PI_2 {
            theta = PI - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        MeasurementAngles { theta, phi }
    }

    /// The measurement basis `(|a>, |b>)`.
    pub fn basis(&self) -> [[C64; 2]; 2] {
        let (s, co) = self.theta.sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[c(co, 0.0), e * s], [e.conj() * s, c(-co, 0.0)]]
    }
}

/// All correlation measures at a single time point. Entropic quantities in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub classical: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub bound_lhs: f64,
    pub optimal_angles: MeasurementAngles,
}

/// `p S(ρ_{A|j})` for the unnormalized conditional state `[[a, b], [b*, d]]`.
fn weighted_entropy_2x2(a: f64, d: f64, b: C64) -> f64 {
    let p = a + d;
    if p < MIN_OUTCOME_PROBABILITY {
        return 0.0;
    }
    let gap = ((a - d) * (a - d) + 4.0 * b.norm_sqr()).sqrt();
    let hi = 0.5 * (p + gap);
    let lo = 0.5 * (p - gap);
    let term = |mu: f64| if mu > 0.0 { -mu * (mu / p).log2() } else { 0.0 };
    term(hi) + term(lo)
}

/// Average entropy of A after measuring B in the basis fixed by `angles`.
pub fn conditional_entropy(rho: &DensityMatrix4, angles: MeasurementAngles) -> f64 {
    measured_entropy(rho.matrix(), angles)
}

fn measured_entropy(m: &Matrix4<C64>, angles: MeasurementAngles) -> f64 {
    angles
        .basis()
        .iter()
        .map(|v| {
            // σ_ik = Σ_mn conj(v_m) ρ[(2i+m),(2k+n)] v_n
            let block = |i: usize, k: usize| {
                let mut acc = c(0.0, 0.0);
                for (mi, vm) in v.iter().enumerate() {
                    for (ni, vn) in v.iter().enumerate() {
                        acc += vm.conj() * m[(2 * i + mi, 2 * k + ni)] * vn;
                    }
                }
                acc
            };
            weighted_entropy_2x2(block(0, 0).re, block(1, 1).re, block(0, 1))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalEntropyMin {
    pub value: f64,
    pub angles: MeasurementAngles,
}

/// Minimum over projective measurements on B of the average post-measurement
/// entropy of A.
pub fn conditional_entropy_min(rho: &DensityMatrix4) -> ConditionalEntropyMin {
    let m = rho.matrix();
    let objective =
        |[theta, phi]: [f64; 2]| measured_entropy(m, MeasurementAngles::normalized(theta, phi));

    let theta_step = FRAC_PI_2 / (GRID_THETA - 1) as f64;
    let phi_step = TAU / GRID_PHI as f64;

    let mut best_grid = ([0.0, 0.0], f64::INFINITY);
    for i in 0..GRID_THETA {
        for j in 0..GRID_PHI {
            let x = [i as f64 * theta_step, j as f64 * phi_step];
            let v = objective(x);
            if v < best_grid.1 {
                best_grid = (x, v);
            }
        }
    }

    let mut best_seed = ([0.0, 0.0], f64::INFINITY);
    for x in [[0.0, 0.0], [FRAC_PI_4, 0.0], [FRAC_PI_4, FRAC_PI_2]] {
        let v = objective(x);
        if v < best_seed.1 {
            best_seed = (x, v);
        }
    }

    let nm = NelderMead::default();
    let step = [theta_step, phi_step];
    let mut best = if best_seed.1 < best_grid.1 {
        best_seed
    } else {
        best_grid
    };
    for start in [best_grid.0, best_seed.0] {
        let found = nm.minimize(objective, start, step);
        if found.value < best.1 {
            best = (found.x, found.value);
        }
    }

    ConditionalEntropyMin {
        value: best.1.max(0.0),
        angles: MeasurementAngles::normalized(best.0[0], best.0[1]),
    }
}

struct Entropies {
    joint: f64,
    a: f64,
    b: f64,
}

fn entropies(rho: &DensityMatrix4) -> Result<Entropies> {
    Ok(Entropies {
        joint: qmat::von_neumann_entropy(rho.matrix())?,
        a: qmat::von_neumann_entropy(&partial_trace(rho, Qubit::A))?,
        b: qmat::von_neumann_entropy(&partial_trace(rho, Qubit::B))?,
    })
}

/// `I = S(ρ_A) + S(ρ_B) - S(ρ_AB)`.
pub fn mutual_information(rho: &DensityMatrix4) -> Result<f64> {
    let s = entropies(rho)?;
    Ok(s.a + s.b - s.joint)
}

/// Classical correlation `C = S(ρ_A) - min Σ p_j S(ρ_{A|j})`, with the optimal angles.
pub fn classical_correlation(rho: &DensityMatrix4) -> Result<(f64, MeasurementAngles)> {
    let s_a = qmat::von_neumann_entropy(&partial_trace(rho, Qubit::A))?;
    let cond = conditional_entropy_min(rho);
    Ok((s_a - cond.value, cond.angles))
}

/// Quantum discord `D = I - C`.
pub fn quantum_discord(rho: &DensityMatrix4) -> Result<f64> {
    let s = entropies(rho)?;
    let cond = conditional_entropy_min(rho);
    Ok(s.b - s.joint + cond.value)
}

/// `2 S(ρ_{A|Π}) - S(ρ_AB) + S(ρ_B) - S(ρ_A)`; nonnegative exactly when `D >= C`.
pub fn entropy_bound_lhs(rho: &DensityMatrix4) -> Result<f64> {
    let s = entropies(rho)?;
    let cond = conditional_entropy_min(rho);
    Ok(2.0 * cond.value - s.joint + s.b - s.a)
}

/// `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &Mat4) -> Mat4 {
    let yy = qmat::kron(&qmat::pauli::sigma_y(), &qmat::pauli::sigma_y());
    yy * rho.map(|z| z.conj()) * yy
}

/// Wootters concurrence. The `λ_i` are square roots of the eigenvalues of the
/// Hermitian matrix `√ρ ρ̃ √ρ`, which share the spectrum of `ρ ρ̃`.
pub fn concurrence(rho: &DensityMatrix4) -> Result<f64> {
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let r = qmat::hermitize(&(sqrt_rho * spin_flip(rho.matrix()) * sqrt_rho));
    let es = qmat::hermitian_eigensystem(&r)?;
    let mut lambdas: Vec<f64> = es.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// `E_F = ε((1 + √(1 - C²)) / 2)` for concurrence `C`.
pub fn eof_from_concurrence(concurrence: f64) -> f64 {
    let c = concurrence.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt())).clamp(0.0, 1.0)
}

pub fn entanglement_of_formation(rho: &DensityMatrix4) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Every measure at once, sharing the entropies and the measurement optimization.
pub fn correlation_report(rho: &DensityMatrix4) -> Result<CorrelationReport> {
    let s = entropies(rho)?;
    let cond = conditional_entropy_min(rho);
    let mutual_information = s.a + s.b - s.joint;
    let classical = s.a - cond.value;
    let concurrence = concurrence(rho)?;
    Ok(CorrelationReport {
        mutual_information,
        classical,
        discord: mutual_information - classical,
        concurrence,
        eof: eof_from_concurrence(concurrence),
        bound_lhs: 2.0 * cond.value - s.joint + s.b - s.a,
        optimal_angles: cond.angles,
    })
}

/// The two candidate conditional entropies of the `c₋ = 0` X-state family:
/// `S¹` from measuring B along z, `S²` from measuring along an equatorial axis
/// aligned with the coherence. Populations `a = ρ₁₁`, `b = ρ₂₂ = ρ₃₃`,
/// `f = ρ₄₄`, coherence `z = ρ₂₃`.
pub fn conditional_entropy_closed_form(a: f64, b: f64, f: f64, z: C64) -> Result<(f64, f64)> {
    const TOL: f64 = 1e-9;
    if a < -TOL || b < -TOL || f < -TOL {
        return Err(Error::Domain(format!(
            "populations must be nonnegative, got a={a}, b={b}, f={f}"
        )));
    }
    if (a + 2.0 * b + f - 1.0).abs() > TOL {
        return Err(Error::Domain(format!(
            "populations must satisfy a + 2b + f = 1, got {}",
            a + 2.0 * b + f
        )));
    }
    let (a, b, f) = (a.max(0.0), b.max(0.0), f.max(0.0));
    let conditional = |x: f64, y: f64| {
        let p = x + y;
        if p <= 0.0 {
            0.0
        } else {
            p * shannon_entropy([x / p, y / p])
        }
    };
    let s1 = conditional(a, b) + conditional(b, f);
    let xi = ((a - f).powi(2) + 4.0 * z.norm_sqr()).sqrt().min(1.0);
    let s2 = binary_entropy(0.5 * (1.0 - xi));
    Ok((s1, s2))
}
