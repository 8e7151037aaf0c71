//! Closed-form trajectories of the undriven master equation for X-shaped
//! initial states. Every solution keeps the X structure: populations
//! `a = ρ₁₁`, `b₊ = ρ₂₂`, `b₋ = ρ₃₃`, `f = ρ₄₄` and coherence `z = ρ₂₃`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::c;
use crate::states::{x_matrix, DensityMatrix4, XStateParams};

const FAMILY_TOL: f64 = 1e-12;

/// Identical emitters without drive: X-state parameters plus `Γ`, `γ` and `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantSolutionParams {
    pub state: XStateParams,
    pub decay: f64,
    pub collective_decay: f64,
    pub coupling: f64,
}

impl ResonantSolutionParams {
    pub fn p(&self) -> f64 {
        self.state.p()
    }

    /// `γ₊² = Γ² + γ²`.
    pub fn gamma_plus_sq(&self) -> f64 {
        self.decay * self.decay + self.collective_decay * self.collective_decay
    }

    /// `γ₋² = Γ² - γ²`.
    pub fn gamma_minus_sq(&self) -> f64 {
        self.decay * self.decay - self.collective_decay * self.collective_decay
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "time must be finite and nonnegative, got {t}"
        )))
    }
}

fn check_c_minus_zero(p: &XStateParams) -> Result<()> {
    if p.c_minus().abs() > FAMILY_TOL {
        return Err(Error::FamilyViolation(format!(
            "requires c- = 0, got c- = {}",
            p.c_minus()
        )));
    }
    Ok(())
}

/// Builds the state, filling `a` from the trace condition.
fn assemble(b_plus: f64, b_minus: f64, f: f64, z: Complex64) -> Result<DensityMatrix4> {
    let a = 1.0 - b_plus - b_minus - f;
    DensityMatrix4::new(x_matrix(a, b_plus, b_minus, f, z))
}

/// Exact solution for identical emitters with collective decay `|γ| < Γ`.
pub fn resonant_solution(t: f64, p: &ResonantSolutionParams) -> Result<DensityMatrix4> {
    check_time(t)?;
    let (gamma, g) = (p.decay, p.collective_decay);
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::Domain("decay rate must be positive".into()));
    }
    if (gamma - g.abs()).abs() <= FAMILY_TOL * gamma {
        return Err(Error::DegenerateRates);
    }
    if g.abs() > gamma {
        return Err(Error::Domain(format!(
            "|gamma| = {} exceeds Gamma = {gamma}",
            g.abs()
        )));
    }
    let s = &p.state;
    let (cp, cm, eta, h3) = (s.c_plus(), s.c_minus(), s.eta, s.h3);
    let pp = s.p();
    let gp2 = p.gamma_plus_sq();
    let gm2 = p.gamma_minus_sq();

    // e^{-Γt} cosh(γt) and e^{-Γt} sinh(γt) from decaying exponentials only
    let slow = (-(gamma - g) * t).exp();
    let fast = (-(gamma + g) * t).exp();
    let ch = 0.5 * (slow + fast);
    let sh = 0.5 * (slow - fast);
    let x = (-gamma * t).exp();
    let pre = 1.0 / (4.0 * gm2);

    let k = cp * gp2 - 2.0 * (gamma * gamma + h3 * g * g);
    let (sin2v, cos2v) = (2.0 * p.coupling * t).sin_cos();
    let common = -pp * gp2 * x * x - k * ch - 2.0 * (pp * g * gamma + eta * gm2) * sh;
    let split = cm * gm2 * x * cos2v;
    let b_plus = pre * (common + split);
    let b_minus = pre * (common - split);
    let z = c(
        pre * (-2.0 * pp * g * gamma * x * x + 2.0 * (eta * gm2 + pp * g * gamma) * ch + k * sh),
        pre * cm * gm2 * x * sin2v,
    );
    let f = 0.25 * pp * x * x;
    assemble(b_plus, b_minus, f, z)
}

/// Solution for `γ = 0` and `c₋ = 0`, independent of `V`, in terms of `x = e^{-Γt}`.
pub fn gamma_zero_solution(t: f64, p: &XStateParams, decay: f64) -> Result<DensityMatrix4> {
    check_time(t)?;
    check_c_minus_zero(p)?;
    let x = (-decay * t).exp();
    let pp = p.p();
    let cp = p.c_plus();
    let f = 0.25 * pp * x * x;
    let b = 0.25 * x * (2.0 * (1.0 - 0.5 * cp) - pp * x);
    let z = c(0.5 * p.eta * x, 0.0);
    assemble(b, b, f, z)
}

/// Solution for detuned emitters (`δ = ω₁ - ω₂`) at a separation with `γ = 0`,
/// for `c₋ = 0` initial states. Requires `Υ² = 4V² + δ² > 0`.
pub fn detuned_solution(
    t: f64,
    p: &XStateParams,
    decay: f64,
    coupling: f64,
    molecular_detuning: f64,
) -> Result<DensityMatrix4> {
    check_time(t)?;
    check_c_minus_zero(p)?;
    let (v, delta) = (coupling, molecular_detuning);
    let upsilon_sq = 4.0 * v * v + delta * delta;
    if upsilon_sq.is_nan() || upsilon_sq <= 0.0 {
        return Err(Error::DegenerateCase("4V^2 + delta^2 = 0".into()));
    }
    let upsilon = upsilon_sq.sqrt();
    let x = (-decay * t).exp();
    let g = x / (4.0 * upsilon_sq);
    let (sin_u, cos_u) = (upsilon * t).sin_cos();
    let eta = p.eta;

    let z = c(
        2.0 * eta * g * (4.0 * v * v + delta * delta * cos_u),
        2.0 * eta * g * delta * upsilon * sin_u,
    );
    let base = ((2.0 - p.c_plus()) - p.p() * x) * upsilon_sq;
    let swing = 4.0 * eta * (cos_u - 1.0) * delta * v;
    let f = 0.25 * p.p() * x * x;
    assemble(g * (base + swing), g * (base - swing), f, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::mutual_information;
    use crate::qmat::max_abs_diff;
    use crate::states::x_state;

    fn params(state: XStateParams, g: f64, v: f64) -> ResonantSolutionParams {
        ResonantSolutionParams {
            state,
            decay: 1.0,
            collective_decay: g,
            coupling: v,
        }
    }

    #[test]
    fn initial_conditions() {
        let states = [
            XStateParams::new(0.0, 0.0, 0.0, 0.0),
            XStateParams::new(0.2, 0.1, 0.3, -0.2),
            XStateParams::new(0.0, 0.0, 0.0, 1.0),
            XStateParams::new(0.1, 0.1, 0.4, -0.5),
        ];
        for s in states {
            let x0 = x_state(&s).unwrap();
            let r = resonant_solution(0.0, &params(s, 0.8209, 0.3)).unwrap();
            assert!(max_abs_diff(r.matrix(), x0.matrix()) < 1e-15);
            if s.c_minus() == 0.0 {
                let g0 = gamma_zero_solution(0.0, &s, 1.0).unwrap();
                assert!(max_abs_diff(g0.matrix(), x0.matrix()) < 1e-15);
                let d = detuned_solution(0.0, &s, 1.0, 0.4, 0.7).unwrap();
                assert!(max_abs_diff(d.matrix(), x0.matrix()) < 1e-15);
            }
        }
    }

    #[test]
    fn long_time_limit_is_ground_state() {
        let s = XStateParams::new(0.2, 0.1, 0.3, -0.2);
        for g in [0.0, 0.2, -0.3] {
            let r = resonant_solution(50.0, &params(s, g, 0.4)).unwrap();
            let tol = 10.0 * (-(1.0 - g.abs()) * 50.0f64).exp();
            assert!((r.population(0) - 1.0).abs() < tol.max(1e-15));
        }
        let r = resonant_solution(50.0, &params(s, 0.0, 0.4)).unwrap();
        assert!(max_abs_diff(r.matrix(), DensityMatrix4::ground().matrix()) < 1e-15);
    }

    #[test]
    fn mm_gamma_zero_values() {
        // f = e^{-2}/4, b = (e^{-1}/4)(2 - e^{-1})
        let r = gamma_zero_solution(1.0, &XStateParams::new(0.0, 0.0, 0.0, 0.0), 1.0).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((r.population(3) - e1 * e1 / 4.0).abs() < 1e-16);
        assert!((r.population(1) - e1 / 4.0 * (2.0 - e1)).abs() < 1e-16);
        assert!((r.population(2) - e1 / 4.0 * (2.0 - e1)).abs() < 1e-16);
    }

    #[test]
    fn gamma_zero_agrees_with_resonant_limit() {
        let s = XStateParams::new(0.15, 0.15, -0.35, 0.05);
        for t in [0.3, 1.0, 4.0, 9.0] {
            let a = gamma_zero_solution(t, &s, 1.0).unwrap();
            let b = resonant_solution(t, &params(s, 0.0, 0.37)).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
        }
    }

    #[test]
    fn detuned_reduces_to_resonant_at_zero_detuning() {
        let s = XStateParams::new(-0.1, -0.1, 0.4, -0.3);
        for t in [0.2, 1.5, 6.0] {
            let a = detuned_solution(t, &s, 1.0, 0.42, 0.0).unwrap();
            let b = gamma_zero_solution(t, &s, 1.0).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
        }
    }

    #[test]
    fn xi_family_stays_uncorrelated() {
        for k in 0..=10 {
            let cp = -1.0 + 0.2 * k as f64;
            let s = XStateParams::xi(cp);
            for t in [0.0, 0.5, 2.0, 7.0] {
                let a = gamma_zero_solution(t, &s, 1.0).unwrap();
                assert!(mutual_information(&a).unwrap().abs() < 1e-8);
                let d = detuned_solution(t, &s, 1.0, -0.42, 1.3).unwrap();
                assert!(mutual_information(&d).unwrap().abs() < 1e-8);
            }
        }
    }

    #[test]
    fn resonant_v_independent_when_c_minus_zero() {
        let s = XStateParams::new(0.1, 0.1, 0.3, -0.4);
        for t in [0.5, 2.0, 8.0] {
            let a = resonant_solution(t, &params(s, 0.6, 0.0)).unwrap();
            let b = resonant_solution(t, &params(s, 0.6, 0.4)).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let s = XStateParams::new(0.2, 0.1, 0.0, 0.0);
        assert!(matches!(
            resonant_solution(1.0, &params(s, 1.0, 0.0)),
            Err(Error::DegenerateRates)
        ));
        assert!(matches!(
            gamma_zero_solution(1.0, &s, 1.0),
            Err(Error::FamilyViolation(_))
        ));
        assert!(matches!(
            detuned_solution(1.0, &s, 1.0, 0.3, 0.2),
            Err(Error::FamilyViolation(_))
        ));
        let ok = XStateParams::new(0.1, 0.1, 0.0, 0.0);
        assert!(matches!(
            detuned_solution(1.0, &ok, 1.0, 0.0, 0.0),
            Err(Error::DegenerateCase(_))
        ));
        assert!(resonant_solution(-1.0, &params(ok, 0.5, 0.0)).is_err());
    }
}
