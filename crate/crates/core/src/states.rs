//! Two-qubit states in the computational basis `|00>, |01>, |10>, |11>`
//! (qubit A is the left factor). Index 0 is the ground state and index 3
//! the doubly excited state.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    self, c, hermitian_eigensystem, EigenSystem, Mat2, Mat4, C64, EIGEN_FLOOR, HERMITIAN_TOL,
    TRACE_TOL,
};

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(Mat4);

impl DensityMatrix4 {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Mat4) -> Result<Self> {
        Self::check(&m)?;
        Ok(DensityMatrix4(m))
    }

    fn check(m: &Mat4) -> Result<EigenSystem<4>> {
        let herm = qmat::hermiticity_error(m);
        if !herm.is_finite() || herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let es = hermitian_eigensystem(m)?;
        if es.min_eigenvalue() < EIGEN_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:e}",
                es.min_eigenvalue()
            )));
        }
        Ok(es)
    }

    /// `|ψ><ψ|` for a (not necessarily normalized) state vector.
    pub fn from_pure(psi: Vector4<C64>) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain("state vector has zero norm".into()));
        }
        let v = psi.unscale(norm);
        Self::new(v * v.adjoint())
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(rho_a: &Mat2, rho_b: &Mat2) -> Result<Self> {
        Self::new(qmat::kron(rho_a, rho_b))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix4(Mat4::identity().scale(0.25))
    }

    /// `|00><00|`.
    pub fn ground() -> Self {
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(1.0, 0.0);
        DensityMatrix4(m)
    }

    /// `½|00><00| + ½|11><11|`.
    pub fn classical_mixture() -> Self {
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        DensityMatrix4(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    /// Zero-based element access.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0[(index, index)].re
    }

    pub fn eigensystem(&self) -> EigenSystem<4> {
        hermitian_eigensystem(&self.0).expect("validated density matrix is Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigensystem().min_eigenvalue()
    }

    /// `(U ρ U^dagger)` for a unitary `U`.
    pub fn conjugate_by(&self, u: &Mat4) -> Result<Self> {
        Self::new(qmat::hermitize(&(u * self.0 * u.adjoint())))
    }
}

/// Parameters of the X-shaped initial state family:
/// local Bloch components `a3`, `b3` along z, and correlations `h1 = h2 = eta`, `h3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XStateParams {
    pub a3: f64,
    pub b3: f64,
    pub eta: f64,
    pub h3: f64,
}

impl XStateParams {
    pub const fn new(a3: f64, b3: f64, eta: f64, h3: f64) -> Self {
        XStateParams { a3, b3, eta, h3 }
    }

    /// Product-state family `c₋ = 0, η = 0, h₃ = c₊²/4`.
    pub fn xi(c_plus: f64) -> Self {
        XStateParams::new(c_plus / 2.0, c_plus / 2.0, 0.0, c_plus * c_plus / 4.0)
    }

    pub fn c_plus(&self) -> f64 {
        self.a3 + self.b3
    }

    pub fn c_minus(&self) -> f64 {
        self.a3 - self.b3
    }

    /// `p = 1 + h₃ - c₊`, four times the initial doubly excited population.
    pub fn p(&self) -> f64 {
        1.0 + self.h3 - self.c_plus()
    }

    pub fn is_finite(&self) -> bool {
        [self.a3, self.b3, self.eta, self.h3]
            .iter()
            .all(|x| x.is_finite())
    }

    /// Reads the parameters back from an X-state density matrix.
    pub fn from_density(rho: &DensityMatrix4) -> Self {
        let d = |i| rho.population(i);
        XStateParams {
            a3: d(0) + d(1) - d(2) - d(3),
            b3: d(0) - d(1) + d(2) - d(3),
            eta: 2.0 * rho.get(1, 2).re,
            h3: d(0) - d(1) - d(2) + d(3),
        }
    }
}

/// Assembles the X matrix with populations `(a, b₊, b₋, f)` on the diagonal
/// and single-excitation coherence `z = ρ₂₃`.
pub(crate) fn x_matrix(a: f64, b_plus: f64, b_minus: f64, f: f64, z: C64) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = c(a, 0.0);
    m[(1, 1)] = c(b_plus, 0.0);
    m[(2, 2)] = c(b_minus, 0.0);
    m[(3, 3)] = c(f, 0.0);
    m[(1, 2)] = z;
    m[(2, 1)] = z.conj();
    m
}

/// The X-state for the given parameters.
pub fn x_state(p: &XStateParams) -> Result<DensityMatrix4> {
    if !p.is_finite() {
        return Err(Error::Domain("X-state parameters must be finite".into()));
    }
    let (cp, cm, h3) = (p.c_plus(), p.c_minus(), p.h3);
    let m = x_matrix(
        (1.0 + cp + h3) / 4.0,
        (1.0 + cm - h3) / 4.0,
        (1.0 - cm - h3) / 4.0,
        (1.0 - cp + h3) / 4.0,
        c(p.eta / 2.0, 0.0),
    );
    let es = hermitian_eigensystem(&m)?;
    if es.min_eigenvalue() < EIGEN_FLOOR {
        return Err(Error::InvalidXState(es.min_eigenvalue()));
    }
    DensityMatrix4::new(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PsiMinus,
        BellState::PhiPlus,
        BellState::PhiMinus,
    ];

    pub fn vector(self) -> Vector4<C64> {
        let s = FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        match self {
            BellState::PsiPlus => Vector4::new(z, c(s, 0.0), c(s, 0.0), z),
            BellState::PsiMinus => Vector4::new(z, c(s, 0.0), c(-s, 0.0), z),
            BellState::PhiPlus => Vector4::new(c(s, 0.0), z, z, c(s, 0.0)),
            BellState::PhiMinus => Vector4::new(c(s, 0.0), z, z, c(-s, 0.0)),
        }
    }
}

pub fn bell_state(which: BellState) -> DensityMatrix4 {
    let v = which.vector();
    DensityMatrix4(v * v.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    A,
    B,
}

/// Reduced state of the kept qubit.
pub fn partial_trace(rho: &DensityMatrix4, keep: Qubit) -> Mat2 {
    let m = rho.matrix();
    Mat2::from_fn(|i, k| match keep {
        Qubit::A => m[(2 * i, 2 * k)] + m[(2 * i + 1, 2 * k + 1)],
        Qubit::B => m[(i, k)] + m[(2 + i, 2 + k)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BellPopulations {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl BellPopulations {
    pub fn total(&self) -> f64 {
        self.psi_plus + self.psi_minus + self.phi_plus + self.phi_minus
    }

    pub fn get(&self, which: BellState) -> f64 {
        match which {
            BellState::PsiPlus => self.psi_plus,
            BellState::PsiMinus => self.psi_minus,
            BellState::PhiPlus => self.phi_plus,
            BellState::PhiMinus => self.phi_minus,
        }
    }
}

/// `<B|ρ|B>` for the four Bell states.
pub fn bell_populations(rho: &DensityMatrix4) -> BellPopulations {
    let pop = |b: BellState| {
        let v = b.vector();
        (v.adjoint() * rho.matrix() * v)[(0, 0)].re.clamp(0.0, 1.0)
    };
    BellPopulations {
        psi_plus: pop(BellState::PsiPlus),
        psi_minus: pop(BellState::PsiMinus),
        phi_plus: pop(BellState::PhiPlus),
        phi_minus: pop(BellState::PhiMinus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{max_abs_diff, von_neumann_entropy};

    fn assert_close(a: &Mat4, b: &Mat4, tol: f64) {
        let d = max_abs_diff(a, b);
        assert!(d < tol, "matrices differ by {d:e}");
    }

    #[test]
    fn x_state_examples() {
        let mm = x_state(&XStateParams::new(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_close(
            mm.matrix(),
            DensityMatrix4::maximally_mixed().matrix(),
            1e-15,
        );

        let ground = x_state(&XStateParams::new(1.0, 1.0, 0.0, 1.0)).unwrap();
        assert_close(ground.matrix(), DensityMatrix4::ground().matrix(), 1e-15);

        let psi = x_state(&XStateParams::new(0.0, 0.0, 1.0, -1.0)).unwrap();
        assert_close(psi.matrix(), bell_state(BellState::PsiPlus).matrix(), 1e-15);

        let rho_c = x_state(&XStateParams::new(0.0, 0.0, 0.0, 1.0)).unwrap();
        assert_close(
            rho_c.matrix(),
            DensityMatrix4::classical_mixture().matrix(),
            1e-15,
        );
    }

    #[test]
    fn x_state_outside_physical_region() {
        let err = x_state(&XStateParams::new(0.0, 0.0, 1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidXState(v) if v < 0.0));
    }

    #[test]
    fn bell_matrices() {
        let m = bell_state(BellState::PsiMinus);
        assert!((m.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!((m.get(2, 2).re - 0.5).abs() < 1e-15);
        assert!((m.get(1, 2).re + 0.5).abs() < 1e-15);
        assert!((m.get(2, 1).re + 0.5).abs() < 1e-15);
        assert!(m.get(0, 0).norm() + m.get(3, 3).norm() < 1e-15);

        let m = bell_state(BellState::PhiPlus);
        for (i, j) in [(0, 0), (3, 3), (0, 3), (3, 0)] {
            assert!((m.get(i, j).re - 0.5).abs() < 1e-15);
        }
        assert!(
            von_neumann_entropy(bell_state(BellState::PsiPlus).matrix())
                .unwrap()
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn partial_trace_examples() {
        let half = Mat2::identity().scale(0.5);
        for b in BellState::ALL {
            let ra = partial_trace(&bell_state(b), Qubit::A);
            assert!(max_abs_diff(&ra, &half) < 1e-15);
        }
        let rho_a = Mat2::new(c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0));
        let rho_b = Mat2::new(c(0.4, 0.0), c(0.0, 0.1), c(0.0, -0.1), c(0.6, 0.0));
        let prod = DensityMatrix4::product(&rho_a, &rho_b).unwrap();
        assert!(max_abs_diff(&partial_trace(&prod, Qubit::A), &rho_a) < 1e-15);
        assert!(max_abs_diff(&partial_trace(&prod, Qubit::B), &rho_b) < 1e-15);
        let rb = partial_trace(&DensityMatrix4::classical_mixture(), Qubit::B);
        assert!(max_abs_diff(&rb, &half) < 1e-15);
    }

    #[test]
    fn bell_population_examples() {
        let p = bell_populations(&DensityMatrix4::maximally_mixed());
        for b in BellState::ALL {
            assert!((p.get(b) - 0.25).abs() < 1e-15);
        }
        let p = bell_populations(&bell_state(BellState::PsiMinus));
        assert!((p.psi_minus - 1.0).abs() < 1e-15);
        assert!(p.psi_plus.abs() + p.phi_plus.abs() + p.phi_minus.abs() < 1e-15);
        // <Φ±|ρ_C|Φ±> = ½(ρ₁₁ + ρ₄₄) ± Re ρ₁₄ = ½
        let p = bell_populations(&DensityMatrix4::classical_mixture());
        assert!((p.phi_plus - 0.5).abs() < 1e-15);
        assert!((p.phi_minus - 0.5).abs() < 1e-15);
        assert!(p.psi_plus.abs() + p.psi_minus.abs() < 1e-15);
    }

    #[test]
    fn invalid_density_rejected() {
        let mut m = Mat4::identity().scale(0.25);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix4::new(m).is_err());
        assert!(DensityMatrix4::new(Mat4::identity()).is_err());
    }
}
