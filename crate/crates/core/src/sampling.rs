//! Seeded random states and unitaries for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmat::{c, kron, Mat2, Mat4, C64};
use crate::states::{x_state, DensityMatrix4, XStateParams};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Mixed state `G G† / tr(G G†)` from a 4×k Ginibre matrix, k uniform in 1..=4.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let rank = rng.random_range(1..=4);
    let mut g = Mat4::zeros();
    for col in 0..rank {
        for row in 0..4 {
            g[(row, col)] = gaussian_c64(rng);
        }
    }
    let m = g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix4::new(m / c(tr, 0.0)).expect("Ginibre states are valid")
}

/// Haar-random pure two-qubit state.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let mut psi = nalgebra::Vector4::from_fn(|_, _| gaussian_c64(rng));
    psi /= c(psi.norm(), 0.0);
    DensityMatrix4::from_pure(psi).expect("normalized vector")
}

/// Haar-random single-qubit unitary (uniform SU(2) element times a global phase).
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, cc, d] = q.map(|x| x / n);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    Mat2::new(c(a, b), c(cc, d), c(-cc, d), c(a, -b)) * phase
}

/// Random local unitary `U_A ⊗ U_B`.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let ua = random_unitary2(rng);
    let ub = random_unitary2(rng);
    kron(&ua, &ub)
}

/// Physical X-state parameters by rejection sampling; `c₋ = 0` when requested.
pub fn random_x_params<R: Rng + ?Sized>(rng: &mut R, c_minus_zero: bool) -> XStateParams {
    loop {
        let a3 = rng.random_range(-1.0..1.0);
        let b3 = if c_minus_zero {
            a3
        } else {
            rng.random_range(-1.0..1.0)
        };
        let p = XStateParams::new(
            a3,
            b3,
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if x_state(&p).is_ok() {
            return p;
        }
    }
}
