//! Fixed-dimension complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on `N x N` complex matrices with `N` in practice 2 or 4.
//! The Hermitian eigensolver is a cyclic complex Jacobi iteration, which for
//! these sizes converges in a handful of sweeps and needs no pivoting.
//! All entropies are in bits.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix<const N: usize> = SMatrix<C64, N, N>;
pub type Mat2 = CMatrix<2>;
pub type Mat4 = CMatrix<4>;

/// Maximum tolerated `|M - M^dagger|` element for inputs declared Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[EIGEN_FLOOR, 0)` count as zero; anything lower is an error.
pub const EIGEN_FLOOR: f64 = -1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TARGET: f64 = 1e-14;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub mod pauli {
    //! Single-qubit operators in the basis `|0>, |1>` with `|0>` the ground state.
    use super::{c, Mat2};

    pub fn identity() -> Mat2 {
        Mat2::identity()
    }

    pub fn sigma_x() -> Mat2 {
        Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    pub fn sigma_y() -> Mat2 {
        Mat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
    }

    pub fn sigma_z() -> Mat2 {
        Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
    }

    /// Raising operator `|1><0|`.
    pub fn sigma_plus() -> Mat2 {
        Mat2::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    /// Lowering operator `|0><1|`.
    pub fn sigma_minus() -> Mat2 {
        Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
    }
}

/// Kronecker product `a ⊗ b` of two single-qubit operators.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// Largest element modulus of `a - b`.
pub fn max_abs_diff<const N: usize>(a: &CMatrix<N>, b: &CMatrix<N>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest element modulus of `m - m^dagger`.
pub fn hermiticity_error<const N: usize>(m: &CMatrix<N>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn hermitize<const N: usize>(m: &CMatrix<N>) -> CMatrix<N> {
    (m + m.adjoint()).scale(0.5)
}

pub fn real_trace<const N: usize>(m: &CMatrix<N>) -> f64 {
    m.trace().re
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<const N: usize> {
    /// Ascending.
    pub eigenvalues: SVector<f64, N>,
    /// Column `k` is the normalized eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix<N>,
}

impl<const N: usize> EigenSystem<N> {
    /// `V diag(f(λ)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix<N> {
        let v = &self.eigenvectors;
        let mut d = CMatrix::<N>::zeros();
        for k in 0..N {
            d[(k, k)] = c(f(self.eigenvalues[k]), 0.0);
        }
        v * d * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix<N> {
        self.map_spectrum(|x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[N - 1]
    }
}

fn off_diagonal_norm<const N: usize>(a: &CMatrix<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigensystem<const N: usize>(m: &CMatrix<N>) -> Result<EigenSystem<N>> {
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonHermitianInput(f64::NAN));
    }
    let herm_err = hermiticity_error(m);
    if !herm_err.is_finite() || herm_err > HERMITIAN_TOL {
        return Err(Error::NonHermitianInput(herm_err));
    }
    let mut a = hermitize(m);
    let mut v = CMatrix::<N>::identity();
    let scale = a.norm().max(1.0);
    let target = OFF_DIAGONAL_TARGET * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < target {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= target {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = SVector::<f64, N>::from_fn(|k, _| a[(order[k], order[k])].re);
    let eigenvectors = CMatrix::<N>::from_fn(|r, k| v[(r, order[k])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi step annihilating `a[p][q]`: a phase on column `q` makes the
/// pivot real, then a real plane rotation diagonalizes the `(p, q)` block.
fn rotate<const N: usize>(a: &mut CMatrix<N>, v: &mut CMatrix<N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let cs = 1.0 / t.hypot(1.0);
    let sn = t * cs;

    // U = diag(1, .., conj(phase) at q, ..) * R(c, s)
    let u_pp = c(cs, 0.0);
    let u_pq = c(sn, 0.0);
    let u_qp = phase.conj() * (-sn);
    let u_qq = phase.conj() * cs;

    for k in 0..N {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..N {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    for k in 0..N {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Hermitian PSD square root. Eigenvalues in `[EIGEN_FLOOR, 0)` are clamped to zero.
pub fn psd_sqrt<const N: usize>(m: &CMatrix<N>) -> Result<CMatrix<N>> {
    let es = hermitian_eigensystem(m)?;
    if es.min_eigenvalue() < EIGEN_FLOOR {
        return Err(Error::NotPositiveSemidefinite(es.min_eigenvalue()));
    }
    Ok(es.map_spectrum(|x| x.max(0.0).sqrt()))
}

/// `-Σ λ log2 λ` over a spectrum, with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .map(|p| if p > 0.0 { -p * p.log2() } else { 0.0 })
        .sum()
}

/// Binary entropy `ε(r) = -r log2 r - (1 - r) log2(1 - r)`.
pub fn binary_entropy(r: f64) -> f64 {
    shannon_entropy([r, 1.0 - r])
}

/// Checked spectrum of a density matrix: Hermitian, unit trace, no eigenvalue
/// below [`EIGEN_FLOOR`]. Tiny negative eigenvalues are returned as zero.
pub fn density_spectrum<const N: usize>(rho: &CMatrix<N>) -> Result<SVector<f64, N>> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace is {tr}, expected 1"
        )));
    }
    let es = hermitian_eigensystem(rho)?;
    if es.min_eigenvalue() < EIGEN_FLOOR {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {:e}",
            es.min_eigenvalue()
        )));
    }
    Ok(es.eigenvalues.map(|x| x.max(0.0)))
}

/// Von Neumann entropy `-Tr ρ log2 ρ` in bits.
pub fn von_neumann_entropy<const N: usize>(rho: &CMatrix<N>) -> Result<f64> {
    let spectrum = density_spectrum(rho)?;
    let s = shannon_entropy(spectrum.iter().copied());
    Ok(s.clamp(0.0, (N as f64).log2()))
}
