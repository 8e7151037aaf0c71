//! Simulation of two quantum emitters coupled through a dissipative plasmonic
//! waveguide: master-equation dynamics of the two-qubit density matrix,
//! closed-form trajectories, and classical/quantum correlation measures.
//!
//! Units: the individual decay rate `Γ` is the rate unit, times are in `1/Γ`,
//! and every energy or rate (`V`, `γ`, `ℓ`, `Δ`, `δ`) is in units of `Γ`.
//! Entropies are in bits.

pub mod acceptance;
pub mod analytic;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod qmat;
pub mod sampling;
pub mod scenarios;
pub mod states;

pub use error::{Error, Result};
