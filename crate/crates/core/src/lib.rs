//! ADAPT-QAOA and standard QAOA for weighted Max-Cut on exact statevectors,
//! plus nested-commutator approximations of the adiabatic gauge potential.
//!
//! Numerical code is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the common double-precision instantiations.

pub mod ansatz;
pub mod counterdiabatic;
pub mod error;
pub mod harness;
pub mod maxcut;
pub mod pauli;
pub mod resources;
pub mod scalar;
pub mod simplex;
pub mod state;

pub use error::{Error, Result};

pub type PauliSum64 = pauli::PauliSum<f64>;
pub type StateVector64 = state::StateVector<f64>;
pub type CostDiagonal64 = state::CostDiagonal<f64>;
pub type MixerOperator64 = ansatz::MixerOperator<f64>;
pub type MixerPool64 = ansatz::MixerPool<f64>;
pub type Ansatz64 = ansatz::Ansatz<f64>;
pub type InterpolationHamiltonian64 = counterdiabatic::InterpolationHamiltonian<f64>;
pub type GaugeSolution64 = counterdiabatic::GaugeSolution<f64>;

pub type StateVector32 = state::StateVector<f32>;
pub type CostDiagonal32 = state::CostDiagonal<f32>;
