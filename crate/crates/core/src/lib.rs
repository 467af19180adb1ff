//! Two qubits sent through two photon-hopping resonators that start in
//! coherent states.
//!
//! The dynamics conserves the total excitation, so states and the Hamiltonian
//! are stored per excitation sector and propagated exactly by diagonalizing
//! each block. On top of that sit Wootters concurrence, field entropy and the
//! postselection protocols that move an ebit from a qubit pair into the
//! fields and back.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix it to double precision.

// `!(x > 0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod hilbert;
pub mod model;
pub mod protocols;
pub mod scalar;

pub use dynamics::{
    build_propagator, build_propagator_for, evolve, prepare_initial, prepare_initial_on, qubit_populations,
    truncation_leakage, QubitState,
};
pub use entanglement::{concurrence, reduce_to_field1, reduce_to_qubits, von_neumann_entropy};
pub use error::{Error, Result};
pub use hilbert::{build_sectors, coherent_amplitudes, truncation_bound, BasisState, SectorBasis, TruncatedSpace};
pub use model::{build_sector_hamiltonian, effective_eg_concurrence, effective_model, DEFAULT_VALIDITY_FACTOR};
pub use protocols::{
    postselect_gg, project_coherent, reciprocation_forward, reciprocation_full, second_pair_evolution,
};
pub use scalar::Real;

pub use nalgebra::Complex;

/// Crate version, recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type SystemParams = model::SystemParams<f64>;
pub type SystemParams32 = model::SystemParams<f32>;
pub type EffectiveModel = model::EffectiveModel<f64>;
pub type Hamiltonian = model::Hamiltonian<f64>;
pub type SectorHamiltonian = model::SectorHamiltonian<f64>;
pub type CoherentTable = hilbert::CoherentTable<f64>;
pub type PureState = dynamics::PureState<f64>;
pub type PureState32 = dynamics::PureState<f32>;
pub type Propagator = dynamics::Propagator<f64>;
pub type Propagator32 = dynamics::Propagator<f32>;
pub type DensityMatrix = entanglement::DensityMatrix<f64>;
pub type FieldState = protocols::FieldState<f64>;
pub type ProtocolRecord = protocols::ProtocolRecord<f64>;
pub type Reciprocation = protocols::Reciprocation<f64>;
