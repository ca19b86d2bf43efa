//! Quantum models, ground states, and the map from states to point clouds
//! of observable expectation values.

mod cloud;
mod density;
mod hermitian;
mod ssh;
mod state;
mod unitary;

pub use cloud::{build_cloud, ground_states, phi_map, DegeneracyPolicy, ObservableSet, StateCloud};
pub use density::{bures_distance, fidelity, trace_distance, DensityMatrix};
pub use hermitian::{operator_norm, HermitianMatrix, HERMITICITY_TOL};
pub use ssh::{bond_amplitude, build_ssh_hamiltonian, ssh_observables, Model};
pub use state::{expectation, ground_state, GroundSpace, QuantumState, DEFAULT_GAP_TOL};
pub use unitary::{random_phase_unitary, random_unitary, unitarity_defect};


