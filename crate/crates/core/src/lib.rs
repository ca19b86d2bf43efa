//! Persistent homology of parameterized quantum ground states.
//!
//! Ground states of a Hamiltonian family are mapped to points of observable
//! expectation values ([`statecloud`]). Those clouds are filtered by the
//! Vietoris-Rips construction ([`simplicial`]), reduced to barcodes
//! ([`persistence`]), and probed spectrally through the persistent Laplacian
//! and Dirac operators ([`dirac`]). [`phase`] runs parameter sweeps and
//! reports where persistent Betti numbers jump.

pub mod dirac;
pub mod error;
mod gf2;
pub mod linalg;
pub mod persistence;
pub mod phase;
pub mod simplicial;
pub mod statecloud;

pub use error::{Error, Result};
