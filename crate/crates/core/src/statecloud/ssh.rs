//! Single-particle SSH chain with open boundaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cloud::ObservableSet;
use super::hermitian::HermitianMatrix;
use crate::error::{Error, Result};

/// Hopping on bond `(i, i+1)`, bonds counted from 1: `v + (-1)^i * lambda * w`.
pub fn bond_amplitude(bond: usize, lambda: f64, v: f64, w: f64) -> f64 {
    let sign = if bond.is_multiple_of(2) { 1.0 } else { -1.0 };
    v + sign * lambda * w
}

pub fn build_ssh_hamiltonian(lambda: f64, v: f64, w: f64, n_sites: usize) -> Result<HermitianMatrix> {
    if n_sites < 2 {
        return Err(Error::InvalidModel(format!("SSH chain needs at least 2 sites, got {n_sites}")));
    }
    let mut h = DMatrix::<f64>::zeros(n_sites, n_sites);
    for bond in 1..n_sites {
        let t = bond_amplitude(bond, lambda, v, w);
        h[(bond - 1, bond)] = t;
        h[(bond, bond - 1)] = t;
    }
    HermitianMatrix::from_real(h)
}

/// Densities `c_i^† c_i` for every site, then for each bond the real part
/// `c_i^† c_j + h.c.` followed by the imaginary part `i(c_i^† c_j - h.c.)`.
pub fn ssh_observables(n_sites: usize) -> Result<ObservableSet> {
    if n_sites < 2 {
        return Err(Error::InvalidModel(format!("SSH chain needs at least 2 sites, got {n_sites}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut ops = Vec::with_capacity(3 * n_sites - 2);
    let mut labels = Vec::with_capacity(3 * n_sites - 2);
    for site in 0..n_sites {
        let mut m = DMatrix::from_element(n_sites, n_sites, zero);
        m[(site, site)] = Complex64::new(1.0, 0.0);
        ops.push(HermitianMatrix::new(m)?);
        labels.push(format!("n_{}", site + 1));
    }
    for i in 0..n_sites - 1 {
        let j = i + 1;
        let mut re = DMatrix::from_element(n_sites, n_sites, zero);
        re[(i, j)] = Complex64::new(1.0, 0.0);
        re[(j, i)] = Complex64::new(1.0, 0.0);
        ops.push(HermitianMatrix::new(re)?);
        labels.push(format!("re_{}_{}", i + 1, j + 1));

        let mut im = DMatrix::from_element(n_sites, n_sites, zero);
        im[(i, j)] = Complex64::new(0.0, 1.0);
        im[(j, i)] = Complex64::new(0.0, -1.0);
        ops.push(HermitianMatrix::new(im)?);
        labels.push(format!("im_{}_{}", i + 1, j + 1));
    }
    ObservableSet::new(ops, labels)
}

/// A parameterized Hamiltonian family `H(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Ssh { v: f64, w: f64, n_sites: usize },
}

impl Model {
    pub fn ssh(n_sites: usize) -> Self {
        Model::Ssh { v: 1.0, w: 1.0, n_sites }
    }

    pub fn hamiltonian(&self, lambda: f64) -> Result<HermitianMatrix> {
        match *self {
            Model::Ssh { v, w, n_sites } => build_ssh_hamiltonian(lambda, v, w, n_sites),
        }
    }

    pub fn observables(&self) -> Result<ObservableSet> {
        match *self {
            Model::Ssh { n_sites, .. } => ssh_observables(n_sites),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Model::Ssh { v, w, n_sites } => {
                if n_sites < 2 {
                    return Err(Error::InvalidModel(format!("SSH chain needs at least 2 sites, got {n_sites}")));
                }
                if !v.is_finite() || !w.is_finite() {
                    return Err(Error::InvalidModel("hopping parameters must be finite".into()));
                }
                Ok(())
            }
        }
    }
}
