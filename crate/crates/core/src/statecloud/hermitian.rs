use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigh;

/// Entries may deviate from exact Hermiticity by this much (relative to the
/// largest entry magnitude, floored at 1).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense complex Hermitian operator on a finite Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let dev = hermiticity_defect(&entries);
        if dev > HERMITICITY_TOL {
            return Err(Error::Domain(format!("matrix is not Hermitian (defect {dev:e})")));
        }
        Ok(Self { entries })
    }

    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_real(DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 }))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigh(&self.entries).0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { entries: self.entries.map(|z| z * factor) }
    }

    /// `U A U†`. The result is re-symmetrized to absorb rounding.
    pub fn conjugated_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Shape(format!(
                "unitary is {}x{}, operator dim {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        let m = u * &self.entries * u.adjoint();
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { entries: sym })
    }
}

pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let scale = m.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst / scale
}

/// Largest absolute eigenvalue.
pub fn operator_norm(op: &HermitianMatrix) -> f64 {
    op.eigenvalues().iter().fold(0.0f64, |a, x| a.max(x.abs()))
}
