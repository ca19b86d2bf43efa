//! Distances between density matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermitian::hermiticity_defect;
use super::state::QuantumState;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigh;

const DENSITY_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(DMatrix<Complex64>);

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Domain(format!("density matrix must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        if hermiticity_defect(&m) > DENSITY_TOL {
            return Err(Error::Domain("density matrix is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::Domain(format!("density matrix trace is {tr}, expected 1")));
        }
        let (ev, _) = hermitian_eigh(&m);
        if ev[0] < -DENSITY_TOL {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {:e}", ev[0])));
        }
        Ok(Self(m))
    }

    /// `|psi><psi|`.
    pub fn pure(state: &QuantumState) -> Self {
        let psi = state.amplitudes();
        Self(psi * psi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!("density matrices of dims {} and {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `1/2 Tr|rho1 - rho2|`.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    same_dim(rho1, rho2)?;
    let diff = rho1.matrix() - rho2.matrix();
    let (ev, _) = hermitian_eigh(&diff);
    let d = 0.5 * ev.iter().map(|x| x.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ev, vecs) = hermitian_eigh(m);
    let n = m.nrows();
    let d = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(ev[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &vecs * d * vecs.adjoint()
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2`.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    same_dim(rho1, rho2)?;
    let s = psd_sqrt(rho1.matrix());
    let inner = &s * rho2.matrix() * &s;
    let inner = (&inner + inner.adjoint()) * Complex64::new(0.5, 0.0);
    let (ev, _) = hermitian_eigh(&inner);
    let root_sum: f64 = ev.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// `sqrt(2 - 2 sqrt(F))`.
pub fn bures_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let f = fidelity(rho1, rho2)?;
    Ok((2.0 - 2.0 * f.sqrt()).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure(v: &[f64]) -> DensityMatrix {
        DensityMatrix::pure(&QuantumState::from_real(v).unwrap())
    }

    #[test]
    fn trace_distance_examples() {
        let a = pure(&[1.0, 0.0]);
        let b = pure(&[0.0, 1.0]);
        let c = pure(&[1.0, 1.0]);
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        // |<a|c>|^2 = 1/2
        assert!((trace_distance(&a, &c).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bures_examples() {
        let a = pure(&[1.0, 0.0]);
        let b = pure(&[0.0, 1.0]);
        assert!(bures_distance(&a, &a).unwrap().abs() < 1e-7);
        assert!((bures_distance(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        // overlap 1/2, F = 1/4
        let c = pure(&[0.5, 0.75f64.sqrt()]);
        assert!((fidelity(&a, &c).unwrap() - 0.25).abs() < 1e-12);
        assert!((bures_distance(&a, &c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_density() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]).map(|x| Complex64::new(x, 0.0));
        assert!(matches!(DensityMatrix::new(m), Err(Error::Domain(_))));
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.4]).map(|x| Complex64::new(x, 0.0));
        assert!(matches!(DensityMatrix::new(m), Err(Error::Domain(_))));
        let mixed = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]).map(|x| Complex64::new(x, 0.0));
        let mixed = DensityMatrix::new(mixed).unwrap();
        assert!((trace_distance(&mixed, &pure(&[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-14);
        assert!(matches!(trace_distance(&mixed, &pure(&[1.0, 0.0, 0.0])), Err(Error::Shape(_))));
    }
}
