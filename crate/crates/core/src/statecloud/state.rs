use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::hermitian::HermitianMatrix;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigh;

pub const DEFAULT_GAP_TOL: f64 = 1e-9;

/// Components below this magnitude are skipped when fixing the phase.
const GAUGE_THRESHOLD: f64 = 1e-10;

/// Imaginary residue allowed in `<psi|O|psi>` before it is rejected.
const EXPECTATION_IMAG_TOL: f64 = 1e-12;

/// A normalized pure state with a fixed global phase: the first component
/// whose magnitude exceeds 1e-10 is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: DVector<Complex64>,
    energy: Option<f64>,
}

impl QuantumState {
    /// Normalizes and gauge-fixes `amplitudes`.
    pub fn from_amplitudes(amplitudes: DVector<Complex64>) -> Result<Self> {
        Self::build(amplitudes, None)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v, energy: None }
    }

    fn build(amplitudes: DVector<Complex64>, energy: Option<f64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("state has no components".into()));
        }
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain(format!("cannot normalize state with norm {norm}")));
        }
        Ok(Self { amplitudes: gauge_fixed(amplitudes / Complex64::new(norm, 0.0)), energy })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Ground-state eigenvalue when the state came from a Hamiltonian.
    pub fn energy(&self) -> Option<f64> {
        self.energy
    }

    /// `U |psi>`, gauge-fixed. `U` is taken to be unitary, so the norm is
    /// left alone.
    pub fn transformed(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.ncols() != self.dim() || u.nrows() != self.dim() {
            return Err(Error::Shape(format!(
                "unitary is {}x{}, state dim {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        Ok(Self { amplitudes: gauge_fixed(u * &self.amplitudes), energy: self.energy })
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &QuantumState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("state dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes).norm())
    }
}

fn gauge_fixed(mut v: DVector<Complex64>) -> DVector<Complex64> {
    if let Some(first) = v.iter().find(|z| z.norm() > GAUGE_THRESHOLD).copied() {
        let phase = first.conj() / first.norm();
        v *= phase;
        // Pin the reference component to an exactly real value.
        if let Some(z) = v.iter_mut().find(|z| z.norm() > GAUGE_THRESHOLD) {
            *z = Complex64::new(z.norm(), 0.0);
        }
    }
    v
}

/// Lowest eigenspace of a Hamiltonian: all eigenvectors whose eigenvalue is
/// within the gap tolerance of the minimum.
#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    /// Gap to the first eigenvalue outside the ground space (infinite for 1x1).
    pub gap: f64,
    /// Smallest spacing between the two lowest eigenvalues.
    pub lowest_spacing: f64,
    pub tol: f64,
    basis: DMatrix<Complex64>,
}

impl GroundSpace {
    pub fn of(h: &HermitianMatrix, gap_tol: f64) -> Self {
        let (values, vectors) = hermitian_eigh(h.entries());
        let e0 = values[0];
        let degeneracy = values.iter().take_while(|&&e| e - e0 < gap_tol).count();
        let lowest_spacing = values.get(1).map_or(f64::INFINITY, |e1| e1 - e0);
        let gap = values.get(degeneracy).map_or(f64::INFINITY, |e| e - e0);
        Self {
            energy: e0,
            gap,
            lowest_spacing,
            tol: gap_tol,
            basis: vectors.columns(0, degeneracy).into_owned(),
        }
    }

    pub fn degeneracy(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy() > 1
    }

    /// The unique ground state, or a degeneracy error.
    pub fn state(&self) -> Result<QuantumState> {
        if self.is_degenerate() {
            return Err(Error::DegenerateGroundState {
                lambda: None,
                gap: self.lowest_spacing,
                tol: self.tol,
            });
        }
        QuantumState::build(self.basis.column(0).into_owned(), Some(self.energy))
    }

    /// Orthogonal projection of `reference` into the ground space, or `None`
    /// when the projection (nearly) vanishes.
    pub fn project(&self, reference: &QuantumState) -> Option<QuantumState> {
        if reference.dim() != self.basis.nrows() {
            return None;
        }
        let coeffs = self.basis.adjoint() * reference.amplitudes();
        if coeffs.norm() < 1e-6 {
            return None;
        }
        QuantumState::build(&self.basis * coeffs, Some(self.energy)).ok()
    }
}

/// Eigenvector of the smallest eigenvalue, normalized and gauge-fixed.
pub fn ground_state(h: &HermitianMatrix, gap_tol: f64) -> Result<QuantumState> {
    GroundSpace::of(h, gap_tol).state()
}

/// `<psi|O|psi>`; the imaginary residue is checked and discarded.
pub fn expectation(state: &QuantumState, op: &HermitianMatrix) -> Result<f64> {
    if state.dim() != op.dim() {
        return Err(Error::Shape(format!("state dim {} vs operator dim {}", state.dim(), op.dim())));
    }
    let psi = state.amplitudes();
    let z = psi.dotc(&(op.entries() * psi));
    let scale = op.entries().iter().fold(1.0f64, |a, w| a.max(w.norm()));
    if z.im.abs() > EXPECTATION_IMAG_TOL * scale {
        return Err(Error::Domain(format!("expectation value has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}
