//! Persistent Laplacian and persistent Dirac operators over real
//! coefficients.
//!
//! For scales `eps <= eps'`, the up-going part of the persistent Laplacian
//! uses the boundary map restricted to `(k+1)`-chains of `K_eps'` whose
//! boundary lies in `K_eps`. The restriction is realized as the null space of
//! the rows of `∂_{k+1}^{eps'}` indexed by `k`-simplices of `K_eps' \ K_eps`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, null_space, require_square, symmetric_eigenvalues};
use crate::simplicial::{FilteredComplex, Field};

/// Relative singular-value cutoff for the restricted domain.
pub const NULL_SPACE_TOL: f64 = 1e-10;
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-10;

fn check_scales(eps: f64, eps_prime: f64) -> Result<()> {
    if eps.is_nan() || eps_prime.is_nan() || eps > eps_prime {
        return Err(Error::Domain(format!("scales must satisfy eps <= eps', got {eps} > {eps_prime}")));
    }
    Ok(())
}

/// `∂_{k+1}^{eps,eps'}`: the restricted boundary in an orthonormal basis of
/// its domain.
#[derive(Debug, Clone)]
pub struct PersistentBoundary {
    pub k: usize,
    pub eps: f64,
    pub eps_prime: f64,
    /// `n_k(eps) x dim(domain)`.
    pub matrix: DMatrix<f64>,
    /// `n_{k+1}(eps') x dim(domain)`, orthonormal columns.
    pub domain_basis: DMatrix<f64>,
    /// Rows of `∂_{k+1}^{eps'}` on `k`-simplices absent at `eps`.
    outside_rows: DMatrix<f64>,
}

impl PersistentBoundary {
    pub fn domain_dim(&self) -> usize {
        self.domain_basis.ncols()
    }

    /// Largest entry of the boundary of a basis chain on `K_eps' \ K_eps`.
    pub fn leakage(&self) -> f64 {
        if self.outside_rows.nrows() == 0 || self.domain_dim() == 0 {
            return 0.0;
        }
        (&self.outside_rows * &self.domain_basis).amax()
    }
}

pub fn restricted_boundary(
    complex: &FilteredComplex,
    k_plus_1: usize,
    eps: f64,
    eps_prime: f64,
) -> Result<PersistentBoundary> {
    check_scales(eps, eps_prime)?;
    if k_plus_1 == 0 {
        return Err(Error::Domain("restricted boundary needs k+1 >= 1".into()));
    }
    let k = k_plus_1 - 1;
    let rows_inside = complex.count_at(k, eps);
    let rows_all = complex.count_at(k, eps_prime);
    let cols = complex.count_at(k_plus_1, eps_prime);

    if k_plus_1 > complex.max_dim() || cols == 0 {
        return Ok(PersistentBoundary {
            k,
            eps,
            eps_prime,
            matrix: DMatrix::zeros(rows_inside, 0),
            domain_basis: DMatrix::zeros(cols, 0),
            outside_rows: DMatrix::zeros(rows_all - rows_inside, cols),
        });
    }
    let full = complex.boundary_matrix(k_plus_1, Field::Real)?.dense_prefix(rows_all, cols);
    let inside = full.rows(0, rows_inside).into_owned();
    let outside = full.rows(rows_inside, rows_all - rows_inside).into_owned();
    let domain_basis = null_space(&outside, NULL_SPACE_TOL);
    let matrix = &inside * &domain_basis;
    Ok(PersistentBoundary { k, eps, eps_prime, matrix, domain_basis, outside_rows: outside })
}

/// `∂_k^eps` as a dense `n_{k-1}(eps) x n_k(eps)` matrix (empty for `k = 0`).
pub fn boundary_at_scale(complex: &FilteredComplex, k: usize, eps: f64) -> Result<DMatrix<f64>> {
    let cols = complex.count_at(k, eps);
    if k == 0 {
        return Ok(DMatrix::zeros(0, cols));
    }
    let rows = complex.count_at(k - 1, eps);
    if k > complex.max_dim() {
        return Ok(DMatrix::zeros(rows, 0));
    }
    Ok(complex.boundary_matrix(k, Field::Real)?.dense_prefix(rows, cols))
}

/// `L_k^{eps,eps'} = ∂_k^T ∂_k + ∂_{k+1}^{eps,eps'} (∂_{k+1}^{eps,eps'})^T`,
/// of size `n_k(eps)`.
pub fn persistent_laplacian(complex: &FilteredComplex, k: usize, eps: f64, eps_prime: f64) -> Result<DMatrix<f64>> {
    check_scales(eps, eps_prime)?;
    let down = boundary_at_scale(complex, k, eps)?;
    let up = restricted_boundary(complex, k + 1, eps, eps_prime)?.matrix;
    Ok(down.transpose() * &down + &up * up.transpose())
}

/// Block operator on `C_{k-1}(K_eps) ⊕ C_k(K_eps) ⊕ D`, where `D` is the
/// restricted domain of `∂_{k+1}^{eps,eps'}`:
///
/// ```text
/// [ -xi      ∂_k      0     ]
/// [ ∂_k^T    +xi      ∂'    ]
/// [ 0        ∂'^T     -xi   ]
/// ```
#[derive(Debug, Clone)]
pub struct DiracOperator {
    pub k: usize,
    pub eps: f64,
    pub eps_prime: f64,
    pub xi: f64,
    pub matrix: DMatrix<f64>,
    pub block_dims: (usize, usize, usize),
}

impl DiracOperator {
    fn offsets(&self) -> (usize, usize, usize) {
        let (a, b, c) = self.block_dims;
        (a, b, c)
    }

    /// Middle diagonal block of `B^2`.
    pub fn squared_middle_block(&self) -> DMatrix<f64> {
        let (a, b, _) = self.offsets();
        let sq = &self.matrix * &self.matrix;
        sq.view((a, a), (b, b)).into_owned()
    }

    /// Upper-right block of `B^2` (maps the restricted domain into
    /// `C_{k-1}`); equals `∂_k ∂'` when `xi = 0`.
    pub fn squared_corner_block(&self) -> DMatrix<f64> {
        let (a, b, c) = self.offsets();
        let sq = &self.matrix * &self.matrix;
        sq.view((0, a + b), (a, c)).into_owned()
    }

    pub fn spectrum(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.matrix)
    }
}

pub fn dirac_operator(complex: &FilteredComplex, k: usize, eps: f64, eps_prime: f64, xi: f64) -> Result<DiracOperator> {
    check_scales(eps, eps_prime)?;
    let down = boundary_at_scale(complex, k, eps)?;
    let up = restricted_boundary(complex, k + 1, eps, eps_prime)?.matrix;
    let (a, b, c) = (down.nrows(), down.ncols(), up.ncols());
    let n = a + b + c;
    let mut m = DMatrix::zeros(n, n);
    m.view_mut((0, a), (a, b)).copy_from(&down);
    m.view_mut((a, 0), (b, a)).copy_from(&down.transpose());
    m.view_mut((a, a + b), (b, c)).copy_from(&up);
    m.view_mut((a + b, a), (c, b)).copy_from(&up.transpose());
    for i in 0..n {
        let sign = if (a..a + b).contains(&i) { 1.0 } else { -1.0 };
        m[(i, i)] = sign * xi;
    }
    Ok(DiracOperator { k, eps, eps_prime, xi, matrix: m, block_dims: (a, b, c) })
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn spectrum(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    require_square(matrix)?;
    let defect = asymmetry(matrix);
    if defect > SYMMETRY_TOL {
        return Err(Error::Domain(format!("matrix is not symmetric (defect {defect:e})")));
    }
    Ok(symmetric_eigenvalues(matrix))
}

/// Kernel dimension: eigenvalues below `rank_tol * max(1, largest)`.
pub fn betti_from_laplacian(laplacian: &DMatrix<f64>, rank_tol: f64) -> Result<usize> {
    let ev = spectrum(laplacian)?;
    let top = ev.last().copied().unwrap_or(0.0).max(1.0);
    Ok(ev.iter().filter(|&&x| x < rank_tol * top).count())
}

/// Phase-estimation outcome distribution `P(p) = (1/N) Σ g_λ(p)` with
/// `g_λ(p) = sin²(π l λ) / (M² sin²(π (l λ - p) / M))`, and the removable
/// singularity at `l λ ≡ p (mod M)` set to its limit 1.
pub fn qpe_distribution(eigenvalues: &[f64], l: u64, m: u64, p: u64) -> Result<f64> {
    if m == 0 || p >= m {
        return Err(Error::Domain(format!("need M >= 1 and 0 <= p < M, got M = {m}, p = {p}")));
    }
    if eigenvalues.is_empty() {
        return Err(Error::Domain("no eigenvalues".into()));
    }
    let mf = m as f64;
    let g = |lambda: f64| {
        let x = l as f64 * lambda;
        let t = (x - p as f64) / mf;
        if (t - t.round()).abs() < 1e-12 {
            return 1.0;
        }
        let num = (std::f64::consts::PI * x).sin().powi(2);
        let den = (std::f64::consts::PI * t).sin().powi(2);
        num / (mf * mf * den)
    };
    Ok(eigenvalues.iter().map(|&e| g(e)).sum::<f64>() / eigenvalues.len() as f64)
}

/// JSON dump of a Dirac spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDump {
    pub k: usize,
    pub eps: f64,
    pub eps_prime: f64,
    pub xi: f64,
    pub eigenvalues: Vec<f64>,
}

impl From<&DiracOperator> for SpectrumDump {
    fn from(op: &DiracOperator) -> Self {
        Self { k: op.k, eps: op.eps, eps_prime: op.eps_prime, xi: op.xi, eigenvalues: op.spectrum() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::vr_filtration;

    fn square() -> FilteredComplex {
        vr_filtration(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], 1.0, 2).unwrap()
    }

    #[test]
    fn equal_scales_keep_full_domain() {
        let c = square();
        let pb = restricted_boundary(&c, 2, 1.0, 1.0).unwrap();
        assert_eq!(pb.domain_dim(), 4);
        let plain = c.boundary_matrix(2, Field::Real).unwrap().to_dense();
        let mut s1: Vec<f64> = plain.singular_values().iter().copied().collect();
        let mut s2: Vec<f64> = pb.matrix.singular_values().iter().copied().collect();
        s1.sort_by(f64::total_cmp);
        s2.sort_by(f64::total_cmp);
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn square_restriction_keeps_diagonal_free_chains() {
        let c = square();
        // The diagonals are absent at 0.6, but [012] + [023] has the square
        // as boundary and the four triangles' total boundary is zero, so
        // the restricted domain is 2-dimensional.
        let pb = restricted_boundary(&c, 2, 0.6, 0.75).unwrap();
        assert_eq!(pb.domain_dim(), 2);
        assert_eq!(pb.matrix.nrows(), 4);
        assert!(pb.leakage() < 1e-10);
        let gram = pb.domain_basis.transpose() * &pb.domain_basis;
        assert!((gram - DMatrix::<f64>::identity(2, 2)).amax() < 1e-10);
        // which is exactly what kills the square's loop before 0.75
        let l = persistent_laplacian(&c, 1, 0.6, 0.75).unwrap();
        assert_eq!(betti_from_laplacian(&l, DEFAULT_RANK_TOL).unwrap(), 0);
        let none = restricted_boundary(&c, 2, 0.3, 0.5).unwrap();
        assert_eq!(none.domain_dim(), 0);
        assert!(restricted_boundary(&c, 2, 0.8, 0.5).is_err());
    }

    #[test]
    fn square_laplacians() {
        let c = square();
        let l = persistent_laplacian(&c, 1, 0.55, 0.65).unwrap();
        assert_eq!(l.nrows(), 4);
        assert_eq!(betti_from_laplacian(&l, DEFAULT_RANK_TOL).unwrap(), 1);
        let l0 = persistent_laplacian(&c, 0, 1.0, 1.0).unwrap();
        assert_eq!(betti_from_laplacian(&l0, DEFAULT_RANK_TOL).unwrap(), 1);
        assert!(spectrum(&l0).unwrap()[0] > -1e-10);
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(spectrum(&DMatrix::identity(3, 3)).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]);
        assert_eq!(spectrum(&d).unwrap(), vec![-1.0, 2.0]);
        // path graph on three vertices
        let lap = DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        let ev = spectrum(&lap).unwrap();
        for (a, b) in ev.iter().zip([0.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(spectrum(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_laplacian_kernel_is_everything() {
        assert_eq!(betti_from_laplacian(&DMatrix::zeros(5, 5), DEFAULT_RANK_TOL).unwrap(), 5);
        assert_eq!(betti_from_laplacian(&DMatrix::zeros(0, 0), DEFAULT_RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn dirac_degenerates_to_shifted_identity() {
        // two far-apart points at a small scale: no edges, k = 0
        let c = vr_filtration(&[vec![0.0], vec![10.0]], 1.0, 1).unwrap();
        let op = dirac_operator(&c, 0, 1.0, 1.0, 0.3).unwrap();
        assert_eq!(op.block_dims, (0, 2, 0));
        assert_eq!(op.spectrum(), vec![0.3, 0.3]);
        let zero = dirac_operator(&c, 0, 1.0, 1.0, 0.0).unwrap();
        // shifting xi moves the whole spectrum by +xi
        for (a, b) in op.spectrum().iter().zip(zero.spectrum()) {
            assert!((a - b - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn dirac_square_blocks() {
        let c = square();
        let op = dirac_operator(&c, 1, 0.75, 0.75, 0.0).unwrap();
        assert_eq!(op.block_dims, (4, 6, 4));
        assert!(asymmetry(&op.matrix) < 1e-15);
        let lap = persistent_laplacian(&c, 1, 0.75, 0.75).unwrap();
        assert!((op.squared_middle_block() - lap).amax() < 1e-10);
        assert!(op.squared_corner_block().amax() < 1e-12);
    }

    #[test]
    fn qpe_examples() {
        // l*lambda = p exactly
        assert!((qpe_distribution(&[3.0], 1, 8, 3).unwrap() - 1.0).abs() < 1e-12);
        // l*lambda integer but not p mod M
        assert!(qpe_distribution(&[2.0], 1, 8, 3).unwrap().abs() < 1e-12);
        // l*lambda = 0.5, M = 2, p = 0
        assert!((qpe_distribution(&[0.5], 1, 2, 0).unwrap() - 0.5).abs() < 1e-12);
        // peak reached modulo M
        assert!((qpe_distribution(&[11.0], 1, 8, 3).unwrap() - 1.0).abs() < 1e-12);
        // normalization by the number of eigenvalues
        assert!((qpe_distribution(&[3.0, 2.0], 1, 8, 3).unwrap() - 0.5).abs() < 1e-12);
        assert!(qpe_distribution(&[1.0], 1, 0, 0).is_err());
        assert!(qpe_distribution(&[1.0], 1, 4, 4).is_err());
    }

    #[test]
    fn spectrum_dump_json() {
        let c = square();
        let op = dirac_operator(&c, 1, 0.5, 0.7, 0.0).unwrap();
        let dump = SpectrumDump::from(&op);
        let v = serde_json::to_value(&dump).unwrap();
        assert_eq!(v["k"], 1);
        assert_eq!(v["eps_prime"], 0.7);
        assert_eq!(v["eigenvalues"].as_array().unwrap().len(), op.matrix.nrows());
    }
}
