use super::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::gf2::{kernel, rank, BitVec};
use crate::simplicial::{FilteredComplex, Field};

fn check_interval(eps1: f64, eps2: f64) -> Result<()> {
    if eps1.is_nan() || eps2.is_nan() || eps1 > eps2 {
        return Err(Error::Domain(format!("persistence interval [{eps1}, {eps2}] is reversed")));
    }
    Ok(())
}

/// Number of dimension-`k` bars alive on all of `[eps1, eps2]`.
pub fn persistent_betti(diagram: &PersistenceDiagram, k: usize, eps1: f64, eps2: f64) -> Result<usize> {
    check_interval(eps1, eps2)?;
    Ok(diagram.bars_in_dim(k).filter(|b| b.spans(eps1, eps2)).count())
}

/// Rank of `H_k(K_eps1) -> H_k(K_eps2)` over Z2, computed directly as
/// `dim Z_k(K_eps1) - dim(Z_k(K_eps1) ∩ B_k(K_eps2))`.
///
/// Dense elimination; meant for small complexes.
pub fn betti_oracle(complex: &FilteredComplex, k: usize, eps1: f64, eps2: f64) -> Result<usize> {
    check_interval(eps1, eps2)?;
    let n_k = complex.simplices_of_dim(k).len();
    let n_k1 = complex.count_at(k, eps1);

    let cycles: Vec<BitVec> = if k == 0 {
        (0..n_k1)
            .map(|i| {
                let mut v = BitVec::zeros(n_k);
                v.set(i);
                v
            })
            .collect()
    } else {
        let d = complex.boundary_matrix(k, Field::Z2)?;
        let n_rows = d.nrows();
        let cols: Vec<BitVec> = d.columns[..n_k1]
            .iter()
            .map(|col| {
                let mut v = BitVec::zeros(n_rows);
                for &(r, _) in col {
                    v.flip(r);
                }
                v
            })
            .collect();
        // kernel vectors live on the first n_k1 k-simplices; widen to all of C_k
        kernel(&cols)
            .into_iter()
            .map(|z| {
                let mut v = BitVec::zeros(n_k);
                (0..n_k1).filter(|&i| z.get(i)).for_each(|i| v.set(i));
                v
            })
            .collect()
    };
    let dim_z = cycles.len();

    let boundaries: Vec<BitVec> = if k < complex.max_dim() {
        let d = complex.boundary_matrix(k + 1, Field::Z2)?;
        let n_up = complex.count_at(k + 1, eps2);
        d.columns[..n_up]
            .iter()
            .map(|col| {
                let mut v = BitVec::zeros(n_k);
                for &(r, _) in col {
                    v.flip(r);
                }
                v
            })
            .collect()
    } else {
        Vec::new()
    };

    let dim_b = rank(&boundaries);
    let mut both = cycles;
    both.extend(boundaries);
    let dim_sum = rank(&both);
    let dim_intersection = dim_z + dim_b - dim_sum;
    Ok(dim_z - dim_intersection)
}
