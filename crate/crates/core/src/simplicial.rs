//! Vietoris-Rips filtrations and their boundary operators.
//!
//! Births are measured in scale units: a simplex enters at half its
//! diameter, so `VR(X, eps)` contains every simplex whose pairwise vertex
//! distances are all at most `2 eps`.

use std::collections::HashMap;
use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub birth: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Codimension-one faces, the i-th face omitting vertex i.
    pub fn facets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.vertices.len();
        (0..n).filter(move |_| n > 1).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Z2,
    Real,
}

/// Simplices ordered by (birth, dimension, lexicographic vertices).
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    max_dim: usize,
    n_points: usize,
    eps_max: f64,
    distances: DMatrix<f64>,
    index: HashMap<Vec<usize>, usize>,
    by_dim: Vec<Vec<usize>>,
}

pub fn distance_matrix(points: &[Vec<f64>]) -> DMatrix<f64> {
    let n = points.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d[(i, j)] = dist;
            d[(j, i)] = dist;
        }
    }
    d
}

/// Half the largest pairwise distance: the scale at which the Rips complex
/// becomes a full simplex.
pub fn default_eps_max(points: &[Vec<f64>]) -> f64 {
    distance_matrix(points).iter().fold(0.0f64, |a, &x| a.max(x)) / 2.0
}

/// All simplices of dimension `<= max_dim` born at or before `eps_max`,
/// found by clique expansion of the `2 eps_max` neighbourhood graph.
pub fn vr_filtration(points: &[Vec<f64>], eps_max: f64, max_dim: usize) -> Result<FilteredComplex> {
    if points.is_empty() {
        return Err(Error::Domain("cannot filter an empty cloud".into()));
    }
    let m = points[0].len();
    if points.iter().any(|p| p.len() != m) {
        return Err(Error::Shape("cloud points have differing dimensions".into()));
    }
    if eps_max.is_nan() || eps_max < 0.0 {
        return Err(Error::Domain(format!("eps_max must be non-negative, got {eps_max}")));
    }
    let distances = distance_matrix(points);
    let n = points.len();
    let edge_birth = |i: usize, j: usize| distances[(i, j)] / 2.0;
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| ((i + 1)..n).filter(|&j| edge_birth(i, j) <= eps_max).collect())
        .collect();

    let mut simplices = Vec::new();
    let mut stack: Vec<Simplex> = (0..n).rev().map(|v| Simplex { vertices: vec![v], birth: 0.0 }).collect();
    while let Some(s) = stack.pop() {
        if s.dim() < max_dim {
            let last = *s.vertices.last().unwrap();
            for &v in neighbours[last].iter().rev() {
                if s.vertices.iter().all(|&u| edge_birth(u, v) <= eps_max) {
                    let birth = s.vertices.iter().fold(s.birth, |b, &u| b.max(edge_birth(u, v)));
                    let mut vertices = s.vertices.clone();
                    vertices.push(v);
                    stack.push(Simplex { vertices, birth });
                }
            }
        }
        simplices.push(s);
    }
    Ok(FilteredComplex::from_simplices(simplices, max_dim, n, eps_max, distances))
}

impl FilteredComplex {
    fn from_simplices(
        mut simplices: Vec<Simplex>,
        max_dim: usize,
        n_points: usize,
        eps_max: f64,
        distances: DMatrix<f64>,
    ) -> Self {
        simplices.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.dim().cmp(&b.dim()))
                .then_with(|| a.vertices.cmp(&b.vertices))
        });
        let index = simplices.iter().enumerate().map(|(i, s)| (s.vertices.clone(), i)).collect();
        let mut by_dim = vec![Vec::new(); max_dim + 1];
        for (i, s) in simplices.iter().enumerate() {
            by_dim[s.dim()].push(i);
        }
        Self { simplices, max_dim, n_points, eps_max, distances, index, by_dim }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    pub fn distances(&self) -> &DMatrix<f64> {
        &self.distances
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    /// Complex indices of the `k`-simplices, in filtration order.
    pub fn simplices_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    /// Number of `k`-simplices born at or before `eps`. These are always a
    /// prefix of [`simplices_of_dim`](Self::simplices_of_dim).
    pub fn count_at(&self, k: usize, eps: f64) -> usize {
        self.simplices_of_dim(k).partition_point(|&i| self.simplices[i].birth <= eps)
    }

    /// Indices of every simplex born at or before `eps`.
    pub fn complex_at_scale(&self, eps: f64) -> Vec<usize> {
        (0..self.simplices.partition_point(|s| s.birth <= eps)).collect()
    }

    /// Position of each complex index within its own dimension's list.
    fn position_in_dim(&self) -> Vec<usize> {
        let mut pos = vec![0; self.simplices.len()];
        for list in &self.by_dim {
            for (p, &i) in list.iter().enumerate() {
                pos[i] = p;
            }
        }
        pos
    }

    /// Boundary operator from `k`-chains to `(k-1)`-chains, rows and columns
    /// in filtration order.
    pub fn boundary_matrix(&self, k: usize, field: Field) -> Result<BoundaryMatrix> {
        if k == 0 || k > self.max_dim {
            return Err(Error::Domain(format!("boundary index {k} outside 1..={}", self.max_dim)));
        }
        let pos = self.position_in_dim();
        let cols = self.simplices_of_dim(k).to_vec();
        let rows = self.simplices_of_dim(k - 1).to_vec();
        let columns = cols
            .iter()
            .map(|&c| {
                let mut entries: Vec<(usize, f64)> = self.simplices[c]
                    .facets()
                    .enumerate()
                    .map(|(i, face)| {
                        let r = self.index[&face];
                        let sign = match field {
                            Field::Z2 => 1.0,
                            Field::Real if i % 2 == 0 => 1.0,
                            Field::Real => -1.0,
                        };
                        (pos[r], sign)
                    })
                    .collect();
                entries.sort_by_key(|&(r, _)| r);
                entries
            })
            .collect();
        Ok(BoundaryMatrix { field, k, rows, cols, columns })
    }

    /// Every facet is present and born no later than its cofacet.
    pub fn check_face_closure(&self) -> std::result::Result<(), String> {
        for s in &self.simplices {
            for face in s.facets() {
                match self.index.get(&face) {
                    None => return Err(format!("{:?} missing facet {:?}", s.vertices, face)),
                    Some(&f) if self.simplices[f].birth > s.birth => {
                        return Err(format!("{:?} born before facet {:?}", s.vertices, face))
                    }
                    Some(&f) if f > self.index[&s.vertices] => {
                        return Err(format!("{:?} ordered before facet {:?}", s.vertices, face))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// One JSON object per line: `{"vertices":[...],"birth":x}`.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> Result<()> {
        for s in &self.simplices {
            serde_json::to_writer(&mut out, s)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Sparse boundary operator. `rows[r]` and `cols[c]` are complex indices;
/// entries are stored per column as (row position, coefficient).
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub field: Field,
    pub k: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub columns: Vec<Vec<(usize, f64)>>,
}

impl BoundaryMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows(), self.ncols());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// Dense block restricted to the first `nrows` rows and `ncols` columns.
    pub fn dense_prefix(&self, nrows: usize, ncols: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(nrows, ncols);
        for (c, col) in self.columns.iter().take(ncols).enumerate() {
            for &(r, v) in col {
                if r < nrows {
                    m[(r, c)] = v;
                }
            }
        }
        m
    }
}

/// `self_{k-1} * self_k` with entries reduced mod 2 for Z2 and left as
/// reals otherwise.
pub fn compose(lower: &BoundaryMatrix, upper: &BoundaryMatrix) -> Result<DMatrix<f64>> {
    if lower.k + 1 != upper.k || lower.field != upper.field {
        return Err(Error::Domain("boundary maps are not composable".into()));
    }
    let product = lower.to_dense() * upper.to_dense();
    Ok(match upper.field {
        Field::Z2 => product.map(|x| (x.round() as i64).rem_euclid(2) as f64),
        Field::Real => product,
    })
}
