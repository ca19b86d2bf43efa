//! Persistent homology over Z2 by boundary-matrix reduction.

mod betti;
mod bottleneck;
mod render;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::simplicial::{FilteredComplex, Field};

pub use betti::{betti_oracle, persistent_betti};
pub use bottleneck::{bottleneck, bottleneck_finite};
pub use render::{render_svg, render_text};

/// Half-open interval `[birth, death)`; `death` is `f64::INFINITY` for
/// classes that never die.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    #[serde(serialize_with = "ser_death", deserialize_with = "de_death")]
    pub death: f64,
}

fn ser_death<S: Serializer>(d: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if d.is_infinite() {
        s.serialize_none()
    } else {
        s.serialize_some(d)
    }
}

fn de_death<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl Bar {
    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    /// Alive on all of `[eps1, eps2]`.
    pub fn spans(&self, eps1: f64, eps2: f64) -> bool {
        self.birth <= eps1 && (self.death > eps2 || self.death.is_infinite())
    }
}

/// Bookkeeping from the reduction; zero-length pairs are counted here
/// rather than appearing as bars.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionAudit {
    /// Per homological dimension, pairs with birth == death.
    pub zero_persistence: Vec<usize>,
    /// Simplices whose reduced column is zero (cycle creators).
    pub positive: usize,
    /// Simplices whose reduced column is non-zero (cycle killers).
    pub negative: usize,
    /// Columns skipped by the clearing rule.
    pub cleared: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub field: Field,
    #[serde(default)]
    pub max_dim: usize,
    pub bars: Vec<Bar>,
    #[serde(skip)]
    pub audit: ReductionAudit,
}

impl PersistenceDiagram {
    pub fn new(field: Field, max_dim: usize, mut bars: Vec<Bar>) -> Self {
        sort_bars(&mut bars);
        Self { field, max_dim, bars, audit: ReductionAudit::default() }
    }

    pub fn bars_in_dim(&self, k: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == k)
    }

    pub fn infinite_count(&self, k: usize) -> usize {
        self.bars_in_dim(k).filter(|b| b.is_infinite()).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut d: Self = serde_json::from_str(text)?;
        for b in &d.bars {
            if !(b.birth >= 0.0 && b.birth <= b.death) {
                return Err(Error::Domain(format!("invalid bar [{}, {})", b.birth, b.death)));
            }
        }
        sort_bars(&mut d.bars);
        Ok(d)
    }
}

fn sort_bars(bars: &mut [Bar]) {
    bars.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
}

/// Homology dimensions a complex of the given top dimension resolves.
pub fn reported_dims(max_dim: usize) -> std::ops::Range<usize> {
    0..max_dim.max(1)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Standard column reduction with clearing, dimensions processed top-down.
pub fn reduce(complex: &FilteredComplex) -> PersistenceDiagram {
    let n = complex.len();
    let simplices = complex.simplices();
    let max_dim = complex.max_dim();
    let dims = reported_dims(max_dim);

    let mut pivot_col: Vec<Option<usize>> = vec![None; n];
    let mut is_death = vec![false; n];
    let mut is_birth = vec![false; n];
    let mut cleared = vec![false; n];
    let mut audit = ReductionAudit { zero_persistence: vec![0; dims.end], ..Default::default() };
    let mut bars = Vec::new();

    for d in (1..=max_dim).rev() {
        let mut reduced: Vec<Option<Vec<usize>>> = vec![None; n];
        for &j in complex.simplices_of_dim(d) {
            if cleared[j] {
                audit.cleared += 1;
                continue;
            }
            let mut col: Vec<usize> = simplices[j]
                .facets()
                .map(|f| complex.index_of(&f).expect("filtration is face-closed"))
                .collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                match pivot_col[low] {
                    Some(k) => col = symmetric_difference(&col, reduced[k].as_ref().expect("pivot column stored")),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivot_col[low] = Some(j);
                is_death[j] = true;
                is_birth[low] = true;
                cleared[low] = true;
                let (b, dth) = (simplices[low].birth, simplices[j].birth);
                if dth > b {
                    bars.push(Bar { dim: d - 1, birth: b, death: dth });
                } else if d - 1 < audit.zero_persistence.len() {
                    audit.zero_persistence[d - 1] += 1;
                }
                reduced[j] = Some(col);
            }
        }
    }

    for (i, s) in simplices.iter().enumerate() {
        if is_death[i] {
            audit.negative += 1;
        } else {
            audit.positive += 1;
            if !is_birth[i] && dims.contains(&s.dim()) {
                bars.push(Bar { dim: s.dim(), birth: s.birth, death: f64::INFINITY });
            }
        }
    }

    let mut diagram = PersistenceDiagram::new(Field::Z2, max_dim, bars);
    diagram.audit = audit;
    diagram
}
