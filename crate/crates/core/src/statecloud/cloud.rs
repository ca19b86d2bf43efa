use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hermitian::{operator_norm, HermitianMatrix};
use super::ssh::Model;
use super::state::{expectation, GroundSpace, QuantumState};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ObservableSet {
    observables: Vec<HermitianMatrix>,
    labels: Vec<String>,
}

impl ObservableSet {
    pub fn new(observables: Vec<HermitianMatrix>, labels: Vec<String>) -> Result<Self> {
        if observables.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} observables but {} labels",
                observables.len(),
                labels.len()
            )));
        }
        if let Some(first) = observables.first() {
            if let Some(bad) = observables.iter().find(|o| o.dim() != first.dim()) {
                return Err(Error::Shape(format!(
                    "observables of dims {} and {}",
                    first.dim(),
                    bad.dim()
                )));
            }
        }
        Ok(Self { observables, labels })
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.observables.first().map(HermitianMatrix::dim)
    }

    pub fn observables(&self) -> &[HermitianMatrix] {
        &self.observables
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn operator_norms(&self) -> Vec<f64> {
        self.observables.iter().map(operator_norm).collect()
    }

    /// Each observable divided by its operator norm.
    pub fn normalized(&self) -> Result<Self> {
        let observables = self
            .observables
            .iter()
            .zip(&self.labels)
            .map(|(o, label)| {
                let norm = operator_norm(o);
                if norm == 0.0 {
                    Err(Error::Domain(format!("observable {label} has zero operator norm")))
                } else {
                    Ok(o.scaled(1.0 / norm))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { observables, labels: self.labels.clone() })
    }

    /// `{U O U^†}` for every member.
    pub fn conjugated_by(&self, u: &nalgebra::DMatrix<num_complex::Complex64>) -> Result<Self> {
        let observables = self
            .observables
            .iter()
            .map(|o| o.conjugated_by(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { observables, labels: self.labels.clone() })
    }
}

/// The map from a state to its vector of observable expectation values.
pub fn phi_map(state: &QuantumState, obs: &ObservableSet) -> Result<Vec<f64>> {
    obs.observables().iter().map(|o| expectation(state, o)).collect()
}

/// How to treat a parameter value whose lowest eigenvalue is degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegeneracyPolicy {
    /// Fail, naming the offending parameter.
    #[default]
    Strict,
    /// Project the ground state of the nearest gapped parameter value into
    /// the degenerate eigenspace (the adiabatic limit along the sweep).
    Continuation,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// Ground states for every parameter value, in order.
pub fn ground_states(
    lambdas: &[f64],
    model: &Model,
    gap_tol: f64,
    policy: DegeneracyPolicy,
) -> Result<Vec<QuantumState>> {
    let spaces = lambdas
        .par_iter()
        .map(|&l| model.hamiltonian(l).map(|h| GroundSpace::of(&h, gap_tol)))
        .collect::<Result<Vec<_>>>()?;

    let degenerate = |i: usize| Error::DegenerateGroundState {
        lambda: Some(lambdas[i]),
        gap: spaces[i].lowest_spacing,
        tol: gap_tol,
    };

    let gapped: Vec<Option<QuantumState>> =
        spaces.iter().map(|s| if s.is_degenerate() { None } else { s.state().ok() }).collect();

    let mut out = Vec::with_capacity(lambdas.len());
    for (i, space) in spaces.iter().enumerate() {
        if let Some(s) = &gapped[i] {
            out.push(s.clone());
            continue;
        }
        if policy == DegeneracyPolicy::Strict {
            return Err(degenerate(i));
        }
        // Nearest gapped neighbour; ties go to the lower index.
        let reference = (1..lambdas.len())
            .flat_map(|d| [i.checked_sub(d), Some(i + d)])
            .flatten()
            .find_map(|j| gapped.get(j).and_then(Option::as_ref));
        match reference.and_then(|r| space.project(r)) {
            Some(s) => out.push(s),
            None => return Err(degenerate(i)),
        }
    }
    Ok(out)
}

/// Ordered points in R^m tagged with their parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct StateCloud {
    points: Vec<Vec<f64>>,
    params: Vec<f64>,
    labels: Vec<String>,
}

impl StateCloud {
    pub fn new(points: Vec<Vec<f64>>, params: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if points.len() != params.len() {
            return Err(Error::Shape(format!("{} points but {} parameters", points.len(), params.len())));
        }
        if let Some(p) = points.iter().find(|p| p.len() != labels.len()) {
            return Err(Error::Shape(format!("point of dimension {} with {} labels", p.len(), labels.len())));
        }
        if !strictly_increasing(&params) {
            return Err(Error::Domain("cloud parameters must be strictly increasing".into()));
        }
        if points.iter().flatten().chain(&params).any(|x| !x.is_finite()) {
            return Err(Error::Domain("cloud contains non-finite values".into()));
        }
        Ok(Self { points, params, labels })
    }

    /// A cloud without parameter tags; points are indexed 0, 1, 2, ...
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let m = points.first().map_or(0, Vec::len);
        let labels = (1..=m).map(|i| format!("x{i}")).collect();
        let params = (0..points.len()).map(|i| i as f64).collect();
        Self::new(points, params, labels)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sub-cloud of the points in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            points: self.points[range.clone()].to_vec(),
            params: self.params[range].to_vec(),
            labels: self.labels.clone(),
        }
    }

    /// CSV with header `lambda,<label_1>,...` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "lambda,{}", self.labels.join(","))?;
        for (p, l) in self.points.iter().zip(&self.params) {
            write!(out, "{}", fmt_full(*l))?;
            for x in p {
                write!(out, ",{}", fmt_full(*x))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads a cloud CSV. A first column named `lambda` supplies the
    /// parameters; otherwise every column is a coordinate and points are
    /// tagged by row index.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
        let headers = reader.headers().map_err(|e| Error::Csv { row: 1, msg: e.to_string() })?.clone();
        if headers.is_empty() || headers.iter().all(str::is_empty) {
            return Err(Error::Csv { row: 1, msg: "missing header".into() });
        }
        let tagged = headers.get(0) == Some("lambda");
        let labels: Vec<String> = headers.iter().skip(usize::from(tagged)).map(str::to_owned).collect();
        let mut points = Vec::new();
        let mut params = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let row = i + 2;
            let rec = rec.map_err(|e| Error::Csv { row, msg: e.to_string() })?;
            if rec.len() != headers.len() {
                return Err(Error::Csv { row, msg: format!("expected {} fields, found {}", headers.len(), rec.len()) });
            }
            let values = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::Csv { row, msg: format!("not a finite number: {f:?}") })
                })
                .collect::<Result<Vec<f64>>>()?;
            if tagged {
                params.push(values[0]);
                points.push(values[1..].to_vec());
            } else {
                params.push(i as f64);
                points.push(values);
            }
        }
        if points.is_empty() {
            return Err(Error::Csv { row: 2, msg: "no data rows".into() });
        }
        if !strictly_increasing(&params) {
            let row = params.windows(2).position(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)).unwrap() + 3;
            return Err(Error::Csv { row, msg: "lambda values must be strictly increasing".into() });
        }
        Self::new(points, params, labels)
    }
}

pub(crate) fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// One cloud point per parameter value, in order.
pub fn build_cloud(lambdas: &[f64], model: &Model, obs: &ObservableSet, gap_tol: f64) -> Result<StateCloud> {
    if lambdas.is_empty() {
        return Err(Error::Domain("no parameter values".into()));
    }
    if !strictly_increasing(lambdas) {
        return Err(Error::Domain("parameter values must be strictly increasing".into()));
    }
    let states = ground_states(lambdas, model, gap_tol, DegeneracyPolicy::Strict)?;
    let points = states.iter().map(|s| phi_map(s, obs)).collect::<Result<Vec<_>>>()?;
    StateCloud::new(points, lambdas.to_vec(), obs.labels().to_vec())
}
