//! Parameter sweeps: per-window state clouds, persistent Betti numbers and
//! persistent Laplacian kernels on probe intervals, and the transitions
//! where those integers jump.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirac::{betti_from_laplacian, dirac_operator, persistent_laplacian, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::persistence::{persistent_betti, reduce, PersistenceDiagram};
use crate::simplicial::{default_eps_max, vr_filtration};
use crate::statecloud::{
    ground_states, phi_map, random_unitary, DegeneracyPolicy, Model, StateCloud, DEFAULT_GAP_TOL,
};

/// A homological dimension and scale interval `[eps1, eps2]` whose
/// persistent Betti number is tracked across the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub k: usize,
    pub eps1: f64,
    pub eps2: f64,
}

impl Probe {
    pub fn new(k: usize, eps1: f64, eps2: f64) -> Self {
        Self { k, eps1, eps2 }
    }

    /// Report key, e.g. `k1_0.4_0.8`.
    pub fn key(&self) -> String {
        format!("k{}_{}_{}", self.k, self.eps1, self.eps2)
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.k, self.eps1, self.eps2)
    }
}

/// Parses `k:eps1:eps2`.
impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("probe {s:?} is not of the form k:eps1:eps2"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let k = parts[0].trim().parse().map_err(|_| bad())?;
        let eps1: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let eps2: f64 = parts[2].trim().parse().map_err(|_| bad())?;
        let probe = Probe { k, eps1, eps2 };
        probe.validate()?;
        Ok(probe)
    }
}

impl Probe {
    fn validate(&self) -> Result<()> {
        if !(self.eps1 >= 0.0 && self.eps1 <= self.eps2) {
            return Err(Error::Domain(format!("probe {self} needs 0 <= eps1 <= eps2")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CloudMode {
    /// One cloud over the whole sweep.
    Global,
    /// One cloud per parameter value from its neighbours within
    /// `window_halfwidth` sweep steps, truncated at the sweep ends.
    Window,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub model: Model,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub step: f64,
    pub cloud_mode: CloudMode,
    pub window_halfwidth: usize,
    #[serde(rename = "intervals", alias = "probes")]
    pub probes: Vec<Probe>,
    pub max_dim: usize,
    pub xi: f64,
    pub rank_tol: f64,
    pub gap_tol: f64,
    pub degeneracy: DegeneracyPolicy,
    pub normalize_observables: bool,
    pub record_spectra: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            model: Model::ssh(4),
            lambda_min: -1.0,
            lambda_max: 1.0,
            step: 0.1,
            cloud_mode: CloudMode::Window,
            window_halfwidth: 3,
            probes: vec![Probe::new(1, 0.4, 0.8)],
            max_dim: 2,
            xi: 0.0,
            rank_tol: DEFAULT_RANK_TOL,
            gap_tol: DEFAULT_GAP_TOL,
            degeneracy: DegeneracyPolicy::Continuation,
            normalize_observables: false,
            record_spectra: false,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !(self.lambda_min.is_finite() && self.lambda_max.is_finite()) || self.lambda_min > self.lambda_max {
            return Err(Error::Domain(format!(
                "lambda range [{}, {}] is empty",
                self.lambda_min, self.lambda_max
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Domain(format!("step must be positive, got {}", self.step)));
        }
        if self.probes.is_empty() {
            return Err(Error::Domain("at least one probe interval is required".into()));
        }
        for p in &self.probes {
            p.validate()?;
            if p.k >= self.max_dim {
                return Err(Error::Domain(format!(
                    "probe {p} needs max_dim > {}, got {}",
                    p.k, self.max_dim
                )));
            }
        }
        if !(self.rank_tol > 0.0 && self.gap_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if !self.xi.is_finite() {
            return Err(Error::Domain("xi must be finite".into()));
        }
        Ok(())
    }

    /// `lambda_min + i * step` up to `lambda_max`, rounded to 12 decimals so
    /// that grid points such as 0 come out exact.
    pub fn lambdas(&self) -> Vec<f64> {
        let span = self.lambda_max - self.lambda_min;
        let n = ((span / self.step) + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| {
                let v = self.lambda_min + i as f64 * self.step;
                let r = (v * 1e12).round() / 1e12;
                if r == 0.0 {
                    0.0
                } else {
                    r
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub lambda: f64,
    /// Sweep indices forming this entry's cloud.
    pub window: Range<usize>,
    /// Persistent Betti number per probe, from the barcode.
    pub betti: Vec<usize>,
    /// Persistent Laplacian kernel dimension per probe.
    pub kernel_dims: Vec<usize>,
    /// Dirac spectrum per probe, when requested.
    pub dirac_spectra: Option<Vec<Vec<f64>>>,
    pub diagram: PersistenceDiagram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub left: f64,
    pub right: f64,
    pub probes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseScanReport {
    pub config: ScanConfig,
    pub lambdas: Vec<f64>,
    pub cloud: StateCloud,
    pub entries: Vec<ScanEntry>,
    pub transitions: Vec<Transition>,
    /// Entries where the barcode and Laplacian disagree.
    pub defects: Vec<String>,
}

type WindowAnalysis = (PersistenceDiagram, Vec<usize>, Vec<usize>, Option<Vec<Vec<f64>>>);

fn analyze_window(points: &[Vec<f64>], config: &ScanConfig) -> Result<WindowAnalysis> {
    let complex = vr_filtration(points, default_eps_max(points), config.max_dim)?;
    let diagram = reduce(&complex);
    let mut betti = Vec::with_capacity(config.probes.len());
    let mut kernels = Vec::with_capacity(config.probes.len());
    let mut spectra = config.record_spectra.then(Vec::new);
    for p in &config.probes {
        betti.push(persistent_betti(&diagram, p.k, p.eps1, p.eps2)?);
        let lap = persistent_laplacian(&complex, p.k, p.eps1, p.eps2)?;
        kernels.push(betti_from_laplacian(&lap, config.rank_tol)?);
        if let Some(s) = spectra.as_mut() {
            s.push(dirac_operator(&complex, p.k, p.eps1, p.eps2, config.xi)?.spectrum());
        }
    }
    Ok((diagram, betti, kernels, spectra))
}

fn changed_probes(config: &ScanConfig, a: &[usize], b: &[usize]) -> Vec<String> {
    config
        .probes
        .iter()
        .zip(a.iter().zip(b))
        .filter(|(_, (x, y))| x != y)
        .map(|(p, _)| p.key())
        .collect()
}

fn transitions_by(report: &PhaseScanReport, values: impl Fn(&ScanEntry) -> &[usize]) -> Vec<Transition> {
    report
        .entries
        .windows(2)
        .filter_map(|w| {
            let probes = changed_probes(&report.config, values(&w[0]), values(&w[1]));
            (!probes.is_empty()).then(|| Transition { left: w[0].lambda, right: w[1].lambda, probes })
        })
        .collect()
}

/// Runs the sweep, optionally replacing every state by `U psi` and every
/// observable by `U O U^†`.
pub fn sweep_transformed(config: &ScanConfig, unitary: Option<&DMatrix<Complex64>>) -> Result<PhaseScanReport> {
    config.validate()?;
    let lambdas = config.lambdas();
    let mut states = ground_states(&lambdas, &config.model, config.gap_tol, config.degeneracy)?;
    let mut obs = config.model.observables()?;
    if config.normalize_observables {
        obs = obs.normalized()?;
    }
    if let Some(u) = unitary {
        states = states.iter().map(|s| s.transformed(u)).collect::<Result<_>>()?;
        obs = obs.conjugated_by(u)?;
    }
    let points = states.par_iter().map(|s| phi_map(s, &obs)).collect::<Result<Vec<_>>>()?;
    let cloud = StateCloud::new(points, lambdas.clone(), obs.labels().to_vec())?;

    let n = lambdas.len();
    let windows: Vec<(f64, Range<usize>)> = match config.cloud_mode {
        CloudMode::Global => vec![(lambdas[0], 0..n)],
        CloudMode::Window => (0..n)
            .map(|i| {
                let h = config.window_halfwidth;
                (lambdas[i], i.saturating_sub(h)..(i + h + 1).min(n))
            })
            .collect(),
    };

    let entries = windows
        .into_par_iter()
        .map(|(lambda, window)| {
            let (diagram, betti, kernel_dims, dirac_spectra) =
                analyze_window(&cloud.points()[window.clone()], config)?;
            Ok(ScanEntry { lambda, window, betti, kernel_dims, dirac_spectra, diagram })
        })
        .collect::<Result<Vec<_>>>()?;

    let defects = entries
        .iter()
        .filter(|e| e.betti != e.kernel_dims)
        .map(|e| format!("lambda = {}: barcode {:?} vs Laplacian kernel {:?}", e.lambda, e.betti, e.kernel_dims))
        .collect();

    let mut report = PhaseScanReport { config: config.clone(), lambdas, cloud, entries, transitions: Vec::new(), defects };
    report.transitions = detect_transitions(&report);
    Ok(report)
}

pub fn sweep(config: &ScanConfig) -> Result<PhaseScanReport> {
    sweep_transformed(config, None)
}

/// The sweep with a seeded Haar-random unitary applied to states and
/// observables alike.
pub fn unitary_conjugate_scan(config: &ScanConfig, seed: u64) -> Result<PhaseScanReport> {
    let dim = match config.model {
        Model::Ssh { n_sites, .. } => n_sites,
    };
    sweep_transformed(config, Some(&random_unitary(dim, seed)))
}

/// Adjacent entries whose persistent Betti numbers differ in some probe.
pub fn detect_transitions(report: &PhaseScanReport) -> Vec<Transition> {
    transitions_by(report, |e| &e.betti)
}

/// Adjacent entries whose persistent Laplacian kernel dimensions differ.
/// Refuses when kernels and barcode Betti numbers disagree anywhere.
pub fn spectral_discontinuity(report: &PhaseScanReport) -> Result<Vec<Transition>> {
    let mismatched: Vec<String> = report
        .entries
        .iter()
        .filter(|e| e.betti != e.kernel_dims)
        .map(|e| format!("lambda = {}: barcode {:?} vs kernel {:?}", e.lambda, e.betti, e.kernel_dims))
        .collect();
    if !mismatched.is_empty() {
        return Err(Error::Consistency(mismatched.join("; ")));
    }
    Ok(transitions_by(report, |e| &e.kernel_dims))
}

/// True when Betti vectors are constant among entries with
/// `lambda <= lo` and, separately, among entries with `lambda >= hi`.
/// Entries inside `(lo, hi)` are ignored; `None` requires global constancy.
pub fn continuity_check(report: &PhaseScanReport, exclude: Option<(f64, f64)>) -> bool {
    let constant = |entries: Vec<&ScanEntry>| entries.windows(2).all(|w| w[0].betti == w[1].betti);
    match exclude {
        None => constant(report.entries.iter().collect()),
        Some((lo, hi)) => {
            constant(report.entries.iter().filter(|e| e.lambda <= lo).collect())
                && constant(report.entries.iter().filter(|e| e.lambda >= hi).collect())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    lambda: f64,
    betti: BTreeMap<String, usize>,
    kernel_dims: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    dirac_spectra: Option<BTreeMap<String, Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    config: ScanConfig,
    entries: Vec<EntryJson>,
    transitions: Vec<Transition>,
}

impl PhaseScanReport {
    pub fn to_json(&self) -> Result<String> {
        let keys: Vec<String> = self.config.probes.iter().map(Probe::key).collect();
        let keyed = |v: &[usize]| keys.iter().cloned().zip(v.iter().copied()).collect::<BTreeMap<_, _>>();
        let wire = ReportJson {
            config: self.config.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    lambda: e.lambda,
                    betti: keyed(&e.betti),
                    kernel_dims: keyed(&e.kernel_dims),
                    dirac_spectra: e
                        .dirac_spectra
                        .as_ref()
                        .map(|s| keys.iter().cloned().zip(s.iter().cloned()).collect()),
                })
                .collect(),
            transitions: self.transitions.clone(),
        };
        Ok(serde_json::to_string_pretty(&wire)?)
    }
}
