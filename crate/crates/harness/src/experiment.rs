//! Grids of optimizer runs over paired random starting points.

use std::fmt;
use std::path::PathBuf;

use qngd_core::models::{file_ansatz, h2_model, tfi_model, TfiSetup};
use qngd_core::optimize::{OptimizerConfig, OptimizerTrace, Termination};
use qngd_core::{
    random_init, run_optimizer, Ansatz, Estimator, MetricMode, PauliHamiltonian, Problem,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pauli_file::load_pauli_file;
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    H2,
    Tfi { n: usize, t: f64, setup: TfiSetup },
    PauliFile { path: PathBuf, layers: usize },
}

impl ModelSpec {
    pub fn build(&self) -> Result<(PauliHamiltonian, Ansatz), HarnessError> {
        Ok(match self {
            ModelSpec::H2 => h2_model(),
            ModelSpec::Tfi { n, t, setup } => tfi_model(*n, *t, *setup)?,
            ModelSpec::PauliFile { path, layers } => {
                let h = load_pauli_file(path)?;
                let a = file_ansatz(&h, *layers)?;
                (h, a)
            }
        })
    }

    /// Armijo β used when none is given: 0.5 for H₂, 1 otherwise.
    pub fn default_beta(&self) -> f64 {
        match self {
            ModelSpec::H2 => 0.5,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeSpec {
    Qngd {
        step: f64,
    },
    AdaptQngd,
    /// Armijo steps with the metric replaced by the identity.
    AdaptSgd,
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeSpec::Qngd { step } => write!(f, "qngd({step})"),
            SchemeSpec::AdaptQngd => f.write_str("adaptqngd"),
            SchemeSpec::AdaptSgd => f.write_str("adaptsgd"),
        }
    }
}

/// Per-scheme settings that replace the experiment-wide ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricMode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub overrides: Overrides,
}

impl From<SchemeSpec> for GridEntry {
    fn from(scheme: SchemeSpec) -> Self {
        GridEntry {
            scheme,
            overrides: Overrides::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub model: ModelSpec,
    pub grid: Vec<GridEntry>,
    pub n_seeds: usize,
    pub seed_base: u64,
    pub alpha: f64,
    pub beta: f64,
    pub k_max: u32,
    pub tol: f64,
    pub epsilon: f64,
    pub max_epochs: usize,
    pub metric: MetricMode,
    pub estimator: Estimator,
    /// Keep every run's full trace in the result.
    #[serde(default)]
    pub keep_traces: bool,
}

impl ExperimentSpec {
    /// Defaults for `model`: α = 0.01, k_max = 6, tol = 0.01, ε = 1e-3,
    /// 200 epochs, block-diagonal metric, exact expectations, the model's β.
    pub fn new(model: ModelSpec, grid: Vec<GridEntry>, n_seeds: usize) -> Self {
        let d = OptimizerConfig::default();
        ExperimentSpec {
            beta: model.default_beta(),
            model,
            grid,
            n_seeds,
            seed_base: 0,
            alpha: d.alpha,
            k_max: d.k_max,
            tol: d.tol,
            epsilon: d.epsilon,
            max_epochs: d.max_epochs,
            metric: d.metric,
            estimator: Estimator::Exact,
            keep_traces: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_seeds == 0 {
            return Err(HarnessError::Spec("n_seeds must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(HarnessError::Spec("the scheme grid is empty".into()));
        }
        for entry in &self.grid {
            self.config_for(entry).validate()?;
        }
        Ok(())
    }

    pub fn config_for(&self, entry: &GridEntry) -> OptimizerConfig {
        let o = entry.overrides;
        let metric = o.metric.unwrap_or(self.metric);
        let mut cfg = match entry.scheme {
            SchemeSpec::Qngd { step } => OptimizerConfig::qngd(step, metric),
            SchemeSpec::AdaptQngd => {
                OptimizerConfig::adapt_qngd(o.beta.unwrap_or(self.beta), metric)
            }
            SchemeSpec::AdaptSgd => OptimizerConfig::adapt_sgd(o.beta.unwrap_or(self.beta)),
        };
        cfg.alpha = o.alpha.unwrap_or(self.alpha);
        cfg.k_max = o.k_max.unwrap_or(self.k_max);
        cfg.tol = self.tol;
        cfg.epsilon = self.epsilon;
        cfg.max_epochs = self.max_epochs;
        cfg
    }

    /// Starting point shared by every scheme for seed index `i`.
    pub fn theta0(&self, n_params: usize, i: usize) -> Vec<f64> {
        random_init(n_params, self.seed_base.wrapping_add(i as u64))
    }

    fn estimator_for(&self, i: usize) -> Estimator {
        match self.estimator {
            Estimator::Exact => Estimator::Exact,
            Estimator::Shots { shots, seed } => Estimator::Shots {
                shots,
                seed: seed.wrapping_add(i as u64),
            },
        }
    }

    /// EoT recorded for runs that did not converge.
    pub fn sentinel(&self) -> usize {
        self.max_epochs + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Index into [`ExperimentSpec::grid`].
    pub scheme_index: usize,
    pub scheme: String,
    pub seed_index: usize,
    pub seed: u64,
    /// Epochs to terminate, or the sentinel when unconverged.
    pub eot: usize,
    pub converged: bool,
    pub termination: Option<Termination>,
    pub epochs: usize,
    pub final_energy: Option<f64>,
    pub min_energy: Option<f64>,
    pub total_calls: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<OptimizerTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub n_params: usize,
    pub exact_energy: f64,
    /// Ordered by scheme, then seed.
    pub records: Vec<RunRecord>,
}

impl ExperimentResult {
    pub fn for_scheme(&self, scheme_index: usize) -> impl Iterator<Item = &RunRecord> {
        self.records
            .iter()
            .filter(move |r| r.scheme_index == scheme_index)
    }
}

/// Runs every (scheme, seed) pair on the rayon pool. A failing run is kept
/// as an unconverged record carrying the error text.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, HarnessError> {
    spec.validate()?;
    let (hamiltonian, ansatz) = spec.model.build()?;
    let exact_energy = hamiltonian.exact_ground_energy()?;
    let n_params = ansatz.n_params();

    let jobs: Vec<(usize, usize)> = (0..spec.grid.len())
        .flat_map(|s| (0..spec.n_seeds).map(move |i| (s, i)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(s, i)| {
            let entry = &spec.grid[s];
            let theta0 = spec.theta0(n_params, i);
            let outcome =
                Problem::new(&ansatz, &hamiltonian, spec.estimator_for(i)).and_then(|problem| {
                    run_optimizer(
                        &problem,
                        &theta0,
                        &spec.config_for(entry),
                        Some(exact_energy),
                    )
                });
            record(spec, s, i, outcome)
        })
        .collect();

    Ok(ExperimentResult {
        spec: spec.clone(),
        n_params,
        exact_energy,
        records,
    })
}

fn record(
    spec: &ExperimentSpec,
    scheme_index: usize,
    seed_index: usize,
    outcome: qngd_core::Result<OptimizerTrace>,
) -> RunRecord {
    let mut r = RunRecord {
        scheme_index,
        scheme: spec.grid[scheme_index].scheme.to_string(),
        seed_index,
        seed: spec.seed_base.wrapping_add(seed_index as u64),
        eot: spec.sentinel(),
        converged: false,
        termination: None,
        epochs: 0,
        final_energy: None,
        min_energy: None,
        total_calls: 0,
        error: None,
        trace: None,
    };
    match outcome {
        Ok(trace) => {
            r.converged = trace.termination == Termination::Converged;
            if r.converged {
                r.eot = trace.epochs();
            }
            r.termination = Some(trace.termination);
            r.epochs = trace.epochs();
            r.final_energy = Some(trace.final_energy());
            r.min_energy = Some(trace.min_energy());
            r.total_calls = trace.total_calls();
            if spec.keep_traces {
                r.trace = Some(trace);
            }
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}
