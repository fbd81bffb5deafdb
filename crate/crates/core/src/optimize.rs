//! Fixed-step QNGD, Armijo-adaptive QNGD and adaptive SGD.
//!
//! Each epoch computes the parameter-shift gradient `g`, the metric `F`, and
//! the preconditioned direction `d = F⁺ g`, then steps `θ ← θ − λ d`. The
//! fixed scheme uses a constant `λ`. The adaptive scheme scans
//! `λ = β / 2ᵏ` for `k = 0, 1, …, k_max` and takes the first `k` with
//!
//! ```text
//! f(θ) − f(θ − λ d) ≥ α λ ‖d‖²
//! ```
//!
//! Adaptive SGD is the adaptive scheme with `F = I`.

use alloc::vec::Vec;

use crate::ledger::LedgerSnapshot;
use crate::linalg::RealMatrix;
use crate::metric::{self, metric_circuit_count, MetricMatrix, MetricMode};
use crate::problem::Problem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Scheme {
    /// Armijo backtracking over `β / 2ᵏ`.
    Adaptive,
    /// Constant step size.
    Fixed { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StoppingRule {
    /// `|f(θ) − E₀| ≤ tol`.
    ExactGap,
    /// `‖d‖ ≤ tol` for the preconditioned direction `d`.
    GradientNorm,
    /// `|f(θᵢ₋₁) − f(θᵢ)| ≤ tol`.
    EnergyDelta,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizerConfig {
    /// Armijo sufficient-decrease constant, in `(0, 1)`.
    pub alpha: f64,
    /// Largest step tried by the line search.
    pub beta: f64,
    /// Largest halving exponent tried.
    pub k_max: u32,
    pub tol: f64,
    /// Eigenvalue cutoff for the metric pseudo-inverse.
    pub epsilon: f64,
    pub max_epochs: usize,
    pub scheme: Scheme,
    pub metric: MetricMode,
    pub stopping: StoppingRule,
    /// Consecutive epochs without an acceptable Armijo step before the run
    /// is declared stalled.
    pub stall_limit: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            beta: 0.5,
            k_max: 6,
            tol: 0.01,
            epsilon: metric::DEFAULT_EPSILON,
            max_epochs: 200,
            scheme: Scheme::Adaptive,
            metric: MetricMode::BlockDiagonal,
            stopping: StoppingRule::ExactGap,
            stall_limit: 5,
        }
    }
}

impl OptimizerConfig {
    pub fn adapt_qngd(beta: f64, metric: MetricMode) -> Self {
        Self {
            beta,
            metric,
            ..Self::default()
        }
    }

    pub fn qngd(step: f64, metric: MetricMode) -> Self {
        Self {
            scheme: Scheme::Fixed { step },
            metric,
            ..Self::default()
        }
    }

    pub fn adapt_sgd(beta: f64) -> Self {
        Self {
            beta,
            metric: MetricMode::Identity,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig("alpha must lie in (0, 1)"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidConfig("beta must be positive"));
        }
        if self.k_max == 0 || self.k_max > 60 {
            return Err(Error::InvalidConfig("k_max must be in 1..=60"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig("epsilon must be positive"));
        }
        if self.stall_limit == 0 {
            return Err(Error::InvalidConfig("stall_limit must be positive"));
        }
        if let Scheme::Fixed { step } = self.scheme {
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::InvalidConfig("fixed step must be positive"));
            }
        }
        Ok(())
    }

    /// `β / 2ᵏ`.
    pub fn armijo_step(&self, k: u32) -> f64 {
        self.beta / (1u64 << k) as f64
    }
}

/// Inputs for [`StoppingRule::is_met`]; rule-specific fields may be absent.
#[derive(Debug, Clone, Copy, Default)]
pub struct StopInputs {
    pub energy: f64,
    pub previous_energy: Option<f64>,
    pub grad_norm: Option<f64>,
    pub exact_energy: Option<f64>,
}

impl StoppingRule {
    pub fn is_met(&self, tol: f64, inputs: &StopInputs) -> Result<bool> {
        match self {
            StoppingRule::ExactGap => {
                let exact = inputs.exact_energy.ok_or(Error::MissingExactEnergy)?;
                Ok((inputs.energy - exact).abs() <= tol)
            }
            StoppingRule::GradientNorm => inputs
                .grad_norm
                .map(|g| g <= tol)
                .ok_or(Error::InvalidConfig("gradient-norm rule needs a gradient")),
            StoppingRule::EnergyDelta => Ok(inputs
                .previous_energy
                .is_some_and(|prev| (prev - inputs.energy).abs() <= tol)),
        }
    }

    /// Whether the rule can be decided before the epoch's gradient exists.
    fn decided_before_gradient(&self) -> bool {
        !matches!(self, StoppingRule::GradientNorm)
    }
}

/// `F⁺ g` with the eigenvalue cutoff `epsilon`. The identity metric passes
/// `g` through untouched.
pub fn natural_gradient(gradient: &[f64], metric: &MetricMatrix, epsilon: f64) -> Result<Vec<f64>> {
    if metric.dim() != gradient.len() {
        return Err(Error::DimensionMismatch {
            expected: metric.dim(),
            found: gradient.len(),
        });
    }
    if metric.mode == MetricMode::Identity {
        return Ok(gradient.to_vec());
    }
    let inverse: RealMatrix = metric::pseudo_invert(&metric.matrix, epsilon)?;
    Ok(inverse.mul_vec(gradient))
}

fn norm_sqr(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn step_from(theta: &[f64], direction: &[f64], step: f64) -> Vec<f64> {
    theta
        .iter()
        .zip(direction)
        .map(|(t, d)| t - step * d)
        .collect()
}

/// Result of one Armijo scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmijoStep {
    /// First accepted exponent, or `None` if every trial failed.
    pub k: Option<u32>,
    /// `β / 2ᵏ`, or `β / 2^k_max` when nothing was accepted.
    pub step: f64,
    /// Cost evaluations spent, in `1..=k_max + 1`.
    pub trials: u32,
    pub theta: Vec<f64>,
    /// Cost at `theta`, reused by the caller as the next epoch's energy.
    pub energy: f64,
}

/// Scans `k = 0, 1, …, k_max` and stops at the first `k` satisfying the
/// sufficient-decrease condition. A non-finite trial cost counts as a
/// failure for that `k`.
pub fn armijo_search(
    mut cost: impl FnMut(&[f64]) -> Result<f64>,
    theta: &[f64],
    energy: f64,
    direction: &[f64],
    alpha: f64,
    beta: f64,
    k_max: u32,
) -> Result<ArmijoStep> {
    let d2 = norm_sqr(direction);
    if !(d2 > 0.0 && d2.is_finite()) {
        return Err(Error::DegenerateDirection);
    }
    let mut last = None;
    for k in 0..=k_max {
        let step = beta / (1u64 << k) as f64;
        let candidate = step_from(theta, direction, step);
        let trial = cost(&candidate)?;
        if trial.is_finite() && energy - trial >= alpha * step * d2 {
            return Ok(ArmijoStep {
                k: Some(k),
                step,
                trials: k + 1,
                theta: candidate,
                energy: trial,
            });
        }
        last = Some((step, candidate, trial));
    }
    let (step, theta, energy) = last.expect("at least one trial");
    Ok(ArmijoStep {
        k: None,
        step,
        trials: k_max + 1,
        theta,
        energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Termination {
    Converged,
    MaxEpochs,
    Stalled,
}

/// One update `θᵢ → θᵢ₊₁`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpochRecord {
    /// 1-based epoch number.
    pub epoch: usize,
    /// `f(θᵢ)`.
    pub energy_before: f64,
    /// `f(θᵢ₊₁)`.
    pub energy: f64,
    pub step_size: f64,
    /// Accepted Armijo exponent; `None` for fixed steps and failed scans.
    pub k: Option<u32>,
    /// `‖d‖` of the preconditioned direction.
    pub grad_norm: f64,
    /// `‖g‖` of the Euclidean gradient.
    pub euclidean_grad_norm: f64,
    /// Energy evaluations this epoch: gradient plus step evaluations.
    pub energy_evals: u64,
    pub metric_evals: u64,
    pub line_search_trials: u32,
    /// Running total of every circuit evaluation, including the initial one.
    pub cumulative_calls: u64,
    /// An adaptive epoch whose scan found no acceptable step.
    pub stagnated: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizerTrace {
    pub n_params: usize,
    pub scheme: Scheme,
    pub metric: MetricMode,
    pub initial_energy: f64,
    pub exact_energy: Option<f64>,
    pub records: Vec<EpochRecord>,
    pub termination: Termination,
    pub final_theta: Vec<f64>,
    /// Evaluations spent on the final stopping decision without an update
    /// (only the gradient-norm rule and degenerate directions incur these).
    pub terminal_energy_evals: u64,
    pub terminal_metric_evals: u64,
    /// What the problem's ledger recorded over this run.
    pub ledger: LedgerSnapshot,
}

impl OptimizerTrace {
    pub fn final_energy(&self) -> f64 {
        self.records
            .last()
            .map_or(self.initial_energy, |r| r.energy)
    }

    pub fn epochs(&self) -> usize {
        self.records.len()
    }

    /// Epochs to terminate, if the run converged.
    pub fn epochs_to_terminate(&self) -> Option<usize> {
        (self.termination == Termination::Converged).then_some(self.records.len())
    }

    pub fn min_energy(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.energy)
            .fold(self.initial_energy, f64::min)
    }

    pub fn total_calls(&self) -> u64 {
        self.ledger.total()
    }
}

/// Circuit evaluations broken down by purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CallBreakdown {
    pub initial: u64,
    pub gradient: u64,
    pub metric: u64,
    pub line_search: u64,
    pub terminal: u64,
}

impl CallBreakdown {
    pub fn total(&self) -> u64 {
        self.initial + self.gradient + self.metric + self.line_search + self.terminal
    }
}

/// `(gradient, metric, line search)` circuit counts of one epoch.
pub type EpochCalls = (u64, u64, u64);

/// Per-epoch [`EpochCalls`] and the total,
/// predicted from the closed form (`2p` per gradient, a fixed count per
/// metric, observed trials per step) and checked against the ledger.
pub fn qpu_call_count(
    trace: &OptimizerTrace,
    ansatz_metric_count: u64,
) -> Result<(Vec<EpochCalls>, CallBreakdown)> {
    let p2 = 2 * trace.n_params as u64;
    let per_epoch: Vec<EpochCalls> = trace
        .records
        .iter()
        .map(|r| (p2, ansatz_metric_count, r.line_search_trials as u64))
        .collect();
    let mut breakdown = CallBreakdown {
        initial: 1,
        terminal: trace.terminal_energy_evals + trace.terminal_metric_evals,
        ..CallBreakdown::default()
    };
    for &(g, m, l) in &per_epoch {
        breakdown.gradient += g;
        breakdown.metric += m;
        breakdown.line_search += l;
    }
    let predicted_energy = breakdown.initial
        + breakdown.gradient
        + breakdown.line_search
        + trace.terminal_energy_evals;
    let predicted_metric = breakdown.metric + trace.terminal_metric_evals;
    if predicted_energy != trace.ledger.energy {
        return Err(Error::LedgerMismatch {
            expected: predicted_energy,
            recorded: trace.ledger.energy,
        });
    }
    if predicted_metric != trace.ledger.metric {
        return Err(Error::LedgerMismatch {
            expected: predicted_metric,
            recorded: trace.ledger.metric,
        });
    }
    Ok((per_epoch, breakdown))
}

/// Runs one optimization from `theta0`.
///
/// With [`StoppingRule::ExactGap`] and no `exact_energy` supplied, the
/// ground energy is computed from the Hamiltonian first.
pub fn run_optimizer(
    problem: &Problem<'_>,
    theta0: &[f64],
    config: &OptimizerConfig,
    exact_energy: Option<f64>,
) -> Result<OptimizerTrace> {
    config.validate()?;
    let p = problem.n_params();
    if theta0.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: theta0.len(),
        });
    }
    if theta0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("initial parameters"));
    }
    let exact_energy = match (config.stopping, exact_energy) {
        (StoppingRule::ExactGap, None) => Some(problem.hamiltonian.exact_ground_energy()?),
        (_, e) => e,
    };
    let metric_count = metric_circuit_count(problem.ansatz, config.metric);
    let start = problem.ledger.snapshot();

    let mut theta = theta0.to_vec();
    let mut energy = problem.energy(&theta)?;
    let initial_energy = energy;
    let mut records: Vec<EpochRecord> = Vec::new();
    let mut cumulative = 1u64;
    let mut stalls = 0usize;
    let mut terminal = (0u64, 0u64);

    let termination = loop {
        if !energy.is_finite() {
            break Termination::Stalled;
        }
        let inputs = StopInputs {
            energy,
            previous_energy: records.last().map(|r| r.energy_before),
            grad_norm: None,
            exact_energy,
        };
        if config.stopping.decided_before_gradient()
            && config.stopping.is_met(config.tol, &inputs)?
        {
            break Termination::Converged;
        }
        if records.len() >= config.max_epochs {
            break Termination::MaxEpochs;
        }

        let gradient = problem.gradient(&theta)?;
        let metric = problem.metric(&theta, config.metric)?;
        let direction = natural_gradient(&gradient, &metric, config.epsilon)?;
        let d2 = norm_sqr(&direction);
        let grad_norm = libm::sqrt(d2);

        let gradient_done = StopInputs {
            grad_norm: Some(grad_norm),
            ..inputs
        };
        if !config.stopping.decided_before_gradient()
            && config.stopping.is_met(config.tol, &gradient_done)?
        {
            terminal = (2 * p as u64, metric_count);
            break Termination::Converged;
        }
        if !(d2 > 0.0 && d2.is_finite()) {
            terminal = (2 * p as u64, metric_count);
            break Termination::Stalled;
        }

        let (next_theta, next_energy, step, k, trials) = match config.scheme {
            Scheme::Fixed { step } => {
                let next = step_from(&theta, &direction, step);
                let e = problem.energy(&next)?;
                (next, e, step, None, 1u32)
            }
            Scheme::Adaptive => {
                let s = armijo_search(
                    |x| problem.energy(x),
                    &theta,
                    energy,
                    &direction,
                    config.alpha,
                    config.beta,
                    config.k_max,
                )?;
                (s.theta, s.energy, s.step, s.k, s.trials)
            }
        };
        let stagnated = config.scheme == Scheme::Adaptive && k.is_none();
        stalls = if stagnated { stalls + 1 } else { 0 };

        let energy_evals = 2 * p as u64 + trials as u64;
        cumulative += energy_evals + metric_count;
        records.push(EpochRecord {
            epoch: records.len() + 1,
            energy_before: energy,
            energy: next_energy,
            step_size: step,
            k,
            grad_norm,
            euclidean_grad_norm: libm::sqrt(norm_sqr(&gradient)),
            energy_evals,
            metric_evals: metric_count,
            line_search_trials: trials,
            cumulative_calls: cumulative,
            stagnated,
        });
        theta = next_theta;
        energy = next_energy;
        if stalls >= config.stall_limit {
            break Termination::Stalled;
        }
    };

    Ok(OptimizerTrace {
        n_params: p,
        scheme: config.scheme,
        metric: config.metric,
        initial_energy,
        exact_energy,
        records,
        termination,
        final_theta: theta,
        terminal_energy_evals: terminal.0,
        terminal_metric_evals: terminal.1,
        ledger: problem.ledger.snapshot().since(&start),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::h2_model;

    #[test]
    fn natural_gradient_examples() {
        let g = [1.0, 1.0];
        let id = MetricMatrix::identity(2);
        assert_eq!(natural_gradient(&g, &id, 1e-3).unwrap(), g.to_vec());

        let two = MetricMatrix {
            matrix: RealMatrix::from_diagonal(&[2.0, 2.0]),
            mode: MetricMode::Full,
        };
        let d = natural_gradient(&g, &two, 1e-3).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.5).abs() < 1e-15);

        let singular = MetricMatrix {
            matrix: RealMatrix::from_diagonal(&[1.0, 1e-5]),
            mode: MetricMode::Full,
        };
        let d = natural_gradient(&[0.0, 3.0], &singular, 1e-3).unwrap();
        assert!(d.iter().all(|x| x.abs() < 1e-15));

        assert!(natural_gradient(&[1.0], &two, 1e-3).is_err());
    }

    #[test]
    fn stopping_rules() {
        let gap = StopInputs {
            energy: -0.82,
            exact_energy: Some(-0.8246),
            ..StopInputs::default()
        };
        assert!(StoppingRule::ExactGap.is_met(0.01, &gap).unwrap());
        assert_eq!(
            StoppingRule::ExactGap.is_met(0.01, &StopInputs::default()),
            Err(Error::MissingExactEnergy)
        );
        let grad = StopInputs {
            grad_norm: Some(0.02),
            ..StopInputs::default()
        };
        assert!(!StoppingRule::GradientNorm.is_met(0.01, &grad).unwrap());
        let delta = StopInputs {
            energy: -0.5,
            previous_energy: Some(-0.5),
            ..StopInputs::default()
        };
        assert!(StoppingRule::EnergyDelta.is_met(0.01, &delta).unwrap());
        assert!(!StoppingRule::EnergyDelta
            .is_met(0.01, &StopInputs::default())
            .unwrap());
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = [
            OptimizerConfig {
                alpha: 1.0,
                ..Default::default()
            },
            OptimizerConfig {
                beta: 0.0,
                ..Default::default()
            },
            OptimizerConfig {
                k_max: 0,
                ..Default::default()
            },
            OptimizerConfig {
                tol: -1.0,
                ..Default::default()
            },
            OptimizerConfig {
                epsilon: 0.0,
                ..Default::default()
            },
            OptimizerConfig::qngd(-0.5, MetricMode::Full),
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn armijo_quadratic_accepts_full_step() {
        // f(x) = x², x = 1, d = 2: f(0) = 0 ≥ 0.01·0.5·4.
        let s = armijo_search(|x| Ok(x[0] * x[0]), &[1.0], 1.0, &[2.0], 0.01, 0.5, 6).unwrap();
        assert_eq!(s.k, Some(0));
        assert_eq!(s.step, 0.5);
        assert_eq!(s.trials, 1);
        assert_eq!(s.theta, alloc::vec![0.0]);
    }

    #[test]
    fn armijo_constant_cost_exhausts_search() {
        let s = armijo_search(|_| Ok(3.0), &[0.0], 3.0, &[1.0], 0.01, 1.0, 6).unwrap();
        assert_eq!(s.k, None);
        assert_eq!(s.trials, 7);
        assert_eq!(s.step, 1.0 / 64.0);
        assert_eq!(s.theta, alloc::vec![-1.0 / 64.0]);
    }

    #[test]
    fn armijo_rejects_degenerate_direction() {
        assert_eq!(
            armijo_search(|_| Ok(0.0), &[0.0], 0.0, &[0.0], 0.01, 1.0, 6),
            Err(Error::DegenerateDirection)
        );
        assert!(armijo_search(|_| Ok(0.0), &[0.0], 0.0, &[f64::NAN], 0.01, 1.0, 6).is_err());
    }

    #[test]
    fn armijo_non_finite_trial_is_a_failure() {
        // NaN for large steps, exact quadratic decrease for step ≤ 1/8.
        let cost = |x: &[f64]| {
            Ok(if x[0] < 0.8 {
                f64::NAN
            } else {
                (x[0] - 0.5).powi(2)
            })
        };
        let s = armijo_search(cost, &[1.0], 0.25, &[1.0], 0.01, 1.0, 6).unwrap();
        // steps 1, .5, .25 land at 0, .5, .75 (< 0.8) -> NaN; 0.125 lands at 0.875.
        assert_eq!(s.k, Some(3));
        assert_eq!(s.trials, 4);
    }

    #[test]
    fn already_converged_start_takes_no_steps() {
        let (h, a) = h2_model();
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig {
            tol: 10.0,
            ..OptimizerConfig::adapt_qngd(0.5, MetricMode::Full)
        };
        let trace = run_optimizer(&problem, &[0.1, 0.2, 0.3, 0.4], &cfg, None).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        assert_eq!(trace.epochs_to_terminate(), Some(0));
        assert_eq!(trace.ledger.energy, 1);
        assert_eq!(trace.ledger.metric, 0);
    }

    #[test]
    fn exact_gap_requires_energy_when_rule_is_other() {
        let (h, a) = h2_model();
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig {
            stopping: StoppingRule::EnergyDelta,
            tol: 1e-6,
            ..OptimizerConfig::adapt_qngd(0.5, MetricMode::Full)
        };
        let trace = run_optimizer(&problem, &[0.1, 0.2, 0.3, 0.4], &cfg, None).unwrap();
        assert_eq!(trace.exact_energy, None);
        assert!(trace.epochs() > 0);
    }

    #[test]
    fn gradient_norm_rule_counts_terminal_epoch() {
        let (h, a) = h2_model();
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig {
            stopping: StoppingRule::GradientNorm,
            tol: 1e-3,
            ..OptimizerConfig::adapt_qngd(0.5, MetricMode::Full)
        };
        let trace = run_optimizer(&problem, &[0.1, 0.2, 0.3, 0.4], &cfg, None).unwrap();
        assert_eq!(trace.termination, Termination::Converged);
        assert_eq!(trace.terminal_energy_evals, 8);
        let count = metric_circuit_count(&a, MetricMode::Full);
        let (_, breakdown) = qpu_call_count(&trace, count).unwrap();
        assert_eq!(breakdown.total(), trace.ledger.total());
    }

    #[test]
    fn fixed_step_call_count() {
        let (h, a) = h2_model();
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig {
            max_epochs: 7,
            tol: 1e-12,
            ..OptimizerConfig::qngd(0.01, MetricMode::Identity)
        };
        let trace = run_optimizer(&problem, &[0.1, 0.2, 0.3, 0.4], &cfg, None).unwrap();
        assert_eq!(trace.termination, Termination::MaxEpochs);
        // 1 initial evaluation, then 8 shifts + 1 update per epoch.
        assert_eq!(trace.ledger.energy, 1 + 9 * 7);
        assert_eq!(trace.ledger.metric, 0);
        let (per_epoch, breakdown) = qpu_call_count(&trace, 0).unwrap();
        assert_eq!(per_epoch.len(), 7);
        assert_eq!(breakdown.gradient, 56);
        assert_eq!(breakdown.line_search, 7);
    }

    #[test]
    fn ledger_mismatch_detected() {
        let (h, a) = h2_model();
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig {
            max_epochs: 2,
            tol: 1e-12,
            ..OptimizerConfig::qngd(0.1, MetricMode::Identity)
        };
        let mut trace = run_optimizer(&problem, &[0.1, 0.2, 0.3, 0.4], &cfg, None).unwrap();
        trace.ledger.energy += 1;
        assert!(matches!(
            qpu_call_count(&trace, 0),
            Err(Error::LedgerMismatch { .. })
        ));
    }
}
