//! Line search, optimizer loop and call accounting.

use approx::assert_relative_eq;
use proptest::prelude::*;
use qngd_core::metric::metric_circuit_count;
use qngd_core::models::{h2_model, tfi_model, TfiSetup};
use qngd_core::optimize::{armijo_search, qpu_call_count, OptimizerConfig, Termination};
use qngd_core::{random_init, run_optimizer, MetricMode, Problem, Scheme};

fn quadratic(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn armijo_returns_first_admissible_exponent(
        x0 in prop::collection::vec(-3.0f64..3.0, 1..5),
        scale in 0.1f64..20.0,
        alpha in 0.001f64..0.5,
        beta in 0.05f64..4.0,
        k_max in 0u32..10,
    ) {
        prop_assume!(quadratic(&x0) > 1e-6);
        let cost = |x: &[f64]| Ok(scale * quadratic(x));
        let f0 = scale * quadratic(&x0);
        let d: Vec<f64> = x0.iter().map(|v| 2.0 * scale * v).collect();
        let d2 = quadratic(&d);
        let s = armijo_search(cost, &x0, f0, &d, alpha, beta, k_max).unwrap();

        let admissible = |k: u32| {
            let step = beta / (1u64 << k) as f64;
            let x: Vec<f64> = x0.iter().zip(&d).map(|(a, b)| a - step * b).collect();
            f0 - scale * quadratic(&x) >= alpha * step * d2
        };
        let brute = (0..=k_max).find(|&k| admissible(k));
        prop_assert_eq!(s.k, brute);
        let k_used = s.k.unwrap_or(k_max);
        prop_assert_eq!(s.step, beta / (1u64 << k_used) as f64);
        prop_assert_eq!(s.trials, s.k.map_or(k_max + 1, |k| k + 1));
        prop_assert_eq!(s.energy, scale * quadratic(&s.theta));
        if s.k.is_some() {
            prop_assert!(f0 - s.energy >= alpha * s.step * d2);
        }
    }
}

#[test]
fn armijo_backs_off_on_a_cliff() {
    // Steep wall beyond |x| > 1: large steps overshoot into it.
    let cost = |x: &[f64]| {
        let v = x[0];
        Ok(if v.abs() > 1.0 { 100.0 * v * v } else { v * v })
    };
    let s = armijo_search(cost, &[0.9], 0.81, &[1.8], 0.01, 4.0, 6).unwrap();
    for k in 0..s.k.unwrap() {
        let step = 4.0 / (1u64 << k) as f64;
        let x = 0.9 - step * 1.8;
        let f = if x.abs() > 1.0 { 100.0 * x * x } else { x * x };
        assert!(0.81 - f < 0.01 * step * 1.8 * 1.8);
    }
    assert!(s.energy < 0.81);
}

#[test]
fn adaptive_runs_satisfy_sufficient_decrease() {
    let (h, a) = h2_model();
    for seed in 0..10 {
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig::adapt_qngd(0.5, MetricMode::Full);
        let trace = run_optimizer(&problem, &random_init(4, seed), &cfg, None).unwrap();
        for r in &trace.records {
            if r.k.is_some() {
                assert!(
                    r.energy_before - r.energy
                        >= cfg.alpha * r.step_size * r.grad_norm.powi(2) - 1e-15
                );
                assert!(r.energy <= r.energy_before);
            } else {
                assert!(r.stagnated);
                assert_eq!(r.step_size, cfg.beta / 64.0);
            }
            let ks: Vec<f64> = (0..=cfg.k_max).map(|k| cfg.armijo_step(k)).collect();
            assert!(ks.contains(&r.step_size));
        }
    }
}

#[test]
fn h2_adaptive_converges_near_ground_energy() {
    let (h, a) = h2_model();
    let exact = h.exact_ground_energy().unwrap();
    assert_relative_eq!(exact, -0.8246211251235321, epsilon = 1e-12);
    let mut converged = 0;
    for seed in 0..10 {
        let problem = Problem::exact(&a, &h).unwrap();
        let cfg = OptimizerConfig::adapt_qngd(0.5, MetricMode::Full);
        let trace = run_optimizer(&problem, &random_init(4, seed), &cfg, Some(exact)).unwrap();
        if trace.termination == Termination::Converged {
            converged += 1;
            assert!(trace.final_energy() - exact < cfg.tol);
        }
        assert!(trace.min_energy() >= exact - 1e-12);
    }
    assert!(converged >= 8, "{converged}/10 converged");
}

#[test]
fn runs_are_deterministic() {
    let (h, a) = tfi_model(3, 0.1, TfiSetup::Minimal).unwrap();
    let theta = random_init(a.n_params(), 42);
    let run = || {
        let problem = Problem::exact(&a, &h).unwrap();
        run_optimizer(
            &problem,
            &theta,
            &OptimizerConfig::adapt_qngd(1.0, MetricMode::BlockDiagonal),
            None,
        )
        .unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn fixed_step_h2_call_count() {
    let (h, a) = h2_model();
    let problem = Problem::exact(&a, &h).unwrap();
    let mut cfg = OptimizerConfig::qngd(0.05, MetricMode::Identity);
    cfg.max_epochs = 7;
    cfg.tol = 1e-12;
    let trace = run_optimizer(&problem, &random_init(4, 3), &cfg, None).unwrap();
    assert_eq!(trace.termination, Termination::MaxEpochs);
    // 1 initial + 7 × (8 shifted + 1 update).
    assert_eq!(trace.ledger.energy, 1 + 9 * 7);
    assert_eq!(trace.ledger.metric, 0);
    let (per_epoch, breakdown) = qpu_call_count(&trace, 0).unwrap();
    assert_eq!(per_epoch, vec![(8, 0, 1); 7]);
    assert_eq!(breakdown.total(), trace.total_calls());
}

#[test]
fn ledger_matches_closed_form_for_every_metric() {
    let (h, a) = tfi_model(4, 0.1, TfiSetup::Overparam).unwrap();
    for mode in [
        MetricMode::Identity,
        MetricMode::BlockDiagonal,
        MetricMode::Full,
    ] {
        let problem = Problem::exact(&a, &h).unwrap();
        let mut cfg = OptimizerConfig::adapt_qngd(1.0, mode);
        cfg.max_epochs = 15;
        let trace = run_optimizer(&problem, &random_init(a.n_params(), 8), &cfg, None).unwrap();
        let count = metric_circuit_count(&a, mode);
        let (_, breakdown) = qpu_call_count(&trace, count).unwrap();
        assert_eq!(breakdown.total(), trace.ledger.total());
        let last = trace.records.last().unwrap();
        assert_eq!(last.cumulative_calls, trace.ledger.total());
        if let Scheme::Adaptive = trace.scheme {
            let trials: u64 = trace
                .records
                .iter()
                .map(|r| r.line_search_trials as u64)
                .sum();
            assert_eq!(breakdown.line_search, trials);
        }
    }
}

#[test]
fn gradient_norm_stopping_charges_terminal_gradient() {
    let (h, a) = h2_model();
    let problem = Problem::exact(&a, &h).unwrap();
    let mut cfg = OptimizerConfig::adapt_qngd(0.5, MetricMode::BlockDiagonal);
    cfg.stopping = qngd_core::optimize::StoppingRule::GradientNorm;
    cfg.tol = 1e-3;
    let trace = run_optimizer(&problem, &random_init(4, 1), &cfg, None).unwrap();
    assert_eq!(trace.termination, Termination::Converged);
    assert_eq!(trace.terminal_energy_evals, 8);
    assert_eq!(trace.terminal_metric_evals, 2);
    qpu_call_count(&trace, 2).unwrap();
}
