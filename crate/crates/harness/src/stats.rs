//! EoT distributions per scheme.

use serde::{Deserialize, Serialize};

use crate::experiment::ExperimentResult;
use crate::HarnessError;

/// Nearest-rank percentile of sorted data: the value at rank `⌈q·n⌉`.
pub fn nearest_rank(sorted: &[usize], q: f64) -> Option<usize> {
    if sorted.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub eot: usize,
    /// Fraction of all runs of the scheme with EoT ≤ `eot`.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub scheme_index: usize,
    pub scheme: String,
    pub n_runs: usize,
    pub n_converged: usize,
    pub converged_fraction: f64,
    pub median: usize,
    pub p25: usize,
    pub p75: usize,
    pub mean_calls: f64,
    /// One point per distinct converged EoT. Unconverged runs never enter,
    /// so the last fraction equals `converged_fraction`.
    pub cdf: Vec<CdfPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub sentinel: usize,
    pub schemes: Vec<SchemeSummary>,
}

impl Summary {
    pub fn scheme(&self, label: &str) -> Option<&SchemeSummary> {
        self.schemes.iter().find(|s| s.scheme == label)
    }
}

/// Summarises each scheme of the grid, in grid order. Independent of the
/// order of `result.records`.
pub fn summarize(result: &ExperimentResult) -> Result<Summary, HarnessError> {
    if result.records.is_empty() {
        return Err(HarnessError::Empty);
    }
    let sentinel = result.spec.sentinel();
    let mut schemes = Vec::new();
    for (index, entry) in result.spec.grid.iter().enumerate() {
        let runs: Vec<_> = result.for_scheme(index).collect();
        if runs.is_empty() {
            continue;
        }
        let mut eots: Vec<usize> = runs.iter().map(|r| r.eot).collect();
        eots.sort_unstable();
        let n = eots.len();
        let n_converged = runs.iter().filter(|r| r.converged).count();
        let calls: u64 = runs.iter().map(|r| r.total_calls).sum();

        let mut cdf: Vec<CdfPoint> = Vec::new();
        for (i, &eot) in eots.iter().enumerate() {
            if eot >= sentinel {
                break;
            }
            let fraction = (i + 1) as f64 / n as f64;
            match cdf.last_mut() {
                Some(last) if last.eot == eot => last.fraction = fraction,
                _ => cdf.push(CdfPoint { eot, fraction }),
            }
        }

        schemes.push(SchemeSummary {
            scheme_index: index,
            scheme: entry.scheme.to_string(),
            n_runs: n,
            n_converged,
            converged_fraction: n_converged as f64 / n as f64,
            median: nearest_rank(&eots, 0.5).expect("nonempty"),
            p25: nearest_rank(&eots, 0.25).expect("nonempty"),
            p75: nearest_rank(&eots, 0.75).expect("nonempty"),
            mean_calls: calls as f64 / n as f64,
            cdf,
        });
    }
    Ok(Summary { sentinel, schemes })
}
