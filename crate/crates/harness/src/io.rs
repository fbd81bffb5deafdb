//! Result JSON and CSV tables.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use qngd_core::optimize::OptimizerTrace;

use crate::experiment::ExperimentResult;
use crate::stats::Summary;
use crate::HarnessError;

pub const TRACE_HEADER: [&str; 7] = [
    "epoch",
    "energy",
    "step_size",
    "k",
    "grad_norm",
    "energy_evals",
    "metric_evals",
];

pub const SUMMARY_HEADER: [&str; 9] = [
    "scheme",
    "n_runs",
    "n_converged",
    "converged_fraction",
    "median",
    "p25",
    "p75",
    "mean_calls",
    "sentinel",
];

pub const CDF_HEADER: [&str; 3] = ["scheme", "eot", "fraction"];

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_owned(),
        source,
    }
}

pub fn write_result(path: &Path, result: &ExperimentResult) -> Result<(), HarnessError> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    serde_json::to_writer_pretty(&mut w, result)?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_result(path: &Path) -> Result<ExperimentResult, HarnessError> {
    let r = BufReader::new(File::open(path).map_err(io_err(path))?);
    Ok(serde_json::from_reader(r)?)
}

/// Epoch 0 is the starting point; `k` is empty for fixed steps and for
/// epochs where no trial passed the Armijo test.
pub fn write_trace<W: Write>(w: W, trace: &OptimizerTrace) -> Result<(), HarnessError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(TRACE_HEADER)?;
    csv.write_record([
        "0".into(),
        trace.initial_energy.to_string(),
        String::new(),
        String::new(),
        String::new(),
        "1".into(),
        "0".into(),
    ])?;
    for r in &trace.records {
        csv.write_record([
            r.epoch.to_string(),
            r.energy.to_string(),
            r.step_size.to_string(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            r.grad_norm.to_string(),
            r.energy_evals.to_string(),
            r.metric_evals.to_string(),
        ])?;
    }
    csv.flush().map_err(HarnessError::Write)
}

pub fn write_summary<W: Write>(w: W, summary: &Summary) -> Result<(), HarnessError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(SUMMARY_HEADER)?;
    for s in &summary.schemes {
        csv.write_record([
            s.scheme.clone(),
            s.n_runs.to_string(),
            s.n_converged.to_string(),
            s.converged_fraction.to_string(),
            s.median.to_string(),
            s.p25.to_string(),
            s.p75.to_string(),
            s.mean_calls.to_string(),
            summary.sentinel.to_string(),
        ])?;
    }
    csv.flush().map_err(HarnessError::Write)
}

pub fn write_cdf<W: Write>(w: W, summary: &Summary) -> Result<(), HarnessError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(CDF_HEADER)?;
    for s in &summary.schemes {
        for p in &s.cdf {
            csv.write_record([s.scheme.clone(), p.eot.to_string(), p.fraction.to_string()])?;
        }
    }
    csv.flush().map_err(HarnessError::Write)
}
