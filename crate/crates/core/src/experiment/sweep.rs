use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::config::ExperimentConfig;
use crate::experiment::output::write_atomic;
use crate::experiment::runner::{run_experiment, Summary};
use crate::metrics::loglog_fit;

/// Caps the number of sweep runs executing at once.
pub const THREADS_ENV: &str = "HOLDEROPT_THREADS";

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub budget: usize,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// Log-log slope of final suboptimality against total queries, over the
    /// budgets whose final suboptimality is positive.
    pub slope: Option<f64>,
    pub slope_r_squared: Option<f64>,
}

pub fn parse_budgets(list: &str) -> Result<Vec<usize>> {
    let budgets: Vec<usize> = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&b| b > 0)
                .ok_or_else(|| Error::Config(format!("budgets: cannot parse '{}' as a positive integer", s.trim())))
        })
        .collect::<Result<_>>()?;
    if budgets.is_empty() {
        return Err(Error::Config("budgets: empty list".into()));
    }
    Ok(budgets)
}

/// Thread count from the environment, `None` when unset.
pub fn sweep_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV}: expected a positive integer, got '{v}'"))),
    }
}

/// `dir/name.ext` -> `dir/name.T{budget}.ext`.
fn tagged(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

/// Runs the configuration once per budget, writing per-budget outputs next to
/// the configured paths and an aggregate `*.sweep.json` record.
pub fn run_sweep(cfg: &ExperimentConfig, budgets: &[usize], threads: Option<usize>) -> Result<SweepReport> {
    let configs: Vec<ExperimentConfig> = budgets
        .iter()
        .map(|&b| {
            let mut c = cfg.clone();
            c.budget = b;
            let tag = format!("T{b}");
            c.output.trace_path = cfg.output.trace_path.as_deref().map(|p| tagged(p, &tag));
            c.output.summary_path = cfg.output.summary_path.as_deref().map(|p| tagged(p, &tag));
            c.validate().map(|_| c)
        })
        .collect::<Result<_>>()?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Io(e.to_string()))?;
    let summaries: Vec<Summary> =
        pool.install(|| configs.par_iter().map(|c| run_experiment(c).map(|o| o.summary)).collect::<Result<_>>())?;

    let entries: Vec<SweepEntry> =
        budgets.iter().zip(summaries).map(|(&budget, summary)| SweepEntry { budget, summary }).collect();
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.summary.final_subopt.map(|s| (e.summary.total_queries as f64, s)))
        .filter(|&(_, s)| s > 0.0)
        .collect();
    let fit = loglog_fit(&pts).ok();
    let report = SweepReport { entries, slope: fit.map(|f| f.slope), slope_r_squared: fit.map(|f| f.r_squared) };

    if let Some(p) = &cfg.output.summary_path {
        let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
        write_atomic(&tagged(p, "sweep"), json.as_bytes())?;
    }
    Ok(report)
}
