use serde::Serialize;

use crate::conversion::ConversionRun;
use crate::error::{Error, Result};
use crate::math::RealVector;
use crate::online::OnlineTrace;
use crate::strongly_convex::{GridSearchRun, GuessCheckRun};

/// One output row. Fields an algorithm does not produce are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub round: usize,
    pub queries: usize,
    pub subopt: Option<f64>,
    pub regret_partial: Option<f64>,
    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub accepted: Option<bool>,
}

impl TraceRecord {
    fn new(round: usize, queries: usize) -> Self {
        TraceRecord { round, queries, subopt: None, regret_partial: None, eta: None, beta: None, accepted: None }
    }
}

/// Algorithm-independent view of a run.
#[derive(Clone, Debug, Serialize)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub final_point: RealVector,
    pub final_value: f64,
    pub total_queries: usize,
}

impl RunTrace {
    /// Suboptimality is `value - optimum` when the optimum is known.
    pub fn from_conversion(run: &ConversionRun, optimum: Option<f64>) -> Self {
        let records = run
            .rounds
            .iter()
            .map(|r| TraceRecord {
                subopt: optimum.map(|o| r.value - o),
                eta: r.eta,
                ..TraceRecord::new(r.t, r.queries)
            })
            .collect();
        RunTrace {
            records,
            final_point: run.x_bar.clone(),
            final_value: run.rounds.last().map_or(f64::NAN, |r| r.value),
            total_queries: run.queries,
        }
    }

    /// One row per gradient query, the first being the initial query at `x_1`.
    pub fn from_guess_check(run: &GuessCheckRun, optimum: Option<f64>) -> Self {
        let mut records = vec![TraceRecord {
            subopt: optimum.map(|o| run.initial_value - o),
            beta: Some(run.beta1),
            accepted: Some(true),
            ..TraceRecord::new(1, 1)
        }];
        records.extend(run.steps.iter().map(|s| TraceRecord {
            subopt: optimum.map(|o| s.value - o),
            eta: Some(s.eta),
            beta: Some(s.beta),
            accepted: Some(s.accepted),
            ..TraceRecord::new(s.t, s.queries)
        }));
        RunTrace { records, final_point: run.x_bar.clone(), final_value: run.value, total_queries: run.queries }
    }

    /// One row per grid instance with cumulative queries; `accepted` marks the
    /// instances that improved on everything before them.
    pub fn from_grid(run: &GridSearchRun, optimum: Option<f64>, start_value: f64) -> Self {
        let mut queries = run.probe_queries;
        let mut best = start_value;
        let records = run
            .instances
            .iter()
            .map(|inst| {
                queries += inst.run.as_ref().map_or(0, |r| r.queries);
                let improved = inst.run.is_some() && inst.value < best;
                if improved {
                    best = inst.value;
                }
                TraceRecord {
                    subopt: optimum.map(|o| best - o),
                    accepted: Some(improved),
                    ..TraceRecord::new(inst.index, queries)
                }
            })
            .collect();
        RunTrace { records, final_point: run.x.clone(), final_value: run.value, total_queries: run.queries }
    }

    /// Online rows carry partial regret against `comparator_partials`
    /// (as produced by `partial_regret`).
    pub fn from_online(trace: &OnlineTrace, partials: &[(usize, f64)]) -> Result<Self> {
        if partials.len() != trace.rounds.len() {
            return Err(Error::DimensionMismatch { expected: trace.rounds.len(), found: partials.len() });
        }
        let records = trace
            .rounds
            .iter()
            .zip(partials)
            .map(|(r, (_, reg))| TraceRecord {
                regret_partial: Some(*reg),
                eta: Some(r.eta),
                ..TraceRecord::new(r.t, r.t)
            })
            .collect();
        Ok(RunTrace {
            records,
            final_point: trace.rounds.last().map(|r| r.x.clone()).expect("at least one round"),
            final_value: trace.total_loss,
            total_queries: trace.queries,
        })
    }

    /// Keeps the first row, the last row and every row whose round is a
    /// multiple of `stride`.
    pub fn thinned(&self, stride: usize) -> RunTrace {
        let stride = stride.max(1);
        let n = self.records.len();
        let records = self
            .records
            .iter()
            .enumerate()
            .filter(|(i, r)| *i == 0 || *i + 1 == n || r.round % stride == 0)
            .map(|(_, r)| r.clone())
            .collect();
        RunTrace { records, ..self.clone() }
    }

    /// Rounds strictly increase across accepted rows and queries never decrease.
    pub fn validate(&self) -> Result<()> {
        let mut last_round = 0;
        let mut last_queries = 0;
        for r in &self.records {
            if r.queries < last_queries {
                return Err(Error::ContractViolation(format!("queries decrease at round {}", r.round)));
            }
            last_queries = r.queries;
            if r.accepted != Some(false) {
                if r.round <= last_round {
                    return Err(Error::ContractViolation(format!("round {} repeats", r.round)));
                }
                last_round = r.round;
            }
        }
        Ok(())
    }

    pub fn final_subopt(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.subopt)
    }
}
