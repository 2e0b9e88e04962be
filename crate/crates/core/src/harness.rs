//! Seeded Monte-Carlo experiments.
//!
//! Run `i` of an experiment draws its graph seed and its simulation seed
//! from `(base_seed, i)` alone, so results do not depend on how runs are
//! scheduled across threads. Runs execute on the ambient rayon pool; wrap a
//! call in `ThreadPool::install` to bound parallelism.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_rich_table, generate_ba, BaParams, Graph, GraphError, InitiatorPolicy, RichNeighbourTable};
use crate::metrics::{aggregate, AggregateResult, MetricsError, RunResult, Stat};
use crate::protocol::{default_tr, run, Protocol, SimConfig, SimError, Variant};
use crate::seed::{derive_seed, Stream};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphMode {
    /// A fresh BA graph per run, seeded from `(base_seed, run)`.
    #[default]
    RegeneratePerRun,
    /// One graph generated from `ba.seed`, shared by every run.
    FixedGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Topology parameters; `ba.seed` is only used in [`GraphMode::FixedGraph`].
    pub ba: BaParams,
    pub runs: usize,
    pub graph_mode: GraphMode,
    pub base_seed: u64,
    pub initiator: InitiatorPolicy,
    pub max_rounds: Option<u32>,
}

impl ExperimentSpec {
    pub const DEFAULT_RUNS: usize = 1000;

    pub fn new(ba: BaParams, runs: usize, base_seed: u64) -> Self {
        Self {
            ba,
            runs,
            graph_mode: GraphMode::RegeneratePerRun,
            base_seed,
            initiator: InitiatorPolicy::MinDegree,
            max_rounds: None,
        }
    }

    pub fn graph_mode(mut self, mode: GraphMode) -> Self {
        self.graph_mode = mode;
        self
    }

    pub fn initiator(mut self, policy: InitiatorPolicy) -> Self {
        self.initiator = policy;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::InvalidSpec("runs must be at least 1".into()));
        }
        self.ba.validate()?;
        Ok(())
    }

    /// Simulation config for run `index`.
    pub fn sim_config(&self, variant: Variant, index: usize) -> SimConfig {
        SimConfig {
            variant,
            initiator: self.initiator,
            max_rounds: self.max_rounds,
            seed: derive_seed(self.base_seed, Stream::Simulation, index as u64),
        }
    }

    fn graph_params(&self, index: usize) -> BaParams {
        match self.graph_mode {
            GraphMode::FixedGraph => self.ba,
            GraphMode::RegeneratePerRun => BaParams {
                seed: derive_seed(self.base_seed, Stream::Graph, index as u64),
                ..self.ba
            },
        }
    }
}

/// A topology ready for simulation.
#[derive(Debug, Clone)]
pub struct Topology {
    pub graph: Graph,
    pub rich: RichNeighbourTable,
}

impl Topology {
    /// Fails on isolated nodes, except for the single-node graph where the
    /// rumor is complete before the first round.
    pub fn new(graph: Graph) -> Result<Self, GraphError> {
        let rich = if graph.node_count() <= 1 {
            RichNeighbourTable::build_partial(&graph)
        } else {
            build_rich_table(&graph)?
        };
        Ok(Self { graph, rich })
    }

    pub fn generate(params: &BaParams) -> Result<Self, GraphError> {
        Self::new(generate_ba(params)?)
    }

    pub fn run(&self, cfg: &SimConfig) -> Result<RunResult, SimError> {
        run(&self.graph, &self.rich, cfg)
    }
}

/// Calls `f(run_index, topology)` for every run, in parallel, returning
/// results in run order.
fn for_each_run<T, F>(spec: &ExperimentSpec, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(usize, &Topology) -> Result<T, HarnessError> + Sync,
{
    spec.validate()?;
    let fixed = match spec.graph_mode {
        GraphMode::FixedGraph => Some(Topology::generate(&spec.ba)?),
        GraphMode::RegeneratePerRun => None,
    };
    (0..spec.runs)
        .into_par_iter()
        .map(|i| match &fixed {
            Some(topology) => f(i, topology),
            None => f(i, &Topology::generate(&spec.graph_params(i))?),
        })
        .collect()
}

/// Individual results of `spec.runs` runs of `variant`, in run order.
pub fn run_many(spec: &ExperimentSpec, variant: Variant) -> Result<Vec<RunResult>, HarnessError> {
    for_each_run(spec, |i, t| Ok(t.run(&spec.sim_config(variant, i))?))
}

pub fn repeat_runs(spec: &ExperimentSpec, variant: Variant) -> Result<AggregateResult, HarnessError> {
    Ok(aggregate(&run_many(spec, variant)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tr: u32,
    /// Mean per-round cost across runs; NaN if no run had a finite round.
    pub mean_cost: f64,
    pub std_cost: f64,
    pub mean_rounds: f64,
    pub std_rounds: f64,
    pub mean_normalized_cost: f64,
    pub completed_runs: usize,
}

impl SweepRow {
    fn from_aggregate(tr: u32, agg: &AggregateResult) -> Self {
        let cost = agg
            .mean_round_cost
            .map_or((f64::NAN, f64::NAN), |s| (s.mean, s.std_dev));
        Self {
            tr,
            mean_cost: cost.0,
            std_cost: cost.1,
            mean_rounds: agg.total_rounds.mean,
            std_rounds: agg.total_rounds.std_dev,
            mean_normalized_cost: agg.normalized_cost.map_or(f64::NAN, |s| s.mean),
            completed_runs: agg.completed_runs,
        }
    }
}

/// Sweeps the transition round of an FPTP protocol. Run `i` uses the same
/// graph, initiator and random stream at every TR.
pub fn sweep_tr(
    spec: &ExperimentSpec,
    protocol: Protocol,
    tr_range: RangeInclusive<u32>,
) -> Result<Vec<SweepRow>, HarnessError> {
    if !protocol.has_transition() {
        return Err(HarnessError::InvalidSpec(format!(
            "{protocol} has no transition round to sweep"
        )));
    }
    if tr_range.is_empty() || *tr_range.start() == 0 {
        return Err(HarnessError::InvalidSpec(format!(
            "transition-round range {}..={} is empty or starts at 0",
            tr_range.start(),
            tr_range.end()
        )));
    }
    let trs: Vec<u32> = tr_range.collect();
    let per_run: Vec<Vec<RunResult>> = for_each_run(spec, |i, t| {
        trs.iter()
            .map(|&tr| Ok(t.run(&spec.sim_config(protocol.with_tr(tr), i))?))
            .collect()
    })?;
    trs.iter()
        .enumerate()
        .map(|(k, &tr)| {
            let column: Vec<RunResult> = per_run.iter().map(|runs| runs[k].clone()).collect();
            Ok(SweepRow::from_aggregate(tr, &aggregate(&column)?))
        })
        .collect()
}

/// TR with the smallest mean cost; the smaller TR wins ties. NaN costs are
/// skipped.
pub fn find_optimal_tr(rows: &[SweepRow]) -> Option<u32> {
    let mut best: Option<&SweepRow> = None;
    for row in rows.iter().filter(|r| !r.mean_cost.is_nan()) {
        if best.is_none_or(|b| row.mean_cost < b.mean_cost || (row.mean_cost == b.mean_cost && row.tr < b.tr)) {
            best = Some(row);
        }
    }
    best.map(|r| r.tr)
}

/// One protocol's column pair in a comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub cost: f64,
    pub rounds: f64,
    pub normalized_cost: f64,
    pub completed_runs: usize,
}

impl TableCell {
    fn from_aggregate(agg: &AggregateResult) -> Self {
        let mean = |s: Option<Stat>| s.map_or(f64::NAN, |s| s.mean);
        Self {
            cost: mean(agg.mean_round_cost),
            rounds: agg.total_rounds.mean,
            normalized_cost: mean(agg.normalized_cost),
            completed_runs: agg.completed_runs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub tr: u32,
    pub push: TableCell,
    pub pull: TableCell,
    pub fptp: TableCell,
    pub adaptive_fptp: TableCell,
}

/// Protocols compared in [`comparison_table`], in column order.
pub const TABLE_PROTOCOLS: [Protocol; 4] = [Protocol::Push, Protocol::Pull, Protocol::Fptp, Protocol::AdaptiveFptp];

/// Push, Pull, FPTP and adaptive FPTP (both at `default_tr(n)`) for each
/// size, from `template` with `n` replaced. Within a size, run `i` of every
/// protocol shares its graph and initiator.
pub fn comparison_table(template: &ExperimentSpec, sizes: &[usize]) -> Result<Vec<TableRow>, HarnessError> {
    sizes
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(HarnessError::InvalidSpec(format!("size {n} is below 2 nodes")));
            }
            let spec = ExperimentSpec {
                ba: template.ba.fitted_to(n),
                ..*template
            };
            let tr = default_tr(n);
            let per_run: Vec<[RunResult; 4]> = for_each_run(&spec, |i, t| {
                let mut out = Vec::with_capacity(4);
                for p in TABLE_PROTOCOLS {
                    out.push(t.run(&spec.sim_config(p.with_tr(tr), i))?);
                }
                Ok(out.try_into().expect("four protocols"))
            })?;
            let cell = |k: usize| -> Result<TableCell, HarnessError> {
                let column: Vec<RunResult> = per_run.iter().map(|r| r[k].clone()).collect();
                Ok(TableCell::from_aggregate(&aggregate(&column)?))
            };
            Ok(TableRow {
                n,
                tr,
                push: cell(0)?,
                pull: cell(1)?,
                fptp: cell(2)?,
                adaptive_fptp: cell(3)?,
            })
        })
        .collect()
}
