//! Per-round cost and run/experiment summaries.
//!
//! The per-round cost is calls made divided by fresh spreaders produced.
//! In push rounds the calls equal the spreaders of the previous round, so
//! the ratio is 1 when the spreader population doubles and infinite when no
//! ignorant node is reached.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cannot aggregate an empty set of runs")]
    Empty,
    #[error("runs disagree on node count ({0} vs {1})")]
    MixedNodeCounts(usize, usize),
}

/// Per-round cost. `Infinite` when a round informs nobody.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cost {
    Finite(f64),
    Infinite,
}

impl Cost {
    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Cost::Finite(c) => Some(c),
            Cost::Infinite => None,
        }
    }
}

/// Debug float formatting round-trips exactly and keeps a `.0` on integers.
impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(c) => write!(f, "{c:?}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(c) => s.serialize_f64(*c),
            Cost::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(c) => Ok(Cost::Finite(c)),
            Repr::Str(s) if s == "inf" => Ok(Cost::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("invalid cost `{s}`"))),
        }
    }
}

pub fn round_cost(calls: u64, fresh: u64) -> Cost {
    if fresh == 0 {
        Cost::Infinite
    } else {
        Cost::Finite(calls as f64 / fresh as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundMetrics {
    /// 1-based.
    pub round: u32,
    pub spreaders_begin: u64,
    pub fresh: u64,
    pub calls: u64,
    pub cost: Cost,
}

impl RoundMetrics {
    pub fn new(round: u32, spreaders_begin: u64, fresh: u64, calls: u64) -> Self {
        Self {
            round,
            spreaders_begin,
            fresh,
            calls,
            cost: round_cost(calls, fresh),
        }
    }

    pub fn spreaders_end(&self) -> u64 {
        self.spreaders_begin + self.fresh
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub node_count: usize,
    pub rounds: Vec<RoundMetrics>,
    pub total_rounds: u32,
    pub completed: bool,
    pub total_calls: u64,
    /// Mean of the finite per-round costs; `None` if no round was finite.
    pub mean_round_cost: Option<f64>,
    /// Total calls per node that had to be informed; `None` for `n < 2`.
    pub normalized_cost: Option<f64>,
    pub initiator: Option<NodeId>,
    pub initiator_degree: Option<usize>,
}

impl RunResult {
    pub fn with_initiator(mut self, node: NodeId, degree: usize) -> Self {
        self.initiator = Some(node);
        self.initiator_degree = Some(degree);
        self
    }

    /// Spreader count after each round, starting with the count before
    /// round 1.
    pub fn spreader_curve(&self) -> Vec<u64> {
        let start = self
            .rounds
            .first()
            .map_or(self.node_count.min(1) as u64, |r| r.spreaders_begin);
        std::iter::once(start)
            .chain(self.rounds.iter().map(RoundMetrics::spreaders_end))
            .collect()
    }

    pub fn final_spreaders(&self) -> u64 {
        *self.spreader_curve().last().unwrap()
    }
}

/// Summarizes a run from its round list. A run with no rounds is complete
/// only for graphs of at most one node (the initiator).
pub fn summarize_run(rounds: Vec<RoundMetrics>, n: usize) -> RunResult {
    debug_assert!(rounds.iter().enumerate().all(|(i, r)| r.round as usize == i + 1));
    let total_calls = rounds.iter().map(|r| r.calls).sum::<u64>();
    let finite: Vec<f64> = rounds.iter().filter_map(|r| r.cost.finite()).collect();
    let mean_round_cost = (!finite.is_empty()).then(|| finite.iter().sum::<f64>() / finite.len() as f64);
    let normalized_cost = (n >= 2).then(|| total_calls as f64 / (n - 1) as f64);
    let completed = match rounds.last() {
        Some(r) => r.spreaders_end() == n as u64,
        None => n <= 1,
    };
    RunResult {
        node_count: n,
        total_rounds: rounds.len() as u32,
        rounds,
        completed,
        total_calls,
        mean_round_cost,
        normalized_cost,
        initiator: None,
        initiator_degree: None,
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    /// Number of runs that contributed a value.
    pub count: usize,
}

impl Stat {
    /// Values are sorted before summation so the result does not depend on
    /// input order. Returns `None` for an empty input.
    pub fn from_values(mut values: Vec<f64>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let std_dev = if count > 1 {
            let mut sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
            sq.sort_by(f64::total_cmp);
            (sq.iter().sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        // Guard against summation rounding pushing the mean outside its range.
        let (min, max) = (values[0], values[count - 1]);
        Some(Self {
            mean: mean.clamp(min, max),
            std_dev,
            min,
            max,
            count,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub runs: usize,
    pub node_count: usize,
    pub completed_runs: usize,
    pub mean_round_cost: Option<Stat>,
    pub normalized_cost: Option<Stat>,
    pub total_rounds: Stat,
    pub total_calls: Stat,
    /// Mean spreader count after each round (index 0 = before round 1).
    /// Shorter runs are padded with their final count.
    pub spreader_curve: Vec<f64>,
}

pub fn aggregate(results: &[RunResult]) -> Result<AggregateResult, MetricsError> {
    let first = results.first().ok_or(MetricsError::Empty)?;
    let node_count = first.node_count;
    if let Some(r) = results.iter().find(|r| r.node_count != node_count) {
        return Err(MetricsError::MixedNodeCounts(node_count, r.node_count));
    }

    let collect = |f: fn(&RunResult) -> Option<f64>| -> Vec<f64> { results.iter().filter_map(f).collect() };

    let curves: Vec<Vec<u64>> = results.iter().map(RunResult::spreader_curve).collect();
    let longest = curves.iter().map(Vec::len).max().unwrap_or(0);
    let mut sums = vec![0u128; longest];
    for curve in &curves {
        let last = *curve.last().unwrap();
        for (i, slot) in sums.iter_mut().enumerate() {
            *slot += curve.get(i).copied().unwrap_or(last) as u128;
        }
    }
    let spreader_curve = sums.into_iter().map(|s| s as f64 / results.len() as f64).collect();

    Ok(AggregateResult {
        runs: results.len(),
        node_count,
        completed_runs: results.iter().filter(|r| r.completed).count(),
        mean_round_cost: Stat::from_values(collect(|r| r.mean_round_cost)),
        normalized_cost: Stat::from_values(collect(|r| r.normalized_cost)),
        total_rounds: Stat::from_values(collect(|r| Some(r.total_rounds as f64))).unwrap(),
        total_calls: Stat::from_values(collect(|r| Some(r.total_calls as f64))).unwrap(),
        spreader_curve,
    })
}
