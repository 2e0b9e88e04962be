use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{RoundMode, SimConfig, SimError};
use crate::graph::{select_initiator, Graph, NodeId, RichNeighbourTable};
use crate::metrics::RoundMetrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeState {
    Ignorant,
    Spreader,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeStatus {
    pub state: NodeState,
    /// Set once the node has sent its first push. A spreader that has not
    /// is "fresh" in the adaptive-push sense.
    pub has_transmitted: bool,
    /// Round in which the node became a spreader (0 for the initiator).
    pub informed_round: Option<u32>,
    /// Requests made while ignorant in pull-mode rounds.
    pub pull_attempts: u32,
}

impl NodeStatus {
    const IGNORANT: Self = Self {
        state: NodeState::Ignorant,
        has_transmitted: false,
        informed_round: None,
        pull_attempts: 0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CallKind {
    Push,
    Pull,
    /// A push-pull contact, where either side may inform the other.
    Exchange,
}

/// One call made during a round, for trace-level checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEvent {
    pub round: u32,
    pub kind: CallKind,
    pub caller: NodeId,
    pub target: NodeId,
    /// Whether the call turned an ignorant node into a spreader.
    pub informed: bool,
}

/// Dynamic state of one dissemination over a fixed topology.
#[derive(Debug, Clone)]
pub struct SimState<'g> {
    graph: &'g Graph,
    rich: &'g RichNeighbourTable,
    nodes: Vec<NodeStatus>,
    round: u32,
    spreaders: usize,
    /// Differential-push fan-out per node, filled on first use.
    fanout: Option<Vec<usize>>,
    trace: Option<Vec<CallEvent>>,
}

impl<'g> SimState<'g> {
    /// Starts a dissemination from `initiator`.
    pub fn new(graph: &'g Graph, rich: &'g RichNeighbourTable, initiator: NodeId) -> Result<Self, SimError> {
        if rich.len() != graph.node_count() {
            return Err(SimError::InvalidConfig(format!(
                "rich table has {} entries for a {}-node graph",
                rich.len(),
                graph.node_count()
            )));
        }
        graph.degree(initiator)?;
        let mut nodes = vec![NodeStatus::IGNORANT; graph.node_count()];
        nodes[initiator] = NodeStatus {
            state: NodeState::Spreader,
            informed_round: Some(0),
            ..NodeStatus::IGNORANT
        };
        Ok(Self {
            graph,
            rich,
            nodes,
            round: 0,
            spreaders: 1,
            fanout: None,
            trace: None,
        })
    }

    /// Validates `cfg` and picks the initiator with `rng`.
    pub fn init<R: Rng + ?Sized>(
        graph: &'g Graph,
        rich: &'g RichNeighbourTable,
        cfg: &SimConfig,
        rng: &mut R,
    ) -> Result<Self, SimError> {
        cfg.validate()?;
        let initiator = select_initiator(graph, cfg.initiator, rng)?;
        Self::new(graph, rich, initiator)
    }

    /// Records every call from now on; see [`SimState::take_trace`].
    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn take_trace(&mut self) -> Vec<CallEvent> {
        self.trace.take().unwrap_or_default()
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn nodes(&self) -> &[NodeStatus] {
        &self.nodes
    }

    pub fn status(&self, v: NodeId) -> &NodeStatus {
        &self.nodes[v]
    }

    /// Rounds executed so far.
    pub fn current_round(&self) -> u32 {
        self.round
    }

    pub fn spreader_count(&self) -> usize {
        self.spreaders
    }

    pub fn is_complete(&self) -> bool {
        self.spreaders == self.nodes.len()
    }

    /// Spreader at the start of the round in progress.
    #[inline]
    fn was_spreader(&self, v: NodeId) -> bool {
        matches!(self.nodes[v].informed_round, Some(r) if r < self.round)
    }

    /// Ignorant at the start of the round in progress.
    #[inline]
    fn was_ignorant(&self, v: NodeId) -> bool {
        !self.was_spreader(v)
    }

    fn inform(&mut self, v: NodeId) -> bool {
        let node = &mut self.nodes[v];
        if node.state == NodeState::Spreader {
            return false;
        }
        node.state = NodeState::Spreader;
        node.informed_round = Some(self.round);
        self.spreaders += 1;
        true
    }

    fn record(&mut self, kind: CallKind, caller: NodeId, target: NodeId, informed: bool) {
        if let Some(trace) = &mut self.trace {
            trace.push(CallEvent {
                round: self.round,
                kind,
                caller,
                target,
                informed,
            });
        }
    }

    fn random_neighbour<R: Rng + ?Sized>(&self, v: NodeId, rng: &mut R) -> Option<NodeId> {
        let nbrs = self.graph.neighbours(v);
        (!nbrs.is_empty()).then(|| nbrs[rng.gen_range(0..nbrs.len())])
    }

    fn begin_round(&mut self) -> u64 {
        self.round += 1;
        self.spreaders as u64
    }

    fn end_round(&self, spreaders_begin: u64, calls: u64) -> RoundMetrics {
        RoundMetrics::new(
            self.round,
            spreaders_begin,
            self.spreaders as u64 - spreaders_begin,
            calls,
        )
    }

    /// Runs one round in the given mode.
    pub fn step<R: Rng + ?Sized>(&mut self, mode: RoundMode, rng: &mut R) -> RoundMetrics {
        match mode {
            RoundMode::Push => self.round_push(rng),
            RoundMode::Pull => self.round_pull(rng),
            RoundMode::PushPull => self.round_push_pull(rng),
            RoundMode::DifferentialPush => self.round_differential_push(rng),
            RoundMode::AdaptivePush => self.round_adaptive_push(rng),
            RoundMode::AdaptivePull => self.round_adaptive_pull(rng),
        }
    }

    fn push_to(&mut self, sender: NodeId, target: NodeId) {
        self.nodes[sender].has_transmitted = true;
        let informed = self.inform(target);
        self.record(CallKind::Push, sender, target, informed);
    }

    /// Every spreader pushes to one uniformly chosen neighbour.
    pub fn round_push<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundMetrics {
        let begin = self.begin_round();
        let mut calls = 0;
        for v in 0..self.nodes.len() {
            if !self.was_spreader(v) {
                continue;
            }
            if let Some(t) = self.random_neighbour(v, rng) {
                self.push_to(v, t);
                calls += 1;
            }
        }
        self.end_round(begin, calls)
    }

    /// Every spreader that has not yet transmitted pushes to its rich
    /// neighbour; the rest push to a uniformly chosen neighbour. Pushes never
    /// look at the target's state.
    pub fn round_adaptive_push<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundMetrics {
        let begin = self.begin_round();
        let mut calls = 0;
        for v in 0..self.nodes.len() {
            if !self.was_spreader(v) {
                continue;
            }
            let target = if self.nodes[v].has_transmitted {
                self.random_neighbour(v, rng)
            } else {
                self.rich.get(v)
            };
            if let Some(t) = target {
                self.push_to(v, t);
                calls += 1;
            }
        }
        self.end_round(begin, calls)
    }

    /// Fan-out `clamp(round(deg(v) / mean neighbour degree), 1, deg(v))`.
    fn differential_fanout(g: &Graph) -> Vec<usize> {
        (0..g.node_count())
            .map(|v| {
                let nbrs = g.neighbours(v);
                if nbrs.is_empty() {
                    return 0;
                }
                let nbr_mean = nbrs.iter().map(|&u| g.neighbours(u).len()).sum::<usize>() as f64 / nbrs.len() as f64;
                let k = (nbrs.len() as f64 / nbr_mean).round() as usize;
                k.clamp(1, nbrs.len())
            })
            .collect()
    }

    /// Every spreader pushes to `k(v)` distinct uniformly chosen neighbours.
    pub fn round_differential_push<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundMetrics {
        let fanout = match self.fanout.take() {
            Some(f) => f,
            None => Self::differential_fanout(self.graph),
        };
        let begin = self.begin_round();
        let mut calls = 0;
        for (v, &k) in fanout.iter().enumerate() {
            if !self.was_spreader(v) {
                continue;
            }
            let graph = self.graph;
            let nbrs = graph.neighbours(v);
            if k == nbrs.len() {
                for &t in nbrs {
                    self.push_to(v, t);
                }
            } else {
                for i in index::sample(rng, nbrs.len(), k) {
                    self.push_to(v, nbrs[i]);
                }
            }
            calls += k as u64;
        }
        self.fanout = Some(fanout);
        self.end_round(begin, calls)
    }

    fn pull_from(&mut self, asker: NodeId, target: NodeId) {
        self.nodes[asker].pull_attempts += 1;
        let informed = self.was_spreader(target) && self.inform(asker);
        self.record(CallKind::Pull, asker, target, informed);
    }

    /// Every ignorant node asks one uniformly chosen neighbour; spreaders
    /// answer every request they receive.
    pub fn round_pull<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundMetrics {
        let begin = self.begin_round();
        let mut calls = 0;
        for v in 0..self.nodes.len() {
            if !self.was_ignorant(v) {
                continue;
            }
            if let Some(t) = self.random_neighbour(v, rng) {
                self.pull_from(v, t);
                calls += 1;
            }
        }
        self.end_round(begin, calls)
    }

    /// Every ignorant node asks its rich neighbour on even attempts and a
    /// uniformly chosen neighbour on odd ones. Spreaders stay silent and only
    /// answer.
    pub fn round_adaptive_pull<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundMetrics {
        let begin = self.begin_round();
        let mut calls = 0;
        for v in 0..self.nodes.len() {
            if !self.was_ignorant(v) {
                continue;
            }
            let target = if self.nodes[v].pull_attempts.is_multiple_of(2) {
                self.rich.get(v)
            } else {
                self.random_neighbour(v, rng)
            };
            if let Some(t) = target {
                self.pull_from(v, t);
                calls += 1;
            }
        }
        self.end_round(begin, calls)
    }

    /// Every node contacts one uniformly chosen neighbour; if exactly one
    /// side was a spreader, the other becomes one.
    pub fn round_push_pull<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundMetrics {
        let begin = self.begin_round();
        let mut calls = 0;
        for v in 0..self.nodes.len() {
            let Some(t) = self.random_neighbour(v, rng) else {
                continue;
            };
            calls += 1;
            let informed = match (self.was_spreader(v), self.was_spreader(t)) {
                (true, false) => {
                    self.nodes[v].has_transmitted = true;
                    self.inform(t)
                }
                (false, true) => {
                    self.nodes[t].has_transmitted = true;
                    self.inform(v)
                }
                _ => false,
            };
            self.record(CallKind::Exchange, v, t, informed);
        }
        self.end_round(begin, calls)
    }
}
