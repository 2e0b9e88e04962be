use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};

/// Parameters of the Barabási–Albert preferential-attachment model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaParams {
    /// Final node count.
    pub n: usize,
    /// Edges attached per new node.
    pub m: usize,
    /// Size of the complete seed core.
    pub m0: usize,
    pub seed: u64,
}

impl BaParams {
    /// `m0` defaults to `m + 1`.
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self { n, m, m0: m + 1, seed }
    }

    pub fn with_core(mut self, m0: usize) -> Self {
        self.m0 = m0;
        self
    }

    /// Same `m`/`m0` at size `n`, shrinking the core (and `m` with it)
    /// when `n` is too small to hold it.
    pub fn fitted_to(mut self, n: usize) -> Self {
        self.n = n;
        if self.m0 > n {
            self.m0 = n.max(1);
            self.m = self.m.min(n.saturating_sub(1)).max(1);
        }
        self
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.m == 0 {
            return Err(GraphError::InvalidParams("m must be at least 1".into()));
        }
        if self.m0 < self.m {
            return Err(GraphError::InvalidParams(format!(
                "m0 ({}) must be at least m ({})",
                self.m0, self.m
            )));
        }
        if self.n < self.m0 {
            return Err(GraphError::InvalidParams(format!(
                "n ({}) must be at least m0 ({})",
                self.n, self.m0
            )));
        }
        Ok(())
    }

    /// C(m0, 2) + m·(n − m0).
    pub fn expected_edge_count(&self) -> usize {
        self.m0 * self.m0.saturating_sub(1) / 2 + self.m * (self.n - self.m0)
    }
}

impl Default for BaParams {
    fn default() -> Self {
        Self::new(4096, 2, 0)
    }
}

/// Generates a BA graph: a complete core on `m0` nodes, then each new node
/// links to `m` distinct existing nodes drawn proportionally to degree.
///
/// Degree-proportional draws come from the endpoint list (every edge
/// contributes both endpoints); duplicates within one node's draw are
/// rejected and redrawn.
pub fn generate_ba(params: &BaParams) -> Result<Graph, GraphError> {
    params.validate()?;
    let BaParams { n, m, m0, seed } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * params.expected_edge_count());
    for u in 0..m0 {
        for v in (u + 1)..m0 {
            adjacency[u].push(v);
            adjacency[v].push(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for new in m0..n {
        targets.clear();
        while targets.len() < m {
            // Only a single-node core has no edges to weight by.
            let t = if endpoints.is_empty() {
                rng.gen_range(0..new)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            adjacency[new].push(t);
            adjacency[t].push(new);
            endpoints.push(new);
            endpoints.push(t);
        }
    }

    Ok(Graph::from_adjacency_unchecked(adjacency))
}
