//! Static undirected topologies: Barabási–Albert generation, rich-neighbour
//! lookup, initiator selection and the edge-list file format.

mod ba;
mod initiator;
mod io;
mod rich;

pub use ba::{generate_ba, BaParams};
pub use initiator::{select_initiator, InitiatorPolicy};
pub use io::{load_edge_list, save_edge_list, EdgeListError};
pub use rich::{build_rich_table, RichNeighbourTable};

use thiserror::Error;

/// Index of a node, `0..node_count`.
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid BA parameters: {0}")]
    InvalidParams(String),
    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("node {0} is isolated")]
    IsolatedNode(NodeId),
    #[error("no node has degree {0}")]
    NoNodeOfDegree(usize),
    #[error("edge {0}-{1} is a self-loop")]
    SelfLoop(NodeId, NodeId),
    #[error("edge {0}-{1} appears more than once")]
    DuplicateEdge(NodeId, NodeId),
}

/// An immutable undirected simple graph.
///
/// Neighbour lists are kept sorted ascending, so two graphs with the same
/// edge set compare equal regardless of how they were built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        let mut edge_count = 0;
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Self { adjacency, edge_count })
    }

    /// Wraps adjacency lists that are already symmetric and duplicate-free.
    pub(crate) fn from_adjacency_unchecked(mut adjacency: Vec<Vec<NodeId>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Self { adjacency, edge_count }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbours of `v` in ascending id order. Panics if `v` is out of range.
    pub fn neighbours(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: NodeId) -> Result<usize, GraphError> {
        self.adjacency.get(v).map(Vec::len).ok_or(GraphError::NodeOutOfRange {
            node: v,
            node_count: self.node_count(),
        })
    }

    pub fn degrees(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adjacency.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count as f64 / self.node_count() as f64
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Breadth-first connectivity check.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }
}
