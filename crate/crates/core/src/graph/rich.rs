use super::{Graph, GraphError, NodeId};

/// For every node, the neighbour with the highest degree (smallest id on
/// ties). Computed once; the topology never changes during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RichNeighbourTable {
    rich: Vec<Option<NodeId>>,
}

impl RichNeighbourTable {
    /// Like [`build_rich_table`], but isolated nodes simply get no entry
    /// instead of failing the build. Isolated nodes never send or receive,
    /// so simulations on such graphs are still well defined.
    pub fn build_partial(g: &Graph) -> Self {
        let rich = (0..g.node_count())
            .map(|v| {
                let mut best: Option<(NodeId, usize)> = None;
                // Neighbour lists are ascending, so strict `>` keeps the
                // smallest id among equal degrees.
                for &u in g.neighbours(v) {
                    let d = g.neighbours(u).len();
                    if best.is_none_or(|(_, bd)| d > bd) {
                        best = Some((u, d));
                    }
                }
                best.map(|(u, _)| u)
            })
            .collect();
        Self { rich }
    }

    /// Rich neighbour of `v`, `None` for an isolated node.
    #[inline]
    pub fn get(&self, v: NodeId) -> Option<NodeId> {
        self.rich[v]
    }

    pub fn len(&self) -> usize {
        self.rich.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rich.is_empty()
    }
}

/// Builds the rich-neighbour table. Every node must have at least one
/// neighbour.
pub fn build_rich_table(g: &Graph) -> Result<RichNeighbourTable, GraphError> {
    let table = RichNeighbourTable::build_partial(g);
    if let Some(v) = table.rich.iter().position(Option::is_none) {
        return Err(GraphError::IsolatedNode(v));
    }
    Ok(table)
}
