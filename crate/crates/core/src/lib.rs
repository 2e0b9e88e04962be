//! Deterministic, seedable simulator for rumor spreading on scale-free
//! networks.
//!
//! * [`graph`]: Barabási–Albert topologies, rich-neighbour table, edge lists.
//! * [`protocol`]: round engines for push, pull, push-pull, differential
//!   push, their adaptive forms and the first-push-then-pull orchestration.
//! * [`metrics`]: per-round cost, run summaries and cross-run aggregates.
//! * [`harness`]: seeded multi-run experiments, TR sweeps, comparison tables.

pub mod graph;
pub mod harness;
pub mod metrics;
pub mod protocol;
pub mod seed;

pub use graph::{
    build_rich_table, generate_ba, load_edge_list, save_edge_list, select_initiator, BaParams, Graph, GraphError,
    InitiatorPolicy, NodeId, RichNeighbourTable,
};
pub use harness::{
    comparison_table, find_optimal_tr, repeat_runs, run_many, sweep_tr, ExperimentSpec, GraphMode, HarnessError,
    SweepRow, TableCell, TableRow, Topology,
};
pub use metrics::{aggregate, round_cost, summarize_run, AggregateResult, Cost, RoundMetrics, RunResult, Stat};
pub use protocol::{default_tr, run, run_traced, Protocol, RoundMode, SimConfig, SimError, SimState, Variant};
