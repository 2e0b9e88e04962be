use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CallEvent, SimConfig, SimError, SimState};
use crate::graph::{Graph, RichNeighbourTable};
use crate::metrics::{summarize_run, RunResult};

/// Runs a dissemination to completion or until the round cap. The initiator
/// and every random choice are drawn from one stream seeded by `cfg.seed`.
pub fn run(g: &Graph, rich: &RichNeighbourTable, cfg: &SimConfig) -> Result<RunResult, SimError> {
    run_inner(g, rich, cfg, false).map(|(r, _)| r)
}

/// [`run`], also returning every call made.
pub fn run_traced(
    g: &Graph,
    rich: &RichNeighbourTable,
    cfg: &SimConfig,
) -> Result<(RunResult, Vec<CallEvent>), SimError> {
    run_inner(g, rich, cfg, true)
}

fn run_inner(
    g: &Graph,
    rich: &RichNeighbourTable,
    cfg: &SimConfig,
    traced: bool,
) -> Result<(RunResult, Vec<CallEvent>), SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = SimState::init(g, rich, cfg, &mut rng)?;
    if traced {
        state.enable_trace();
    }
    let initiator = state
        .nodes()
        .iter()
        .position(|n| n.informed_round == Some(0))
        .expect("initiator is informed at round 0");

    let cap = cfg.effective_max_rounds(g.node_count());
    let mut rounds = Vec::new();
    while !state.is_complete() && state.current_round() < cap {
        let mode = cfg.variant.mode_for_round(state.current_round() + 1);
        rounds.push(state.step(mode, &mut rng));
    }

    let result = summarize_run(rounds, g.node_count()).with_initiator(initiator, g.neighbours(initiator).len());
    Ok((result, state.take_trace()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{build_rich_table, generate_ba, BaParams, InitiatorPolicy};
    use crate::protocol::{CallKind, Variant};

    #[test]
    fn single_node_completes_immediately() {
        let g = Graph::from_edges(1, []).unwrap();
        let rich = RichNeighbourTable::build_partial(&g);
        let r = run(&g, &rich, &SimConfig::new(Variant::Push)).unwrap();
        assert!(r.completed);
        assert_eq!((r.total_rounds, r.total_calls), (0, 0));
    }

    #[test]
    fn k2_adaptive_fptp() {
        let g = k2();
        let rich = build_rich_table(&g).unwrap();
        let cfg = SimConfig::new(Variant::AdaptiveFptp { tr: 2 }).initiator(InitiatorPolicy::Explicit(0));
        let r = run(&g, &rich, &cfg).unwrap();
        assert!(r.completed);
        assert_eq!((r.total_rounds, r.total_calls), (1, 1));
    }

    #[test]
    fn tr_one_never_pushes() {
        let g = generate_ba(&BaParams::new(512, 2, 3)).unwrap();
        let rich = build_rich_table(&g).unwrap();
        let cfg = SimConfig::new(Variant::AdaptiveFptp { tr: 1 }).seed(3);
        let (r, trace) = run_traced(&g, &rich, &cfg).unwrap();
        assert!(r.completed);
        assert!(trace.iter().all(|e| e.kind == CallKind::Pull));

        // identical to pure adaptive pull with the same seed
        let pull = run(&g, &rich, &SimConfig::new(Variant::AdaptivePull).seed(3)).unwrap();
        assert_eq!(pull.rounds, r.rounds);
    }

    #[test]
    fn round_cap_reports_incomplete() {
        let g = path(50);
        let rich = build_rich_table(&g).unwrap();
        let cfg = SimConfig::new(Variant::Push)
            .initiator(InitiatorPolicy::Explicit(0))
            .max_rounds(3);
        let r = run(&g, &rich, &cfg).unwrap();
        assert!(!r.completed);
        assert_eq!(r.total_rounds, 3);
    }

    #[test]
    fn invalid_config_rejected() {
        let g = k2();
        let rich = build_rich_table(&g).unwrap();
        assert!(run(&g, &rich, &SimConfig::new(Variant::Fptp { tr: 0 })).is_err());
        let cfg = SimConfig::new(Variant::Pull).initiator(InitiatorPolicy::OfDegree(5));
        assert!(matches!(run(&g, &rich, &cfg), Err(SimError::Graph(_))));
    }

    #[test]
    fn reports_initiator() {
        let g = star(4);
        let rich = build_rich_table(&g).unwrap();
        let cfg = SimConfig::new(Variant::Pull).initiator(InitiatorPolicy::MaxDegree);
        let r = run(&g, &rich, &cfg).unwrap();
        assert_eq!((r.initiator, r.initiator_degree), (Some(0), Some(4)));
        assert_eq!(r.total_rounds, 1);
    }
}
