//! Independent oracles and invariant checks shared by the integration tests.
//! Nothing here calls into the round engines.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use gossipsim_core::protocol::{CallEvent, CallKind};
use gossipsim_core::{Cost, Graph, NodeId, RichNeighbourTable, RoundMode, RunResult, Variant};

/// Argmax by degree, then smallest id, by scanning every neighbour.
pub fn brute_force_rich(g: &Graph) -> Vec<Option<NodeId>> {
    (0..g.node_count())
        .map(|v| {
            let nbrs = g.neighbours(v);
            let best = nbrs.iter().map(|&u| g.neighbours(u).len()).max()?;
            nbrs.iter().copied().filter(|&u| g.neighbours(u).len() == best).min()
        })
        .collect()
}

pub fn rich_matches_oracle(g: &Graph, table: &RichNeighbourTable) -> bool {
    brute_force_rich(g)
        .into_iter()
        .enumerate()
        .all(|(v, want)| table.get(v) == want)
}

/// Differential-push fan-out recomputed from its definition.
pub fn fanout(g: &Graph, v: NodeId) -> u64 {
    let d = g.neighbours(v).len();
    let mean: f64 = g
        .neighbours(v)
        .iter()
        .map(|&u| g.neighbours(u).len() as f64)
        .sum::<f64>()
        / d as f64;
    ((d as f64 / mean).round() as u64).clamp(1, d as u64)
}

/// Checks every per-round and trace-level invariant of one traced run.
/// Returns a description of the first violation.
pub fn check_run(
    g: &Graph,
    rich: &RichNeighbourTable,
    variant: Variant,
    r: &RunResult,
    trace: &[CallEvent],
) -> Result<(), String> {
    let n = g.node_count() as u64;
    let initiator = r.initiator.ok_or("missing initiator")?;

    // Replay informed-round per node from the trace alone.
    let mut informed_round: Vec<Option<u32>> = vec![None; g.node_count()];
    informed_round[initiator] = Some(0);
    let mut by_round: BTreeMap<u32, Vec<&CallEvent>> = BTreeMap::new();
    for e in trace {
        by_round.entry(e.round).or_default().push(e);
    }

    let mut has_transmitted = vec![false; g.node_count()];
    let mut pull_history: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    let mut prev_spreaders = 1u64;

    if r.rounds.len() as u32 != r.total_rounds {
        return Err("total_rounds mismatch".into());
    }
    if r.total_calls != r.rounds.iter().map(|m| m.calls).sum::<u64>() {
        return Err("total_calls mismatch".into());
    }

    for m in &r.rounds {
        let round = m.round;
        let mode = variant.mode_for_round(round);
        let events = by_round.get(&round).map(Vec::as_slice).unwrap_or(&[]);
        let was_spreader = |v: NodeId, ir: &[Option<u32>]| matches!(ir[v], Some(x) if x < round);
        let spreaders_begin = (0..g.node_count())
            .filter(|&v| was_spreader(v, &informed_round))
            .count() as u64;

        if m.spreaders_begin != spreaders_begin || m.spreaders_begin != prev_spreaders {
            return Err(format!(
                "round {round}: spreaders_begin {} vs replay {spreaders_begin}",
                m.spreaders_begin
            ));
        }

        // Per-variant call accounting.
        let expected_calls: u64 = match mode {
            RoundMode::Push | RoundMode::AdaptivePush => spreaders_begin,
            RoundMode::Pull | RoundMode::AdaptivePull => n - spreaders_begin,
            RoundMode::PushPull => n,
            RoundMode::DifferentialPush => (0..g.node_count())
                .filter(|&v| was_spreader(v, &informed_round))
                .map(|v| fanout(g, v))
                .sum(),
        };
        if m.calls != expected_calls || events.len() as u64 != m.calls {
            return Err(format!(
                "round {round} ({mode:?}): calls {} / events {} / expected {expected_calls}",
                m.calls,
                events.len()
            ));
        }

        let mut fresh = 0u64;
        for e in events {
            if !g.neighbours(e.caller).contains(&e.target) {
                return Err(format!("round {round}: {} called non-neighbour {}", e.caller, e.target));
            }
            match e.kind {
                CallKind::Push => {
                    if !mode.is_push() {
                        return Err(format!("round {round}: push in {mode:?}"));
                    }
                    if !was_spreader(e.caller, &informed_round) {
                        return Err(format!("round {round}: non-spreader {} pushed", e.caller));
                    }
                    if mode == RoundMode::AdaptivePush
                        && !has_transmitted[e.caller]
                        && Some(e.target) != rich.get(e.caller)
                    {
                        return Err(format!(
                            "round {round}: first push of {} missed its rich neighbour",
                            e.caller
                        ));
                    }
                    has_transmitted[e.caller] = true;
                    let should_inform = informed_round[e.target].is_none();
                    if e.informed != should_inform {
                        return Err(format!("round {round}: push informed flag wrong"));
                    }
                    if should_inform {
                        informed_round[e.target] = Some(round);
                        fresh += 1;
                    }
                }
                CallKind::Pull => {
                    if !mode.is_pull() {
                        return Err(format!("round {round}: pull in {mode:?}"));
                    }
                    if was_spreader(e.caller, &informed_round) {
                        return Err(format!(
                            "round {round}: spreader {} initiated a call in pull mode",
                            e.caller
                        ));
                    }
                    pull_history.entry(e.caller).or_default().push(e.target);
                    let should_inform = was_spreader(e.target, &informed_round);
                    if e.informed != should_inform {
                        return Err(format!("round {round}: pull informed flag wrong"));
                    }
                    if should_inform {
                        informed_round[e.caller] = Some(round);
                        fresh += 1;
                    }
                }
                CallKind::Exchange => {
                    if mode != RoundMode::PushPull {
                        return Err(format!("round {round}: exchange in {mode:?}"));
                    }
                    let (a, b) = (
                        was_spreader(e.caller, &informed_round),
                        was_spreader(e.target, &informed_round),
                    );
                    let newly = match (a, b) {
                        (true, false) if informed_round[e.target].is_none() => Some(e.target),
                        (false, true) if informed_round[e.caller].is_none() => Some(e.caller),
                        _ => None,
                    };
                    if e.informed != newly.is_some() {
                        return Err(format!("round {round}: exchange informed flag wrong"));
                    }
                    if let Some(v) = newly {
                        informed_round[v] = Some(round);
                        fresh += 1;
                    }
                }
            }
        }

        if m.fresh != fresh {
            return Err(format!("round {round}: fresh {} vs replay {fresh}", m.fresh));
        }
        if m.spreaders_end() < m.spreaders_begin {
            return Err(format!("round {round}: spreaders decreased"));
        }
        if m.calls < m.fresh {
            return Err(format!("round {round}: calls {} < fresh {}", m.calls, m.fresh));
        }
        match m.cost {
            Cost::Finite(c) if c < 1.0 || m.fresh == 0 => return Err(format!("round {round}: bad cost {c}")),
            Cost::Infinite if m.fresh != 0 => return Err(format!("round {round}: infinite cost with fresh spreaders")),
            _ => {}
        }
        prev_spreaders = m.spreaders_end();
    }

    if r.completed != (prev_spreaders == n) {
        return Err("completed flag disagrees with final spreader count".into());
    }

    // Adaptive pull alternates rich, random, rich, ... per node. Only the
    // rich positions are deterministic; the random ones may coincide.
    if matches!(variant, Variant::AdaptivePull | Variant::AdaptiveFptp { .. }) {
        for (v, targets) in &pull_history {
            for (i, t) in targets.iter().enumerate() {
                if i % 2 == 0 && Some(*t) != rich.get(*v) {
                    return Err(format!("node {v}: attempt {i} asked {t}, not its rich neighbour"));
                }
            }
        }
    }
    Ok(())
}

/// Exact completion-round distribution of (adaptive) pull on a tiny graph,
/// by enumerating every joint choice of the ignorant nodes each round.
/// `adaptive` selects the rich/random alternation. Returns `P(T = t)` for
/// `t = 0..=horizon`; the tail mass beyond the horizon is dropped.
pub fn exact_pull_completion(g: &Graph, initiator: NodeId, adaptive: bool, horizon: usize) -> Vec<f64> {
    let n = g.node_count();
    assert!(n <= 16, "enumeration is exponential");
    let full: u32 = (1 << n) - 1;
    let rich = brute_force_rich(g);

    // In pure pull every ignorant node has made the same number of attempts
    // (one per round), so (informed set, round parity) is a Markov state.
    let mut dist: HashMap<u32, f64> = HashMap::from([(1 << initiator, 1.0)]);
    let mut out = vec![0.0; horizon + 1];
    if full == 1 << initiator {
        out[0] = 1.0;
        return out;
    }
    for (round, slot) in out.iter_mut().enumerate().skip(1) {
        let rich_round = adaptive && (round - 1) % 2 == 0;
        let mut next: HashMap<u32, f64> = HashMap::new();
        for (&set, &p) in &dist {
            // Per-ignorant-node success probability; nodes act independently.
            let ignorant: Vec<NodeId> = (0..n).filter(|v| set & (1 << v) == 0).collect();
            let success: Vec<f64> = ignorant
                .iter()
                .map(|&v| {
                    if rich_round {
                        let r = rich[v].unwrap();
                        if set & (1 << r) != 0 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        let nbrs = g.neighbours(v);
                        nbrs.iter().filter(|&&u| set & (1 << u) != 0).count() as f64 / nbrs.len() as f64
                    }
                })
                .collect();
            for outcome in 0u32..(1 << ignorant.len()) {
                let mut q = p;
                let mut new_set = set;
                for (i, &v) in ignorant.iter().enumerate() {
                    if outcome & (1 << i) != 0 {
                        q *= success[i];
                        new_set |= 1 << v;
                    } else {
                        q *= 1.0 - success[i];
                    }
                }
                if q > 0.0 {
                    *next.entry(new_set).or_default() += q;
                }
            }
        }
        *slot = next.remove(&full).unwrap_or(0.0);
        dist = next;
    }
    out
}

/// Compares an empirical histogram of `trials` samples with exact bin
/// probabilities. Bins expecting fewer than five samples are pooled into one
/// tail bin (which also absorbs mass beyond the horizon), so the normal
/// approximation behind the 3-sigma bound holds. Returns the largest
/// deviation in sigmas.
pub fn compare_histogram(counts: &[u64], exact: &[f64], trials: u64) -> Result<f64, String> {
    assert_eq!(counts.len(), exact.len());
    let n = trials as f64;
    let mut bins: Vec<(String, u64, f64)> = Vec::new();
    let mut tail = (0u64, 0.0f64);
    for (t, (&c, &p)) in counts.iter().zip(exact).enumerate() {
        if p * n >= 5.0 {
            bins.push((format!("T={t}"), c, p));
        } else {
            tail.0 += c;
            tail.1 += p;
        }
    }
    let tail_p = (1.0 - bins.iter().map(|b| b.2).sum::<f64>()).max(tail.1);
    bins.push(("tail".into(), tail.0, tail_p));
    let mut worst: f64 = 0.0;
    for (label, c, p) in bins {
        let f = c as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        if sigma == 0.0 {
            if c != 0 && p == 0.0 {
                return Err(format!("{label}: {c} samples in a bin of probability 0"));
            }
            continue;
        }
        let z = (f - p).abs() / sigma;
        worst = worst.max(z);
        if z > 3.0 {
            return Err(format!("{label}: empirical {f:.6} vs exact {p:.6} ({z:.2} sigma)"));
        }
    }
    Ok(worst)
}
