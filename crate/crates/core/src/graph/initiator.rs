use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};

/// How the source of the rumor is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitiatorPolicy {
    /// Smallest id among the minimum-degree nodes.
    #[default]
    MinDegree,
    /// Smallest id among the maximum-degree nodes.
    MaxDegree,
    UniformRandom,
    Explicit(NodeId),
    /// Uniformly sampled among nodes of exactly this degree.
    OfDegree(usize),
}

pub fn select_initiator<R: Rng + ?Sized>(
    g: &Graph,
    policy: InitiatorPolicy,
    rng: &mut R,
) -> Result<NodeId, GraphError> {
    let n = g.node_count();
    match policy {
        InitiatorPolicy::MinDegree => (0..n)
            .min_by_key(|&v| g.neighbours(v).len())
            .ok_or(GraphError::NodeOutOfRange { node: 0, node_count: 0 }),
        InitiatorPolicy::MaxDegree => {
            // max_by_key returns the last maximum; reverse to keep the first.
            (0..n)
                .rev()
                .max_by_key(|&v| g.neighbours(v).len())
                .ok_or(GraphError::NodeOutOfRange { node: 0, node_count: 0 })
        }
        InitiatorPolicy::UniformRandom => {
            if n == 0 {
                return Err(GraphError::NodeOutOfRange { node: 0, node_count: 0 });
            }
            Ok(rng.gen_range(0..n))
        }
        InitiatorPolicy::Explicit(v) => {
            if v < n {
                Ok(v)
            } else {
                Err(GraphError::NodeOutOfRange { node: v, node_count: n })
            }
        }
        InitiatorPolicy::OfDegree(k) => {
            let candidates: Vec<NodeId> = (0..n).filter(|&v| g.neighbours(v).len() == k).collect();
            if candidates.is_empty() {
                return Err(GraphError::NoNodeOfDegree(k));
            }
            Ok(candidates[rng.gen_range(0..candidates.len())])
        }
    }
}

impl fmt::Display for InitiatorPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MinDegree => f.write_str("min-degree"),
            Self::MaxDegree => f.write_str("max-degree"),
            Self::UniformRandom => f.write_str("random"),
            Self::Explicit(v) => write!(f, "node:{v}"),
            Self::OfDegree(k) => write!(f, "degree:{k}"),
        }
    }
}

/// Parses `min-degree | max-degree | random | node:<id> | degree:<k>`.
impl FromStr for InitiatorPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || format!("invalid initiator `{s}` (expected min-degree, max-degree, random, node:<id> or degree:<k>)");
        match s {
            "min-degree" => Ok(Self::MinDegree),
            "max-degree" => Ok(Self::MaxDegree),
            "random" => Ok(Self::UniformRandom),
            _ => {
                let (kind, value) = s.split_once(':').ok_or_else(bad)?;
                let value: usize = value.parse().map_err(|_| bad())?;
                match kind {
                    "node" => Ok(Self::Explicit(value)),
                    "degree" => Ok(Self::OfDegree(value)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extremal_policies_on_star() {
        let g = star(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(select_initiator(&g, InitiatorPolicy::MinDegree, &mut rng), Ok(1));
        assert_eq!(select_initiator(&g, InitiatorPolicy::MaxDegree, &mut rng), Ok(0));
    }

    #[test]
    fn max_degree_takes_smallest_id() {
        let g = path(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(select_initiator(&g, InitiatorPolicy::MaxDegree, &mut rng), Ok(1));
        assert_eq!(select_initiator(&g, InitiatorPolicy::MinDegree, &mut rng), Ok(0));
    }

    #[test]
    fn of_degree_samples_matching_nodes() {
        let g = path(6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = [false; 6];
        for _ in 0..200 {
            let v = select_initiator(&g, InitiatorPolicy::OfDegree(2), &mut rng).unwrap();
            assert_eq!(g.degree(v).unwrap(), 2);
            seen[v] = true;
        }
        assert_eq!(seen, [false, true, true, true, true, false]);
        assert_eq!(
            select_initiator(&g, InitiatorPolicy::OfDegree(3), &mut rng),
            Err(GraphError::NoNodeOfDegree(3))
        );
    }

    #[test]
    fn explicit_out_of_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(select_initiator(&k2(), InitiatorPolicy::Explicit(1), &mut rng).is_ok());
        assert!(select_initiator(&k2(), InitiatorPolicy::Explicit(2), &mut rng).is_err());
    }

    #[test]
    fn parse_grammar() {
        for s in ["min-degree", "max-degree", "random", "node:17", "degree:82"] {
            let p: InitiatorPolicy = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        for s in ["", "node", "node:x", "degree:-1", "hub:3", "MinDegree"] {
            assert!(s.parse::<InitiatorPolicy>().is_err(), "{s}");
        }
    }
}
