//! Round-synchronous gossip engines.
//!
//! Every round is decided on the state at the start of the round: a node
//! informed in round `r` first acts in round `r + 1`. One call (a push
//! transmission or a pull request, successful or not) costs one unit.

mod run;
mod state;

pub use run::{run, run_traced};
pub use state::{CallEvent, CallKind, NodeState, NodeStatus, SimState};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, InitiatorPolicy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

/// Protocol family without its transition round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Push,
    Pull,
    PushPull,
    DifferentialPush,
    Fptp,
    AdaptivePush,
    AdaptivePull,
    AdaptiveFptp,
}

impl Protocol {
    pub const ALL: [Protocol; 8] = [
        Protocol::Push,
        Protocol::Pull,
        Protocol::PushPull,
        Protocol::DifferentialPush,
        Protocol::Fptp,
        Protocol::AdaptivePush,
        Protocol::AdaptivePull,
        Protocol::AdaptiveFptp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Push => "push",
            Protocol::Pull => "pull",
            Protocol::PushPull => "push-pull",
            Protocol::DifferentialPush => "differential-push",
            Protocol::Fptp => "fptp",
            Protocol::AdaptivePush => "adaptive-push",
            Protocol::AdaptivePull => "adaptive-pull",
            Protocol::AdaptiveFptp => "adaptive-fptp",
        }
    }

    pub fn has_transition(self) -> bool {
        matches!(self, Protocol::Fptp | Protocol::AdaptiveFptp)
    }

    /// Attaches a transition round; ignored by protocols without one.
    pub fn with_tr(self, tr: u32) -> Variant {
        match self {
            Protocol::Push => Variant::Push,
            Protocol::Pull => Variant::Pull,
            Protocol::PushPull => Variant::PushPull,
            Protocol::DifferentialPush => Variant::DifferentialPush,
            Protocol::Fptp => Variant::Fptp { tr },
            Protocol::AdaptivePush => Variant::AdaptivePush,
            Protocol::AdaptivePull => Variant::AdaptivePull,
            Protocol::AdaptiveFptp => Variant::AdaptiveFptp { tr },
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Protocol::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Protocol::ALL.iter().map(|p| p.name()).collect();
            format!("unknown protocol `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "protocol")]
pub enum Variant {
    Push,
    Pull,
    PushPull,
    DifferentialPush,
    /// Push for rounds `< tr`, pull from round `tr` on.
    Fptp {
        tr: u32,
    },
    AdaptivePush,
    AdaptivePull,
    /// Adaptive push for rounds `< tr`, adaptive pull from round `tr` on.
    AdaptiveFptp {
        tr: u32,
    },
}

/// What nodes do in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundMode {
    Push,
    Pull,
    PushPull,
    DifferentialPush,
    AdaptivePush,
    AdaptivePull,
}

impl RoundMode {
    pub fn is_push(self) -> bool {
        matches!(
            self,
            RoundMode::Push | RoundMode::AdaptivePush | RoundMode::DifferentialPush
        )
    }

    pub fn is_pull(self) -> bool {
        matches!(self, RoundMode::Pull | RoundMode::AdaptivePull)
    }
}

impl Variant {
    pub fn protocol(self) -> Protocol {
        match self {
            Variant::Push => Protocol::Push,
            Variant::Pull => Protocol::Pull,
            Variant::PushPull => Protocol::PushPull,
            Variant::DifferentialPush => Protocol::DifferentialPush,
            Variant::Fptp { .. } => Protocol::Fptp,
            Variant::AdaptivePush => Protocol::AdaptivePush,
            Variant::AdaptivePull => Protocol::AdaptivePull,
            Variant::AdaptiveFptp { .. } => Protocol::AdaptiveFptp,
        }
    }

    pub fn transition_round(self) -> Option<u32> {
        match self {
            Variant::Fptp { tr } | Variant::AdaptiveFptp { tr } => Some(tr),
            _ => None,
        }
    }

    /// Engine used in (1-based) round `round`.
    pub fn mode_for_round(self, round: u32) -> RoundMode {
        match self {
            Variant::Push => RoundMode::Push,
            Variant::Pull => RoundMode::Pull,
            Variant::PushPull => RoundMode::PushPull,
            Variant::DifferentialPush => RoundMode::DifferentialPush,
            Variant::AdaptivePush => RoundMode::AdaptivePush,
            Variant::AdaptivePull => RoundMode::AdaptivePull,
            Variant::Fptp { tr } if round < tr => RoundMode::Push,
            Variant::Fptp { .. } => RoundMode::Pull,
            Variant::AdaptiveFptp { tr } if round < tr => RoundMode::AdaptivePush,
            Variant::AdaptiveFptp { .. } => RoundMode::AdaptivePull,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.transition_round() {
            Some(tr) => write!(f, "{}(tr={tr})", self.protocol()),
            None => write!(f, "{}", self.protocol()),
        }
    }
}

/// `round(log2 n)`, at least 1.
pub fn default_tr(n: usize) -> u32 {
    if n <= 1 {
        return 1;
    }
    ((n as f64).log2().round() as u32).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub variant: Variant,
    pub initiator: InitiatorPolicy,
    /// Round cap; `None` means `10 · N`.
    pub max_rounds: Option<u32>,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            initiator: InitiatorPolicy::MinDegree,
            max_rounds: None,
            seed: 0,
        }
    }

    pub fn initiator(mut self, policy: InitiatorPolicy) -> Self {
        self.initiator = policy;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_rounds(mut self, cap: u32) -> Self {
        self.max_rounds = Some(cap);
        self
    }

    pub fn effective_max_rounds(&self, n: usize) -> u32 {
        self.max_rounds
            .unwrap_or_else(|| u32::try_from(n.saturating_mul(10)).unwrap_or(u32::MAX).max(1))
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.variant.transition_round() == Some(0) {
            return Err(SimError::InvalidConfig("transition round must be at least 1".into()));
        }
        if self.max_rounds == Some(0) {
            return Err(SimError::InvalidConfig("max_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tr_examples() {
        assert_eq!(default_tr(32768), 15);
        assert_eq!(default_tr(4096), 12);
        assert_eq!(default_tr(100), 7);
        assert_eq!(default_tr(128), 7);
        assert_eq!(default_tr(2), 1);
        assert_eq!(default_tr(1), 1);
    }

    #[test]
    fn fptp_modes() {
        let v = Variant::AdaptiveFptp { tr: 3 };
        let modes: Vec<_> = (1..=4).map(|r| v.mode_for_round(r)).collect();
        assert_eq!(
            modes,
            [
                RoundMode::AdaptivePush,
                RoundMode::AdaptivePush,
                RoundMode::AdaptivePull,
                RoundMode::AdaptivePull
            ]
        );
        let v = Variant::Fptp { tr: 1 };
        assert_eq!(v.mode_for_round(1), RoundMode::Pull);
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>(), Ok(p));
            assert_eq!(p.with_tr(4).protocol(), p);
        }
        assert!("gossip".parse::<Protocol>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(Variant::Fptp { tr: 0 }).validate().is_err());
        assert!(SimConfig::new(Variant::Push).max_rounds(0).validate().is_err());
        assert!(SimConfig::new(Variant::AdaptiveFptp { tr: 1 }).validate().is_ok());
        assert_eq!(SimConfig::new(Variant::Push).effective_max_rounds(128), 1280);
    }
}
