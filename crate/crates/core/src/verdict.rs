//! Certificates and verdicts shared by every algorithm.

use std::fmt;

use crate::model::{count_relations, AgentId, Instance, Partition};

/// Which core notion a verifier checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// No strictly blocking coalition.
    Core,
    /// No weakly blocking coalition.
    StrictCore,
}

impl Mode {
    /// Blocking kind a certificate must exhibit to refute this notion.
    pub fn block_kind(self) -> BlockKind {
        match self {
            Mode::Core => BlockKind::Strict,
            Mode::StrictCore => BlockKind::Weak,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Core => write!(f, "core"),
            Mode::StrictCore => write!(f, "strict-core"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Strict,
    Weak,
}

/// Stability notions understood by the oracle and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Notion {
    Core,
    StrictCore,
    Nash,
    Individual,
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Notion::Core => write!(f, "core"),
            Notion::StrictCore => write!(f, "strict-core"),
            Notion::Nash => write!(f, "nash"),
            Notion::Individual => write!(f, "individual"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CertKind {
    Strict,
    Weak,
    /// Every member has strictly more friends than in her current coalition.
    Wonderful,
    /// `agent` leaves her coalition; `target` is the coalition index she
    /// joins, or `None` when she would rather be alone.
    NashDeviation {
        agent: AgentId,
        target: Option<usize>,
    },
    /// `agent` wants to join `target` and its members accept her. `None`
    /// marks an individual rationality violation.
    BlockingTuple {
        agent: AgentId,
        target: Option<usize>,
    },
}

/// Counts an agent has inside the proposed coalition and inside the
/// coalition it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AgentDelta {
    pub agent: AgentId,
    pub friends_in_block: usize,
    pub enemies_in_block: usize,
    pub friends_in_pi: usize,
    pub enemies_in_pi: usize,
}

impl AgentDelta {
    pub fn measure(
        inst: &Instance,
        agent: AgentId,
        block: &[AgentId],
        reference: &[AgentId],
    ) -> Self {
        let (fb, eb) = count_relations(inst, agent, block);
        let (fp, ep) = count_relations(inst, agent, reference);
        AgentDelta {
            agent,
            friends_in_block: fb,
            enemies_in_block: eb,
            friends_in_pi: fp,
            enemies_in_pi: ep,
        }
    }

    pub fn block_counts(&self) -> (usize, usize) {
        (self.friends_in_block, self.enemies_in_block)
    }

    pub fn pi_counts(&self) -> (usize, usize) {
        (self.friends_in_pi, self.enemies_in_pi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockingCertificate {
    /// The deviating coalition, sorted. For Nash deviations and blocking
    /// tuples this is the coalition after the move.
    pub coalition: Vec<AgentId>,
    pub kind: CertKind,
    pub per_agent_delta: Vec<AgentDelta>,
}

impl BlockingCertificate {
    /// Certificate for a coalition blocking `pi`, measuring each member
    /// against her own coalition in `pi`.
    pub fn coalition(
        inst: &Instance,
        pi: &Partition,
        mut coalition: Vec<AgentId>,
        kind: CertKind,
    ) -> Self {
        coalition.sort_unstable();
        let per_agent_delta = coalition
            .iter()
            .map(|&a| AgentDelta::measure(inst, a, &coalition, pi.coalition_of(a)))
            .collect();
        BlockingCertificate {
            coalition,
            kind,
            per_agent_delta,
        }
    }

    /// Certificate for `agent` moving to coalition `target` (or alone).
    pub fn nash(inst: &Instance, pi: &Partition, agent: AgentId, target: Option<usize>) -> Self {
        let coalition = joined(pi, agent, target);
        let per_agent_delta = vec![AgentDelta::measure(
            inst,
            agent,
            &coalition,
            pi.coalition_of(agent),
        )];
        BlockingCertificate {
            coalition,
            kind: CertKind::NashDeviation { agent, target },
            per_agent_delta,
        }
    }

    /// Certificate for a blocking tuple; members of `target` are measured
    /// against `target` itself.
    pub fn tuple(inst: &Instance, pi: &Partition, agent: AgentId, target: Option<usize>) -> Self {
        let coalition = joined(pi, agent, target);
        let per_agent_delta = coalition
            .iter()
            .map(|&a| AgentDelta::measure(inst, a, &coalition, pi.coalition_of(a)))
            .collect();
        BlockingCertificate {
            coalition,
            kind: CertKind::BlockingTuple { agent, target },
            per_agent_delta,
        }
    }
}

/// `target ∪ {agent}`, or `{agent}` when `target` is `None`.
pub(crate) fn joined(pi: &Partition, agent: AgentId, target: Option<usize>) -> Vec<AgentId> {
    let mut c = target
        .map(|t| pi.coalitions()[t].clone())
        .unwrap_or_default();
    c.push(agent);
    c.sort_unstable();
    c
}

impl fmt::Display for BlockingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members = join_ids(&self.coalition);
        match &self.kind {
            CertKind::Strict => write!(f, "strict {{{members}}}"),
            CertKind::Weak => write!(f, "weak {{{members}}}"),
            CertKind::Wonderful => write!(f, "wonderful {{{members}}}"),
            CertKind::NashDeviation { agent, target } => match target {
                Some(t) => write!(
                    f,
                    "nash-deviation agent {agent} -> coalition {t} {{{members}}}"
                ),
                None => write!(f, "nash-deviation agent {agent} -> alone"),
            },
            CertKind::BlockingTuple { agent, target } => match target {
                Some(t) => write!(
                    f,
                    "blocking-tuple agent {agent} -> coalition {t} {{{members}}}"
                ),
                None => write!(f, "blocking-tuple agent {agent} -> alone"),
            },
        }
    }
}

pub(crate) fn join_ids(ids: &[AgentId]) -> String {
    ids.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Stable,
    Unstable(BlockingCertificate),
    Exists(Partition),
    NotExists(String),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Stable => "STABLE",
            Outcome::Unstable(_) => "UNSTABLE",
            Outcome::Exists(_) => "EXISTS",
            Outcome::NotExists(_) => "NOT-EXISTS",
        }
    }

    /// True for STABLE and EXISTS.
    pub fn is_positive(&self) -> bool {
        matches!(self, Outcome::Stable | Outcome::Exists(_))
    }
}

/// Algorithm output plus provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub algorithm: String,
    /// Ordered key/value notes such as trial counts or the phase that decided.
    pub notes: Vec<(String, String)>,
}

impl Verdict {
    pub fn new(algorithm: impl Into<String>, outcome: Outcome) -> Self {
        Verdict {
            outcome,
            algorithm: algorithm.into(),
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.notes.push((key.into(), value.to_string()));
        self
    }

    pub fn is_stable(&self) -> bool {
        matches!(self.outcome, Outcome::Stable)
    }

    pub fn certificate(&self) -> Option<&BlockingCertificate> {
        match &self.outcome {
            Outcome::Unstable(c) => Some(c),
            _ => None,
        }
    }

    pub fn partition(&self) -> Option<&Partition> {
        match &self.outcome {
            Outcome::Exists(p) => Some(p),
            _ => None,
        }
    }
}
