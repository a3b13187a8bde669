//! Exponential ground-truth deciders for small instances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    compare_counts, count_relations, AgentId, Instance, Model, Partition, Preference,
};
use crate::verdict::{
    joined, AgentDelta, BlockKind, BlockingCertificate, CertKind, Notion, Outcome, Verdict,
};

/// Default cap on the number of subsets a blocking search may visit.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 25;
/// Largest instance the partition oracle accepts for Nash and individual stability.
pub const MAX_AGENTS_PARTITION_ORACLE: usize = 12;
/// Largest instance the partition oracle accepts for the core notions.
pub const MAX_AGENTS_CORE_ORACLE: usize = 9;

/// Bitset rows for fast counting inside candidate coalitions.
pub(crate) struct BlockChecker {
    words: usize,
    model: Model,
    friends: Vec<Vec<u64>>,
    enemies: Vec<Vec<u64>>,
    pi_counts: Vec<(usize, usize)>,
    kind: BlockKind,
}

impl BlockChecker {
    pub(crate) fn new(inst: &Instance, pi: &Partition, kind: BlockKind) -> Self {
        let n = inst.n();
        let words = n.div_ceil(64).max(1);
        let row = |list: &[AgentId]| {
            let mut r = vec![0u64; words];
            for &v in list {
                r[v / 64] |= 1 << (v % 64);
            }
            r
        };
        BlockChecker {
            words,
            model: inst.model(),
            friends: (0..n).map(|i| row(inst.friends_of(i))).collect(),
            enemies: (0..n).map(|i| row(inst.enemies_of(i))).collect(),
            pi_counts: (0..n)
                .map(|i| count_relations(inst, i, pi.coalition_of(i)))
                .collect(),
            kind,
        }
    }

    fn counts(&self, i: AgentId, mask: &[u64], size: usize) -> (usize, usize) {
        let f: u32 = self.friends[i]
            .iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        let f = f as usize;
        let e = match self.model {
            Model::Fe => size - 1 - f,
            Model::Fen => self.enemies[i]
                .iter()
                .zip(mask)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>() as usize,
        };
        (f, e)
    }

    /// Whether `members` (whose bitset is `mask`) blocks with the configured kind.
    pub(crate) fn blocks(&self, members: &[AgentId], mask: &[u64]) -> bool {
        let mut any_strict = false;
        for &i in members {
            match compare_counts(self.counts(i, mask, members.len()), self.pi_counts[i]) {
                Preference::Prefers => any_strict = true,
                Preference::Indifferent if self.kind == BlockKind::Weak => {}
                _ => return false,
            }
        }
        any_strict
    }

    pub(crate) fn mask_of(&self, members: &[AgentId]) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for &v in members {
            m[v / 64] |= 1 << (v % 64);
        }
        m
    }
}

/// Number of subsets of sizes `1..=cap` of an `n`-set, saturating.
pub(crate) fn subsets_up_to(n: usize, cap: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u64 = 1;
    for s in 1..=cap.min(n) {
        binom = binom.saturating_mul((n - s + 1) as u64) / s as u64;
        total = total.saturating_add(binom);
    }
    total
}

/// First subset, by size ascending then lexicographic, accepted by `pred`.
/// The first element of each size class is searched in parallel and the
/// lowest hit wins, so the answer does not depend on scheduling.
pub(crate) fn first_subset<F>(
    n: usize,
    sizes: std::ops::RangeInclusive<usize>,
    pred: F,
) -> Option<Vec<AgentId>>
where
    F: Fn(&[AgentId]) -> bool + Sync,
{
    for s in sizes {
        if s == 0 || s > n {
            continue;
        }
        let hit = (0..=n - s).into_par_iter().find_map_first(|first| {
            let mut idx: Vec<usize> = (first..first + s).collect();
            loop {
                if pred(&idx) {
                    return Some(idx);
                }
                // Positions 1..s advance; position 0 stays at `first`.
                if !next_combination(&mut idx[1..], n) {
                    return None;
                }
            }
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Advances a strictly increasing index tuple over `0..n` to its
/// lexicographic successor. Returns false after the last tuple.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let s = idx.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if idx[i] < n - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive search for a coalition blocking `pi`, smallest first.
pub fn find_blocking_bruteforce(
    inst: &Instance,
    pi: &Partition,
    kind: BlockKind,
    size_cap: Option<usize>,
) -> Result<Option<BlockingCertificate>> {
    find_blocking_bruteforce_with_budget(inst, pi, kind, size_cap, DEFAULT_SUBSET_BUDGET)
}

pub fn find_blocking_bruteforce_with_budget(
    inst: &Instance,
    pi: &Partition,
    kind: BlockKind,
    size_cap: Option<usize>,
    budget: u64,
) -> Result<Option<BlockingCertificate>> {
    pi.check_for(inst)?;
    let n = inst.n();
    if size_cap.is_none() && n > 25 {
        return Err(Error::SizeLimit(format!(
            "{n} agents exceed the uncapped brute-force limit of 25"
        )));
    }
    let cap = size_cap.unwrap_or(n).min(n);
    let count = subsets_up_to(n, cap);
    if count > budget {
        return Err(Error::SizeLimit(format!(
            "{count} candidate coalitions exceed the budget of {budget}"
        )));
    }
    let checker = BlockChecker::new(inst, pi, kind);
    let found = first_subset(n, 1..=cap, |members| {
        checker.blocks(members, &checker.mask_of(members))
    });
    let cert_kind = match kind {
        BlockKind::Strict => CertKind::Strict,
        BlockKind::Weak => CertKind::Weak,
    };
    Ok(found.map(|c| BlockingCertificate::coalition(inst, pi, c, cert_kind)))
}

/// Set partitions of `[0, n)` as restricted growth strings, in lexicographic order.
#[derive(Debug, Clone)]
pub struct PartitionIterator {
    labels: Vec<usize>,
    /// `maxes[i]` is the largest label among `labels[..=i]`.
    maxes: Vec<usize>,
    started: bool,
    done: bool,
}

impl PartitionIterator {
    pub fn new(n: usize) -> Self {
        PartitionIterator {
            labels: vec![0; n],
            maxes: vec![0; n],
            started: false,
            done: false,
        }
    }

    /// Moves to the next partition; returns its labels.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.labels);
        }
        let n = self.labels.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.labels[i] <= self.maxes[i - 1] {
                self.labels[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                return Some(&self.labels);
            }
        }
        self.done = true;
        None
    }
}

impl Iterator for PartitionIterator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.advance().map(<[usize]>::to_vec)
    }
}

/// Nash or individual stability of a labelled partition, by direct counting.
fn labels_stable(
    inst: &Instance,
    labels: &[usize],
    individual: bool,
    scratch: &mut Scratch,
) -> bool {
    let n = inst.n();
    let k = labels.iter().max().map_or(0, |m| m + 1);
    scratch.size.clear();
    scratch.size.resize(k, 0);
    for &l in labels {
        scratch.size[l] += 1;
    }
    for i in 0..n {
        scratch.f.clear();
        scratch.f.resize(k, 0);
        scratch.e.clear();
        scratch.e.resize(k, 0);
        for &j in inst.friends_of(i) {
            scratch.f[labels[j]] += 1;
        }
        let own = labels[i];
        match inst.model() {
            Model::Fe => {
                for l in 0..k {
                    let others = scratch.size[l] - usize::from(l == own);
                    scratch.e[l] = others - scratch.f[l];
                }
            }
            Model::Fen => {
                for &j in inst.enemies_of(i) {
                    scratch.e[labels[j]] += 1;
                }
            }
        }
        let mine = (scratch.f[own], scratch.e[own]);
        if compare_counts((0, 0), mine) == Preference::Prefers {
            return false;
        }
        for l in 0..k {
            if l == own || compare_counts((scratch.f[l], scratch.e[l]), mine) != Preference::Prefers
            {
                continue;
            }
            if !individual {
                return false;
            }
            let accepted = (0..n).all(|j| labels[j] != l || !inst.is_enemy(j, i));
            if accepted {
                return false;
            }
        }
    }
    true
}

#[derive(Default)]
struct Scratch {
    size: Vec<usize>,
    f: Vec<usize>,
    e: Vec<usize>,
}

/// Whether `inst` admits a partition stable under `notion`, by enumerating
/// every set partition. Returns the first stable one in enumeration order.
pub fn exists_stable_partition(inst: &Instance, notion: Notion) -> Result<Verdict> {
    let n = inst.n();
    let limit = match notion {
        Notion::Nash | Notion::Individual => MAX_AGENTS_PARTITION_ORACLE,
        Notion::Core | Notion::StrictCore => MAX_AGENTS_CORE_ORACLE,
    };
    if n > limit {
        return Err(Error::SizeLimit(format!(
            "{n} agents exceed the partition oracle limit of {limit} for {notion}"
        )));
    }
    let algorithm = format!("oracle-{notion}");
    let mut it = PartitionIterator::new(n);
    let mut scratch = Scratch::default();
    let mut visited: u64 = 0;
    while let Some(labels) = it.advance() {
        visited += 1;
        let stable = match notion {
            Notion::Nash => labels_stable(inst, labels, false, &mut scratch),
            Notion::Individual => labels_stable(inst, labels, true, &mut scratch),
            Notion::Core | Notion::StrictCore => {
                let pi = Partition::from_labels(labels);
                let kind = if notion == Notion::Core {
                    BlockKind::Strict
                } else {
                    BlockKind::Weak
                };
                find_blocking_bruteforce(inst, &pi, kind, None)?.is_none()
            }
        };
        if stable {
            let pi = Partition::from_labels(labels);
            return Ok(
                Verdict::new(algorithm, Outcome::Exists(pi)).note("partitions_visited", visited)
            );
        }
    }
    debug_assert!(
        !(inst.model() == Model::Fe && matches!(notion, Notion::Core | Notion::StrictCore)),
        "FE instances always admit a strictly core stable partition"
    );
    Ok(Verdict::new(
        algorithm,
        Outcome::NotExists("no partition is stable".into()),
    )
    .note("partitions_visited", visited))
}

/// Re-derives a certificate's claim from the preference relation alone.
/// Returns `Ok(false)` when the recorded deltas disagree with a fresh count
/// or the claimed preferences do not hold.
pub fn certify(inst: &Instance, pi: &Partition, cert: &BlockingCertificate) -> Result<bool> {
    pi.check_for(inst)?;
    let n = inst.n();
    let c = &cert.coalition;
    if c.is_empty() || c.windows(2).any(|w| w[0] >= w[1]) || c.iter().any(|&a| a >= n) {
        return Err(Error::MalformedCertificate(
            "coalition must be a non-empty sorted set of agents".into(),
        ));
    }
    let expected_agents: Vec<AgentId> = match &cert.kind {
        CertKind::Strict | CertKind::Weak | CertKind::Wonderful => c.clone(),
        CertKind::NashDeviation { agent, target } | CertKind::BlockingTuple { agent, target } => {
            if *agent >= n {
                return Err(Error::MalformedCertificate(format!(
                    "agent {agent} out of range"
                )));
            }
            if let Some(t) = target {
                if *t >= pi.coalitions().len() || pi.owner(*agent) == *t {
                    return Err(Error::MalformedCertificate(format!(
                        "target coalition {t} is invalid"
                    )));
                }
            }
            if *c != joined(pi, *agent, *target) {
                return Err(Error::MalformedCertificate(
                    "coalition does not match the move".into(),
                ));
            }
            match cert.kind {
                CertKind::NashDeviation { .. } => vec![*agent],
                _ => c.clone(),
            }
        }
    };
    let listed: Vec<AgentId> = cert.per_agent_delta.iter().map(|d| d.agent).collect();
    if listed != expected_agents {
        return Err(Error::MalformedCertificate(
            "per-agent deltas do not list the expected agents".into(),
        ));
    }
    for d in &cert.per_agent_delta {
        if *d != AgentDelta::measure(inst, d.agent, c, pi.coalition_of(d.agent)) {
            return Ok(false);
        }
    }
    let pref = |d: &AgentDelta| compare_counts(d.block_counts(), d.pi_counts());
    let deltas = &cert.per_agent_delta;
    Ok(match &cert.kind {
        CertKind::Strict => deltas.iter().all(|d| pref(d) == Preference::Prefers),
        CertKind::Weak => {
            deltas.iter().all(|d| pref(d) != Preference::Dispreferred)
                && deltas.iter().any(|d| pref(d) == Preference::Prefers)
        }
        CertKind::Wonderful => deltas.iter().all(|d| d.friends_in_block > d.friends_in_pi),
        CertKind::NashDeviation { .. } => pref(&deltas[0]) == Preference::Prefers,
        CertKind::BlockingTuple { agent, .. } => deltas.iter().all(|d| {
            let p = pref(d);
            if d.agent == *agent {
                p == Preference::Prefers
            } else {
                p != Preference::Dispreferred
            }
        }),
    })
}
