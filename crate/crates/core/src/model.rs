//! Agents, relation digraphs, coalition structures and the friend-oriented
//! preference relation.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Dense agent index in `[0, n)`.
pub type AgentId = usize;

/// Which preference model an instance follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Friends and enemies: every other agent is one or the other.
    Fe,
    /// Friends, enemies and neutrals.
    Fen,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Fe => write!(f, "fe"),
            Model::Fen => write!(f, "fen"),
        }
    }
}

/// A game instance.
///
/// FE instances store only the friendship graph; enemy counts are derived
/// arithmetically and `enemies_out` stays empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    model: Model,
    friends_out: Vec<Vec<AgentId>>,
    friends_in: Vec<Vec<AgentId>>,
    enemies_out: Vec<Vec<AgentId>>,
    enemies_in: Vec<Vec<AgentId>>,
}

type Adjacency = Vec<Vec<AgentId>>;

fn build_adjacency(
    n: usize,
    arcs: &[(AgentId, AgentId)],
    what: &str,
) -> Result<(Adjacency, Adjacency)> {
    let mut out = vec![Vec::new(); n];
    let mut inn = vec![Vec::new(); n];
    for &(u, v) in arcs {
        if u >= n || v >= n {
            return Err(Error::InvalidInstance(format!(
                "{what} arc ({u},{v}) out of range for {n} agents"
            )));
        }
        if u == v {
            return Err(Error::InvalidInstance(format!(
                "self {what} arc at agent {u}"
            )));
        }
        out[u].push(v);
        inn[v].push(u);
    }
    for list in out.iter_mut().chain(inn.iter_mut()) {
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        if list.len() != before {
            return Err(Error::InvalidInstance(format!("duplicate {what} arc")));
        }
    }
    Ok((out, inn))
}

impl Instance {
    /// Builds an FE instance from its friendship arcs.
    pub fn fe(n: usize, friends: &[(AgentId, AgentId)]) -> Result<Self> {
        let (friends_out, friends_in) = build_adjacency(n, friends, "friend")?;
        Ok(Instance {
            model: Model::Fe,
            friends_out,
            friends_in,
            enemies_out: vec![Vec::new(); n],
            enemies_in: vec![Vec::new(); n],
        })
    }

    /// Builds an FEN instance from disjoint friendship and enemy arc sets.
    pub fn fen(
        n: usize,
        friends: &[(AgentId, AgentId)],
        enemies: &[(AgentId, AgentId)],
    ) -> Result<Self> {
        let (friends_out, friends_in) = build_adjacency(n, friends, "friend")?;
        let (enemies_out, enemies_in) = build_adjacency(n, enemies, "enemy")?;
        for (u, list) in enemies_out.iter().enumerate() {
            for &v in list {
                if friends_out[u].binary_search(&v).is_ok() {
                    return Err(Error::InvalidInstance(format!(
                        "agent {u} lists {v} as both friend and enemy"
                    )));
                }
            }
        }
        Ok(Instance {
            model: Model::Fen,
            friends_out,
            friends_in,
            enemies_out,
            enemies_in,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Number of agents.
    pub fn n(&self) -> usize {
        self.friends_out.len()
    }

    pub fn friends_of(&self, i: AgentId) -> &[AgentId] {
        &self.friends_out[i]
    }

    /// Agents that regard `i` as a friend.
    pub fn friended_by(&self, i: AgentId) -> &[AgentId] {
        &self.friends_in[i]
    }

    /// Stored enemy out-list. Empty for FE instances, where enemies are implicit.
    pub fn enemies_of(&self, i: AgentId) -> &[AgentId] {
        &self.enemies_out[i]
    }

    /// Stored enemy in-list. Empty for FE instances.
    pub fn enemied_by(&self, i: AgentId) -> &[AgentId] {
        &self.enemies_in[i]
    }

    pub fn is_friend(&self, i: AgentId, j: AgentId) -> bool {
        self.friends_out[i].binary_search(&j).is_ok()
    }

    /// Whether `i` regards `j` as an enemy under the instance's model.
    pub fn is_enemy(&self, i: AgentId, j: AgentId) -> bool {
        match self.model {
            Model::Fe => i != j && !self.is_friend(i, j),
            Model::Fen => self.enemies_out[i].binary_search(&j).is_ok(),
        }
    }

    /// All friendship arcs in lexicographic order.
    pub fn friend_arcs(&self) -> Vec<(AgentId, AgentId)> {
        self.friends_out
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
            .collect()
    }

    /// All stored enemy arcs in lexicographic order (empty for FE).
    pub fn enemy_arcs(&self) -> Vec<(AgentId, AgentId)> {
        self.enemies_out
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
            .collect()
    }

    /// Adjacency of the graph on which Δ and f are measured: the friendship
    /// graph for FE, the union of both relation graphs for FEN.
    pub fn relevant_graph(&self) -> Vec<Vec<AgentId>> {
        match self.model {
            Model::Fe => self.friends_out.clone(),
            Model::Fen => (0..self.n())
                .map(|u| {
                    let mut l: Vec<_> = self.friends_out[u]
                        .iter()
                        .chain(&self.enemies_out[u])
                        .copied()
                        .collect();
                    l.sort_unstable();
                    l
                })
                .collect(),
        }
    }

    /// Friendship out-lists.
    pub fn friend_graph(&self) -> &[Vec<AgentId>] {
        &self.friends_out
    }
}

/// Counts `(friends, enemies)` of agent `i` inside `s`, excluding `i` itself.
pub fn count_relations(inst: &Instance, i: AgentId, s: &[AgentId]) -> (usize, usize) {
    let mut friends = 0;
    let mut others = 0;
    let mut enemies = 0;
    for &j in s {
        if j == i {
            continue;
        }
        others += 1;
        if inst.is_friend(i, j) {
            friends += 1;
        } else if inst.model == Model::Fen && inst.is_enemy(i, j) {
            enemies += 1;
        }
    }
    if inst.model == Model::Fe {
        enemies = others - friends;
    }
    (friends, enemies)
}

/// Outcome of comparing two coalitions from one agent's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    Prefers,
    Indifferent,
    Dispreferred,
}

/// Lexicographic comparison of two `(friends, enemies)` count pairs.
pub fn compare_counts(s: (usize, usize), t: (usize, usize)) -> Preference {
    match s.0.cmp(&t.0).then(t.1.cmp(&s.1)) {
        Ordering::Greater => Preference::Prefers,
        Ordering::Equal => Preference::Indifferent,
        Ordering::Less => Preference::Dispreferred,
    }
}

/// How agent `i` ranks coalition `s` against coalition `t`. Both must contain `i`.
pub fn compare(inst: &Instance, i: AgentId, s: &[AgentId], t: &[AgentId]) -> Result<Preference> {
    if !s.contains(&i) || !t.contains(&i) {
        return Err(Error::NotAMember(i));
    }
    Ok(compare_counts(
        count_relations(inst, i, s),
        count_relations(inst, i, t),
    ))
}

/// A coalition structure. Coalitions are kept sorted internally and ordered
/// by their smallest member, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    coalitions: Vec<Vec<AgentId>>,
    owner: Vec<usize>,
}

impl Partition {
    /// Validates that `coalitions` are non-empty, disjoint and cover `[0, n)`.
    pub fn new(n: usize, coalitions: Vec<Vec<AgentId>>) -> Result<Self> {
        let mut coalitions: Vec<Vec<AgentId>> = coalitions;
        for c in coalitions.iter_mut() {
            if c.is_empty() {
                return Err(Error::InvalidPartition("empty coalition".into()));
            }
            c.sort_unstable();
        }
        coalitions.sort_by_key(|c| c[0]);
        let mut owner = vec![usize::MAX; n];
        for (idx, c) in coalitions.iter().enumerate() {
            for &a in c {
                if a >= n {
                    return Err(Error::InvalidPartition(format!(
                        "agent {a} out of range for {n} agents"
                    )));
                }
                if owner[a] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("agent {a} appears twice")));
                }
                owner[a] = idx;
            }
        }
        if let Some(a) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!("agent {a} is not covered")));
        }
        Ok(Partition { coalitions, owner })
    }

    /// Builds a partition from a label per agent (equal labels share a coalition).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: Vec<Vec<AgentId>> = Vec::new();
        let mut slot = std::collections::HashMap::new();
        for (a, &l) in labels.iter().enumerate() {
            let k = *slot.entry(l).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(a);
        }
        Partition::new(labels.len(), groups).expect("labels always describe a valid partition")
    }

    pub fn singletons(n: usize) -> Self {
        Partition::new(n, (0..n).map(|a| vec![a]).collect()).expect("singletons are valid")
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    pub fn coalitions(&self) -> &[Vec<AgentId>] {
        &self.coalitions
    }

    pub fn owner(&self, i: AgentId) -> usize {
        self.owner[i]
    }

    /// Π(i): the coalition containing `i`.
    pub fn coalition_of(&self, i: AgentId) -> &[AgentId] {
        &self.coalitions[self.owner[i]]
    }

    /// Largest coalition size κ (0 for the empty partition).
    pub fn kappa(&self) -> usize {
        self.coalitions.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_all_singletons(&self) -> bool {
        self.coalitions.iter().all(|c| c.len() == 1)
    }

    /// Checks the partition covers exactly the agents of `inst`.
    pub fn check_for(&self, inst: &Instance) -> Result<()> {
        if self.n() != inst.n() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} agents, instance has {}",
                self.n(),
                inst.n()
            )));
        }
        Ok(())
    }
}
