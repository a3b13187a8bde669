//! Constructive existence algorithms.

use crate::error::{require_model, Error, Result};
use crate::graph;
use crate::model::{
    compare_counts, count_relations, AgentId, Instance, Model, Partition, Preference,
};
use crate::params::fas_exact;
use crate::params::DEFAULT_FAS_NODE_BUDGET;
use crate::verdict::{Outcome, Verdict};
use crate::verification::verify_nash;

/// Strongly connected components of the friendship graph. Strictly core
/// stable for FE and core stable for FEN.
pub fn scc_partition(inst: &Instance) -> (Partition, Verdict) {
    let comps = graph::scc(inst.friend_graph(), None);
    let pi = Partition::new(inst.n(), comps).expect("components partition the agents");
    let claim = match inst.model() {
        Model::Fe => "strict-core",
        Model::Fen => "core",
    };
    let verdict = Verdict::new("scc", Outcome::Exists(pi.clone())).note("stable_for", claim);
    (pi, verdict)
}

/// Greedy placement: agents arrive in `order`; each picks the best
/// coalition among those `admissible`, or opens a new one.
fn greedy<F>(inst: &Instance, order: &[AgentId], mut admissible: F) -> Partition
where
    F: FnMut(AgentId, &[AgentId]) -> bool,
{
    let mut coalitions: Vec<Vec<AgentId>> = Vec::new();
    for &v in order {
        let mut best: Option<(usize, (usize, usize))> = None;
        for (idx, c) in coalitions.iter().enumerate() {
            if !admissible(v, c) {
                continue;
            }
            let mut joined = c.clone();
            joined.push(v);
            let counts = count_relations(inst, v, &joined);
            // Ties keep the earliest created coalition.
            if best.is_none_or(|(_, b)| compare_counts(counts, b) == Preference::Prefers) {
                best = Some((idx, counts));
            }
        }
        match best {
            Some((idx, _)) => coalitions[idx].push(v),
            None => coalitions.push(vec![v]),
        }
    }
    Partition::new(inst.n(), coalitions).expect("greedy placement covers every agent once")
}

fn reverse_topological(adj: &[Vec<AgentId>], what: &str) -> Result<Vec<AgentId>> {
    let mut order =
        graph::topo_order(adj).ok_or_else(|| Error::Precondition(format!("{what} has a cycle")))?;
    order.reverse();
    Ok(order)
}

/// Individually stable partition when the friendship graph is acyclic.
/// An agent only joins a coalition holding a friend of hers where nobody
/// regards her as an enemy.
pub fn solve_individ_dag(inst: &Instance) -> Result<Partition> {
    let order = reverse_topological(inst.friend_graph(), "friendship graph")?;
    Ok(greedy(inst, &order, |v, c| {
        c.iter().any(|&u| inst.is_friend(v, u)) && c.iter().all(|&u| !inst.is_enemy(u, v))
    }))
}

/// Nash stable partition when the union of both relation graphs is acyclic.
pub fn solve_nash_dag(inst: &Instance) -> Result<Partition> {
    let order = reverse_topological(&inst.relevant_graph(), "union of the relation graphs")?;
    if inst.model() == Model::Fe && inst.n() > 1 {
        return Err(Error::Precondition(
            "union of the relation graphs has a cycle".into(),
        ));
    }
    let mut placed = vec![false; inst.n()];
    let mut coalitions: Vec<Vec<AgentId>> = Vec::new();
    for &v in &order {
        let has_friend_placed = inst.friends_of(v).iter().any(|&u| placed[u]);
        placed[v] = true;
        if !has_friend_placed {
            coalitions.push(vec![v]);
            continue;
        }
        let mut best: Option<(usize, (usize, usize))> = None;
        for (idx, c) in coalitions.iter().enumerate() {
            let mut joined = c.clone();
            joined.push(v);
            let counts = count_relations(inst, v, &joined);
            if best.is_none_or(|(_, b)| compare_counts(counts, b) == Preference::Prefers) {
                best = Some((idx, counts));
            }
        }
        let (idx, _) = best.expect("a friend has been placed");
        coalitions[idx].push(v);
    }
    Ok(Partition::new(inst.n(), coalitions).expect("greedy placement covers every agent once"))
}

/// Friendless agents alone, everybody else together. Nash stable whenever
/// both relations are symmetric.
pub fn solve_nash_symmetric(inst: &Instance) -> Result<Partition> {
    for (u, v) in inst.friend_arcs() {
        if !inst.is_friend(v, u) {
            return Err(Error::Precondition(format!(
                "friendship ({u},{v}) is not reciprocated"
            )));
        }
    }
    for (u, v) in inst.enemy_arcs() {
        if !inst.is_enemy(v, u) {
            return Err(Error::Precondition(format!(
                "enmity ({u},{v}) is not reciprocated"
            )));
        }
    }
    let (lonely, rest): (Vec<AgentId>, Vec<AgentId>) =
        (0..inst.n()).partition(|&v| inst.friends_of(v).is_empty());
    let mut coalitions: Vec<Vec<AgentId>> = lonely.into_iter().map(|v| vec![v]).collect();
    if !rest.is_empty() {
        coalitions.push(rest);
    }
    Ok(Partition::new(inst.n(), coalitions).expect("split covers every agent once"))
}

/// Decides Nash stable existence on FE instances whose friendship graph
/// has a feedback arc set of size at most two.
pub fn decide_nash_fe_f2(inst: &Instance) -> Result<Verdict> {
    require_model(inst.model(), Model::Fe)?;
    let f = fas_exact(inst.friend_graph(), DEFAULT_FAS_NODE_BUDGET)?.len();
    if f > 2 {
        return Err(Error::Precondition(format!(
            "feedback arc set number is {f}, above 2"
        )));
    }
    let algo = "f2";
    let n = inst.n();
    let sink: Vec<bool> = (0..n).map(|v| inst.friends_of(v).is_empty()).collect();
    let not_exists = |why: String| Ok(Verdict::new(algo, Outcome::NotExists(why)).note("fas", f));

    let mut forced: Vec<Option<AgentId>> = vec![None; n];
    let mut any_forced = false;
    for v in (0..n).filter(|&v| !sink[v]) {
        let sink_friends = inst.friends_of(v).iter().filter(|&&w| sink[w]).count();
        let others: Vec<AgentId> = inst
            .friends_of(v)
            .iter()
            .copied()
            .filter(|&w| !sink[w])
            .collect();
        if others.is_empty() {
            return not_exists(format!("agent {v} has only friendless friends"));
        }
        if sink_friends > 0 && others.len() == 1 {
            let w = others[0];
            if !inst.is_friend(w, v) {
                return not_exists(format!(
                    "agent {v} must pair with {w}, who does not reciprocate"
                ));
            }
            for (a, b) in [(v, w), (w, v)] {
                match forced[a] {
                    Some(x) if x != b => {
                        return not_exists(format!("agent {a} is forced into two different pairs"))
                    }
                    _ => forced[a] = Some(b),
                }
            }
            any_forced = true;
        }
    }

    let mut coalitions: Vec<Vec<AgentId>> = (0..n).filter(|&v| sink[v]).map(|v| vec![v]).collect();
    for (v, &f) in forced.iter().enumerate() {
        if let Some(w) = f {
            if v < w {
                coalitions.push(vec![v, w]);
            }
        }
    }
    let rest: Vec<AgentId> = (0..n)
        .filter(|&v| !sink[v] && forced[v].is_none())
        .collect();
    if !rest.is_empty() {
        coalitions.push(rest);
    }
    let pi = Partition::new(n, coalitions).expect("construction covers every agent once");
    let check = verify_nash(inst, &pi)?;
    if check.is_stable() {
        Ok(Verdict::new(algo, Outcome::Exists(pi))
            .note("fas", f)
            .note("forced_pairs", any_forced))
    } else {
        debug_assert!(
            any_forced,
            "the unforced construction is always Nash stable"
        );
        not_exists("the forced construction is not Nash stable".into())
    }
}
