//! Structural parameters: maximum degree Δ, maximum coalition size κ and the
//! feedback arc set number f.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph;
use crate::model::{Instance, Partition};

/// Feedback arc set number, either proven minimal or a heuristic upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fas {
    Exact(usize),
    UpperBound(usize),
}

impl Fas {
    pub fn value(self) -> usize {
        match self {
            Fas::Exact(v) | Fas::UpperBound(v) => v,
        }
    }
}

impl fmt::Display for Fas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fas::Exact(v) => write!(f, "{v}"),
            Fas::UpperBound(v) => write!(f, "<={v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub delta: usize,
    pub kappa: Option<usize>,
    pub fas: Fas,
}

/// Search budget for the exact feedback arc set solver, in branch nodes.
pub const DEFAULT_FAS_NODE_BUDGET: u64 = 2_000_000;

/// Δ: the largest number of distinct in- or out-neighbours of any agent.
pub fn max_degree(inst: &Instance) -> usize {
    let g = inst.relevant_graph();
    let n = g.len();
    let mut nbrs: Vec<Vec<usize>> = g.clone();
    for (u, l) in g.iter().enumerate() {
        for &v in l {
            nbrs[v].push(u);
        }
    }
    (0..n)
        .map(|u| {
            let l = &mut nbrs[u];
            l.sort_unstable();
            l.dedup();
            l.len()
        })
        .max()
        .unwrap_or(0)
}

pub fn compute_params(inst: &Instance, pi: Option<&Partition>, exact_fas: bool) -> Result<Params> {
    let g = inst.relevant_graph();
    let fas = if exact_fas {
        Fas::Exact(fas_exact(&g, DEFAULT_FAS_NODE_BUDGET)?.len())
    } else {
        Fas::UpperBound(fas_heuristic(&g).len())
    };
    Ok(Params {
        delta: max_degree(inst),
        kappa: pi.map(Partition::kappa),
        fas,
    })
}

/// Vertex ordering by repeatedly peeling sinks and sources and otherwise
/// taking the vertex maximising out-degree minus in-degree. Returns the arcs
/// pointing backwards in that order, which always form a feedback arc set.
pub fn fas_heuristic(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut outd: Vec<isize> = adj.iter().map(|l| l.len() as isize).collect();
    let mut ind = vec![0isize; n];
    let mut radj = vec![Vec::new(); n];
    for (u, l) in adj.iter().enumerate() {
        for &v in l {
            ind[v] += 1;
            radj[v].push(u);
        }
    }
    let mut alive = vec![true; n];
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut remaining = n;
    let remove = |v: usize, alive: &mut Vec<bool>, outd: &mut Vec<isize>, ind: &mut Vec<isize>| {
        alive[v] = false;
        for &w in &adj[v] {
            if alive[w] {
                ind[w] -= 1;
            }
        }
        for &w in &radj[v] {
            if alive[w] {
                outd[w] -= 1;
            }
        }
    };
    while remaining > 0 {
        if let Some(v) = (0..n).find(|&v| alive[v] && outd[v] == 0) {
            right.push(v);
            remove(v, &mut alive, &mut outd, &mut ind);
        } else if let Some(v) = (0..n).find(|&v| alive[v] && ind[v] == 0) {
            left.push(v);
            remove(v, &mut alive, &mut outd, &mut ind);
        } else {
            let v = (0..n)
                .filter(|&v| alive[v])
                .max_by_key(|&v| (outd[v] - ind[v], std::cmp::Reverse(v)))
                .expect("some vertex remains");
            left.push(v);
            remove(v, &mut alive, &mut outd, &mut ind);
        }
        remaining -= 1;
    }
    right.reverse();
    left.extend(right);
    let mut pos = vec![0; n];
    for (i, &v) in left.iter().enumerate() {
        pos[v] = i;
    }
    let mut back: Vec<(usize, usize)> = adj
        .iter()
        .enumerate()
        .flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| pos[v] <= pos[u])
        .collect();
    back.sort_unstable();
    back
}

/// A minimum feedback arc set. Each strongly connected component is solved
/// separately by iterative deepening, branching on the arcs of a shortest
/// cycle and pruning with a greedy arc-disjoint cycle packing.
pub fn fas_exact(adj: &[Vec<usize>], node_budget: u64) -> Result<Vec<(usize, usize)>> {
    let mut result = Vec::new();
    let mut nodes = 0u64;
    for comp in graph::scc(adj, None) {
        if comp.len() == 1 {
            continue;
        }
        let mut local_index = vec![usize::MAX; adj.len()];
        for (i, &v) in comp.iter().enumerate() {
            local_index[v] = i;
        }
        let mut sub: Vec<Vec<usize>> = comp
            .iter()
            .map(|&v| {
                adj[v]
                    .iter()
                    .filter(|&&w| local_index[w] != usize::MAX)
                    .map(|&w| local_index[w])
                    .collect()
            })
            .collect();
        let upper = fas_heuristic(&sub);
        let mut found = None;
        for k in 1..upper.len() {
            let mut chosen = Vec::new();
            if branch(&mut sub, k, &mut chosen, &mut nodes, node_budget)? {
                found = Some(chosen);
                break;
            }
        }
        let arcs = found.unwrap_or(upper);
        result.extend(arcs.into_iter().map(|(u, v)| (comp[u], comp[v])));
    }
    result.sort_unstable();
    Ok(result)
}

fn disjoint_cycle_lower_bound(adj: &[Vec<usize>]) -> usize {
    let mut g = adj.to_vec();
    let mut count = 0;
    while let Some(cyc) = graph::shortest_cycle(&g, None) {
        count += 1;
        for i in 0..cyc.len() {
            let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
            g[u].retain(|&w| w != v);
        }
    }
    count
}

fn branch(
    adj: &mut Vec<Vec<usize>>,
    k: usize,
    chosen: &mut Vec<(usize, usize)>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::SizeLimit(format!(
            "exact feedback arc set search exceeded {budget} nodes"
        )));
    }
    let Some(cyc) = graph::shortest_cycle(adj, None) else {
        return Ok(true);
    };
    if k == 0 || disjoint_cycle_lower_bound(adj) > k {
        return Ok(false);
    }
    for i in 0..cyc.len() {
        let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
        let pos = adj[u]
            .iter()
            .position(|&w| w == v)
            .expect("cycle arc exists");
        adj[u].remove(pos);
        chosen.push((u, v));
        let ok = branch(adj, k - 1, chosen, nodes, budget)?;
        if ok {
            adj[u].insert(pos, v);
            return Ok(true);
        }
        chosen.pop();
        adj[u].insert(pos, v);
    }
    Ok(false)
}
