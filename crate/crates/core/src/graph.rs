//! Small digraph routines over adjacency lists, optionally restricted to an
//! induced vertex subset.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// Strongly connected components of the subgraph induced by `keep`
/// (all vertices when `None`). Components come out sinks-first, each sorted.
pub fn scc(adj: &[Vec<usize>], keep: Option<&[bool]>) -> Vec<Vec<usize>> {
    let n = adj.len();
    let kept = |v: usize| keep.is_none_or(|k| k[v]);
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    // Explicit call stack of (vertex, next edge position).
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if !kept(root) || index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if !kept(w) {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Weakly connected components of the induced subgraph, each sorted,
/// ordered by smallest member.
pub fn weak_components(adj: &[Vec<usize>], keep: Option<&[bool]>) -> Vec<Vec<usize>> {
    let n = adj.len();
    let kept = |v: usize| keep.is_none_or(|k| k[v]);
    let mut und = vec![Vec::new(); n];
    for u in 0..n {
        if !kept(u) {
            continue;
        }
        for &v in &adj[u] {
            if kept(v) {
                und[u].push(v);
                und[v].push(u);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if !kept(s) || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &v in &und[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Topological order by Kahn's algorithm, always taking the lowest-index
/// available vertex. `None` if the graph has a cycle.
pub fn topo_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for l in adj {
        for &v in l {
            indeg[v] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = heap.pop() {
        order.push(u);
        for &v in &adj[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                heap.push(Reverse(v));
            }
        }
    }
    (order.len() == n).then_some(order)
}

pub fn is_acyclic(adj: &[Vec<usize>]) -> bool {
    scc(adj, None)
        .iter()
        .all(|c| c.len() == 1 && !adj[c[0]].contains(&c[0]))
}

/// Shortest directed cycle through the induced subgraph, as a vertex list
/// `v0 -> v1 -> ... -> v0`. Ties go to the lowest starting vertex.
pub fn shortest_cycle(adj: &[Vec<usize>], keep: Option<&[bool]>) -> Option<Vec<usize>> {
    let n = adj.len();
    let kept = |v: usize| keep.is_none_or(|k| k[v]);
    let mut best: Option<Vec<usize>> = None;
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    for s in 0..n {
        if !kept(s) {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut closing = None;
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some(b) = &best {
                if dist[u] + 1 >= b.len() {
                    break;
                }
            }
            for &v in &adj[u] {
                if !kept(v) {
                    continue;
                }
                if v == s {
                    closing = Some(u);
                    break 'bfs;
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if let Some(mut u) = closing {
            let mut cyc = vec![u];
            while u != s {
                u = parent[u];
                cyc.push(u);
            }
            cyc.reverse();
            if best.as_ref().is_none_or(|b| cyc.len() < b.len()) {
                best = Some(cyc);
            }
        }
    }
    best
}
