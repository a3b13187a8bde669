//! Independent reference implementations and random instance factories for
//! the integration tests. Nothing here calls the library's search code; it
//! only reads arcs and partitions out of the library types.

#![allow(dead_code)]

pub mod reduce;

use std::cmp::Ordering;

use hedonic::{Instance, Model, Partition};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Mask = u128;

pub fn bit(i: usize) -> Mask {
    1u128 << i
}

pub fn members(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

pub fn mask_of(set: &[usize]) -> Mask {
    set.iter().fold(0, |m, &i| m | bit(i))
}

/// Friend and enemy rows as bitmasks. FE enemies are everybody else who is
/// not a friend.
#[derive(Clone, Debug)]
pub struct Rel {
    pub n: usize,
    pub friend: Vec<Mask>,
    pub enemy: Vec<Mask>,
}

impl Rel {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        assert!(n <= 128, "reference oracle handles at most 128 agents");
        let mut friend = vec![0; n];
        let mut enemy = vec![0; n];
        for (u, v) in inst.friend_arcs() {
            friend[u] |= bit(v);
        }
        match inst.model() {
            Model::Fe => {
                let all: Mask = if n == 128 { !0 } else { bit(n) - 1 };
                for u in 0..n {
                    enemy[u] = all & !friend[u] & !bit(u);
                }
            }
            Model::Fen => {
                for (u, v) in inst.enemy_arcs() {
                    enemy[u] |= bit(v);
                }
            }
        }
        Rel { n, friend, enemy }
    }

    pub fn counts(&self, i: usize, set: Mask) -> (u32, u32) {
        (
            (self.friend[i] & set).count_ones(),
            (self.enemy[i] & set).count_ones(),
        )
    }

    /// Underlying undirected friendship adjacency.
    pub fn undirected(&self) -> Vec<Mask> {
        let mut adj = self.friend.clone();
        for u in 0..self.n {
            for v in members(self.friend[u]) {
                adj[v] |= bit(u);
            }
        }
        adj
    }
}

/// Lexicographic: more friends first, then fewer enemies.
pub fn pref(a: (u32, u32), b: (u32, u32)) -> Ordering {
    a.0.cmp(&b.0).then(b.1.cmp(&a.1))
}

pub fn pi_masks(pi: &Partition) -> Vec<Mask> {
    let mut own = vec![0; pi.n()];
    for c in pi.coalitions() {
        let m = mask_of(c);
        for &i in c {
            own[i] = m;
        }
    }
    own
}

pub fn pi_counts(rel: &Rel, pi: &Partition) -> Vec<(u32, u32)> {
    let own = pi_masks(pi);
    (0..rel.n).map(|i| rel.counts(i, own[i])).collect()
}

/// Strict: everybody strictly better. Weak: nobody worse, somebody better.
pub fn blocks(rel: &Rel, base: &[(u32, u32)], set: Mask, weak: bool) -> bool {
    if set == 0 {
        return false;
    }
    let mut some_strict = false;
    for i in members(set) {
        match pref(rel.counts(i, set), base[i]) {
            Ordering::Greater => some_strict = true,
            Ordering::Equal if weak => {}
            _ => return false,
        }
    }
    some_strict
}

/// Scans every subset with size in `sizes`. Only for small `n`.
pub fn naive_blocking(
    rel: &Rel,
    pi: &Partition,
    weak: bool,
    min_size: usize,
    max_size: usize,
) -> Option<Mask> {
    assert!(rel.n <= 26, "naive subset scan is limited to 26 agents");
    let base = pi_counts(rel, pi);
    (1u64..(1u64 << rel.n))
        .map(|m| m as Mask)
        .filter(|m| (min_size..=max_size).contains(&(m.count_ones() as usize)))
        .find(|&m| blocks(rel, &base, m, weak))
}

/// Largest set in which every member has strictly more friends than in the
/// partition. Empty iff no such coalition exists.
pub fn wonderful_fixpoint(rel: &Rel, pi: &Partition) -> Mask {
    let base = pi_counts(rel, pi);
    let mut alive: Mask = mask_of(&(0..rel.n).collect::<Vec<_>>());
    loop {
        let drop: Vec<usize> = members(alive)
            .into_iter()
            .filter(|&i| (rel.friend[i] & alive).count_ones() <= base[i].0)
            .collect();
        if drop.is_empty() {
            return alive;
        }
        for i in drop {
            alive &= !bit(i);
        }
    }
}

/// Connected subsets of the undirected friendship graph, up to `max_size`,
/// enumerated once each (rooted at their smallest member). Returns the first
/// blocking one, or `Err(())` when more than `budget` subsets are visited.
/// Any blocking coalition contains a connected blocking coalition, so this
/// decides blocking existence among sizes up to `max_size`.
pub fn connected_blocking(
    rel: &Rel,
    pi: &Partition,
    weak: bool,
    max_size: usize,
    budget: u64,
) -> Result<Option<Mask>, ()> {
    let base = pi_counts(rel, pi);
    // For strict blocking, drop agents who already have every friend and no
    // enemy: nothing can make them strictly better off.
    let keep: Mask = (0..rel.n)
        .filter(|&i| weak || pref((rel.friend[i].count_ones(), 0), base[i]) == Ordering::Greater)
        .fold(0, |m, i| m | bit(i));
    let adj: Vec<Mask> = rel.undirected().into_iter().map(|a| a & keep).collect();
    let mut visited = 0u64;
    for root in members(keep) {
        let higher: Mask = !((bit(root) << 1) - 1);
        let ext = adj[root] & higher;
        if let Some(found) = esu(
            rel,
            &base,
            &adj,
            weak,
            max_size,
            bit(root),
            ext,
            adj[root] | bit(root),
            higher,
            &mut visited,
            budget,
        )? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn esu(
    rel: &Rel,
    base: &[(u32, u32)],
    adj: &[Mask],
    weak: bool,
    max_size: usize,
    set: Mask,
    mut ext: Mask,
    closed: Mask,
    higher: Mask,
    visited: &mut u64,
    budget: u64,
) -> Result<Option<Mask>, ()> {
    *visited += 1;
    if *visited > budget {
        return Err(());
    }
    if blocks(rel, base, set, weak) {
        return Ok(Some(set));
    }
    if set.count_ones() as usize >= max_size {
        return Ok(None);
    }
    while ext != 0 {
        let w = ext.trailing_zeros() as usize;
        ext &= !bit(w);
        // New neighbours of w that are not adjacent to the current set.
        let fresh = adj[w] & higher & !closed;
        if let Some(found) = esu(
            rel,
            base,
            adj,
            weak,
            max_size,
            set | bit(w),
            ext | fresh,
            closed | adj[w],
            higher,
            visited,
            budget,
        )? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Blocking existence for FE: connected search up to κ plus the wonderful
/// fixpoint for anything larger (a blocker larger than every coalition of
/// the partition must give each member strictly more friends).
pub fn fe_blocking_exists(rel: &Rel, pi: &Partition, weak: bool, budget: u64) -> Result<bool, ()> {
    if wonderful_fixpoint(rel, pi) != 0 {
        return Ok(true);
    }
    Ok(connected_blocking(rel, pi, weak, pi.kappa(), budget)?.is_some())
}

pub fn labels_to_masks(labels: &[usize]) -> Vec<Mask> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut coal = vec![0; k];
    for (i, &l) in labels.iter().enumerate() {
        coal[l] |= bit(i);
    }
    coal
}

pub fn naive_nash(rel: &Rel, labels: &[usize]) -> bool {
    let coal = labels_to_masks(labels);
    (0..rel.n).all(|i| {
        let here = rel.counts(i, coal[labels[i]]);
        pref((0, 0), here) != Ordering::Greater
            && coal
                .iter()
                .all(|&d| d & bit(i) != 0 || pref(rel.counts(i, d), here) != Ordering::Greater)
    })
}

pub fn naive_individual(rel: &Rel, labels: &[usize]) -> bool {
    let coal = labels_to_masks(labels);
    (0..rel.n).all(|i| {
        let here = rel.counts(i, coal[labels[i]]);
        pref((0, 0), here) != Ordering::Greater
            && coal.iter().all(|&d| {
                d & bit(i) != 0
                    || members(d).iter().any(|&j| rel.enemy[j] & bit(i) != 0)
                    || pref(rel.counts(i, d), here) != Ordering::Greater
            })
    })
}

/// Calls `f` on every set partition of `0..n` as a label vector, stopping
/// when `f` returns true. Plain recursion over "join an earlier block or
/// open a new one".
pub fn any_partition(n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        labels: &mut Vec<usize>,
        n: usize,
        blocks: usize,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if labels.len() == n {
            return f(labels);
        }
        for b in 0..=blocks {
            labels.push(b);
            let hit = rec(labels, n, blocks.max(b + 1), f);
            labels.pop();
            if hit {
                return true;
            }
        }
        false
    }
    rec(&mut Vec::with_capacity(n), n, 0, f)
}

pub fn naive_exists_nash(rel: &Rel) -> bool {
    any_partition(rel.n, &mut |l| naive_nash(rel, l))
}

pub fn naive_exists_individual(rel: &Rel) -> bool {
    any_partition(rel.n, &mut |l| naive_individual(rel, l))
}

pub fn naive_exists_core(rel: &Rel, weak: bool) -> bool {
    any_partition(rel.n, &mut |l| {
        let pi = Partition::from_labels(l);
        naive_blocking(rel, &pi, weak, 1, rel.n).is_none()
    })
}

/// Minimum feedback arc set size by trying every arc subset of size
/// 0, 1, 2, ... up to `cap`. Returns None above the cap.
pub fn brute_fas(n: usize, arcs: &[(usize, usize)], cap: usize) -> Option<usize> {
    fn acyclic(n: usize, arcs: &[(usize, usize)], skip: &[usize]) -> bool {
        let mut indeg = vec![0; n];
        let mut out = vec![Vec::new(); n];
        for (k, &(u, v)) in arcs.iter().enumerate() {
            if !skip.contains(&k) {
                out[u].push(v);
                indeg[v] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        seen == n
    }
    fn choose(
        n: usize,
        arcs: &[(usize, usize)],
        k: usize,
        start: usize,
        pick: &mut Vec<usize>,
    ) -> bool {
        if pick.len() == k {
            return acyclic(n, arcs, pick);
        }
        for a in start..arcs.len() {
            pick.push(a);
            if choose(n, arcs, k, a + 1, pick) {
                return true;
            }
            pick.pop();
        }
        false
    }
    (0..=cap.min(arcs.len())).find(|&k| choose(n, arcs, k, 0, &mut Vec::new()))
}

pub fn is_acyclic_arcs(n: usize, arcs: &[(usize, usize)]) -> bool {
    brute_fas(n, arcs, 0) == Some(0)
}

pub fn random_arcs<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    arcs
}

pub fn random_fe<R: Rng>(rng: &mut R, n: usize, p: f64) -> Instance {
    Instance::fe(n, &random_arcs(rng, n, p)).unwrap()
}

/// Each ordered pair is a friend with probability `pf`, else an enemy with
/// probability `pe`, else neutral.
pub fn random_fen<R: Rng>(rng: &mut R, n: usize, pf: f64, pe: f64) -> Instance {
    let mut f = Vec::new();
    let mut e = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let x: f64 = rng.gen();
            if x < pf {
                f.push((u, v));
            } else if x < pf + pe {
                e.push((u, v));
            }
        }
    }
    Instance::fen(n, &f, &e).unwrap()
}

/// Relations whose arcs all point from lower to higher positions of a random
/// permutation, so the chosen graphs are acyclic.
pub fn random_forward_arcs<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                arcs.push((order[a], order[b]));
            }
        }
    }
    arcs
}

/// Random partition with coalitions of size at most `kmax`.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize, kmax: usize) -> Partition {
    let mut agents: Vec<usize> = (0..n).collect();
    agents.shuffle(rng);
    let mut coalitions = Vec::new();
    let mut rest = &agents[..];
    while !rest.is_empty() {
        let k = rng.gen_range(1..=kmax.min(rest.len()));
        coalitions.push(rest[..k].to_vec());
        rest = &rest[k..];
    }
    Partition::new(n, coalitions).unwrap()
}

/// Strongly connected components by mutual reachability, cut into pieces of
/// at most `kmax` agents. Often stable or close to it.
pub fn reachability_partition(rel: &Rel, kmax: usize) -> Partition {
    let n = rel.n;
    let mut reach: Vec<Mask> = (0..n).map(|i| rel.friend[i] | bit(i)).collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i] & bit(k) != 0 {
                reach[i] |= reach[k];
            }
        }
    }
    let mut placed: Mask = 0;
    let mut coalitions = Vec::new();
    for i in 0..n {
        if placed & bit(i) != 0 {
            continue;
        }
        let comp: Vec<usize> = (0..n)
            .filter(|&j| reach[i] & bit(j) != 0 && reach[j] & bit(i) != 0)
            .collect();
        placed |= mask_of(&comp);
        for chunk in comp.chunks(kmax) {
            coalitions.push(chunk.to_vec());
        }
    }
    Partition::new(n, coalitions).unwrap()
}

/// Runs the CLI binary and returns `(exit code, stdout, stderr)`.
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_hedonic"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

pub const EXAMPLE_LEFT: &str =
    "model fe\nagents 4\nfriend 0 1\nfriend 1 0\nfriend 0 2\nfriend 1 2\nfriend 2 3\n";
pub const EXAMPLE_RIGHT: &str = "model fen\nagents 4\nfriend 0 1\nfriend 1 0\nfriend 0 2\nfriend 1 2\nfriend 2 3\nenemy 2 0\nenemy 2 1\n";
pub const EXAMPLE_PI1: &str = "coalition 0 1\ncoalition 2\ncoalition 3\n";
pub const EXAMPLE_PI2: &str = "coalition 0 1\ncoalition 2 3\n";
pub const SEED_ONE_SET: &str = "elements 3\nset 0 1 2\n";
pub const SEED_THREE_SETS: &str = "elements 3\nset 0 1 2\nset 0 1 2\nset 0 1 2\n";
pub const SEED_TRIANGLE: &str = "vertices 3\nedge 0 1\nedge 1 2\nedge 0 2\ntarget 3\n";
pub const SEED_SIDED: &str = "elements 3\nset 0 1 2 out\n";

/// Seed text accepted by each reduction name.
pub fn seed_for(reduction: &str) -> &'static str {
    match reduction {
        "fe-core-clique" => SEED_TRIANGLE,
        "fe-core-planar4" => SEED_SIDED,
        "fen-strictcore-dag" | "fen-individex" => SEED_THREE_SETS,
        _ => SEED_ONE_SET,
    }
}

pub const REDUCTIONS: [&str; 7] = [
    "fe-core-f1",
    "fe-core-planar4",
    "fe-core-clique",
    "fen-core-f1",
    "fen-strictcore-dag",
    "fe-nashex",
    "fen-individex",
];
