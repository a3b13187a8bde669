//! Independent deciders for generated reduction cases.

use std::collections::HashSet;

use hedonic::oracle::certify;
use hedonic::reductions::*;
use hedonic::{BlockingCertificate, CertKind, Mode};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{connected_blocking, fe_blocking_exists, naive_blocking, Rel};

pub const ESU_BUDGET: u64 = 50_000_000;

pub fn blocking_kind(mode: Mode) -> bool {
    mode == Mode::StrictCore
}

/// Independent decision on a verification case, or None when the oracle
/// budget is exceeded.
pub fn oracle_blocked(case: &GeneratedCase) -> Option<bool> {
    let CaseKind::Verification(mode) = case.kind else {
        panic!("not a verification case")
    };
    let pi = case.pi.as_ref().unwrap();
    let rel = Rel::new(&case.instance);
    let weak = blocking_kind(mode);
    if rel.n <= 20 {
        return Some(naive_blocking(&rel, pi, weak, 1, rel.n).is_some());
    }
    if case.instance.model() == hedonic::Model::Fe {
        return fe_blocking_exists(&rel, pi, weak, ESU_BUDGET).ok();
    }
    connected_blocking(&rel, pi, weak, rel.n, ESU_BUDGET)
        .ok()
        .map(|r| r.is_some())
}

pub fn witness_blocks(case: &GeneratedCase) -> bool {
    let CaseKind::Verification(mode) = case.kind else {
        panic!("not a verification case")
    };
    let Some(Witness::Coalition(w)) = &case.witness else {
        return false;
    };
    let pi = case.pi.as_ref().unwrap();
    let kind = if mode == Mode::Core {
        CertKind::Strict
    } else {
        CertKind::Weak
    };
    let cert = BlockingCertificate::coalition(&case.instance, pi, w.clone(), kind);
    certify(&case.instance, pi, &cert).unwrap() && set_blocks(case, w, blocking_kind(mode))
}

/// Blocking check straight from the arc lists, for any number of agents.
pub fn set_blocks(case: &GeneratedCase, block: &[usize], weak: bool) -> bool {
    let inst = &case.instance;
    let friends: HashSet<(usize, usize)> = inst.friend_arcs().into_iter().collect();
    let enemies: HashSet<(usize, usize)> = inst.enemy_arcs().into_iter().collect();
    let fe = inst.model() == hedonic::Model::Fe;
    let counts = |i: usize, set: &[usize]| {
        let f = set.iter().filter(|&&j| friends.contains(&(i, j))).count();
        let e = set
            .iter()
            .filter(|&&j| {
                j != i
                    && if fe {
                        !friends.contains(&(i, j))
                    } else {
                        enemies.contains(&(i, j))
                    }
            })
            .count();
        (f as u32, e as u32)
    };
    let pi = case.pi.as_ref().unwrap();
    let mut strict = false;
    for &i in block {
        match super::pref(counts(i, block), counts(i, pi.coalition_of(i))) {
            std::cmp::Ordering::Greater => strict = true,
            std::cmp::Ordering::Equal if weak => {}
            _ => return false,
        }
    }
    strict
}

pub fn n1_seeds(max_sets: usize) -> Vec<X3CInstance> {
    // Over three elements the only triple is {0,1,2}; element order inside
    // a set still changes gadget wiring, so vary it.
    let orders = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];
    (0..=max_sets)
        .map(|m| X3CInstance::new(1, (0..m).map(|j| orders[j % 3]).collect()).unwrap())
        .collect()
}

pub fn random_n2_seed(rng: &mut ChaCha8Rng, min_sets: usize, max_sets: usize) -> X3CInstance {
    let mut triples = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                triples.push([a, b, c]);
            }
        }
    }
    loop {
        let m = rng.gen_range(min_sets..=max_sets);
        let sets: Vec<[usize; 3]> = (0..m).map(|_| *triples.choose(rng).unwrap()).collect();
        let x = X3CInstance::new(2, sets).unwrap();
        if x.occurrences().iter().all(|&k| k <= 3) {
            return x;
        }
    }
}

pub fn all_graphs_up_to_iso(max_vertices: usize) -> Vec<CliqueInstance> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let perms = permutations(n);
        let mut seen = HashSet::new();
        for bits in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| bits >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> = edges
                        .iter()
                        .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                        .collect();
                    e.sort_unstable();
                    e
                })
                .min()
                .unwrap();
            if seen.insert(canon.clone()) {
                out.push(CliqueInstance::new(n, canon, 3).unwrap());
            }
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
