//! Color-coding in-tree search in (κ, f).
//!
//! After three polynomial checks, every candidate blocking coalition is
//! split into its non-singleton part `B_NS` (guessed) and its singleton part
//! (searched for). Each guessed agent needs a number of extra singleton
//! friends; each singleton needs a friend inside the coalition. Those
//! demands form an in-tree rooted at an artificial sink, found by a dynamic
//! program over a random coloring of the singleton agents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mix_seed, trials_for, DEFAULT_FAILURE_PROB};
use crate::error::{require_model, Error, Result};
use crate::graph;
use crate::model::{count_relations, AgentId, Instance, Model, Partition};
use crate::oracle::{next_combination, BlockChecker};
use crate::verdict::{BlockingCertificate, CertKind, Mode, Outcome, Verdict};
use crate::verification::{preprocess_wonderful, Preprocessed};

#[derive(Debug, Clone, Copy)]
pub struct ColorCodingConfig {
    pub failure_prob: f64,
    pub seed: u64,
    /// Upper bound on the number of `(B_NS, b)` pairs.
    pub max_pairs: u64,
    /// Upper bound on in-trees per pair.
    pub max_trees: u64,
}

impl Default for ColorCodingConfig {
    fn default() -> Self {
        ColorCodingConfig {
            failure_prob: DEFAULT_FAILURE_PROB,
            seed: 0,
            max_pairs: 2_000_000,
            max_trees: 5_000_000,
        }
    }
}

pub fn verify_core_fpt_kf(inst: &Instance, pi: &Partition, mode: Mode) -> Result<Verdict> {
    verify_core_fpt_kf_with(inst, pi, mode, &ColorCodingConfig::default())
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    r
}

pub fn verify_core_fpt_kf_with(
    inst: &Instance,
    pi: &Partition,
    mode: Mode,
    cfg: &ColorCodingConfig,
) -> Result<Verdict> {
    require_model(inst.model(), Model::Fe)?;
    pi.check_for(inst)?;
    let algo = format!("fpt-kf-{mode}");
    let kind = match mode {
        Mode::Core => CertKind::Strict,
        Mode::StrictCore => CertKind::Weak,
    };
    let n = inst.n();
    let adj = inst.friend_graph();

    // P1: a coalition that is not strongly connected loses its sink component.
    let mut keep = vec![false; n];
    for coal in pi.coalitions() {
        coal.iter().for_each(|&v| keep[v] = true);
        let comps = graph::scc(adj, Some(&keep));
        coal.iter().for_each(|&v| keep[v] = false);
        if comps.len() > 1 {
            let cert = BlockingCertificate::coalition(inst, pi, comps[0].clone(), kind);
            return Ok(Verdict::new(algo, Outcome::Unstable(cert)).note("phase", "P1"));
        }
    }

    // P2: a friendship cycle among singleton agents blocks.
    let singleton: Vec<bool> = (0..n).map(|v| pi.coalition_of(v).len() == 1).collect();
    if let Some(cycle) = graph::shortest_cycle(adj, Some(&singleton)) {
        let cert = BlockingCertificate::coalition(inst, pi, cycle, kind);
        return Ok(Verdict::new(algo, Outcome::Unstable(cert)).note("phase", "P2"));
    }

    // P3: large blockers exist only if a wonderful coalition does.
    if let Preprocessed::Wonderful(cert) = preprocess_wonderful(inst, pi)? {
        return Ok(Verdict::new(algo, Outcome::Unstable(cert)).note("phase", "P3"));
    }

    let kappa = pi.kappa();
    let v_ns: Vec<AgentId> = (0..n).filter(|&v| !singleton[v]).collect();
    let v_s: Vec<AgentId> = (0..n).filter(|&v| singleton[v]).collect();
    let pairs: u64 = (1..=kappa.min(v_ns.len()))
        .map(|k| binom(v_ns.len(), k).saturating_mul((kappa - k + 1) as u64))
        .fold(0, u64::saturating_add);
    if pairs > cfg.max_pairs {
        return Err(Error::SizeLimit(format!(
            "{pairs} (B_NS, b) pairs exceed the budget of {}",
            cfg.max_pairs
        )));
    }

    let search = Search::new(inst, pi, mode, &v_s, cfg);
    let checker = BlockChecker::new(inst, pi, mode.block_kind());
    let mut pair_index: u64 = 0;
    let mut found: Option<Vec<AgentId>> = None;
    // Pairs are visited in one fixed order so the RNG stream of each pair
    // depends only on the seed and the pair's rank.
    'outer: for size in 1..=kappa.min(v_ns.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let b_ns: Vec<AgentId> = idx.iter().map(|&i| v_ns[i]).collect();
            for b in size..=kappa {
                pair_index += 1;
                let candidate = if b == size {
                    Some(b_ns.clone())
                } else {
                    search.run(&b_ns, b, pair_index)?.map(|b_s| {
                        let mut coal = b_ns.clone();
                        coal.extend(b_s);
                        coal.sort_unstable();
                        coal
                    })
                };
                if let Some(coal) = candidate {
                    if checker.blocks(&coal, &checker.mask_of(&coal)) {
                        found = Some(coal);
                        break 'outer;
                    }
                    debug_assert!(
                        b == size,
                        "tree search returned a non-blocking coalition {coal:?}"
                    );
                }
            }
            if !next_combination(&mut idx, v_ns.len()) {
                break;
            }
        }
    }
    Ok(match found {
        Some(coal) => Verdict::new(
            algo,
            Outcome::Unstable(BlockingCertificate::coalition(inst, pi, coal, kind)),
        )
        .note("phase", "tree-search")
        .note("pairs_tried", pair_index),
        None => Verdict::new(algo, Outcome::Stable).note("pairs_tried", pair_index),
    })
}

struct Search<'a> {
    inst: &'a Instance,
    pi: &'a Partition,
    mode: Mode,
    cfg: &'a ColorCodingConfig,
    v_s: &'a [AgentId],
    /// Position of each agent in `v_s`, or `usize::MAX`.
    pos: Vec<usize>,
    /// Singleton in-neighbours (positions) of each singleton, via friendship.
    s_in: Vec<Vec<usize>>,
    /// Topological order of the singleton friendship subgraph (positions).
    topo: Vec<usize>,
}

const ROOT: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(
        inst: &'a Instance,
        pi: &'a Partition,
        mode: Mode,
        v_s: &'a [AgentId],
        cfg: &'a ColorCodingConfig,
    ) -> Self {
        let mut pos = vec![usize::MAX; inst.n()];
        for (i, &v) in v_s.iter().enumerate() {
            pos[v] = i;
        }
        let m = v_s.len();
        let mut s_out = vec![Vec::new(); m];
        let mut s_in = vec![Vec::new(); m];
        for (i, &v) in v_s.iter().enumerate() {
            for &w in inst.friends_of(v) {
                if pos[w] != usize::MAX {
                    s_out[i].push(pos[w]);
                    s_in[pos[w]].push(i);
                }
            }
        }
        let topo =
            graph::topo_order(&s_out).expect("singleton friendship subgraph is acyclic after P2");
        Search {
            inst,
            pi,
            mode,
            cfg,
            v_s,
            pos,
            s_in,
            topo,
        }
    }

    /// Searches for `b - |B_NS|` singletons completing `b_ns` to a blocker.
    fn run(&self, b_ns: &[AgentId], b: usize, pair_index: u64) -> Result<Option<Vec<AgentId>>> {
        let k = b - b_ns.len();
        let mut reqs = Vec::with_capacity(b_ns.len());
        for &a in b_ns {
            let n_pi = count_relations(self.inst, a, self.pi.coalition_of(a)).0;
            let n_b = count_relations(self.inst, a, b_ns).0;
            let size_pi = self.pi.coalition_of(a).len();
            let needs_gain = match self.mode {
                Mode::Core => b >= size_pi,
                Mode::StrictCore => b > size_pi,
            };
            let r = if n_pi < n_b {
                0
            } else if needs_gain {
                n_pi + 1 - n_b
            } else {
                n_pi - n_b
            };
            if r > k {
                return Ok(None);
            }
            reqs.push(r);
        }
        let m = self.v_s.len();
        if m < k {
            return Ok(None);
        }
        // Singleton friends of each guessed agent, and singletons with a friend in B_NS.
        let targets: Vec<Vec<bool>> = b_ns
            .iter()
            .map(|&a| {
                let mut t = vec![false; m];
                for &w in self.inst.friends_of(a) {
                    if self.pos[w] != usize::MAX {
                        t[self.pos[w]] = true;
                    }
                }
                t
            })
            .collect();
        let to_root: Vec<bool> = self
            .v_s
            .iter()
            .map(|&s| b_ns.iter().any(|&a| self.inst.is_friend(s, a)))
            .collect();
        if !to_root.iter().any(|&x| x) {
            return Ok(None);
        }

        let parents = color_trees(k);
        let copy_choices: Vec<Vec<Vec<usize>>> = reqs.iter().map(|&r| combinations(k, r)).collect();
        let tree_count = copy_choices.iter().fold(parents.len() as u64, |acc, c| {
            acc.saturating_mul(c.len() as u64)
        });
        if tree_count > self.cfg.max_trees {
            return Err(Error::SizeLimit(format!(
                "{tree_count} in-trees exceed the budget of {}",
                self.cfg.max_trees
            )));
        }

        let p_good = (1..=k).map(|i| i as f64 / k as f64).product::<f64>();
        let trials = trials_for(p_good, self.cfg.failure_prob);
        let exhaustive = (k as f64).powi(m as i32) <= trials as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(self.cfg.seed, pair_index));
        let mut chi = vec![0usize; m];
        let mut first = true;
        let mut dp = Dp::new(m, k);
        loop {
            if exhaustive {
                if !first && !next_radix(&mut chi, k) {
                    break;
                }
            } else {
                if !first && dp.colorings >= trials {
                    break;
                }
                chi.iter_mut().for_each(|c| *c = rng.gen_range(0..k));
            }
            first = false;
            dp.colorings += 1;
            let mut choice = vec![0usize; b_ns.len()];
            for parent in &parents {
                loop {
                    // Colors each guessed agent's copies point to.
                    let copy_colors: Vec<&[usize]> = choice
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| copy_choices[i][c].as_slice())
                        .collect();
                    if let Some(found) =
                        dp.solve(self, &chi, parent, &copy_colors, &targets, &to_root)
                    {
                        return Ok(Some(found.into_iter().map(|p| self.v_s[p]).collect()));
                    }
                    if !next_choice(&mut choice, &copy_choices) {
                        break;
                    }
                }
            }
        }
        Ok(None)
    }
}

struct Dp {
    colorings: u64,
    deleted: Vec<bool>,
    stored: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    root_children: Vec<usize>,
    agents_at: Vec<Vec<usize>>,
}

impl Dp {
    fn new(m: usize, k: usize) -> Self {
        Dp {
            colorings: 0,
            deleted: vec![false; m],
            stored: vec![Vec::new(); m],
            children: vec![Vec::new(); k],
            root_children: Vec::new(),
            agents_at: vec![Vec::new(); k],
        }
    }

    /// One pass of the dynamic program for a coloring and an in-tree.
    /// Returns the collected singleton positions on success.
    fn solve(
        &mut self,
        s: &Search<'_>,
        chi: &[usize],
        parent: &[usize],
        copies: &[&[usize]],
        targets: &[Vec<bool>],
        to_root: &[bool],
    ) -> Option<Vec<usize>> {
        let k = parent.len();
        self.children.iter_mut().for_each(Vec::clear);
        self.root_children.clear();
        for (c, &p) in parent.iter().enumerate() {
            if p == ROOT {
                self.root_children.push(c);
            } else {
                self.children[p].push(c);
            }
        }
        self.agents_at.iter_mut().for_each(Vec::clear);
        for (i, cols) in copies.iter().enumerate() {
            for &c in cols.iter() {
                self.agents_at[c].push(i);
            }
        }
        for &v in &s.topo {
            self.deleted[v] = true;
            self.stored[v].clear();
            let c = chi[v];
            // Every guessed agent pointing at this color must befriend v.
            if !self.agents_at[c].iter().all(|&i| targets[i][v]) {
                continue;
            }
            let mut ok = true;
            for &cc in &self.children[c] {
                match s.s_in[v]
                    .iter()
                    .copied()
                    .filter(|&u| !self.deleted[u] && chi[u] == cc)
                    .min()
                {
                    Some(u) => self.stored[v].push(u),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                self.deleted[v] = false;
            } else {
                self.stored[v].clear();
            }
        }
        let mut collected = Vec::with_capacity(k);
        for &cc in &self.root_children {
            let u = (0..chi.len()).find(|&u| to_root[u] && !self.deleted[u] && chi[u] == cc)?;
            collected.push(u);
        }
        let mut frontier = 0;
        while frontier < collected.len() {
            let v = collected[frontier];
            frontier += 1;
            collected.extend(self.stored[v].iter().copied());
        }
        collected.sort_unstable();
        collected.dedup();
        (collected.len() == k).then_some(collected)
    }
}

/// Parent arrays over colors `0..k` where every color reaches the root.
fn color_trees(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut digits = vec![0usize; k];
    loop {
        let parent: Vec<usize> = digits
            .iter()
            .map(|&d| if d == k { ROOT } else { d })
            .collect();
        let valid = (0..k).all(|c| {
            let mut cur = c;
            for _ in 0..=k {
                if parent[cur] == ROOT {
                    return true;
                }
                cur = parent[cur];
                if cur == c {
                    return false;
                }
            }
            false
        });
        if valid {
            out.push(parent);
        }
        if !next_radix(&mut digits, k + 1) {
            break;
        }
    }
    out
}

/// Strictly increasing `r`-tuples over `0..k`.
fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..k {
            cur.push(c);
            rec(c + 1, k, r, cur, out);
            cur.pop();
        }
    }
    rec(0, k, r, &mut cur, &mut out);
    out
}

fn next_radix(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_choice(choice: &mut [usize], options: &[Vec<Vec<usize>>]) -> bool {
    for (i, c) in choice.iter_mut().enumerate() {
        *c += 1;
        if *c < options[i].len() {
            return true;
        }
        *c = 0;
    }
    false
}
