//! Instance generators built from exact-cover and clique seeds. Each
//! generated case carries its known answer and, when the seed has a
//! solution, an explicit witness.

mod clique;
mod existence;
mod fe_core;
mod fen_core;

pub use clique::gen_fe_core_clique;
pub use existence::{gen_fe_nashex, gen_fen_individex};
pub use fe_core::{gen_fe_core_f1, gen_fe_core_planar4};
pub use fen_core::{gen_fen_core_f1, gen_fen_strictcore_dag};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{AgentId, Instance, Partition};
use crate::params::{compute_params, max_degree};
use crate::verdict::{Mode, Notion};

/// Which side of the element gadget a set attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Out,
    In,
}

/// Exact cover by 3-sets over elements `0..3·n_hat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3CInstance {
    pub n_hat: usize,
    pub sets: Vec<[usize; 3]>,
    pub side: Option<Vec<Side>>,
    pub known_cover: Option<Vec<usize>>,
}

impl X3CInstance {
    pub fn new(n_hat: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        let x = X3CInstance {
            n_hat,
            sets,
            side: None,
            known_cover: None,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn with_sides(mut self, side: Vec<Side>) -> Result<Self> {
        if side.len() != self.sets.len() {
            return Err(Error::InvalidSeed(format!(
                "{} sides given for {} sets",
                side.len(),
                self.sets.len()
            )));
        }
        self.side = Some(side);
        Ok(self)
    }

    pub fn elements(&self) -> usize {
        3 * self.n_hat
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_hat == 0 {
            return Err(Error::InvalidSeed(
                "at least one element triple is required".into(),
            ));
        }
        for (j, s) in self.sets.iter().enumerate() {
            if s.iter().any(|&e| e >= self.elements()) {
                return Err(Error::InvalidSeed(format!(
                    "set {j} has an element outside 0..{}",
                    self.elements()
                )));
            }
            if s[0] == s[1] || s[0] == s[2] || s[1] == s[2] {
                return Err(Error::InvalidSeed(format!("set {j} repeats an element")));
            }
        }
        if let Some(side) = &self.side {
            if side.len() != self.sets.len() {
                return Err(Error::InvalidSeed(
                    "side list length differs from set count".into(),
                ));
            }
        }
        Ok(())
    }

    /// Number of sets containing each element.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.elements()];
        for s in &self.sets {
            for &e in s {
                occ[e] += 1;
            }
        }
        occ
    }

    /// Whether the listed set indices partition the element set.
    pub fn is_cover(&self, cover: &[usize]) -> bool {
        let mut seen = vec![false; self.elements()];
        for &j in cover {
            let Some(s) = self.sets.get(j) else {
                return false;
            };
            for &e in s {
                if seen[e] {
                    return false;
                }
                seen[e] = true;
            }
        }
        seen.iter().all(|&x| x)
    }

    fn sorted_set(&self, j: usize) -> [usize; 3] {
        let mut s = self.sets[j];
        s.sort_unstable();
        s
    }

    fn intersects(&self, j: usize, z: usize) -> bool {
        self.sets[j].iter().any(|e| self.sets[z].contains(e))
    }

    /// The cover used for witnesses and ground truth: the supplied one if
    /// valid, otherwise a brute-force search when the seed is small enough.
    pub(crate) fn resolve_cover(&self) -> Result<Option<Option<Vec<usize>>>> {
        if let Some(c) = &self.known_cover {
            if !self.is_cover(c) {
                return Err(Error::InvalidSeed(
                    "known cover is not an exact cover".into(),
                ));
            }
            return Ok(Some(Some(c.clone())));
        }
        match x3c_bruteforce(self) {
            Ok(c) => Ok(Some(c)),
            Err(Error::SizeLimit(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// First exact cover in lexicographic order of set indices.
pub fn x3c_bruteforce(x3c: &X3CInstance) -> Result<Option<Vec<usize>>> {
    x3c.validate()?;
    let m = x3c.sets.len();
    if m > 20 {
        return Err(Error::SizeLimit(format!(
            "{m} sets exceed the exact-cover brute-force limit of 20"
        )));
    }
    let k = x3c.n_hat;
    if k > m {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if x3c.is_cover(&idx) {
            return Ok(Some(idx));
        }
        if !crate::oracle::next_combination(&mut idx, m) {
            return Ok(None);
        }
    }
}

/// Simple undirected graph plus a target clique size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub h: usize,
}

impl CliqueInstance {
    /// Normalises edges to `(low, high)` in sorted order.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, h: usize) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidSeed(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidSeed(format!("loop at vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(Error::InvalidSeed("duplicate edge".into()));
        }
        Ok(CliqueInstance {
            vertices,
            edges: norm,
            h,
        })
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

/// First `h`-clique in lexicographic order of vertex sets.
pub fn clique_bruteforce(g: &CliqueInstance) -> Option<Vec<usize>> {
    let n = g.vertices;
    if g.h > n {
        return None;
    }
    if g.h == 0 {
        return Some(Vec::new());
    }
    let mut idx: Vec<usize> = (0..g.h).collect();
    loop {
        if idx
            .iter()
            .enumerate()
            .all(|(a, &u)| idx[a + 1..].iter().all(|&v| g.adjacent(u, v)))
        {
            return Some(idx);
        }
        if !crate::oracle::next_combination(&mut idx, n) {
            return None;
        }
    }
}

/// Explicit solution object for a generated case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A coalition that blocks the generated partition.
    Coalition(Vec<AgentId>),
    /// A partition stable under the case's notion.
    Partition(Partition),
}

/// What question a generated case poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    /// Is the generated partition stable under `Mode`?
    Verification(Mode),
    /// Does a partition stable under `Notion` exist?
    Existence(Notion),
}

/// Structural bounds a construction promises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Bounds {
    pub max_delta: Option<usize>,
    pub max_out_friends: Option<usize>,
    pub max_kappa: Option<usize>,
    pub max_fas: Option<usize>,
    pub symmetric: bool,
}

#[derive(Debug, Clone)]
pub struct GeneratedCase {
    pub reduction: &'static str,
    pub kind: CaseKind,
    pub instance: Instance,
    pub pi: Option<Partition>,
    /// For verification cases: a blocking coalition exists. For existence
    /// cases: a stable partition exists. `None` when the seed is too large
    /// to solve.
    pub ground_truth: Option<bool>,
    pub labels: Vec<String>,
    pub witness: Option<Witness>,
    pub bounds: Bounds,
}

impl GeneratedCase {
    /// Agent id carrying `label`.
    pub fn agent(&self, label: &str) -> Option<AgentId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Checks the promised bounds, computing the feedback arc set exactly
    /// when a bound on it is promised.
    pub fn check_bounds(&self) -> Result<()> {
        let b = &self.bounds;
        let params = compute_params(&self.instance, self.pi.as_ref(), b.max_fas.is_some())?;
        let fail = |what: String| Err(Error::Precondition(format!("{}: {what}", self.reduction)));
        if let Some(d) = b.max_delta {
            if params.delta > d {
                return fail(format!("degree {} above {d}", params.delta));
            }
        }
        if let Some(k) = b.max_kappa {
            if params.kappa.unwrap_or(0) > k {
                return fail(format!(
                    "coalition size {} above {k}",
                    params.kappa.unwrap_or(0)
                ));
            }
        }
        if let Some(f) = b.max_fas {
            if params.fas.value() > f {
                return fail(format!(
                    "feedback arc set number {} above {f}",
                    params.fas.value()
                ));
            }
        }
        if let Some(o) = b.max_out_friends {
            let worst = (0..self.instance.n())
                .map(|v| self.instance.friends_of(v).len())
                .max()
                .unwrap_or(0);
            if worst > o {
                return fail(format!("an agent has {worst} friends, above {o}"));
            }
        }
        if b.symmetric {
            let inst = &self.instance;
            if inst
                .friend_arcs()
                .iter()
                .any(|&(u, v)| !inst.is_friend(v, u))
            {
                return fail("friendship is not symmetric".into());
            }
        }
        debug_assert!(max_degree(&self.instance) == params.delta);
        Ok(())
    }
}

/// Collects labelled agents and arcs, then emits a sorted instance.
pub(crate) struct Builder {
    labels: Vec<String>,
    friends: Vec<(AgentId, AgentId)>,
    enemies: Vec<(AgentId, AgentId)>,
}

impl Builder {
    pub(crate) fn new() -> Self {
        Builder {
            labels: Vec::new(),
            friends: Vec::new(),
            enemies: Vec::new(),
        }
    }

    pub(crate) fn agent(&mut self, label: impl Into<String>) -> AgentId {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub(crate) fn friend(&mut self, u: AgentId, v: AgentId) {
        self.friends.push((u, v));
    }

    pub(crate) fn mutual(&mut self, u: AgentId, v: AgentId) {
        self.friends.push((u, v));
        self.friends.push((v, u));
    }

    pub(crate) fn enemy(&mut self, u: AgentId, v: AgentId) {
        self.enemies.push((u, v));
    }

    fn arcs(mut list: Vec<(AgentId, AgentId)>) -> Vec<(AgentId, AgentId)> {
        list.sort_unstable();
        list.dedup();
        list
    }

    pub(crate) fn finish_fe(self) -> (Instance, Vec<String>) {
        debug_assert!(self.enemies.is_empty());
        debug_assert_eq!(
            self.labels.iter().collect::<HashSet<_>>().len(),
            self.labels.len()
        );
        let inst = Instance::fe(self.labels.len(), &Self::arcs(self.friends))
            .expect("generated FE instance is valid");
        (inst, self.labels)
    }

    pub(crate) fn finish_fen(self) -> (Instance, Vec<String>) {
        debug_assert_eq!(
            self.labels.iter().collect::<HashSet<_>>().len(),
            self.labels.len()
        );
        let inst = Instance::fen(
            self.labels.len(),
            &Self::arcs(self.friends),
            &Self::arcs(self.enemies),
        )
        .expect("generated FEN instance is valid");
        (inst, self.labels)
    }
}
