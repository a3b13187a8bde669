//! Verifiers for Nash, individual and (strict) core stability.

use crate::error::{require_model, Error, Result};
use crate::graph;
use crate::model::{
    compare_counts, count_relations, AgentId, Instance, Model, Partition, Preference,
};
use crate::oracle::{self, subsets_up_to, BlockChecker};
use crate::verdict::{BlockingCertificate, CertKind, Mode, Outcome, Verdict};

pub use crate::oracle::find_blocking_bruteforce;

/// Default budget on candidate coalitions enumerated by the XP verifier.
pub const DEFAULT_XP_BUDGET: u64 = 30_000_000;

fn prefers_alone(inst: &Instance, pi: &Partition, i: AgentId) -> bool {
    compare_counts((0, 0), count_relations(inst, i, pi.coalition_of(i))) == Preference::Prefers
}

/// The first agent who would rather be alone, as a Nash deviation.
pub fn is_individually_rational(
    inst: &Instance,
    pi: &Partition,
) -> Result<Option<BlockingCertificate>> {
    pi.check_for(inst)?;
    Ok((0..inst.n())
        .find(|&i| prefers_alone(inst, pi, i))
        .map(|i| BlockingCertificate::nash(inst, pi, i, None)))
}

/// Counts of agent `i` in every coalition of `pi` after joining it.
fn joined_counts(inst: &Instance, pi: &Partition, i: AgentId) -> Vec<(usize, usize)> {
    let k = pi.coalitions().len();
    let mut f = vec![0usize; k];
    let mut e = vec![0usize; k];
    for &j in inst.friends_of(i) {
        f[pi.owner(j)] += 1;
    }
    match inst.model() {
        Model::Fe => {
            for (c, coal) in pi.coalitions().iter().enumerate() {
                let others = coal.len() - usize::from(c == pi.owner(i));
                e[c] = others - f[c];
            }
        }
        Model::Fen => {
            for &j in inst.enemies_of(i) {
                e[pi.owner(j)] += 1;
            }
        }
    }
    f.into_iter().zip(e).collect()
}

pub fn verify_nash(inst: &Instance, pi: &Partition) -> Result<Verdict> {
    if let Some(cert) = is_individually_rational(inst, pi)? {
        return Ok(Verdict::new("nash", Outcome::Unstable(cert))
            .note("violation", "individual-rationality"));
    }
    for i in 0..inst.n() {
        let counts = joined_counts(inst, pi, i);
        let own = pi.owner(i);
        for (c, &cnt) in counts.iter().enumerate() {
            if c != own && compare_counts(cnt, counts[own]) == Preference::Prefers {
                return Ok(Verdict::new(
                    "nash",
                    Outcome::Unstable(BlockingCertificate::nash(inst, pi, i, Some(c))),
                ));
            }
        }
    }
    Ok(Verdict::new("nash", Outcome::Stable))
}

pub fn verify_individual(inst: &Instance, pi: &Partition) -> Result<Verdict> {
    pi.check_for(inst)?;
    if let Some(i) = (0..inst.n()).find(|&i| prefers_alone(inst, pi, i)) {
        let cert = BlockingCertificate::tuple(inst, pi, i, None);
        return Ok(Verdict::new("individual", Outcome::Unstable(cert))
            .note("violation", "individual-rationality"));
    }
    for i in 0..inst.n() {
        let counts = joined_counts(inst, pi, i);
        let own = pi.owner(i);
        for (c, &cnt) in counts.iter().enumerate() {
            if c == own || compare_counts(cnt, counts[own]) != Preference::Prefers {
                continue;
            }
            // A member accepts `i` unless she regards `i` as an enemy.
            if pi.coalitions()[c].iter().all(|&j| !inst.is_enemy(j, i)) {
                return Ok(Verdict::new(
                    "individual",
                    Outcome::Unstable(BlockingCertificate::tuple(inst, pi, i, Some(c))),
                ));
            }
        }
    }
    Ok(Verdict::new("individual", Outcome::Stable))
}

/// Outcome of the wonderful-coalition preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preprocessed {
    /// A coalition in which every member has strictly more friends than in Π.
    Wonderful(BlockingCertificate),
    /// Every (weakly) blocking coalition has at most this many agents.
    AllBlockersSmall(usize),
}

/// Peels agents whose remaining out-friends cannot exceed their current
/// friend count. What survives is the largest coalition in which everybody
/// gains a friend.
pub fn preprocess_wonderful(inst: &Instance, pi: &Partition) -> Result<Preprocessed> {
    require_model(inst.model(), Model::Fe)?;
    pi.check_for(inst)?;
    let n = inst.n();
    let need: Vec<usize> = (0..n)
        .map(|v| count_relations(inst, v, pi.coalition_of(v)).0 + 1)
        .collect();
    let mut outdeg: Vec<usize> = (0..n).map(|v| inst.friends_of(v).len()).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<AgentId> = (0..n).filter(|&v| outdeg[v] < need[v]).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop() {
        for &u in inst.friended_by(v) {
            if alive[u] {
                outdeg[u] -= 1;
                if outdeg[u] < need[u] {
                    alive[u] = false;
                    queue.push(u);
                }
            }
        }
    }
    let residual: Vec<AgentId> = (0..n).filter(|&v| alive[v]).collect();
    if residual.is_empty() {
        Ok(Preprocessed::AllBlockersSmall(pi.kappa()))
    } else {
        Ok(Preprocessed::Wonderful(BlockingCertificate::coalition(
            inst,
            pi,
            residual,
            CertKind::Wonderful,
        )))
    }
}

fn cert_kind(mode: Mode) -> CertKind {
    match mode {
        Mode::Core => CertKind::Strict,
        Mode::StrictCore => CertKind::Weak,
    }
}

/// Wonderful preprocessing followed by enumeration of all coalitions with
/// at most κ agents.
pub fn verify_core_xp(inst: &Instance, pi: &Partition, mode: Mode) -> Result<Verdict> {
    verify_core_xp_with_budget(inst, pi, mode, DEFAULT_XP_BUDGET)
}

pub fn verify_core_xp_with_budget(
    inst: &Instance,
    pi: &Partition,
    mode: Mode,
    budget: u64,
) -> Result<Verdict> {
    let algo = format!("xp-{mode}");
    let kappa = match preprocess_wonderful(inst, pi)? {
        Preprocessed::Wonderful(cert) => {
            return Ok(Verdict::new(algo, Outcome::Unstable(cert)).note("phase", "preprocess"))
        }
        Preprocessed::AllBlockersSmall(k) => k,
    };
    let n = inst.n();
    let count = subsets_up_to(n, kappa);
    if count > budget {
        return Err(Error::SizeLimit(format!(
            "{count} coalitions of size at most {kappa} exceed the budget of {budget}"
        )));
    }
    let checker = BlockChecker::new(inst, pi, mode.block_kind());
    let found = oracle::first_subset(n, 1..=kappa, |m| checker.blocks(m, &checker.mask_of(m)));
    let verdict = match found {
        Some(c) => Verdict::new(
            algo,
            Outcome::Unstable(BlockingCertificate::coalition(inst, pi, c, cert_kind(mode))),
        )
        .note("phase", "enumeration"),
        None => Verdict::new(algo, Outcome::Stable),
    };
    Ok(verdict.note("kappa", kappa).note("coalitions", count))
}

/// Exhaustive verifier used as the reference answer.
pub fn verify_core_bruteforce(inst: &Instance, pi: &Partition, mode: Mode) -> Result<Verdict> {
    let algo = format!("brute-{mode}");
    Ok(
        match find_blocking_bruteforce(inst, pi, mode.block_kind(), None)? {
            Some(c) => Verdict::new(algo, Outcome::Unstable(c)),
            None => Verdict::new(algo, Outcome::Stable),
        },
    )
}

/// Shortcuts for acyclic friendship graphs. On FE the only core stable
/// partition is the all-singleton one; this is applied to both modes. On
/// FEN, core stability coincides with individual rationality.
pub fn verify_core_dag_shortcut(inst: &Instance, pi: &Partition, mode: Mode) -> Result<Verdict> {
    pi.check_for(inst)?;
    if !graph::is_acyclic(inst.friend_graph()) {
        return Err(Error::NotApplicable("friendship graph has a cycle".into()));
    }
    let algo = format!("dag-{mode}");
    match inst.model() {
        Model::Fe => {
            let Some(coal) = pi.coalitions().iter().find(|c| c.len() > 1) else {
                return Ok(Verdict::new(algo, Outcome::Stable));
            };
            // An acyclic coalition has a member with no friend inside it;
            // she strictly prefers to be alone.
            let sink = *coal
                .iter()
                .find(|&&v| {
                    inst.friends_of(v)
                        .iter()
                        .all(|w| coal.binary_search(w).is_err())
                })
                .expect("acyclic coalition has a sink");
            Ok(Verdict::new(
                algo,
                Outcome::Unstable(BlockingCertificate::coalition(
                    inst,
                    pi,
                    vec![sink],
                    cert_kind(mode),
                )),
            ))
        }
        Model::Fen => {
            if mode == Mode::StrictCore {
                return Err(Error::NotApplicable(
                    "the FEN shortcut covers core stability only".into(),
                ));
            }
            Ok(match (0..inst.n()).find(|&i| prefers_alone(inst, pi, i)) {
                Some(i) => Verdict::new(
                    algo,
                    Outcome::Unstable(BlockingCertificate::coalition(
                        inst,
                        pi,
                        vec![i],
                        CertKind::Strict,
                    )),
                ),
                None => Verdict::new(algo, Outcome::Stable),
            })
        }
    }
}
