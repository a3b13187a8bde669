//! Random separation in (κ, Δ).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mix_seed, trials_for, DEFAULT_FAILURE_PROB};
use crate::error::{require_model, Error, Result};
use crate::graph;
use crate::model::{Instance, Model, Partition};
use crate::oracle::BlockChecker;
use crate::params::max_degree;
use crate::verdict::{BlockingCertificate, CertKind, Mode, Outcome, Verdict};
use crate::verification::{preprocess_wonderful, Preprocessed};

#[derive(Debug, Clone, Copy)]
pub struct SeparationConfig {
    pub failure_prob: f64,
    pub seed: u64,
    /// Upper bound on the total number of sampled subsets.
    pub max_trials: u64,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            failure_prob: DEFAULT_FAILURE_PROB,
            seed: 0,
            max_trials: 20_000_000,
        }
    }
}

/// `(q, keep probability, trials)` for target size `p`. The neighbourhood of
/// a `p`-agent coalition has at most `min(Δ·p, n − p)` agents.
pub fn separation_trials(n: usize, delta: usize, p: usize, failure_prob: f64) -> (usize, f64, u64) {
    let q = (delta * p).min(n.saturating_sub(p));
    let x = p as f64 / (p + q) as f64;
    let p_hit = x.powi(p as i32) * (1.0 - x).powi(q as i32);
    (q, x, trials_for(p_hit, failure_prob))
}

/// Samples agent subsets and tests their components as blocking coalitions.
/// STABLE answers are wrong with probability at most `failure_prob` per
/// target size; UNSTABLE answers carry a checked certificate.
pub fn verify_core_fpt_kd(
    inst: &Instance,
    pi: &Partition,
    mode: Mode,
    cfg: &SeparationConfig,
) -> Result<Verdict> {
    require_model(inst.model(), Model::Fe)?;
    let algo = format!("fpt-kd-{mode}");
    if let Preprocessed::Wonderful(cert) = preprocess_wonderful(inst, pi)? {
        return Ok(Verdict::new(algo, Outcome::Unstable(cert)).note("phase", "preprocess"));
    }
    let n = inst.n();
    let kappa = pi.kappa().min(n);
    let delta = max_degree(inst);
    let plan: Vec<(usize, usize, f64, u64)> = (1..=kappa)
        .map(|p| {
            let (q, x, t) = separation_trials(n, delta, p, cfg.failure_prob);
            (p, q, x, t)
        })
        .collect();
    let total: u64 = plan.iter().map(|e| e.3).sum();
    if total > cfg.max_trials {
        return Err(Error::SizeLimit(format!(
            "{total} separation trials exceed the budget of {}",
            cfg.max_trials
        )));
    }
    let checker = BlockChecker::new(inst, pi, mode.block_kind());
    let kind = match mode {
        Mode::Core => CertKind::Strict,
        Mode::StrictCore => CertKind::Weak,
    };
    let adj = inst.friend_graph();
    let mut keep = vec![false; n];
    for &(p, _q, x, trials) in &plan {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, p as u64));
        for _ in 0..trials {
            for k in keep.iter_mut() {
                *k = rng.gen_bool(x);
            }
            let comps = match mode {
                Mode::Core => graph::scc(adj, Some(&keep)),
                Mode::StrictCore => graph::weak_components(adj, Some(&keep)),
            };
            for comp in comps {
                if comp.len() <= kappa && checker.blocks(&comp, &checker.mask_of(&comp)) {
                    let cert = BlockingCertificate::coalition(inst, pi, comp, kind);
                    return Ok(Verdict::new(algo, Outcome::Unstable(cert))
                        .note("phase", "separation")
                        .note("p", p));
                }
            }
        }
    }
    let trials = plan
        .iter()
        .map(|e| format!("{}:{}", e.0, e.3))
        .collect::<Vec<_>>()
        .join(",");
    Ok(Verdict::new(algo, Outcome::Stable)
        .note("delta", delta)
        .note("trials", trials))
}
