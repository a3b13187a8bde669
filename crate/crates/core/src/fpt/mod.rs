//! Parameterized core verifiers for FE instances.

mod color_coding;
mod separation;

pub use color_coding::{verify_core_fpt_kf, verify_core_fpt_kf_with, ColorCodingConfig};
pub use separation::{separation_trials, verify_core_fpt_kd, SeparationConfig};

use crate::model::Partition;
use crate::params::Params;

/// Default one-sided failure probability of the randomized searches.
pub const DEFAULT_FAILURE_PROB: f64 = 1.0 / (1u64 << 20) as f64;

/// Whether the number of agents in non-singleton coalitions is at most κ·f.
/// Every core stable partition satisfies this.
pub fn bound_nonsingletons(pi: &Partition, params: &Params) -> bool {
    let kappa = params.kappa.unwrap_or_else(|| pi.kappa());
    let nonsingle: usize = pi
        .coalitions()
        .iter()
        .filter(|c| c.len() > 1)
        .map(Vec::len)
        .sum();
    nonsingle <= kappa * params.fas.value()
}

/// Number of independent trials so that an event of probability `p_hit`
/// is missed with probability at most `failure_prob`.
pub(crate) fn trials_for(p_hit: f64, failure_prob: f64) -> u64 {
    if p_hit >= 1.0 {
        return 1;
    }
    (failure_prob.ln() / (1.0 - p_hit).ln()).ceil().max(1.0) as u64
}

/// Seed for an independent stream derived from a base seed and an index.
pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
