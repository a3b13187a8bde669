//! Stability verification and existence algorithms for friend-oriented
//! hedonic games, with brute-force oracles and hard-instance generators.

pub mod error;
pub mod existence;
pub mod fpt;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod params;
pub mod reductions;
pub mod report;
pub mod verdict;
pub mod verification;

pub use error::{Error, Result};
pub use model::{compare, AgentId, Instance, Model, Partition, Preference};
pub use params::{compute_params, Fas, Params};
pub use verdict::{
    AgentDelta, BlockKind, BlockingCertificate, CertKind, Mode, Notion, Outcome, Verdict,
};
