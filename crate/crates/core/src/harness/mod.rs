//! Experiment drivers shared by the command-line tool and the acceptance
//! tests: sampling with per-trial streams, comparisons against exact laws,
//! identity suites and predictions. Every report carries the content hash
//! of the configuration that produced it.

mod config;
pub mod compare;
pub mod predict;
pub mod sampling;
pub mod verify;

pub use compare::{clt_with_bounds, compare, corner_law, lyapunov_empirical, Check, CltBounds, CompareReport, Mode};
pub use config::{ExperimentConfig, SampleKind};
pub use predict::{frequency_profile, predict, Prediction};
pub use sampling::{corner_sample, final_marginal, product_sample, sample_paths, SnSample};
pub use verify::{verify, IdentityCheck, Suite, VerifyReport};

pub(crate) use config::content_hash;

/// Hash of an output file's bytes, in the same format as config hashes.
pub fn file_hash(bytes: &[u8]) -> String {
    content_hash("blob", bytes)
}
