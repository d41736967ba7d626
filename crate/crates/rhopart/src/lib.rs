//! Constrained random partitions of the integers: samplers, exact laws,
//! and statistical verification.
//!
//! A partition of {1, 2, ...} is *constrained* by a sequence
//! rho = (rho_1, rho_2, ...) when block k holds the rho_k least elements
//! of everything from block k onward — the first rho_k arrivals of a block
//! "establish" it. This crate provides:
//!
//! - [`rho`], [`composition`], [`partition`]: the domain values — the
//!   constraint sequence, compositions (shapes), and finite set
//!   partitions with their validity, restriction, shape, formation
//!   sequence, and block-count operations;
//! - [`counting`]: exact counts of constrained partitions by shape and of
//!   extensions, with a brute-force enumeration oracle;
//! - [`freq`]: frequency models for the tail-mass sequence H_k (fixed
//!   lists, i.i.d. stick-breaking, independent betas, the two-parameter
//!   family) realized lazily along [`freq::HPath`]s;
//! - [`samplers`]: the sequential growth rules, the paintbox screening
//!   construction, the urn deletion kernel, a continuous-time embedding
//!   with gamma sojourns, and chain records on [0,1]^d;
//! - [`laws`]: exact shape and formation-sequence probabilities under
//!   fixed tail masses, the decrement-matrix product formula for beta
//!   residuals, Monte-Carlo estimators, and the two-parameter EPPF;
//! - [`experiments`]: seeded, reproducible statistical campaigns — the
//!   block-count central limit experiment, kernel-consistency audits,
//!   sampler-agreement checks, chain-record and continuous-time jump
//!   counts — reporting moments, references, and pass/fail verdicts;
//! - [`cli`]: the `rhopart` binary surface over all of the above.
//!
//! Every stochastic routine takes an explicit [`stream::RandomStream`];
//! identical seeds reproduce identical results bit-for-bit, and parallel
//! experiments derive one substream per replicate so reports do not
//! depend on the worker count.
//!
//! The `examples/` directory has one runnable program per capability;
//! start with `cargo run --example sample_sequential`.

pub mod cli;
pub mod composition;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod freq;
pub mod laws;
pub mod partition;
pub mod rho;
pub mod samplers;
pub mod verify;
mod special;
pub mod stream;

pub use composition::{constrained_compositions, Composition};
pub use counting::{count_extensions, count_partitions_of_shape, enumerate_partitions};
pub use error::{Error, Result};
pub use freq::{draw_h, AffineSeq, FrequencyModel, HPath, LogMoments, Tail, WDistribution};
pub use partition::SetPartition;
pub use rho::{ConstraintSeq, RealConstraintSeq};
pub use stream::RandomStream;
