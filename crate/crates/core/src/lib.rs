//! Core analytics for ego- vs audience-centric identity salience on
//! bipartite follow graphs.
//!
//! The crate is organized around a fixed pipeline:
//!
//! 1. [`graph`] — immutable bipartite follow graph (influencers × users)
//!    plus the snowball selection filters used to pick influencer and
//!    audience sets out of a raw candidate graph.
//! 2. [`tag`] — identity-dimension vocabularies and the tagger that maps
//!    free-text category strings onto per-dimension tag matrices.
//! 3. [`salience`] — raw salience scores (followee-tag entropy for race and
//!    gender, tag coverage for the other dimensions), z-normalized ego
//!    scores, and per-influencer audience scores.
//! 4. [`stats`] — per-dimension ego-minus-audience difference sets and the
//!    significance pipeline: paired t-test, Wilcoxon signed-rank, paired
//!    bootstrap intervals, Bonferroni correction.
//! 5. [`bridge`] — ranking of influencers whose followee composition is much
//!    closer to a target community than their audience's.
//! 6. [`synth`] — seeded synthetic-population generator with controllable
//!    homophily, used to exercise the pipeline end to end.
//!
//! The crate is `no_std` (with `alloc`) so the computational core stays free
//! of process and filesystem concerns; the companion CLI crate carries all
//! IO and file formats. All randomized operations take explicit 64-bit seeds
//! and derive per-task substreams through [`rng`], so results are
//! reproducible bit for bit regardless of how work is scheduled.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bridge;
pub mod dist;
pub mod graph;
pub(crate) mod math;
pub mod rng;
pub mod salience;
pub mod stats;
pub mod synth;
pub mod tag;

pub use graph::{CandidateGraph, CandidateRecord, FollowGraph, GraphError, Role, UserRecord};
pub use salience::{DimensionProfile, ProfileOptions, ProfileSet, RawScore};
pub use stats::{DivergenceReport, StatsConfig, StatsError};
pub use tag::{IdentityDimension, MetricKind, TagMatrix, TagSet, Vocabulary};
