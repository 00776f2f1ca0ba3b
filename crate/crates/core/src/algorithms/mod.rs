//! Constructive algorithms.
//!
//! - [`cis_upper`]: CIS partitions under an upper bound only.
//! - [`aziz_reference`]: the earlier leader-based CIS algorithm, kept as a
//!   foil because it can return unstable partitions.
//! - [`cns_pairs`]: CNS partitions into pairs and singletons.
//! - [`cis_star_nonzero`], [`cis_star_nonneg`]: CIS* partitions into exactly
//!   `k` coalitions under both bounds, for games without zero and without
//!   negative valuations respectively.
//! - [`symmetric_dynamics`]: NS* improvement dynamics for symmetric games.
//!
//! Every "select any agent" step picks the lowest available id, so runs are
//! reproducible.

mod dynamics;
mod lower;
mod upper;

pub use dynamics::{symmetric_dynamics, DynamicsRun};
pub use lower::{cis_star_nonneg, cis_star_nonzero};
pub use upper::{aziz_reference, cis_upper, cns_pairs, LeaderAction, LeaderStep, LeaderTrace};
