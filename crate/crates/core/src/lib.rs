//! Stable coalition structures in additively separable hedonic games (ASHGs)
//! whose coalitions must respect a lower and an upper size bound.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: games, size bounds, partitions and the closed-form arithmetic
//!   deciding when size-bounded partitions exist.
//! - [`prefs`]: utilities, social welfare and the agent-set selectors
//!   (best subsets, friends, enemies) the algorithms are phrased in.
//! - [`stability`]: single-agent deviations and a verifier for the eight
//!   stability concepts (NS, IS, CNS, CIS and their feasible `*` variants).
//! - [`algorithms`]: constructive polynomial-time algorithms plus welfare
//!   dynamics for symmetric games.
//! - [`exact`]: exhaustive enumeration of size-bounded partitions, used as an
//!   existence oracle and welfare maximiser on small games.
//! - [`instances`]: generators for the named counterexample games.
//! - [`reductions`]: builders for the hardness gadgets and their witness
//!   partitions.
//! - [`io`]: the line-oriented text formats.
//!
//! All numerics are generic over [`Valuation`], a totally ordered signed
//! scalar. Integer types give exact comparisons; [`num_rational::Ratio`] is
//! supported for exact rational weights. Floating point types are excluded on
//! purpose since stability checks compare utilities for strict equality.
//!
//! Agents are dense zero-based indices `0..n` in memory. The text formats and
//! the command line use one-based ids.

pub mod algorithms;
pub mod error;
pub mod exact;
pub mod instances;
pub mod io;
pub mod model;
pub mod prefs;
pub mod reductions;
pub mod stability;

pub use error::{Error, Result};
pub use model::{Game, Partition, SizeBounds, Valuation};
pub use stability::{Base, Deviation, StabilityConcept, StabilityReport, Target};

/// Game with `i32` valuations.
pub type Game32 = Game<i32>;
/// Game with `i64` valuations, the default used by the text formats.
pub type Game64 = Game<i64>;
/// Game with exact rational valuations.
pub type RationalGame = Game<num_rational::Rational64>;
