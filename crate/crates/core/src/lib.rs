//! Influence maximization with game-theoretic centralities.
//!
//! The crate bundles three families of seed-selection algorithms:
//!
//! * closed-form Shapley values of the fringe and surrounding neighbourhood
//!   games, plus the Discounted Shapley Value heuristic built on them
//!   ([`shapley`]);
//! * Shapley value and Banzhaf index of the activation game on per-node
//!   local DAGs, merged additively across DAGs ([`ldag`], [`games`]);
//! * the usual comparison baselines: greedy LDAG, CELF lazy greedy and
//!   Degree Discount ([`baselines`]).
//!
//! Seed sets are scored with Monte Carlo simulation of the Independent
//! Cascade and Linear Threshold models ([`diffusion`]), and [`experiment`]
//! ties everything together into a reproducible benchmark runner.

pub mod baselines;
pub mod diffusion;
pub mod error;
pub mod experiment;
pub mod games;
pub mod graph;
pub mod ldag;
pub mod rng;
pub mod scores;
pub mod shapley;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Directedness, Graph, NodeId, WeightScheme};
pub use scores::{PlayerScores, ScoreTable, SeedSet};
