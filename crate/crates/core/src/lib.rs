//! Automated mechanism design over finite preference-aggregation settings.
//!
//! * [`model`]: settings, priors, mechanisms and objectives over exact rationals.
//! * [`incentives`]: dominant-strategy and Bayes-Nash incentive checks with
//!   manipulation witnesses.
//! * [`solver_det`]: exact branch-and-bound synthesis of optimal deterministic mechanisms.
//! * [`solver_rand`]: optimal randomized mechanisms via an exact rational simplex.
//! * [`reductions`]: independent-set and knapsack hardness constructions,
//!   with proof-side mechanisms, solution extraction and brute-force oracles.
//! * [`document`]: JSON documents for settings, mechanisms and reduction metadata.

pub mod demo;
pub mod document;
pub mod incentives;
pub mod model;
pub mod rational;
pub mod reductions;
pub mod solver_det;
pub mod solver_rand;

pub use incentives::{Concept, ManipulationWitness, Verdict};
pub use model::{
    DeterministicMechanism, Objective, ObjectiveKind, RandomizedMechanism, Setting, validate_setting,
};
pub use rational::Rational;
