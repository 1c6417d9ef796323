//! Quantum-strategy evolution on networks.
//!
//! The crate computes exact payoffs for the entangled two-qubit pair game,
//! generates interaction networks, runs synchronous stochastic imitation
//! dynamics on them, and aggregates Monte Carlo ensembles into
//! fraction-versus-parameter sweeps.
//!
//! The numeric core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below pin the `f64` production types.

pub mod ensemble;
pub mod error;
pub mod evo;
pub mod games;
pub mod net;
pub mod quantum;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex amplitude at production precision.
pub type Complex64 = num_complex::Complex<f64>;
/// Strategy label at production precision.
pub type Strategy64 = quantum::Strategy<f64>;
/// Payoff quadruple at production precision.
pub type PayoffVector64 = games::PayoffVector<f64>;
/// Outcome distribution at production precision.
pub type OutcomeDistribution64 = quantum::OutcomeDistribution<f64>;
/// Pair payoff table at production precision.
pub type PairPayoffTable64 = quantum::PairPayoffTable<f64>;
/// Initial-condition spec at production precision.
pub type CaseSpec64 = evo::CaseSpec<f64>;
/// Single-run configuration at production precision.
pub type RunConfig64 = evo::RunConfig<f64>;
/// Single-run result at production precision.
pub type RunResult64 = evo::RunResult<f64>;
/// Sweep scenario at production precision.
pub type ScenarioConfig64 = ensemble::ScenarioConfig<f64>;
/// Sweep result at production precision.
pub type SweepResult64 = ensemble::SweepResult<f64>;
