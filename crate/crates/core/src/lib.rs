//! Digital memcomputing solver for 3-SAT.
//!
//! The crate integrates the memcomputing ODE system (continuous voltages plus
//! short- and long-term clause memories) with constant-step forward Euler,
//! generates planted hard instances, emulates the clause-serial fixed-point
//! hardware schedule, and provides the benchmark/fit/resource tooling used to
//! study scaling.

pub mod bench;
pub mod cli;
pub mod cnf;
pub mod dynamics;
pub mod generator;
pub mod hwemu;
pub mod solver;

pub use cnf::{Clause, CnfError, Instance, Literal};
pub use dynamics::{Params, RigidityMode, SolverState};
pub use generator::{GeneratorConfig, PlantedInstance};
pub use solver::{Outcome, Precision, RunRecord, SolveConfig};
