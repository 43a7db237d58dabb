//! Exact energy-minimizing assignment of sensing tasks to physical and
//! virtual sensors in a wireless sensor network with node-level
//! virtualization.
//!
//! * [`model`]: domain types, cost evaluation and the constraint checker.
//! * [`scenario`]: seeded instance generation and file formats.
//! * [`solver`]: branch-and-bound solver, brute-force oracle, greedy warm
//!   start and the one-task-per-node baseline.
//! * [`experiments`]: virtualized-vs-traditional comparisons and seed sweeps.

pub mod error;
pub mod experiments;
pub mod model;
pub mod rng;
pub mod scenario;
pub mod solver;

pub use error::{ExperimentError, ModelError, ScenarioError, SolveError};
pub use model::{
    covers, node_energy_use, plan_cost, validate_plan, Area, Assignment, AssignmentPlan,
    Constraint, CostBreakdown, CoverageMatrix, EnergyParams, Mode, Nanojoules, NodeId, Point,
    Scenario, SensingTask, SensorNode, TaskId, ValidationReport, Violation, Warning,
};
