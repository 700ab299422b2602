//! Four-echelon production-distribution planning.
//!
//! Suppliers ship raw material to plants, plants ship cases to distribution
//! centers (DCs), and DCs ship to retailers. This crate holds the cost model
//! and constraint evaluation ([`model`]), a constrained NSGA-II solver
//! ([`nsga2`]), an exhaustive lattice oracle for tiny instances ([`oracle`]),
//! and the capacity scenarios plus schedule audits ([`scenario`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod matrix;
pub mod model;
pub mod nsga2;
pub mod oracle;
pub mod scenario;

pub use matrix::Matrix;
pub use model::{
    evaluate_constraints, evaluate_cost, is_feasible, validate_instance, ConstraintReport,
    CostBreakdown, FlowPlan, ModelError, NetworkInstance, ValidationReport, DEFAULT_TOLERANCE,
};
pub use nsga2::{solve, SolveResult, SolverConfig};
