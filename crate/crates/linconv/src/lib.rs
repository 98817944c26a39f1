//! A numerical laboratory for error-bound conditions and linear
//! convergence of gradient-type methods.
//!
//! The crate is organized around one object: a residual measure operator
//! `G_φ` that vanishes exactly on the critical set of an objective
//! `φ = f + g`. Six abstract error-bound conditions relate `‖G_φ‖` to the
//! distance, objective-gap, and correlation measures of optimality
//! ([`eb`]); the same operator drives an abstract gradient iteration whose
//! specializations are gradient descent, the proximal point method, and
//! forward-backward splitting ([`solvers`]). Rates measured from solver
//! traces are compared against the per-theorem predictions in both
//! directions — sufficiency (condition ⇒ rate) and necessity (rate ⇒
//! condition) — in [`analysis`]. A zoo of desk-scale problems with known
//! geometry lives in [`problems`], and [`dual`] builds objectives
//! `g*(Aᵀx) − ⟨b, x⟩` from strongly convex primals and verifies their
//! error bounds on sublevel sets.
//!
//! Start with the runnable examples (`cargo run --example solve_quadratic`
//! and friends); the `linconv` binary exposes the same flows as
//! subcommands.

// Validation uses `!(x > 0.0)` deliberately: the negation rejects NaN,
// which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod composite;
pub mod dual;
pub mod eb;
pub mod error;
pub mod format;
pub mod model;
pub mod problems;
pub mod residual;
pub mod sample;
pub mod solvers;

pub use composite::{CompositeForm, CompositeSpec};
pub use error::{Error, Result};
pub use model::{
    Block, CoordPenalty, CriticalSet, CriticalSetDescriptor, ObjectiveModel, Point, Region,
    SimplePart, SmoothPart,
};
pub use residual::ResidualOp;
pub use sample::{SamplePlan, SampleStrategy};
pub use solvers::{SolverConfig, SolverTrace, StopReason};
