//! Fuzzy seminormed locally convex space machinery and a constructive
//! fixed-point iteration for fuzzy B-contractions on `R^d`.
//!
//! The crate is organised bottom-up:
//!
//! * [`tnorm`]: the three classical t-norms and a sampled axiom checker.
//! * [`seminorms`]: points, closed-form classical seminorms, the Minkowski
//!   functional computed by bisection, and separation checks.
//! * [`fuzzy_space`]: fuzzy seminorms induced by `p(y,t) = t / (t + q(y))`,
//!   fuzzy balls and the fuzzy seminorm axiom checker.
//! * [`contraction`]: self-maps, Lipschitz estimates, analytic `(delta, beta)`
//!   certificates and the empirical contractivity check.
//! * [`solver`]: the averaged iteration, trace diagnostics, fixed-point
//!   verification, uniqueness probing and the classical oracle.
//! * [`scenario`]: strict JSON scenario files consumed by the CLI.
//!
//! Sampling-heavy checks run on rayon when the `parallel` feature is enabled
//! (the default); see [`parallel`].

pub mod axioms;
pub mod contraction;
pub mod error;
pub mod fuzzy_space;
pub mod linalg;
pub mod parallel;
mod sampling;
pub mod scenario;
pub mod seminorms;
pub mod solver;
pub mod tnorm;

pub use error::{Error, Result};
