//! Shooting solver for the generalized Blasius problem
//!
//! ```text
//! x''' + c * x^p * x'' = 0,   x(0) = x'(0) = 0,   x'(inf) = beta
//! ```
//!
//! The unknown curvature `a = x''(0)` is bracketed analytically, the
//! infinite interval is truncated at a horizon `T` certified by tail
//! inequalities, and `a` is found by bisection over adaptive RKF45 shots.
//!
//! ```no_run
//! use blasius_core::{solve, Problem};
//!
//! let sol = solve(&Problem::blasius(), 1e-12).unwrap();
//! println!("x''(0) = {:.15}", sol.a_star);
//! ```

// Tabulated coefficients keep their published digits, and `!(x > 0.0)`
// guards are meant to reject NaN as well.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimates;
pub mod gamma;
pub mod integrator;
pub mod model;
pub mod quadrature;
pub mod shooting;
pub mod truncation;
pub mod verify;

pub use error::{Error, Result};
pub use estimates::{constants, BoundsSet, Bracket, LowerLine};
pub use gamma::gamma_fn;
pub use integrator::{
    integrate, integrate_to_grid, rkf45_step, IntegratorConfig, StepOutcome, StepResult,
};
pub use model::{rhs, Problem, State, Trajectory};
pub use shooting::{
    extend, residual_certificate, shoot, solve, solve_with, ResidualReport, Shot, Solution,
    SolveOptions,
};
pub use truncation::{check_t, find_t, inner_integral, tail_moment, TruncationCert};

/// Reference value of `x''(0)` for the classical Blasius problem.
pub const BLASIUS_REFERENCE_A: f64 = 0.332_057_336_215_196_3;
