//! Characteristic-decomposition machinery for the parameterized quasilinear
//! wave equation u_tt = c(u)^2 u_xx + lambda c(u) c'(u) (u_x)^2.
//!
//! The library works in the Riemann-type variables R = u_t + c(u) u_x and
//! S = u_t - c(u) u_x, in which the equation becomes a diagonal first-order
//! system with quadratic sources. It provides:
//!
//! - an upwind solver with CFL control and blow-up/degeneracy event detection
//!   ([`solver`]),
//! - post-hoc characteristic tracing with the scaled Riemann quantities and
//!   the characteristic-triangle balance ([`characteristics`]),
//! - the Riccati comparison system, its closed-form solution, and blow-up
//!   time ([`riccati`]),
//! - every desk-checkable estimate: L^p norms, energy, Gronwall bound,
//!   algebraic identity kernels, blow-up bound checks, Hölder-exponent and
//!   eps-scaling fits ([`diagnostics`]),
//! - companion models: the generalized Carlemann system, lambda = 2 Riemann
//!   invariants, and the degeneracy threshold ([`companions`]),
//! - a JSON-configured CLI with CSV/SVG artifact emission ([`cli`]).

pub mod characteristics;
pub mod cli;
pub mod coeffs;
pub mod companions;
pub mod diagnostics;
pub mod error;
pub mod numerics;
pub mod riccati;
pub mod solver;
pub mod state;

pub use coeffs::SpeedModel;
pub use error::{Error, Result};
pub use solver::{RunConfig, TerminalEvent, Trajectory};
pub use state::{FieldState, Grid1D, ProfileModel};
