//! Polyhedral machinery shared by the bounds, schemes, and analysis
//! layers.
//!
//! Everything the crate knows about regions goes through two types:
//! [`HalfspaceSystem`], a constraint system over named nonnegative
//! variables with Fourier-Motzkin elimination and LP-backed redundancy
//! pruning, and [`RateRegion2`], the two-dimensional downward-closed
//! regions those systems project to. The LP itself stays behind
//! [`lp::maximize`], a dense simplex sized for the tiny programs that
//! arise here.

pub mod lp;
mod region;
mod system;

pub use lp::LpOutcome;
pub use region::{RateRegion2, RateRow};
pub use system::{HalfspaceSystem, Inequality};
