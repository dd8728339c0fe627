//! Carathéodory solutions of scalar initial value problems `y' = f(x, y)`
//! whose right-hand side may be discontinuous in `y`.
//!
//! The main entry point is [`solve_maximal`], which computes the maximal
//! solution by monotone iteration of the integral map from a dominating
//! super-solution, and certifies the result as a sub-solution.

pub mod error;
pub mod grid;
pub mod grid_approx;
pub mod io;
pub mod quadrature;
pub mod rhs;
pub mod scenarios;
pub mod solver;
pub mod subsolution;

pub use error::{Error, Result};
pub use grid::{GridFunction, Partition};
pub use grid_approx::{build_step_grid, convergence_probe, eval_fn, ApproxRhs, Cell, ProbeRow, StepGrid};
pub use quadrature::{integrate, picard_map, QuadOptions};
pub use rhs::{builtin_rhs, probe_section_properties, CauchyProblem, DenseSet, Rhs, SectionProps, BUILTIN_NAMES};
pub use solver::{euler, residual, solve, solve_maximal, solve_minimal, SolveOptions, SolveResult};
pub use subsolution::{join, verify_subsolution, SubsolutionReport};
