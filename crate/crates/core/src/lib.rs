//! Approximate LP solving for combinatorial relaxations: a regularized
//! quadratic-penalty formulation minimized by (parallel) stochastic
//! coordinate descent inside an augmented-Lagrangian outer loop, followed by
//! feasibility repair and oblivious rounding to integral solutions with
//! certified approximation factors.
//!
//! Supported problems: vertex cover, set cover, independent set (set
//! packing) and multiway cut. See the `examples/` directory for one runnable
//! walkthrough per capability, and the `lpround` binary for the command-line
//! pipeline.

pub mod alm;
pub mod conditioning;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod penalty;
pub mod problems;
pub mod rounding;
pub mod scd;

pub use alm::{alm_solve, AlmOptions, AlmOutcome};
pub use error::{Error, Result};
pub use lp::{ApproxCertificate, ReferenceKind, Sense, SparseMatrix, StandardFormLp};
pub use penalty::{LipschitzInfo, PenaltyProblem};
pub use problems::{Graph, MultiwayInstance, SetSystem};
pub use rounding::{FractionalSolution, IntegralSolution, Selection};
pub use scd::{solve, solve_parallel, Block, SolveOptions, SolveOutcome, SolveStats, SolverState};
pub mod cli;
