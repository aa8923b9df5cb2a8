//! Solvers for the fuel-constrained UAV routing problem: a single vehicle
//! must visit every target, may refill at depots, and can never fly more
//! than its tank capacity `L` between depot visits.
//!
//! Vertices are numbered globally: targets `0..n_targets`, then depots.

pub mod approx;
pub mod dubins;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod heuristics;
pub mod instance;
pub mod paths;
pub mod tour;

pub use approx::{approx_solve, approx_solve_with_table, ApproxOutcome};
pub use dubins::{dubins_length, DubinsResult, DubinsWord, Pose};
pub use error::{Error, Result};
pub use exact::{
    build_model, encode_tour, export_model, quality, solve_exact, verify, ExactResult, MilpModel, SearchLimits,
    VerifyReport,
};
pub use heuristics::{construct, depot_exchange, improve, k_opt, Improvement};
pub use instance::{
    derive_constants, validate, DerivedConstants, Instance, InstanceFile, Layout, ValidationReport, VertexId,
    VertexKind, Violation, EPS,
};
pub use paths::{build_path_table, FeasiblePath, PathTable};
pub use tour::{strand_decompose, Solution, SolveMeta, Strand, Tour};
