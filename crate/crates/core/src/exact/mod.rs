//! Exact tools: the tour referee, a branch-and-bound oracle, and the MILP
//! model with its LP export and tour encoder.

mod encode;
mod lp;
mod milp;
mod search;
mod verify;

pub use encode::{canonicalize, encode_tour, Encoding, RowViolation};
pub use lp::{export_model, lp_string};
pub use milp::{build_model, MilpModel, Row, RowGroup, Sense, Var, VarKind};
pub use search::{solve_exact, solve_exact_with_table, ExactResult, SearchLimits};
pub use verify::{quality, verify, FuelTrace, TourViolation, VerifyReport};
