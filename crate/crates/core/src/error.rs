use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("no feasible path from vertex {from} to vertex {to}")]
    NoFeasiblePath { from: usize, to: usize },

    #[error("malformed tour: {0}")]
    MalformedTour(String),

    #[error("instance is infeasible: {0}")]
    Infeasible(String),

    #[error("solver produced an infeasible tour: {0}")]
    SolverBug(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
