use std::path::PathBuf;

use radial::RadialError;
use solver::SolverError;

use crate::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("problem: {0}")]
    Radial(#[from] RadialError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

impl BenchError {
    /// Process exit status: 1 config, 2 solver failure, 4 IO. Status 3 is
    /// reserved for a failed verdict, which is not an error.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Solver(SolverError::NonConvergence { .. } | SolverError::Singular) => 2,
            BenchError::Io { .. } => 4,
            _ => 1,
        }
    }
}
