use thiserror::Error;

/// Everything that can stop a command, with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cube_constants_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid family file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid family: {0}")]
    Family(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("verification failed: {0}")]
    Failed(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILED,
            _ => EXIT_GUARD,
        }
    }
}
