use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Numerical(#[from] vanhecke_core::Error),

    #[error("self-test mismatch: {0}")]
    SelfTest(String),
}

impl CliError {
    /// 1 usage/parse, 2 numerical, 3 self-test mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Numerical(e) => match e {
                vanhecke_core::Error::Singular { .. }
                | vanhecke_core::Error::DegenerateAbscissas
                | vanhecke_core::Error::RankDeficient { .. } => 2,
                _ => 1,
            },
            CliError::SelfTest(_) => 3,
        }
    }
}
