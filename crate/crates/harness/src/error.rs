use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration text, flag value or parameter combination.
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Core(fusion_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<fusion_core::Error> for HarnessError {
    fn from(e: fusion_core::Error) -> Self {
        HarnessError::Core(e)
    }
}

impl HarnessError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
