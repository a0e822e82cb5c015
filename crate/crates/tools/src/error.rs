use std::path::Path;

pub type Result<T, E = ToolError> = std::result::Result<T, E>;

/// Failures grouped by the process exit code they map to.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    /// Bad configuration or arguments (exit 2).
    #[error("{0}")]
    Usage(String),
    /// Parameters that cannot be satisfied, such as a bit budget below one
    /// token (exit 3).
    #[error("{0}")]
    Infeasible(String),
    /// Unreadable, unwritable or malformed files (exit 4).
    #[error("{0}")]
    Io(String),
}

impl ToolError {
    pub fn exit_code(&self) -> u8 {
        match self {
            ToolError::Usage(_) => 2,
            ToolError::Infeasible(_) => 3,
            ToolError::Io(_) => 4,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        ToolError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        ToolError::Io(msg.into())
    }

    pub(crate) fn file(path: &Path, err: impl std::fmt::Display) -> Self {
        ToolError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<vibcodec::Error> for ToolError {
    fn from(e: vibcodec::Error) -> Self {
        use vibcodec::Error as E;
        let msg = e.to_string();
        match e {
            E::BudgetInfeasible { .. } | E::NyquistViolation { .. } | E::RankDeficient { .. } | E::BandOutOfRange { .. } => {
                ToolError::Infeasible(msg)
            }
            E::InvalidParameter(_)
            | E::NotPowerOfTwo { .. }
            | E::TokenLength { .. }
            | E::OddLength { .. }
            | E::SingleClass
            | E::FeatureLength { .. } => ToolError::Usage(msg),
            _ => ToolError::Io(msg),
        }
    }
}

impl From<std::io::Error> for ToolError {
    fn from(e: std::io::Error) -> Self {
        ToolError::Io(e.to_string())
    }
}
