use std::path::Path;

/// Command failure carrying its process exit code. Partial evaluation is not
/// a failure; commands report it through their exit code directly.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    /// Specification, configuration, or argument problem: exit 1.
    #[error("{0}")]
    Validation(String),
    /// Filesystem or serialization problem: exit 2.
    #[error("{0}")]
    Io(String),
}

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Failure::Validation(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Failure::Io(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Failure>;

/// Attach the offending path to a low-level error.
pub trait PathContext<T> {
    fn path_ctx(self, action: &str, path: &Path) -> Result<T>;
}

impl<T, E: std::fmt::Display> PathContext<T> for std::result::Result<T, E> {
    fn path_ctx(self, action: &str, path: &Path) -> Result<T> {
        self.map_err(|e| Failure::io(format!("cannot {action} {}: {e}", path.display())))
    }
}
