use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Mismatch(String),

    #[error(transparent)]
    Core(#[from] relaycap::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use relaycap::Error as E;
        match self {
            CliError::Parse(_) => 2,
            CliError::Config(_) => 3,
            CliError::Core(
                E::Config(_) | E::GridCap { .. } | E::SimParams(_) | E::MemoryCap { .. } | E::NotDegraded,
            ) => 3,
            _ => 1,
        }
    }
}

/// A parse error at a 1-based line.
pub(crate) fn at(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("line {line}: {msg}"))
}
