use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] sudlerlab::Error),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{0}: {1}")]
    Io(String, std::io::Error),

    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    /// 2 for parse and precondition errors, 3 for failed checks, 4 for caps.
    pub fn exit_code(&self) -> ExitCode {
        use sudlerlab::Error as E;
        ExitCode::from(match self {
            CliError::Lib(E::EnumerationCap { .. } | E::Overflow(_)) => 4,
            CliError::Lib(_) | CliError::Config(_) => 2,
            CliError::ChecksFailed(_) => 3,
            CliError::Io(..) => 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let cap = sudlerlab::Error::EnumerationCap {
            requested: "x".into(),
            cap: 1,
        };
        assert_eq!(CliError::from(cap).exit_code(), ExitCode::from(4));
        assert_eq!(
            CliError::from(sudlerlab::Error::Parse("x".into())).exit_code(),
            ExitCode::from(2)
        );
        assert_eq!(CliError::Config("x".into()).exit_code(), ExitCode::from(2));
        assert_eq!(CliError::ChecksFailed(1).exit_code(), ExitCode::from(3));
    }
}
