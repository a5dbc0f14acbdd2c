use std::fmt;

/// Failure of a command, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed files: exit 2.
    Input(String),
    /// Quadrature, summation or fit failure: exit 3.
    Numerical(String),
    /// The result contradicts `--expect`: exit 4.
    Mismatch(String),
    /// A request the models do not cover: exit 5.
    OutOfScope(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Mismatch(_) => 4,
            CliError::OutOfScope(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Mismatch(m) => write!(f, "expectation mismatch: {m}"),
            CliError::OutOfScope(m) => write!(f, "out of scope: {m}"),
        }
    }
}

impl From<lifshitz::Error> for CliError {
    fn from(e: lifshitz::Error) -> Self {
        match e {
            lifshitz::Error::OutOfScope(m) => CliError::OutOfScope(m),
            e if e.is_numerical() => CliError::Numerical(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
