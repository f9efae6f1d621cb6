use serde::Serialize;

/// Exit-code category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Config,
    Numerical,
    Certification,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 1,
            ErrorKind::Numerical => 2,
            ErrorKind::Certification => 3,
        }
    }
}

/// The structured record written to standard error on failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl ToString) -> Self {
        Self { kind, message: message.to_string(), line: None, column: None }
    }

    pub fn config(message: impl ToString) -> Self {
        Self::new(ErrorKind::Config, message)
    }

    pub fn numerical(message: impl ToString) -> Self {
        Self::new(ErrorKind::Numerical, message)
    }

    pub fn from_json(e: serde_json::Error) -> Self {
        Self { kind: ErrorKind::Config, message: e.to_string(), line: Some(e.line()), column: Some(e.column()) }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} error: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<charvar::Error> for CliError {
    fn from(e: charvar::Error) -> Self {
        use charvar::Error as E;
        let kind = match e {
            E::InvalidSpec(_)
            | E::InvariantViolated { .. }
            | E::DimensionMismatch { .. }
            | E::Unsupported(_) => ErrorKind::Config,
            _ => ErrorKind::Numerical,
        };
        Self::new(kind, e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::config(format!("csv: {e}"))
    }
}
