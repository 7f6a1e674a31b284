use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Config { pointer: String, message: String },
    #[error(transparent)]
    Core(#[from] hfbdyn::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("selftest failed: {0}")]
    Selftest(String),
}

impl CliError {
    pub fn config(pointer: &str, message: impl Into<String>) -> Self {
        CliError::Config { pointer: pointer.to_string(), message: message.into() }
    }

    pub fn pointer(&self) -> Option<&str> {
        match self {
            CliError::Config { pointer, .. } => Some(pointer),
            _ => None,
        }
    }

    /// 2 config, 3 numerical, 4 guard, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use hfbdyn::Error as E;
        match self {
            CliError::Config { .. } => 2,
            CliError::Core(E::Config(_) | E::Dimension(_)) => 2,
            CliError::Core(E::Numerical(_) | E::Impure { .. }) => 3,
            CliError::Core(E::Guard(_)) => 4,
            CliError::Io(_) | CliError::Selftest(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        use hfbdyn::Error as E;
        match self {
            CliError::Config { .. } | CliError::Core(E::Config(_)) => "config",
            CliError::Core(E::Dimension(_)) => "dimension",
            CliError::Core(E::Numerical(_)) => "numerical",
            CliError::Core(E::Impure { .. }) => "impure-state",
            CliError::Core(E::Guard(_)) => "guard",
            CliError::Io(_) => "io",
            CliError::Selftest(_) => "selftest",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() });
        if let Some(p) = self.pointer() {
            body["pointer"] = json!(p);
        }
        json!({ "error": body })
    }
}
