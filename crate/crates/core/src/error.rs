use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration: {0}")]
    Config(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("state is not pure quasi-free (residual {residual:e} > {tolerance:e})")]
    Impure { residual: f64, tolerance: f64 },
    #[error("guard: {0}")]
    Guard(String),
    #[error("numerical: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
