use thiserror::Error;

/// Failures raised by the domain machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("Roger Lee wing bound violated: b(1+|rho|) = {wing} > 2")]
    RogerLeeViolation { wing: f64 },
    #[error("Fukasawa conditions violated: {0}")]
    FukasawaViolation(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("degenerate evaluation: {0}")]
    Degenerate(String),
}

impl Error {
    /// True when the error itself is a no-arbitrage verdict (the smile has arbitrage)
    /// rather than a malformed input.
    pub fn is_arbitrage(&self) -> bool {
        matches!(
            self,
            Error::RogerLeeViolation { .. } | Error::FukasawaViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
