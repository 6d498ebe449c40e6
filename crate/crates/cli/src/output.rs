//! JSON documents, error reports and exit codes.

use serde_json::{json, Value};
use smile_domain::{DurrlemanGrid, Error};

pub const SCHEMA: &str = "smile-domain/1";

pub const EXIT_FREE: i32 = 0;
pub const EXIT_ARBITRAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// A failure surfaced to the user as `{"error": {"kind", "message"}}`.
#[derive(Debug, Clone)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
}

impl Failure {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), code: EXIT_INVALID }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::RogerLeeViolation { .. } => "roger_lee_violation",
            Error::FukasawaViolation(_) => "fukasawa_violation",
            Error::NoRoot(_) => "no_root",
            Error::Degenerate(_) => "degenerate",
        };
        let code = if e.is_arbitrage() { EXIT_ARBITRAGE } else { EXIT_INVALID };
        Self { kind, message: e.to_string(), code }
    }
}

pub fn error_document(command: &str, f: &Failure) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "error": { "kind": f.kind, "message": f.message },
    })
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable document"));
}

/// Density grid, scaled by `SMILE_DOMAIN_GRID` when set.
pub fn density_grid() -> Result<DurrlemanGrid, Failure> {
    match std::env::var("SMILE_DOMAIN_GRID") {
        Ok(s) => {
            let n: usize = s
                .trim()
                .parse()
                .map_err(|_| Failure::new("environment", format!("SMILE_DOMAIN_GRID = {s:?} is not a count")))?;
            if n < 3 {
                return Err(Failure::new("environment", "SMILE_DOMAIN_GRID must be at least 3"));
            }
            log::info!("density grid with {n} linear points");
            Ok(DurrlemanGrid::with_density(n))
        }
        Err(_) => Ok(DurrlemanGrid::default()),
    }
}
