//! Butterfly-arbitrage domains for SVI volatility smiles.
//!
//! Every family module exposes closed-form bounds and a `certify` entry point returning a
//! [`DomainCertificate`]. The [`oracle`] module holds the independent numerical checks:
//! a direct search for the minimal `sigma` and a Durrleman density scan in raw `k`.
//!
//! Math is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod certificate;
pub mod error;
pub mod extremal;
pub mod fukasawa;
pub mod numeric;
pub mod oracle;
pub mod scalar;
pub mod ssvi;
pub mod svi;
pub mod symmetric;
pub mod vanishing;

pub use certificate::{certify_svi, BoundaryFlags, Bounds, Conditions, DomainCertificate, Family};
pub use error::{Error, Result};
pub use fukasawa::{fukasawa_threshold, mu_interval, DegenerateCase, FukasawaInterval};
pub use oracle::{
    durrleman_check, sigma_star, sigma_star_with, DensityReport, DurrlemanGrid, OracleConfig, Side,
    SigmaStarResult,
};
pub use scalar::Scalar;
pub use svi::{EvalPoint, NormalizedSvi, RawSviParams};

pub type RawSvi = RawSviParams<f64>;
pub type Normalized = NormalizedSvi<f64>;
pub type Certificate = DomainCertificate<f64>;
pub type Interval = FukasawaInterval<f64>;
pub type SigmaStar = SigmaStarResult<f64>;
pub type Density = DensityReport<f64>;
pub type Vanishing = vanishing::VanishingParams<f64>;
pub type Extremal = extremal::ExtremalParams<f64>;
pub type Symmetric = symmetric::SymmetricParams<f64>;
pub type Ssvi = ssvi::SsviParams<f64>;
pub type HestonLt = ssvi::HestonLtParams<f64>;
