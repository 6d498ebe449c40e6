//! Verdict objects returned by every `certify` entry point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fukasawa::mu_interval;
use crate::oracle::{sigma_star_with, OracleConfig};
use crate::scalar::Scalar;
use crate::svi::{NormalizedSvi, RawSviParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    VanishingUpward,
    VanishingDownward,
    ExtremalDecorrelated,
    Symmetric,
    Ssvi,
    BlackScholes,
    /// Any SVI slice, bounded through the numerical oracle.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Conditions {
    pub roger_lee: bool,
    pub fukasawa: bool,
    pub sigma_bound: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.roger_lee && self.fukasawa && self.sigma_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bounds<T> {
    pub sigma_star: Option<T>,
    pub fukasawa_lower: Option<T>,
    pub fukasawa_upper: Option<T>,
}

/// Values within the bound tolerance of a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundaryFlags {
    pub sigma_on_boundary: bool,
    pub fukasawa_on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainCertificate<T> {
    pub family: Family,
    pub raw: RawSviParams<T>,
    pub normalized: Option<NormalizedSvi<T>>,
    pub conditions: Conditions,
    pub verdict: bool,
    pub bounds: Bounds<T>,
    pub boundary: BoundaryFlags,
    pub diagnostics: BTreeMap<String, T>,
    pub notes: Vec<String>,
}

impl<T: Scalar> DomainCertificate<T> {
    pub(crate) fn new(family: Family, raw: RawSviParams<T>) -> Self {
        Self {
            family,
            raw,
            normalized: raw.normalize().ok(),
            conditions: Conditions::default(),
            verdict: false,
            bounds: Bounds { sigma_star: None, fukasawa_lower: None, fukasawa_upper: None },
            boundary: BoundaryFlags::default(),
            diagnostics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Records `sigma >= sigma_star - eps` and the boundary flag.
    pub(crate) fn with_sigma_bound(mut self, sigma: T, sigma_star: T) -> Self {
        let eps = T::bound_tolerance();
        self.bounds.sigma_star = Some(sigma_star);
        self.conditions.sigma_bound = sigma >= sigma_star - eps;
        self.boundary.sigma_on_boundary = (sigma - sigma_star).abs() <= eps;
        self
    }

    pub(crate) fn with_interval(mut self, lower: T, upper: T, mu: T) -> Self {
        let eps = T::bound_tolerance();
        self.bounds.fukasawa_lower = Some(lower);
        self.bounds.fukasawa_upper = Some(upper);
        self.boundary.fukasawa_on_boundary =
            (mu - lower).abs() <= eps || (mu - upper).abs() <= eps;
        self
    }

    pub(crate) fn diag(mut self, key: &str, value: T) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    pub(crate) fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub(crate) fn finish(mut self) -> Self {
        self.verdict = self.conditions.all();
        self
    }

    /// Failing certificate for an arbitrage error (Roger Lee or Fukasawa).
    ///
    /// Other errors are returned unchanged.
    pub fn rejected(family: Family, raw: RawSviParams<T>, err: &Error) -> Result<Self> {
        let mut c = Self::new(family, raw);
        match err {
            Error::RogerLeeViolation { .. } => {}
            Error::FukasawaViolation(_) => c.conditions.roger_lee = true,
            other => return Err(other.clone()),
        }
        c.notes.push(err.to_string());
        Ok(c.finish())
    }

    /// Flat smile: always free of butterfly arbitrage.
    pub fn black_scholes(raw: RawSviParams<T>) -> Self {
        let mut c = Self::new(Family::BlackScholes, raw);
        c.conditions = Conditions { roger_lee: true, fukasawa: true, sigma_bound: true };
        c.note("b = 0: flat smile").finish()
    }
}

/// Certifies an arbitrary SVI slice with the numerical oracle in place of a closed form.
pub fn certify_svi<T: Scalar>(raw: &RawSviParams<T>, cfg: &OracleConfig) -> Result<DomainCertificate<T>> {
    raw.validate()?;
    if raw.is_black_scholes() {
        return Ok(DomainCertificate::black_scholes(*raw));
    }
    let p = raw.normalize()?;
    let interval = mu_interval(p.gamma, p.b, p.rho)?;
    let star = sigma_star_with(&p, cfg)?;
    let mut c = DomainCertificate::new(Family::Generic, *raw)
        .with_interval(interval.lower, interval.upper, p.mu)
        .with_sigma_bound(p.sigma, star.sigma_star)
        .diag("argsup_l", star.argsup_l);
    c.conditions.roger_lee = true;
    c.conditions.fukasawa = true;
    Ok(c.finish())
}
