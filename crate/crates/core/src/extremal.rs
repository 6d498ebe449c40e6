//! Extremal Decorrelated SVI: `b = 2`, `rho = 0`.
//!
//! Written as `2 sigma (gamma + sqrt((k / sigma - q gamma)^2 + 1))` with
//! `gamma > 0` and `|q| < 1`, the slice is arbitrage-free iff
//! `sigma >= 1 / (gamma (1 - |q|))`.

use serde::{Deserialize, Serialize};

use crate::certificate::{DomainCertificate, Family};
use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::svi::RawSviParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams<T> {
    pub gamma: T,
    pub q: T,
    pub sigma: T,
}

impl<T: Scalar> ExtremalParams<T> {
    pub fn new(gamma: T, q: T, sigma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(Error::InvalidParams(format!("gamma = {gamma} must be positive")));
        }
        if !(q.abs() < T::one()) {
            return Err(Error::InvalidParams(format!("|q| = {} must be below 1", q.abs())));
        }
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(Error::InvalidParams(format!("sigma = {sigma} must be positive")));
        }
        Ok(Self { gamma, q, sigma })
    }

    /// From raw parameters with `b = 2`, `rho = 0`.
    pub fn from_raw(p: &RawSviParams<T>) -> Result<Self> {
        if p.b != lit(2.0) || p.rho != T::zero() || !(p.sigma > T::zero()) {
            return Err(Error::InvalidParams("extremal SVI needs b = 2, rho = 0, sigma > 0".into()));
        }
        let gamma = p.a / (p.b * p.sigma);
        Self::new(gamma, p.m / (p.sigma * gamma), p.sigma)
    }

    /// `mu = q gamma`.
    pub fn mu(&self) -> T {
        self.q * self.gamma
    }

    pub fn to_raw(&self) -> RawSviParams<T> {
        let two = lit::<T>(2.0);
        RawSviParams {
            a: two * self.sigma * self.gamma,
            b: two,
            rho: T::zero(),
            m: self.mu() * self.sigma,
            sigma: self.sigma,
        }
    }
}

/// `1 / (gamma (1 - |q|))`.
pub fn sigma_bound<T: Scalar>(gamma: T, q: T) -> Result<T> {
    ExtremalParams::new(gamma, q, T::one())?;
    Ok((gamma * (T::one() - q.abs())).recip())
}

pub fn certify<T: Scalar>(p: &ExtremalParams<T>) -> Result<DomainCertificate<T>> {
    let p = ExtremalParams::new(p.gamma, p.q, p.sigma)?;
    let star = sigma_bound(p.gamma, p.q)?;
    let mut c = DomainCertificate::new(Family::ExtremalDecorrelated, p.to_raw())
        .with_interval(-p.gamma, p.gamma, p.mu())
        .with_sigma_bound(p.sigma, star);
    c.conditions.roger_lee = true;
    c.conditions.fukasawa = true;
    Ok(c.diag("q", p.q).finish())
}
