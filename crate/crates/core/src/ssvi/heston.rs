//! Long-Term Heston SVI: the large-maturity Heston smile, which is an SSVI slice.

use serde::{Deserialize, Serialize};

use super::{j2, m2, SsviParams};
use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::svi::{one_minus_sq, EvalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HestonLtParams<T> {
    /// Mean-reversion speed.
    pub kappa: T,
    /// Long-run variance.
    pub theta_bar: T,
    /// Vol of vol.
    pub sigma_vol: T,
    pub rho: T,
    pub maturity: T,
}

impl<T: Scalar> HestonLtParams<T> {
    pub fn new(kappa: T, theta_bar: T, sigma_vol: T, rho: T, maturity: T) -> Result<Self> {
        for (name, v) in [("kappa", kappa), ("theta_bar", theta_bar), ("sigma_vol", sigma_vol), ("maturity", maturity)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} = {v} must be positive")));
            }
        }
        if !(rho.abs() < T::one()) {
            return Err(Error::InvalidParams(format!("|rho| = {} must be below 1", rho.abs())));
        }
        Ok(Self { kappa, theta_bar, sigma_vol, rho, maturity })
    }

    pub fn with_maturity(&self, maturity: T) -> Result<Self> {
        Self::new(self.kappa, self.theta_bar, self.sigma_vol, self.rho, maturity)
    }

    /// `(2 kappa - rho sigma_vol, sqrt((2 kappa - rho sigma_vol)^2 + sigma_vol^2 (1 - rho^2)))`.
    fn radicals(&self) -> (T, T) {
        let d = lit::<T>(2.0) * self.kappa - self.rho * self.sigma_vol;
        let r = (d * d + self.sigma_vol * self.sigma_vol * one_minus_sq(self.rho)).sqrt();
        (d, r)
    }

    /// SVI slope `b = 2 (R - D) / (sigma_vol (1 - rho^2))`, independent of maturity.
    pub fn b(&self) -> T {
        let (d, r) = self.radicals();
        let two = lit::<T>(2.0);
        if d > T::zero() {
            two * self.sigma_vol / (r + d)
        } else {
            two * (r - d) / (self.sigma_vol * one_minus_sq(self.rho))
        }
    }

    /// SSVI level `theta = 2 kappa theta_bar T b / sigma_vol`.
    pub fn ssvi_theta(&self) -> T {
        lit::<T>(2.0) * self.kappa * self.theta_bar * self.maturity * self.b() / self.sigma_vol
    }

    /// SSVI skew `phi = sigma_vol / (kappa theta_bar T)`.
    pub fn ssvi_phi(&self) -> T {
        self.sigma_vol / (self.kappa * self.theta_bar * self.maturity)
    }

    pub fn to_ssvi(&self) -> Result<SsviParams<T>> {
        SsviParams::new(self.ssvi_theta(), self.ssvi_phi(), self.rho)
    }
}

/// Smallest maturity for which the induced SSVI lies in the explicit sub-domain.
pub fn lt_heston_threshold<T: Scalar>(h: &HestonLtParams<T>) -> Result<T> {
    let r = h.rho.abs();
    let b = h.b();
    let wing = b * (T::one() + r);
    if !(wing < lit(2.0)) {
        return Err(Error::Domain(format!("b (1 + |rho|) = {wing} must be below 2")));
    }
    let j2_min = j2(&EvalPoint::from_x(m2(r)?), r);
    let den = h.kappa * h.theta_bar * one_minus_sq(h.rho).sqrt() * (lit::<T>(4.0) - wing * wing);
    Ok(-lit::<T>(8.0) * b * h.sigma_vol * j2_min / den)
}
