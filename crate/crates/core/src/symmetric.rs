//! Symmetric SVI: `rho = m = 0`, so `w(k) = a + b sqrt(k^2 + sigma^2)`.
//!
//! Work happens in `z = 1 / sqrt(l^2 + 1)` on `l >= 0`, where the smile terms are
//! rational in `z`:
//!
//! - `j2(z) = z (2 gamma z^3 + 3 z^2 - 1) / (2 (gamma z + 1))`
//! - `eta(z) = 1 - (1 - z^2) / (2 (1 + gamma z))`
//! - `j(z) = sqrt(1 - z^2) / 4`
//!
//! The minimizer `z*(gamma, b)` of `-J1 / j2` moves monotonically between
//! `z*(gamma, 0)` and `z*(gamma, G~(gamma))` as `b` runs over `(0, G~(gamma))`,
//! which turns the `sigma` bound into a closed form in `(z, gamma)`.

use serde::{Deserialize, Serialize};

use crate::certificate::{DomainCertificate, Family};
use crate::error::{Error, Result};
use crate::fukasawa::mu_interval;
use crate::numeric::bisect;
use crate::scalar::{lit, Scalar};
use crate::svi::RawSviParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricParams<T> {
    pub gamma: T,
    pub b: T,
    pub sigma: T,
}

impl<T: Scalar> SymmetricParams<T> {
    /// Checks `gamma > -1`, `b > 0`, `sigma > 0`. The wing bound `b <= 2` is left to [`certify`].
    pub fn new(gamma: T, b: T, sigma: T) -> Result<Self> {
        if !(gamma > -T::one() && gamma.is_finite()) {
            return Err(Error::InvalidParams(format!("gamma = {gamma} must exceed -1")));
        }
        if !(b > T::zero() && b.is_finite()) {
            return Err(Error::InvalidParams(format!("b = {b} must be positive")));
        }
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(Error::InvalidParams(format!("sigma = {sigma} must be positive")));
        }
        Ok(Self { gamma, b, sigma })
    }

    pub fn from_raw(p: &RawSviParams<T>) -> Result<Self> {
        if p.rho != T::zero() || p.m != T::zero() {
            return Err(Error::InvalidParams("symmetric SVI needs rho = 0 and m = 0".into()));
        }
        if !(p.b > T::zero() && p.sigma > T::zero()) {
            return Err(Error::InvalidParams("symmetric SVI needs b > 0 and sigma > 0".into()));
        }
        Self::new(p.a / (p.b * p.sigma), p.b, p.sigma)
    }

    pub fn to_raw(&self) -> RawSviParams<T> {
        RawSviParams {
            a: self.gamma * self.b * self.sigma,
            b: self.b,
            rho: T::zero(),
            m: T::zero(),
            sigma: self.sigma,
        }
    }
}

/// A point of the explicit parametrization `(u, z) -> (gamma*(u), b*(z, gamma*), sigma*)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricDomainPoint<T> {
    pub u: T,
    pub gamma_star: T,
    pub z: T,
    pub b_star: T,
    pub sigma_star: T,
}

impl<T: Scalar> SymmetricDomainPoint<T> {
    pub fn params(&self, sigma: T) -> Result<SymmetricParams<T>> {
        SymmetricParams::new(self.gamma_star, self.b_star, sigma)
    }
}

/// The special correlation-free level where the minimizer stops depending on `b`.
pub fn gamma_hat<T: Scalar>() -> T {
    -((lit::<T>(9.0) + lit::<T>(5.0) * lit::<T>(3.0).sqrt()) / lit(18.0)).sqrt()
}

/// `sqrt((3 - sqrt 3) / 2)`.
pub fn z_hat<T: Scalar>() -> T {
    ((lit::<T>(3.0) - lit::<T>(3.0).sqrt()) / lit(2.0)).sqrt()
}

/// `G~(gamma_hat) = 2 sqrt(3 sqrt 3 - 5)`.
pub fn b_hat_max<T: Scalar>() -> T {
    lit::<T>(2.0) * (lit::<T>(3.0) * lit::<T>(3.0).sqrt() - lit(5.0)).sqrt()
}

/// `F~(b) = -(b^2 + 32) sqrt(4 - b^2) / (16 - b^2)^(3/2)` on `[0, 2]`.
pub fn fukasawa_threshold_closed<T: Scalar>(b: T) -> Result<T> {
    let two = lit::<T>(2.0);
    if !(b >= T::zero() && b <= two) {
        return Err(Error::Domain(format!("b = {b} outside [0, 2]")));
    }
    let b2 = b * b;
    Ok(-(b2 + lit(32.0)) * (lit::<T>(4.0) - b2).sqrt() / (lit::<T>(16.0) - b2).powf(lit(1.5)))
}

fn threshold_slope<T: Scalar>(b: T) -> T {
    let b2 = b * b;
    lit::<T>(108.0) * b2 * b / ((lit::<T>(16.0) - b2).powf(lit(2.5)) * (lit::<T>(4.0) - b2).sqrt())
}

/// Inverse of [`fukasawa_threshold_closed`] on `(-1, 0]`, and `2` for `gamma > 0`.
pub fn g_tilde<T: Scalar>(gamma: T) -> Result<T> {
    if !(gamma > -T::one()) {
        return Err(Error::Domain(format!("gamma = {gamma} must exceed -1")));
    }
    let two = lit::<T>(2.0);
    if gamma >= T::zero() {
        return Ok(two);
    }
    let g2 = gamma * gamma;
    let r = lit::<T>(8.0) * g2 + T::one();
    let arg = -(lit::<T>(8.0) * g2 * g2 + lit::<T>(20.0) * g2 - T::one()) / r.powf(lit(1.5));
    let c = (arg.max(-T::one()).min(T::one()).acos() / lit(3.0)).cos();
    let inner = (lit::<T>(6.0) * r.sqrt() * c - lit::<T>(4.0) * g2 - lit(5.0)) / (T::one() - g2);
    let mut b = two * inner.max(T::zero()).sqrt();
    // Newton on F~(b) = gamma removes the cancellation near gamma = -1.
    for _ in 0..4 {
        if !(b > T::zero() && b < two) {
            break;
        }
        let step = (fukasawa_threshold_closed(b)? - gamma) / threshold_slope(b);
        let next = b - step;
        if !(next > T::zero() && next < two) || step == T::zero() {
            break;
        }
        b = next;
    }
    Ok(b)
}

/// `M(b)`: above it, `J1+` at the threshold minimizer sits past `z2`. Diagnostic only.
pub fn m_diagnostic<T: Scalar>(b: T) -> Result<T> {
    let two = lit::<T>(2.0);
    if !(b >= T::zero() && b < two) {
        return Err(Error::Domain(format!("b = {b} outside [0, 2)")));
    }
    let b2 = b * b;
    let num = (b2 * b2 - lit::<T>(38.0) * b2 + lit(64.0)) * (b2 + lit(8.0));
    let den = (lit::<T>(4.0) - b2).powf(lit(1.5)) * (lit::<T>(16.0) - b2).powf(lit(1.5));
    Ok(-num / den)
}

pub fn j2<T: Scalar>(z: T, gamma: T) -> T {
    let two = lit::<T>(2.0);
    z * (two * gamma * z * z * z + lit::<T>(3.0) * z * z - T::one()) / (two * (gamma * z + T::one()))
}

pub fn j2_prime<T: Scalar>(z: T, gamma: T) -> T {
    let z2 = z * z;
    let d = gamma * z + T::one();
    (lit::<T>(6.0) * gamma * gamma * z2 * z2 + lit::<T>(14.0) * gamma * z2 * z + lit::<T>(9.0) * z2 - T::one())
        / (lit::<T>(2.0) * d * d)
}

pub fn eta<T: Scalar>(z: T, gamma: T) -> T {
    T::one() - (T::one() - z * z) / (lit::<T>(2.0) * (T::one() + gamma * z))
}

pub fn eta_prime<T: Scalar>(z: T, gamma: T) -> T {
    let d = T::one() + gamma * z;
    (lit::<T>(4.0) * z * d + lit::<T>(2.0) * gamma * (T::one() - z * z)) / (lit::<T>(4.0) * d * d)
}

pub fn j<T: Scalar>(z: T) -> T {
    (T::one() - z * z).max(T::zero()).sqrt() / lit(4.0)
}

pub fn j_prime<T: Scalar>(z: T) -> T {
    -z / (lit::<T>(4.0) * (T::one() - z * z).sqrt())
}

/// `J1 = eta^2 - b^2 j^2`.
pub fn big_j1<T: Scalar>(z: T, gamma: T, b: T) -> T {
    let e = eta(z, gamma);
    let jj = j(z);
    e * e - b * b * jj * jj
}

/// `dJ1/dz`.
pub fn big_j1_prime<T: Scalar>(z: T, gamma: T, b: T) -> T {
    let two = lit::<T>(2.0);
    two * (eta(z, gamma) * eta_prime(z, gamma) - b * b * j(z) * j_prime(z))
}

fn cubic_z2<T: Scalar>(z: T, gamma: T) -> T {
    lit::<T>(2.0) * gamma * z * z * z + lit::<T>(3.0) * z * z - T::one()
}

/// Second zero of `j2`: the root of `2 gamma z^3 + 3 z^2 - 1` in `(0, 1)`.
pub fn z2<T: Scalar>(gamma: T) -> Result<T> {
    if !(gamma > -T::one()) {
        return Err(Error::Domain(format!("gamma = {gamma} must exceed -1")));
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let third = lit::<T>(1.0 / 3.0);
    let half_inv = (two * gamma).recip();
    let mut z = if gamma < T::zero() {
        let theta = (one - two * gamma * gamma).max(-one).min(one).acos() * third;
        -(theta - two * T::PI() * third).cos() / gamma - half_inv
    } else if gamma == T::zero() {
        lit::<T>(3.0).sqrt().recip()
    } else if gamma <= one {
        let theta = (two * gamma * gamma - one).max(-one).min(one).acos() * third;
        theta.cos() / gamma - half_inv
    } else {
        let c = two * gamma * gamma - one;
        let acosh = (c + (c * c - one).sqrt()).ln();
        (acosh * third).cosh() / gamma - half_inv
    };
    for _ in 0..3 {
        let slope = lit::<T>(6.0) * z * (gamma * z + one);
        if slope == T::zero() {
            break;
        }
        let next = z - cubic_z2(z, gamma) / slope;
        if !(next > T::zero() && next < one) {
            break;
        }
        z = next;
    }
    Ok(z)
}

/// `p` numerator: `2 g^2 z^6 + 12 g^3 z^5 + 3 z^4 (10 g^2 - 1) + 28 g z^3 + 12 z^2 - 1`.
pub fn p_polynomial<T: Scalar>(z: T, gamma: T) -> T {
    let g = gamma;
    let g2 = g * g;
    let z2 = z * z;
    let z3 = z2 * z;
    let z4 = z2 * z2;
    lit::<T>(2.0) * g2 * z4 * z2 + lit::<T>(12.0) * g2 * g * z4 * z
        + lit::<T>(3.0) * z4 * (lit::<T>(10.0) * g2 - T::one())
        + lit::<T>(28.0) * g * z3
        + lit::<T>(12.0) * z2
        - T::one()
}

/// `eta j2' - 2 eta' j2`.
pub fn p_term<T: Scalar>(z: T, gamma: T) -> T {
    let two = lit::<T>(2.0);
    eta(z, gamma) * j2_prime(z, gamma) - two * eta_prime(z, gamma) * j2(z, gamma)
}

/// `j j2' - 2 j' j2`.
pub fn q_term<T: Scalar>(z: T, gamma: T) -> T {
    let two = lit::<T>(2.0);
    j(z) * j2_prime(z, gamma) - two * j_prime(z) * j2(z, gamma)
}

/// `gamma*(u) = u sqrt(6u^3 + 15u^2 + 14u + 6 + (1 + u)^2 sqrt(3 (12u^2 + 12u + 11)))`.
pub fn gamma_star<T: Scalar>(u: T) -> Result<T> {
    if !(u > -T::one() && u.is_finite()) {
        return Err(Error::Domain(format!("u = {u} must exceed -1")));
    }
    let u2 = u * u;
    let disc = (lit::<T>(3.0) * (lit::<T>(12.0) * u2 + lit::<T>(12.0) * u + lit(11.0))).sqrt();
    let opu = T::one() + u;
    let inner = lit::<T>(6.0) * u2 * u + lit::<T>(15.0) * u2 + lit::<T>(14.0) * u + lit::<T>(6.0) + opu * opu * disc;
    Ok(u * inner.sqrt())
}

/// `z*(gamma*(u), 0) = u / gamma*(u)`, continuous at `u = 0`.
pub fn z_star_of_u<T: Scalar>(u: T) -> Result<T> {
    let g = gamma_star(u)?;
    if u == T::zero() {
        return Ok((lit::<T>(6.0) + lit::<T>(33.0).sqrt()).sqrt().recip());
    }
    Ok(u / g)
}

/// `z*(gamma, 0)`: the zero of `p` in `(0, z2(gamma))`.
pub fn z_star_zero<T: Scalar>(gamma: T) -> Result<T> {
    let hi = z2(gamma)?;
    if gamma == T::zero() {
        return Ok((lit::<T>(6.0) + lit::<T>(33.0).sqrt()).sqrt().recip());
    }
    bisect(|z| p_polynomial(z, gamma), T::zero(), hi, T::zero())
        .ok_or_else(|| Error::NoRoot(format!("p has no sign change on (0, z2) at gamma = {gamma}")))
}

/// `z*(gamma, G~(gamma)) = sqrt((4 - G^2)(16 - G^2)) / (G^2 + 8)`.
pub fn z_star_gtilde<T: Scalar>(gamma: T) -> Result<T> {
    let g = g_tilde(gamma)?;
    let g2 = g * g;
    let prod = ((lit::<T>(4.0) - g2) * (lit::<T>(16.0) - g2)).max(T::zero());
    Ok(prod.sqrt() / (g2 + lit(8.0)))
}

/// The `z` interval swept by `b` in `(0, G~(gamma))`, as `(z at b = 0, z at b = G~)`.
pub fn z_interval<T: Scalar>(gamma: T) -> Result<(T, T)> {
    Ok((z_star_zero(gamma)?, z_star_gtilde(gamma)?))
}

/// `b*^2 = eta p / (j q)`; negative outside the admissible set.
fn b_star_sq<T: Scalar>(z: T, gamma: T) -> T {
    eta(z, gamma) * p_term(z, gamma) / (j(z) * q_term(z, gamma))
}

/// `b*(z, gamma)`: the slope for which `z` is the minimizer of `-J1 / j2`.
pub fn b_star<T: Scalar>(z: T, gamma: T) -> Result<T> {
    if !(gamma > -T::one()) {
        return Err(Error::Domain(format!("gamma = {gamma} must exceed -1")));
    }
    if !(z >= T::zero() && z < T::one()) {
        return Err(Error::Domain(format!("z = {z} outside [0, 1)")));
    }
    let p = p_term(z, gamma);
    let q = q_term(z, gamma);
    if !(p * q > T::zero()) {
        return Err(Error::Domain(format!("p q <= 0 at z = {z}, gamma = {gamma}")));
    }
    Ok(b_star_sq(z, gamma).sqrt())
}

/// `-b j2(z) / (2 (eta(z)^2 - b^2 j(z)^2))` for an explicit `b`.
pub fn sigma_star_at<T: Scalar>(z: T, gamma: T, b: T) -> T {
    -b * j2(z, gamma) / (lit::<T>(2.0) * big_j1(z, gamma, b))
}

/// `sigma*(z, gamma)` with `b = b*(z, gamma)`.
pub fn sigma_star_closed<T: Scalar>(z: T, gamma: T) -> Result<T> {
    let b = b_star(z, gamma)?;
    Ok(sigma_star_at(z, gamma, b))
}

/// Bound at `gamma_hat`, where the minimizer is `z_hat` for every admissible `b`.
pub fn sigma_star_hat<T: Scalar>(b: T) -> Result<T> {
    if !(b > T::zero() && b < b_hat_max()) {
        return Err(Error::Domain(format!("b = {b} outside (0, 2 sqrt(3 sqrt 3 - 5))")));
    }
    Ok(sigma_star_at(z_hat(), gamma_hat(), b))
}

/// Minimizer `z*(gamma, b)`: inverts the monotone map `z -> b*(z, gamma)` over [`z_interval`].
pub fn z_of_b<T: Scalar>(b: T, gamma: T) -> Result<T> {
    let (z0, zg) = z_interval(gamma)?;
    let gt = g_tilde(gamma)?;
    if !(b > T::zero() && b < gt) {
        return Err(Error::Domain(format!("b = {b} outside (0, G~(gamma) = {gt})")));
    }
    let b2 = b * b;
    bisect(|z| b_star_sq(z, gamma) - b2, z0, zg, T::zero())
        .ok_or_else(|| Error::NoRoot(format!("b* does not reach {b} between {z0} and {zg}")))
}

/// Explicit domain point from `u > -1` and `z` strictly inside the `z` interval of `gamma*(u)`.
pub fn domain_point<T: Scalar>(u: T, z: T) -> Result<SymmetricDomainPoint<T>> {
    let gamma = gamma_star(u)?;
    let (z0, zg) = z_interval(gamma)?;
    if !(z > z0.min(zg) && z < z0.max(zg)) {
        return Err(Error::Domain(format!("z = {z} outside the interval ({z0}, {zg})")));
    }
    let b = b_star(z, gamma)?;
    Ok(SymmetricDomainPoint { u, gamma_star: gamma, z, b_star: b, sigma_star: sigma_star_at(z, gamma, b) })
}

/// Inflection point of `j2` for `gamma < 0`: the zero of `6g^3 z^4 + 19g^2 z^3 + 21g z^2 + 9z + g` in `(0, 1)`.
pub fn z_inflection<T: Scalar>(gamma: T) -> Result<T> {
    if !(gamma > -T::one() && gamma < T::zero()) {
        return Err(Error::Domain(format!("gamma = {gamma} outside (-1, 0)")));
    }
    let g = gamma;
    let p3 = |z: T| {
        let z2 = z * z;
        lit::<T>(6.0) * g * g * g * z2 * z2
            + lit::<T>(19.0) * g * g * z2 * z
            + lit::<T>(21.0) * g * z2
            + lit::<T>(9.0) * z
            + g
    };
    bisect(p3, T::zero(), T::one(), T::zero())
        .ok_or_else(|| Error::NoRoot("no inflection point of j2".into()))
}

/// `J1'(z_inflection(gamma); b = 2)`, negative on `(-1, 0)`.
pub fn j1_prime_at_inflection<T: Scalar>(gamma: T) -> Result<T> {
    Ok(big_j1_prime(z_inflection(gamma)?, gamma, lit(2.0)))
}

/// Certifies a Symmetric SVI slice.
pub fn certify<T: Scalar>(p: &SymmetricParams<T>) -> Result<DomainCertificate<T>> {
    let p = SymmetricParams::new(p.gamma, p.b, p.sigma)?;
    let eps = T::bound_tolerance();
    let two = lit::<T>(2.0);
    let raw = p.to_raw();
    if p.b > two + eps {
        let err = Error::RogerLeeViolation { wing: (p.b).to_f64().unwrap_or(f64::NAN) };
        return DomainCertificate::rejected(Family::Symmetric, raw, &err);
    }
    let b = p.b.min(two);
    let threshold = fukasawa_threshold_closed(b)?;
    if p.gamma <= threshold {
        let err = Error::FukasawaViolation(format!("gamma = {} <= F~(b) = {threshold}", p.gamma));
        return DomainCertificate::rejected(Family::Symmetric, raw, &err);
    }
    let interval = mu_interval(p.gamma, b, T::zero())?;
    let mut c = DomainCertificate::new(Family::Symmetric, raw)
        .with_interval(interval.lower, interval.upper, T::zero())
        .diag("fukasawa_threshold", threshold);
    c.conditions.roger_lee = true;
    c.conditions.fukasawa = true;

    if b >= two - eps {
        return Ok(c.with_sigma_bound(p.sigma, p.gamma.recip()).note("b = 2: sigma >= 1 / gamma").finish());
    }
    let hat = gamma_hat::<T>();
    if (p.gamma - hat).abs() <= lit(1e-9) {
        let star = sigma_star_hat(b)?;
        return Ok(c.with_sigma_bound(p.sigma, star).diag("z", z_hat()).note("gamma = gamma_hat").finish());
    }
    let (z0, zg) = z_interval(p.gamma)?;
    if (z0 - zg).abs() < lit(1e-10) {
        let star = sigma_star_at(z0, p.gamma, b);
        return Ok(c.with_sigma_bound(p.sigma, star).diag("z", z0).note("degenerate z interval").finish());
    }
    let z = z_of_b(b, p.gamma)?;
    let star = sigma_star_at(z, p.gamma, b);
    Ok(c.with_sigma_bound(p.sigma, star)
        .diag("z", z)
        .diag("z_at_b_zero", z0)
        .diag("z_at_b_max", zg)
        .finish())
}
