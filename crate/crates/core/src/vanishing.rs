//! Vanishing Upward (`a = 0, rho = 1`) and Downward (`a = 0, rho = -1`) SVI.
//!
//! For `0 < b < 1` the admissible set is parametrized by `x` in
//! `((2 + b) / (4 - b), 1)`: the shift is `mu = mu*(x)` and the slice is free
//! of butterfly arbitrage iff `sigma >= sigma*(x)`. The downward smile is the
//! mirror image of the upward one with `mu -> -mu`.

use serde::{Deserialize, Serialize};

use crate::certificate::{DomainCertificate, Family};
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::scalar::{lit, Scalar};
use crate::svi::{one_minus_sq, RawSviParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upward,
    Downward,
}

impl Direction {
    pub fn rho<T: Scalar>(self) -> T {
        match self {
            Direction::Upward => T::one(),
            Direction::Downward => -T::one(),
        }
    }

    /// The shift seen by the upward smile.
    pub fn upward_mu<T: Scalar>(self, mu: T) -> T {
        match self {
            Direction::Upward => mu,
            Direction::Downward => -mu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingParams<T> {
    pub b: T,
    pub mu: T,
    pub sigma: T,
    pub direction: Direction,
}

impl<T: Scalar> VanishingParams<T> {
    pub fn new(b: T, mu: T, sigma: T, direction: Direction) -> Result<Self> {
        if !(b.is_finite() && mu.is_finite() && sigma.is_finite()) {
            return Err(Error::InvalidParams("non-finite vanishing parameter".into()));
        }
        if !(b > T::zero()) {
            return Err(Error::InvalidParams(format!("b = {b} must be positive")));
        }
        if !(sigma > T::zero()) {
            return Err(Error::InvalidParams(format!("sigma = {sigma} must be positive")));
        }
        Ok(Self { b, mu, sigma, direction })
    }

    /// From `(a, b, rho, m, sigma)` with `a = 0` and `rho = +-1`.
    pub fn from_raw(p: &RawSviParams<T>) -> Result<Self> {
        if p.a != T::zero() || p.rho.abs() != T::one() {
            return Err(Error::InvalidParams("vanishing SVI needs a = 0 and |rho| = 1".into()));
        }
        let direction = if p.rho > T::zero() {
            Direction::Upward
        } else {
            Direction::Downward
        };
        if !(p.sigma > T::zero()) {
            return Err(Error::InvalidParams("sigma must be positive".into()));
        }
        Self::new(p.b, p.m / p.sigma, p.sigma, direction)
    }

    pub fn to_raw(&self) -> RawSviParams<T> {
        RawSviParams {
            a: T::zero(),
            b: self.b,
            rho: self.direction.rho(),
            m: self.mu * self.sigma,
            sigma: self.sigma,
        }
    }
}

/// A point of the explicit parametrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingDomainPoint<T> {
    pub x: T,
    pub mu_star: T,
    pub sigma_star: T,
}

/// Upper `mu` bound of the Fukasawa conditions for the upward smile.
pub fn fukasawa_bound<T: Scalar>(b: T) -> T {
    (lit::<T>(3.0) * (T::one() - b)).max(T::zero()).sqrt()
}

/// Left end `(2 + b) / (4 - b)` of the `x` interval.
pub fn x_lower<T: Scalar>(b: T) -> T {
    (lit::<T>(2.0) + b) / (lit::<T>(4.0) - b)
}

/// `x` with its complements, so that the `x -> 1` end stays accurate.
#[derive(Debug, Clone, Copy)]
struct Coord<T> {
    x: T,
    one_minus_x: T,
    s: T,
}

impl<T: Scalar> Coord<T> {
    fn from_x(x: T) -> Self {
        Self { x, one_minus_x: T::one() - x, s: one_minus_sq(x).sqrt() }
    }

    fn from_s(s: T) -> Self {
        let x = (T::one() - s * s).sqrt();
        Self { x, one_minus_x: s * s / (T::one() + x), s }
    }
}

fn check_b<T: Scalar>(b: T) -> Result<()> {
    if !(b >= T::zero() && b < T::one()) {
        return Err(Error::Domain(format!("b = {b} outside [0, 1)")));
    }
    Ok(())
}

fn check_x<T: Scalar>(x: T, b: T) -> Result<()> {
    check_b(b)?;
    if !(x > x_lower(b) && x < T::one()) {
        return Err(Error::Domain(format!(
            "x = {x} outside ]{}, 1[",
            x_lower(b)
        )));
    }
    Ok(())
}

/// `mu*(x) * sqrt(1 - x^2)`; finite as `x -> 1`.
fn mu_star_scaled<T: Scalar>(c: Coord<T>, b: T) -> Result<T> {
    let Coord { x, one_minus_x, .. } = c;
    let two = lit::<T>(2.0);
    let b2 = b * b;
    let x2 = x * x;
    let rad = lit::<T>(4.0) * b2 * x2 * x2 * x2
        + lit::<T>(8.0) * b2 * x2 * x2 * x
        + lit::<T>(8.0) * x2 * x2 * (lit::<T>(8.0) - b2)
        - lit::<T>(4.0) * x2 * x * (lit::<T>(5.0) * b2 + lit(32.0))
        + x2 * (lit::<T>(96.0) - b2)
        + two * x * (lit::<T>(5.0) * b2 - lit(16.0))
        + lit::<T>(4.0)
        + lit::<T>(3.0) * b2;
    let rad = if rad < T::zero() {
        if rad > -lit::<T>(1e-12) {
            T::zero()
        } else {
            return Err(Error::Domain(format!("negative radicand {rad} at x = {x}")));
        }
    } else {
        rad
    };
    let num = two * one_minus_x * (two * x2 - lit::<T>(8.0) * x - T::one()) + rad.sqrt();
    Ok(num / (two * (two * x2 - two * x - T::one())))
}

/// `mu*(x)`: the shift whose minimal `sigma` is attained at `x`.
pub fn mu_star<T: Scalar>(x: T, b: T) -> Result<T> {
    check_x(x, b)?;
    let c = Coord::from_x(x);
    Ok(mu_star_scaled(c, b)? / c.s)
}

fn sigma_star_at<T: Scalar>(c: Coord<T>, b: T) -> Result<T> {
    let ms = mu_star_scaled(c, b)?;
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let up = T::one() + c.x;
    let lead = two - c.x - ms;
    let denom = four * lead * lead - b * b * up * up;
    if !(denom > T::zero()) {
        return Err(Error::Degenerate(format!("sigma* denominator {denom} at x = {}", c.x)));
    }
    Ok(-four * b * c.s * (T::one() - two * c.x) * up / denom)
}

/// `sigma*(x)`; the downward smile with shift `-mu*(x)` has the same bound.
pub fn sigma_star_closed<T: Scalar>(x: T, b: T, direction: Direction) -> Result<T> {
    check_x(x, b)?;
    let _ = direction;
    sigma_star_at(Coord::from_x(x), b)
}

/// Zero of `mu*` in the `x` interval.
pub fn mu_star_zero<T: Scalar>(b: T) -> Result<T> {
    let c = invert_coord(T::zero(), b)?;
    Ok(c.x)
}

/// `x` with `mu*(x) = mu` for `mu < sqrt(3(1 - b))`.
pub fn invert_mu_star<T: Scalar>(mu: T, b: T) -> Result<T> {
    Ok(invert_coord(mu, b)?.x)
}

fn invert_coord<T: Scalar>(mu: T, b: T) -> Result<Coord<T>> {
    check_b(b)?;
    if !(mu < fukasawa_bound(b)) {
        return Err(Error::FukasawaViolation(format!(
            "mu = {mu} >= sqrt(3(1 - b)) = {}",
            fukasawa_bound(b)
        )));
    }
    // mu* increases with s = sqrt(1 - x^2); bisect in log s
    let x0 = x_lower(b);
    let s0 = one_minus_sq(x0).sqrt();
    let resid = |u: T| -> T {
        let c = Coord::from_s(u.exp());
        match mu_star_scaled(c, b) {
            Ok(ms) => ms / c.s - mu,
            Err(_) => T::nan(),
        }
    };
    let hi = (s0 * (T::one() - lit::<T>(1e-12))).ln();
    if resid(hi) <= T::zero() {
        return Ok(Coord::from_s(hi.exp()));
    }
    let mut lo = (s0 * lit(0.5)).ln();
    let step = lit::<T>(10.0).ln();
    let floor = T::min_positive_value().ln() + lit(10.0);
    while resid(lo) > T::zero() {
        lo = lo - step;
        if lo < floor {
            return Err(Error::NoRoot(format!("mu = {mu} beyond the reach of mu*")));
        }
    }
    let u = bisect(resid, lo, hi, T::zero())
        .ok_or_else(|| Error::NoRoot("mu* bracket lost its sign change".into()))?;
    Ok(Coord::from_s(u.exp()))
}

/// Domain point for the upward shift `mu`.
pub fn domain_point<T: Scalar>(b: T, mu: T) -> Result<VanishingDomainPoint<T>> {
    let c = invert_coord(mu, b)?;
    Ok(VanishingDomainPoint {
        x: c.x,
        mu_star: mu_star_scaled(c, b)? / c.s,
        sigma_star: sigma_star_at(c, b)?,
    })
}

/// Explicit sufficient bound `(34 sqrt 2 - 5 sqrt 5) b / (54 (1 - b^2))`.
pub fn subdomain_bound<T: Scalar>(b: T) -> T {
    let k = lit::<T>(34.0) * lit::<T>(2.0).sqrt() - lit::<T>(5.0) * lit::<T>(5.0).sqrt();
    k * b / (lit::<T>(54.0) * one_minus_sq(b))
}

/// Sufficient condition: upward shift `<= 0` and `sigma` above [`subdomain_bound`].
pub fn subdomain_check<T: Scalar>(b: T, mu: T, sigma: T, direction: Direction) -> bool {
    b > T::zero()
        && b < T::one()
        && direction.upward_mu(mu) <= T::zero()
        && sigma >= subdomain_bound(b)
}

/// Exact butterfly-arbitrage verdict.
pub fn certify<T: Scalar>(p: &VanishingParams<T>) -> Result<DomainCertificate<T>> {
    let p = VanishingParams::new(p.b, p.mu, p.sigma, p.direction)?;
    let eps = T::bound_tolerance();
    if p.b > T::one() + eps {
        return Err(Error::RogerLeeViolation {
            wing: (p.b + p.b).to_f64().unwrap_or(f64::NAN),
        });
    }
    let family = match p.direction {
        Direction::Upward => Family::VanishingUpward,
        Direction::Downward => Family::VanishingDownward,
    };
    let mu_up = p.direction.upward_mu(p.mu);
    let bound = fukasawa_bound(p.b);
    if !(mu_up < bound) {
        return Err(Error::FukasawaViolation(format!(
            "upward shift {mu_up} >= {bound}"
        )));
    }
    let (lower, upper) = match p.direction {
        Direction::Upward => (T::neg_infinity(), bound),
        Direction::Downward => (-bound, T::infinity()),
    };
    let mut cert = DomainCertificate::new(family, p.to_raw()).with_interval(lower, upper, p.mu);
    cert.conditions.roger_lee = true;
    cert.conditions.fukasawa = true;

    if p.b >= T::one() - eps {
        // unit slope: the supremum sits at infinity and equals -1/mu
        let star = -mu_up.recip();
        return Ok(cert.with_sigma_bound(p.sigma, star).finish());
    }
    let pt = domain_point(p.b, mu_up)?;
    Ok(cert
        .with_sigma_bound(p.sigma, pt.sigma_star)
        .diag("x", pt.x)
        .diag("mu_star", pt.mu_star)
        .diag("mu_star_residual", pt.mu_star - mu_up)
        .finish())
}
