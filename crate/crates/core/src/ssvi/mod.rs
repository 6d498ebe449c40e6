//! SSVI slices: `w(k) = (theta / 2)(1 + rho phi k + sqrt((phi k + rho)^2 + 1 - rho^2))`.
//!
//! In SVI coordinates `gamma = sqrt(1 - rho^2)` and `mu = l*`, so only `(b, rho, sigma)`
//! are free. For `rho >= 0` the bound comes from `l > l2(rho)`; negative `rho` maps to
//! `|rho|` by reflection `k -> -k`. Functions below take `rho` in `[0, 1]`.
//!
//! The `x = l / sqrt(l^2 + 1)` coordinate makes `h` and `g` elementary:
//! `h = (1 + sqrt((1 - x^2) / (1 - rho^2))) / 2`, `g = (x + rho) / 4`.
//! Points carry `z = sqrt(1 - x^2)` alongside `x` so that far wings keep precision.

pub mod heston;
pub mod uniqueness;

use serde::{Deserialize, Serialize};

use crate::certificate::{DomainCertificate, Family};
use crate::error::{Error, Result};
use crate::fukasawa::mu_interval;
use crate::numeric::bisect;
use crate::scalar::{lit, Scalar};
use crate::svi::{one_minus_sq, EvalPoint, RawSviParams};

pub use heston::{lt_heston_threshold, HestonLtParams};
pub use uniqueness::{scan_uniqueness, UniquenessReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsviParams<T> {
    /// ATM total variance.
    pub theta: T,
    /// Skew scale.
    pub phi: T,
    pub rho: T,
}

impl<T: Scalar> SsviParams<T> {
    pub fn new(theta: T, phi: T, rho: T) -> Result<Self> {
        if !(theta > T::zero() && theta.is_finite()) {
            return Err(Error::InvalidParams(format!("theta = {theta} must be positive")));
        }
        if !(phi > T::zero() && phi.is_finite()) {
            return Err(Error::InvalidParams(format!("phi = {phi} must be positive")));
        }
        if !(rho.abs() < T::one()) {
            return Err(Error::InvalidParams(format!("|rho| = {} must be below 1", rho.abs())));
        }
        Ok(Self { theta, phi, rho })
    }

    /// From the SVI-side coordinates `(b, rho, sigma)`.
    pub fn from_svi_form(b: T, rho: T, sigma: T) -> Result<Self> {
        if !(b > T::zero() && sigma > T::zero()) {
            return Err(Error::InvalidParams("b and sigma must be positive".into()));
        }
        if !(rho.abs() < T::one()) {
            return Err(Error::InvalidParams(format!("|rho| = {} must be below 1", rho.abs())));
        }
        let phi = one_minus_sq(rho).sqrt() / sigma;
        Self::new(lit::<T>(2.0) * b / phi, phi, rho)
    }

    /// Accepts raw parameters that satisfy `a = b sigma sqrt(1 - rho^2)` and `m = -rho sigma / sqrt(1 - rho^2)`.
    pub fn from_raw(p: &RawSviParams<T>) -> Result<Self> {
        p.validate()?;
        let s = Self::from_svi_form(p.b, p.rho, p.sigma)?;
        let want = s.to_raw();
        let tol = lit::<T>(1e-10);
        let scale = T::one() + p.a.abs() + p.m.abs();
        if (want.a - p.a).abs() > tol * scale || (want.m - p.m).abs() > tol * scale {
            return Err(Error::InvalidParams("raw parameters are not an SSVI slice".into()));
        }
        Ok(s)
    }

    pub fn b(&self) -> T {
        self.theta * self.phi / lit(2.0)
    }

    pub fn sigma(&self) -> T {
        one_minus_sq(self.rho).sqrt() / self.phi
    }

    pub fn to_raw(&self) -> RawSviParams<T> {
        let r2 = one_minus_sq(self.rho);
        RawSviParams {
            a: self.theta * r2 / lit(2.0),
            b: self.b(),
            rho: self.rho,
            m: -self.rho / self.phi,
            sigma: self.sigma(),
        }
    }

    /// The same slice reflected through `k -> -k`.
    pub fn reflected(&self) -> Self {
        Self { rho: -self.rho, ..*self }
    }
}

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if !(rho >= T::zero() && rho <= T::one()) {
        return Err(Error::Domain(format!("rho = {rho} outside [0, 1]")));
    }
    Ok(())
}

/// Largest root `cos(arccos(-rho) / 3)` of `4x^3 - 3x + rho`: the zero of `j2` in `x`.
pub fn x_of_rho<T: Scalar>(rho: T) -> Result<T> {
    check_rho(rho)?;
    Ok(((-rho).acos() / lit(3.0)).cos())
}

/// Positive zero of `g2`: `l2(rho) = 1 / tan(arccos(-rho) / 3)`.
pub fn l2_closed<T: Scalar>(rho: T) -> Result<T> {
    check_rho(rho)?;
    Ok(((-rho).acos() / lit(3.0)).tan().recip())
}

/// `(2 + sqrt 10) / 6`: location of the `j2` minimum at `rho = 1`.
pub fn x_m2_at_one<T: Scalar>() -> T {
    (lit::<T>(2.0) + lit::<T>(10.0).sqrt()) / lit(6.0)
}

/// `sqrt(sqrt 7 / 18 + 7 / 9)`: location of the `j2` minimum at `rho = 0`.
pub fn x_m2_at_zero<T: Scalar>() -> T {
    (lit::<T>(7.0).sqrt() / lit(18.0) + lit::<T>(7.0) / lit(9.0)).sqrt()
}

/// `rho(x) = x(-12x^4 + 16x^2 - 5 + 2(1 - x^2) sqrt(36x^4 - 24x^2 + 1))`, decreasing on the `x_m2` range.
pub fn rho_of_x<T: Scalar>(x: T) -> T {
    let x2 = x * x;
    let x4 = x2 * x2;
    let root = (lit::<T>(36.0) * x4 - lit::<T>(24.0) * x2 + T::one()).max(T::zero()).sqrt();
    x * (-lit::<T>(12.0) * x4 + lit::<T>(16.0) * x2 - lit(5.0) + lit::<T>(2.0) * (T::one() - x2) * root)
}

/// `x_m2(rho)`: the minimum of `j2` in the `x` coordinate.
pub fn m2<T: Scalar>(rho: T) -> Result<T> {
    check_rho(rho)?;
    if rho == T::zero() {
        return Ok(x_m2_at_zero());
    }
    if rho == T::one() {
        return Ok(x_m2_at_one());
    }
    bisect(|x| rho_of_x(x) - rho, x_m2_at_one(), x_m2_at_zero(), T::zero())
        .ok_or_else(|| Error::NoRoot(format!("rho(x) does not reach {rho}")))
}

fn u_term<T: Scalar>(pt: &EvalPoint<T>, rho: T, rbar: T) -> T {
    T::one() + rho * pt.x + rbar * pt.z
}

/// `j2 = g2` in `x`: `(1 - x^2)^(3/2) - (x + rho)^2 sqrt(1 - x^2) / (2u)`, `u = 1 + rho x + sqrt(1 - rho^2) sqrt(1 - x^2)`.
pub fn j2<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    let rbar = one_minus_sq(rho).sqrt();
    let u = u_term(pt, rho, rbar);
    let xr = pt.x + rho;
    pt.z * pt.z * pt.z - xr * xr * pt.z / (lit::<T>(2.0) * u)
}

/// `d j2 / dx`.
pub fn j2_dx<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    let two = lit::<T>(2.0);
    let rbar = one_minus_sq(rho).sqrt();
    let (x, z) = (pt.x, pt.z);
    let u = u_term(pt, rho, rbar);
    let du = rho - rbar * pt.l;
    let xr = x + rho;
    let dz = -pt.l;
    let dnum = two * xr * z + xr * xr * dz;
    -lit::<T>(3.0) * x * z - dnum / (two * u) + xr * xr * z * du / (two * u * u)
}

/// `h = (1 + sqrt((1 - x^2) / (1 - rho^2))) / 2`.
pub fn h<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    (T::one() + pt.z / one_minus_sq(rho).sqrt()) / lit(2.0)
}

/// `dh / dx = -x / (2 sqrt(1 - rho^2) sqrt(1 - x^2))`.
pub fn h_dx<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    -pt.l / (lit::<T>(2.0) * one_minus_sq(rho).sqrt())
}

/// `g = (x + rho) / 4`; `dg/dx = 1/4`.
pub fn g<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    (pt.x + rho) / lit(4.0)
}

/// `h^2 - b^2 g^2`.
pub fn big_j1<T: Scalar>(pt: &EvalPoint<T>, rho: T, b: T) -> T {
    let hh = h(pt, rho);
    let gg = g(pt, rho);
    (hh - b * gg) * (hh + b * gg)
}

/// `h j2' - 2 h' j2` with derivatives in `x`.
pub fn p_term<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    h(pt, rho) * j2_dx(pt, rho) - lit::<T>(2.0) * h_dx(pt, rho) * j2(pt, rho)
}

/// `g j2' - 2 g' j2` with derivatives in `x`.
pub fn q_term<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    g(pt, rho) * j2_dx(pt, rho) - j2(pt, rho) / lit(2.0)
}

/// Numerator of `h j2' - 2h' j2` up to a positive factor, polynomial form.
pub fn p_numerator<T: Scalar>(x: T, rho: T) -> T {
    let r = rho;
    let r2 = r * r;
    let rbar = one_minus_sq(r).sqrt();
    let xs = one_minus_sq(x).sqrt();
    let c = |v: f64| lit::<T>(v);
    let (x2, x3) = (x * x, x * x * x);
    let (x4, x5, x6) = (x3 * x, x3 * x2, x3 * x3);
    let first = -c(4.0) * r * x6 + c(2.0) * (c(6.0) * r2 - c(5.0)) * x5 + c(24.0) * r * x4
        + (c(31.0) - c(14.0) * r2) * x3
        - c(13.0) * r * x2
        + c(5.0) * (r2 - c(4.0)) * x
        + r * (r2 - c(4.0));
    let second = c(2.0) * (c(2.0) * r2 - c(1.0)) * x5 + c(4.0) * r * (c(4.0) - c(3.0) * r2) * x4
        + (c(21.0) - c(22.0) * r2) * x3
        + r * (c(8.0) * r2 - c(15.0)) * x2
        + c(5.0) * (c(3.0) * r2 - c(4.0)) * x
        + r * (c(3.0) * r2 - c(4.0));
    rbar * first + xs * second
}

/// Factored form of [`p_numerator`]: `-2u^2 sqrt(1-x^2) [x sqrt(1-x^2)(3 sqrt(1-rho^2) + sqrt(1-x^2)) + x + rho] + (x + rho)^3 v`.
pub fn p_numerator_factored<T: Scalar>(x: T, rho: T) -> T {
    let rbar = one_minus_sq(rho).sqrt();
    let xs = one_minus_sq(x).sqrt();
    let u = T::one() + rho * x + xs * rbar;
    let v = xs + rbar;
    let xr = x + rho;
    -lit::<T>(2.0) * u * u * xs * (x * xs * (lit::<T>(3.0) * rbar + xs) + xr) + xr * xr * xr * v
}

/// `x` of the `b = 0` boundary: the zero of [`p_numerator`] in `(max(x2, rho), 1)`; `1` at `rho = 1`.
pub fn x_bar_zero<T: Scalar>(rho: T) -> Result<T> {
    check_rho(rho)?;
    if rho == T::one() {
        return Ok(T::one());
    }
    if rho == T::zero() {
        return Ok((lit::<T>(6.0).sqrt() - lit(1.5)).sqrt());
    }
    let lo = x_of_rho(rho)?.max(rho);
    bisect(|x| p_numerator(x, rho), lo, T::one(), T::zero())
        .ok_or_else(|| Error::NoRoot(format!("no b = 0 boundary at rho = {rho}")))
}

/// `l_bar(0, rho)`; infinite at `rho = 1`.
pub fn l_bar_zero<T: Scalar>(rho: T) -> Result<T> {
    let x = x_bar_zero(rho)?;
    if x >= T::one() {
        return Ok(T::infinity());
    }
    if rho == T::zero() {
        return Ok((lit::<T>(9.0) + lit::<T>(4.0) * lit::<T>(6.0).sqrt()).sqrt());
    }
    Ok(x / one_minus_sq(x).sqrt())
}

/// `b*^2 = h p / (g q)`, negative left of the `b = 0` boundary.
fn b_star_sq<T: Scalar>(pt: &EvalPoint<T>, rho: T) -> T {
    h(pt, rho) * p_term(pt, rho) / (g(pt, rho) * q_term(pt, rho))
}

/// `b*(l, rho)`: the slope whose `f~` is minimized at `l`.
pub fn b_star<T: Scalar>(l: T, rho: T) -> Result<T> {
    check_rho(rho)?;
    if rho == T::one() {
        return Err(Error::Domain("b* needs rho < 1".into()));
    }
    if l.is_infinite() && l > T::zero() {
        return Ok(lit::<T>(2.0) / (T::one() + rho));
    }
    let pt = EvalPoint::new(l);
    let p = p_term(&pt, rho);
    let q = q_term(&pt, rho);
    if !(p > T::zero() && q > T::zero() && l > T::zero()) {
        return Err(Error::Domain(format!("l = {l} left of the b = 0 boundary at rho = {rho}")));
    }
    Ok(b_star_sq(&pt, rho).sqrt())
}

/// `-b g2 / (2 (h^2 - b^2 g^2))` at `l` for an explicit `b`.
pub fn sigma_star_at<T: Scalar>(l: T, rho: T, b: T) -> T {
    if l.is_infinite() {
        return one_minus_sq(rho).sqrt();
    }
    let pt = EvalPoint::new(l);
    -b * j2(&pt, rho) / (lit::<T>(2.0) * big_j1(&pt, rho, b))
}

/// `sigma*(l, rho)` with `b = b*(l, rho)`; `sqrt(1 - rho^2)` at `l = inf`.
pub fn sigma_star_closed<T: Scalar>(l: T, rho: T) -> Result<T> {
    let b = b_star(l, rho)?;
    Ok(sigma_star_at(l, rho, b))
}

/// Largest upper bracket tried by [`l_of_b`].
pub const L_MAX: f64 = 1e8;

/// Minimizer `l` of `f~` for slope `b` in `(0, 2 / (1 + rho))`.
///
/// Starts on `[l_bar(0), max(10, 2 l_bar(0))]` and doubles the upper end.
/// Returns `None` when `b*` has not reached `b` by `L_MAX`: the limit case.
pub fn l_of_b<T: Scalar>(b: T, rho: T) -> Result<Option<T>> {
    check_rho(rho)?;
    let cap = lit::<T>(2.0) / (T::one() + rho);
    if !(b > T::zero() && b < cap) {
        return Err(Error::Domain(format!("b = {b} outside (0, {cap})")));
    }
    let lo = l_bar_zero(rho)?;
    if lo.is_infinite() {
        return Ok(None);
    }
    let b2 = b * b;
    let target = |l: T| b_star_sq(&EvalPoint::new(l), rho) - b2;
    let mut hi = lit::<T>(10.0).max(lo + lo);
    let l_max = lit::<T>(L_MAX);
    while target(hi) < T::zero() {
        if hi > l_max {
            return Ok(None);
        }
        hi = hi + hi;
    }
    let l = bisect(target, lo, hi, T::zero())
        .ok_or_else(|| Error::NoRoot(format!("b* does not bracket {b} on [{lo}, {hi}]")))?;
    Ok(Some(l))
}

/// Explicit domain point: `(l, rho)` with `l >= l_bar(0, |rho|)` gives `(b*, sigma*)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsviDomainPoint<T> {
    pub l: T,
    pub rho: T,
    pub b_star: T,
    pub sigma_star: T,
}

impl<T: Scalar> SsviDomainPoint<T> {
    pub fn new(l: T, rho: T) -> Result<Self> {
        let r = rho.abs();
        let b = b_star(l, r)?;
        Ok(Self { l, rho, b_star: b, sigma_star: sigma_star_at(l, r, b) })
    }

    pub fn params(&self, sigma: T) -> Result<SsviParams<T>> {
        SsviParams::from_svi_form(self.b_star, self.rho, sigma)
    }
}

/// Gatheral-Jacquier sufficient condition: `theta phi (1 + |rho|) < 4` and `theta phi^2 (1 + |rho|) <= 4`.
pub fn gj_sufficient<T: Scalar>(p: &SsviParams<T>) -> bool {
    let four = lit::<T>(4.0);
    let w = T::one() + p.rho.abs();
    p.theta * p.phi * w < four && p.theta * p.phi * p.phi * w <= four
}

/// `sigma` bound of the explicit sub-domain: `-8b j2(m2(|rho|), |rho|) / (4 - b^2 (1 + |rho|)^2)`.
pub fn subdomain_bound<T: Scalar>(b: T, rho: T) -> Result<T> {
    let r = rho.abs();
    let wing = b * (T::one() + r);
    if !(b > T::zero() && wing < lit(2.0)) {
        return Err(Error::Domain(format!("b (1 + |rho|) = {wing} outside (0, 2)")));
    }
    let x = m2(r)?;
    let j2_min = j2(&EvalPoint::from_x(x), r);
    Ok(-lit::<T>(8.0) * b * j2_min / (lit::<T>(4.0) - wing * wing))
}

pub fn subdomain_check<T: Scalar>(p: &SsviParams<T>) -> Result<bool> {
    Ok(p.sigma() >= subdomain_bound(p.b(), p.rho)?)
}

/// Certifies an SSVI slice.
pub fn certify<T: Scalar>(p: &SsviParams<T>) -> Result<DomainCertificate<T>> {
    let p = SsviParams::new(p.theta, p.phi, p.rho)?;
    let raw = p.to_raw();
    let eps = T::bound_tolerance();
    let two = lit::<T>(2.0);
    let r = p.rho.abs();
    let b = p.b();
    let sigma = p.sigma();
    let wing = b * (T::one() + r);
    if wing > two + eps {
        let err = Error::RogerLeeViolation { wing: wing.to_f64().unwrap_or(f64::NAN) };
        return DomainCertificate::rejected(Family::Ssvi, raw, &err);
    }
    let mut c = DomainCertificate::new(Family::Ssvi, raw);
    if let (Some(n), Ok(interval)) = (c.normalized, mu_interval(one_minus_sq(p.rho).sqrt(), b, p.rho)) {
        c = c.with_interval(interval.lower, interval.upper, n.mu);
    }
    c.conditions.roger_lee = true;
    c.conditions.fukasawa = true;
    c = c.note("uniqueness: numerically sustained");
    let limit = one_minus_sq(p.rho).sqrt();
    if wing >= two - eps {
        return Ok(c.with_sigma_bound(sigma, limit).note("b = 2 / (1 + |rho|)").finish());
    }
    let lbar = l_bar_zero(r)?;
    c = c.diag("l_bar_zero", lbar);
    match l_of_b(b, r)? {
        Some(l) => Ok(c.with_sigma_bound(sigma, sigma_star_at(l, r, b)).diag("l", l).finish()),
        None => Ok(c.with_sigma_bound(sigma, limit).note("minimizer beyond the search range").finish()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{durrleman_check, sigma_star, sigma_star_with, DurrlemanGrid, OracleConfig, Side};
    use crate::svi::{terms, NormalizedSvi};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shape(b: f64, rho: f64) -> NormalizedSvi<f64> {
        let g = (1.0 - rho * rho).sqrt();
        NormalizedSvi::shape(g, b, rho, -rho / g).unwrap()
    }

    #[test]
    fn svi_map_round_trip() {
        let p = SsviParams::new(0.3f64, 1.7, -0.4).unwrap();
        let raw = p.to_raw();
        let back = SsviParams::from_raw(&raw).unwrap();
        assert!((back.theta - p.theta).abs() < 1e-12 && (back.phi - p.phi).abs() < 1e-12);
        let n = raw.normalize().unwrap();
        assert!((n.gamma - (1.0 - 0.16f64).sqrt()).abs() < 1e-12);
        assert!((n.mu - 0.4 / (1.0 - 0.16f64).sqrt()).abs() < 1e-12);
        for k in [-1.0, -0.2, 0.0, 0.5, 2.0] {
            let direct = 0.15 * (1.0 - 0.4 * 1.7 * k + ((1.7 * k - 0.4f64).powi(2) + 1.0 - 0.16).sqrt());
            assert!((raw.total_variance(k) - direct).abs() < 1e-12);
        }
        let mut off = raw;
        off.a *= 1.1;
        assert!(SsviParams::from_raw(&off).is_err());
    }

    #[test]
    fn l2_examples_and_residual() {
        assert!((x_of_rho(0.0f64).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((l2_closed(0.0f64).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert!((x_of_rho(1.0f64).unwrap() - 0.5).abs() < 1e-15);
        assert!((l2_closed(1.0f64).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        for i in 0..50 {
            let rho = i as f64 / 49.0 * 0.999;
            let x = x_of_rho(rho).unwrap();
            assert!((4.0 * x * x * x - 3.0 * x + rho).abs() < 1e-13);
            let n = shape(1.0, rho);
            let g2 = terms(l2_closed(rho).unwrap(), &n).unwrap().g2;
            assert!(g2.abs() <= 1e-12, "rho={rho}: {g2}");
        }
        assert!(l2_closed(-0.1f64).is_err());
    }

    #[test]
    fn x_of_rho_is_decreasing() {
        let xs: Vec<f64> = (0..=100).map(|i| x_of_rho(i as f64 / 100.0).unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn m2_examples() {
        assert!((m2(0.0f64).unwrap() - (7f64.sqrt() / 18.0 + 7.0 / 9.0).sqrt()).abs() < 1e-12);
        assert!((m2(1.0f64).unwrap() - (2.0 + 10f64.sqrt()) / 6.0).abs() < 1e-12);
        let r = 2.0 / 5f64.sqrt();
        assert!((m2(r).unwrap() - r).abs() < 1e-12);
        assert!((rho_of_x(x_m2_at_zero::<f64>())).abs() < 1e-12);
        assert!((rho_of_x(x_m2_at_one::<f64>()) - 1.0).abs() < 1e-12);
        for rho in [0.1f64, 0.4, 0.7, 0.95] {
            let x = m2(rho).unwrap();
            let d = j2_dx(&EvalPoint::from_x(x), rho);
            assert!(d.abs() < 1e-10, "rho={rho}: {d}");
        }
    }

    #[test]
    fn x_form_matches_general_terms() {
        for rho in [0.0f64, 0.3, 0.8] {
            let n = shape(0.7, rho);
            for l in [0.5, 2.0, 5.0, 40.0] {
                let t = terms(l, &n).unwrap();
                let pt = EvalPoint::new(l);
                assert!((h(&pt, rho) - t.h).abs() < 1e-13);
                assert!((g(&pt, rho) - t.g).abs() < 1e-13);
                assert!((j2(&pt, rho) - t.g2).abs() < 1e-13);
                // d/dl = (dx/dl) d/dx with dx/dl = z^3
                let z3 = pt.z.powi(3);
                assert!((j2_dx(&pt, rho) * z3 - t.dg2).abs() < 1e-12 * (1.0 + t.dg2.abs()));
                assert!((h_dx(&pt, rho) * z3 - t.dh).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn b_star_matches_direct_formula() {
        let rho = 0.0f64;
        let l = 5.0;
        let t = terms(l, &shape(1.0, rho)).unwrap();
        let p = t.h * t.dg2 - 2.0 * t.dh * t.g2;
        let q = t.g * t.dg2 - 2.0 * t.dg * t.g2;
        let want = (t.h * p / (t.g * q)).sqrt();
        assert!((b_star(l, rho).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn b_zero_boundary() {
        assert!((l_bar_zero(0.0f64).unwrap() - (9.0 + 4.0 * 6f64.sqrt()).sqrt()).abs() < 1e-10);
        assert!((x_bar_zero(0.0f64).unwrap() - (6f64.sqrt() - 1.5).sqrt()).abs() < 1e-15);
        assert!(p_numerator((6f64.sqrt() - 1.5).sqrt(), 0.0).abs() < 1e-12);
        assert!(l_bar_zero(1.0f64).unwrap().is_infinite());
        for rho in [0.2f64, 0.5, 0.9] {
            let lo = x_of_rho(rho).unwrap().max(rho);
            assert!(p_numerator(lo, rho) < 0.0 && p_numerator(1.0, rho) > 0.0);
            let x = x_bar_zero(rho).unwrap();
            assert!(p_numerator(x, rho).abs() < 1e-12);
            let lbar = l_bar_zero(rho).unwrap();
            assert!(b_star(lbar * (1.0 + 1e-9), rho).unwrap() < 1e-3);
            assert!(b_star(lbar * (1.0 - 1e-3), rho).is_err());
        }
        for rho in [0.0f64, 0.3, 0.6] {
            for x in [0.7, 0.85, 0.97] {
                let a = p_numerator(x, rho);
                assert!((a - p_numerator_factored(x, rho)).abs() < 1e-12 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn b_star_is_monotone_with_limit() {
        for rho in [0.0f64, 0.4, 0.8] {
            let lbar = l_bar_zero(rho).unwrap();
            let vals: Vec<f64> = (1..200).map(|i| b_star(lbar * (1.0 + 0.05 * i as f64), rho).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]), "rho={rho}");
            let cap = 2.0 / (1.0 + rho);
            assert!(vals.iter().all(|&v| v < cap));
            assert!((b_star(1e6, rho).unwrap() - cap).abs() < 1e-4);
            assert_eq!(b_star(f64::INFINITY, rho).unwrap(), cap);
        }
    }

    #[test]
    fn sigma_star_matches_oracle() {
        for rho in [0.0f64, 0.3, 0.5, 0.8] {
            let lbar = l_bar_zero(rho).unwrap();
            for mult in [1.2, 2.0, 4.0, 10.0] {
                let l = lbar * mult;
                let b = b_star(l, rho).unwrap();
                let closed = sigma_star_closed(l, rho).unwrap();
                let r = sigma_star(&shape(b, rho)).unwrap();
                assert!((closed - r.sigma_star).abs() < 1e-6 * r.sigma_star, "rho={rho} l={l}");
                assert!((r.argsup_l - l).abs() < 1e-6 * l, "rho={rho}: {} vs {l}", r.argsup_l);
            }
        }
        assert!(sigma_star_closed(l_bar_zero(0.0f64).unwrap() * (1.0 + 1e-9), 0.0).unwrap() < 1e-3);
    }

    #[test]
    fn saturated_slope_bound() {
        for rho in [0.0f64, 0.3, 0.6, 0.9] {
            let r = sigma_star(&shape(2.0 / (1.0 + rho), rho)).unwrap();
            assert!((r.sigma_star - (1.0 - rho * rho).sqrt()).abs() < 1e-6);
            assert_eq!(r.side, Side::LimitAtInfinity);
        }
    }

    #[test]
    fn right_side_dominates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let both = OracleConfig { both_sides: true, ..OracleConfig::default() };
        for _ in 0..20 {
            let rho: f64 = rng.gen_range(0.01..0.95);
            let b = rng.gen_range(0.05..0.95) * 2.0 / (1.0 + rho);
            let n = shape(b, rho);
            let right = sigma_star(&n).unwrap();
            let full = sigma_star_with(&n, &both).unwrap();
            assert!(right.sigma_star >= full.sigma_star * (1.0 - 1e-12));
            assert!(right.argsup_l > 0.0);
        }
    }

    #[test]
    fn l_of_b_inverts() {
        for rho in [0.0f64, 0.5, 0.9] {
            let l = 3.0 * l_bar_zero(rho).unwrap();
            let b = b_star(l, rho).unwrap();
            let back = l_of_b(b, rho).unwrap().unwrap();
            assert!((back - l).abs() < 1e-8 * l);
        }
    }

    #[test]
    fn certify_examples() {
        let fig = SsviParams::from_svi_form(1.0f64, 0.5, 0.5).unwrap();
        let c = certify(&fig).unwrap();
        let d = durrleman_check(&fig.to_raw(), &DurrlemanGrid::default()).unwrap();
        assert_eq!(c.verdict, d.min >= -1e-10);
        assert!(c.notes.iter().any(|n| n == "uniqueness: numerically sustained"));

        for rho in [-0.6f64, 0.0, 0.6] {
            let b = 2.0 / (1.0 + rho.abs());
            let p = SsviParams::from_svi_form(b, rho, (1.0 - rho * rho).sqrt()).unwrap();
            let c = certify(&p).unwrap();
            assert!(c.verdict && c.boundary.sigma_on_boundary, "rho={rho}");
        }
        let p = SsviParams::from_svi_form(2.01 / 1.5, 0.5, 1.0).unwrap();
        assert!(!certify(&p).unwrap().conditions.roger_lee);
        assert!(SsviParams::new(0.1f64, 1.0, 1.0).is_err());
    }

    #[test]
    fn reflection_preserves_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let rho: f64 = rng.gen_range(-0.95..0.95);
            let b = rng.gen_range(0.05..1.0) * 2.0 / (1.0 + rho.abs());
            let sigma = rng.gen_range(0.05..2.0);
            let p = SsviParams::from_svi_form(b, rho, sigma).unwrap();
            let a = certify(&p).unwrap();
            let r = certify(&p.reflected()).unwrap();
            assert_eq!(a.verdict, r.verdict);
            assert_eq!(a.bounds.sigma_star, r.bounds.sigma_star);
        }
    }

    #[test]
    fn fukasawa_contains_critical_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let rho: f64 = rng.gen_range(-0.95..0.95);
            let b = rng.gen_range(0.05..1.0) * 2.0 / (1.0 + rho.abs());
            let g = (1.0 - rho * rho).sqrt();
            let i = mu_interval(g, b, rho).unwrap();
            assert!(i.contains(-rho / g), "rho={rho} b={b}");
        }
    }

    #[test]
    fn gj_examples() {
        let p = SsviParams::from_svi_form(1.0f64, 0.0, 0.5).unwrap();
        assert!(gj_sufficient(&p));
        let p = SsviParams::from_svi_form(1.0f64, 0.0, 0.5 - 1e-9).unwrap();
        assert!(!gj_sufficient(&p));
        let p = SsviParams::from_svi_form(2.0 / 1.4, 0.4, 5.0).unwrap();
        assert!(!gj_sufficient(&p));
        let rho = 0.4f64;
        let b = 2.0 / 1.4 * (1.0 - 1e-6);
        let gj_sigma = b / 2.0 * 1.4 * (1.0 - rho * rho).sqrt();
        let p = SsviParams::from_svi_form(b, rho, gj_sigma * 1.0001).unwrap();
        assert!(gj_sufficient(&p));
        assert!(subdomain_bound(b, rho).unwrap() > 1e3);
    }

    #[test]
    fn gj_matches_svi_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let rho: f64 = rng.gen_range(-0.95..0.95);
            let b = rng.gen_range(0.05..1.1) * 2.0 / (1.0 + rho.abs());
            let sigma = rng.gen_range(0.05..2.0);
            let p = SsviParams::from_svi_form(b, rho, sigma).unwrap();
            let r = rho.abs();
            let svi_form = b * (1.0 + r) < 2.0 && sigma >= b / 2.0 * (1.0 + r) * (1.0 - r * r).sqrt();
            let edge = (sigma - b / 2.0 * (1.0 + r) * (1.0 - r * r).sqrt()).abs() < 1e-9 || (b * (1.0 + r) - 2.0).abs() < 1e-9;
            if !edge {
                assert_eq!(gj_sufficient(&p), svi_form);
            }
        }
    }

    #[test]
    fn subdomain_examples() {
        let x = x_m2_at_zero::<f64>();
        let want = -8.0 * j2(&EvalPoint::from_x(x), 0.0) / 3.0;
        assert!((subdomain_bound(1.0f64, 0.0).unwrap() - want).abs() < 1e-14);
        assert!(subdomain_bound(2.0f64, 0.0).is_err());
        let p = SsviParams::from_svi_form(1.0f64, 0.3, subdomain_bound(1.0, 0.3).unwrap() * (1.0 + 1e-12)).unwrap();
        assert!(subdomain_check(&p).unwrap());
        assert!(durrleman_check(&p.to_raw(), &DurrlemanGrid::default()).unwrap().min >= -1e-10);
    }

    #[test]
    fn sufficient_conditions_imply_certify() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let rho: f64 = rng.gen_range(-0.95..0.95);
            let b = rng.gen_range(0.02..0.999) * 2.0 / (1.0 + rho.abs());
            let sigma = rng.gen_range(0.05..3.0);
            let p = SsviParams::from_svi_form(b, rho, sigma).unwrap();
            let c = certify(&p).unwrap();
            if gj_sufficient(&p) || subdomain_check(&p).unwrap() {
                assert!(c.verdict, "{p:?}");
            }
        }
    }

    #[test]
    fn certify_agrees_with_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let grid = DurrlemanGrid::default();
        let mut checked = 0;
        while checked < 40 {
            let rho: f64 = rng.gen_range(-0.9..0.9);
            let b = rng.gen_range(0.05..0.98) * 2.0 / (1.0 + rho.abs());
            let probe = SsviParams::from_svi_form(b, rho, 1.0).unwrap();
            let star = certify(&probe).unwrap().bounds.sigma_star.unwrap();
            let sigma = star * rng.gen_range(0.5..1.5);
            if (sigma / star - 1.0).abs() < 1e-3 {
                continue;
            }
            let p = SsviParams::from_svi_form(b, rho, sigma).unwrap();
            let c = certify(&p).unwrap();
            let d = durrleman_check(&p.to_raw(), &grid).unwrap();
            assert_eq!(c.verdict, d.min >= -1e-10, "{p:?}: {}", d.min);
            checked += 1;
        }
    }

    #[test]
    fn domain_point_certifies() {
        let pt = SsviDomainPoint::new(3.0 * l_bar_zero(0.4f64).unwrap(), -0.4).unwrap();
        let c = certify(&pt.params(pt.sigma_star).unwrap()).unwrap();
        assert!(c.verdict && c.boundary.sigma_on_boundary);
    }
}
