//! Raw and normalized SVI slices and the auxiliary functions of the
//! no-arbitrage analysis.
//!
//! In normalized coordinates `l = (k - m) / sigma` the total variance reads
//! `w = b * sigma * N(l)` with `N(l) = gamma + rho * l + sqrt(l^2 + 1)`.
//! Butterfly arbitrage is absent iff `G1(l) + b * g2(l) / (2 sigma) >= 0`
//! for all `l`, where `G1 = (h - b g)(h + b g)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// The five raw SVI parameters in total-variance space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawSviParams<T> {
    pub a: T,
    pub b: T,
    pub rho: T,
    pub m: T,
    pub sigma: T,
}

impl<T: Scalar> RawSviParams<T> {
    /// Validates the parameter invariants.
    pub fn new(a: T, b: T, rho: T, m: T, sigma: T) -> Result<Self> {
        let p = Self { a, b, rho, m, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { a, b, rho, m, sigma } = *self;
        if [a, b, rho, m, sigma].iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite SVI parameter".into()));
        }
        if b < T::zero() {
            return Err(Error::InvalidParams(format!("b = {b} must be >= 0")));
        }
        if rho.abs() > T::one() {
            return Err(Error::InvalidParams(format!("|rho| = {} exceeds 1", rho.abs())));
        }
        if sigma < T::zero() {
            return Err(Error::InvalidParams(format!("sigma = {sigma} must be >= 0")));
        }
        if a == T::zero() && b == T::zero() {
            return Err(Error::InvalidParams("a = b = 0 is the trivial smile".into()));
        }
        let floor = a + b * sigma * one_minus_sq(rho).sqrt();
        let slack = lit::<T>(8.0) * T::epsilon() * (a.abs() + b * sigma);
        if floor < -slack {
            return Err(Error::InvalidParams(format!(
                "minimum total variance {floor} is negative"
            )));
        }
        Ok(())
    }

    /// Total variance `w(k)`.
    pub fn total_variance(&self, k: T) -> T {
        let d = k - self.m;
        self.a + self.b * wing_sum(self.rho, d, d.hypot(self.sigma), self.sigma * self.sigma)
    }

    /// `b = 0` with positive level: a flat (Black-Scholes) smile.
    pub fn is_black_scholes(&self) -> bool {
        self.b == T::zero() && self.a > T::zero()
    }

    /// Reduced coordinates `(gamma, b, rho, mu, sigma)`.
    pub fn normalize(&self) -> Result<NormalizedSvi<T>> {
        if self.b <= T::zero() || self.sigma <= T::zero() {
            return Err(Error::InvalidParams(
                "normalization needs b > 0 and sigma > 0".into(),
            ));
        }
        NormalizedSvi::new(
            self.a / (self.b * self.sigma),
            self.b,
            self.rho,
            self.m / self.sigma,
            self.sigma,
        )
    }

    /// Mirror smile `k -> -k`: `(a, b, -rho, -m, sigma)`.
    pub fn invert(&self) -> Self {
        Self { rho: -self.rho, m: -self.m, ..*self }
    }
}

/// `w(k)` as a free function.
pub fn total_variance<T: Scalar>(p: &RawSviParams<T>, k: T) -> T {
    p.total_variance(k)
}

/// `(a, b, -rho, -m, sigma)`; arbitrage status is preserved.
pub fn invert<T: Scalar>(p: &RawSviParams<T>) -> RawSviParams<T> {
    p.invert()
}

/// Normalized SVI: `gamma = a / (b sigma)`, `mu = m / sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSvi<T> {
    pub gamma: T,
    pub b: T,
    pub rho: T,
    pub mu: T,
    pub sigma: T,
}

impl<T: Scalar> NormalizedSvi<T> {
    pub fn new(gamma: T, b: T, rho: T, mu: T, sigma: T) -> Result<Self> {
        if [gamma, b, rho, mu, sigma].iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite normalized parameter".into()));
        }
        if rho.abs() > T::one() {
            return Err(Error::InvalidParams(format!("|rho| = {} exceeds 1", rho.abs())));
        }
        if b < T::zero() || sigma < T::zero() {
            return Err(Error::InvalidParams("b and sigma must be >= 0".into()));
        }
        let floor = -one_minus_sq(rho).sqrt();
        if gamma < floor - lit::<T>(8.0) * T::epsilon() * (T::one() + gamma.abs()) {
            return Err(Error::InvalidParams(format!(
                "gamma = {gamma} below -sqrt(1 - rho^2) = {floor}"
            )));
        }
        Ok(Self { gamma, b, rho, mu, sigma })
    }

    /// Shape parameters only; `sigma` is left at 1.
    pub fn shape(gamma: T, b: T, rho: T, mu: T) -> Result<Self> {
        Self::new(gamma, b, rho, mu, T::one())
    }

    pub fn to_raw(&self) -> RawSviParams<T> {
        RawSviParams {
            a: self.gamma * self.b * self.sigma,
            b: self.b,
            rho: self.rho,
            m: self.mu * self.sigma,
            sigma: self.sigma,
        }
    }

    pub fn with_sigma(&self, sigma: T) -> Self {
        Self { sigma, ..*self }
    }

    /// `(gamma, b, -rho, -mu, sigma)`, the normalized image of [`RawSviParams::invert`].
    pub fn inverted(&self) -> Self {
        Self { rho: -self.rho, mu: -self.mu, ..*self }
    }

    /// Minimizer `l* = -rho / sqrt(1 - rho^2)` of `N`; infinite at `|rho| = 1`.
    pub fn critical_point(&self) -> T {
        critical_point(self.rho)
    }

    /// Wing slopes `(b(1 - rho), b(1 + rho))`.
    pub fn wings(&self) -> (T, T) {
        (self.b * (T::one() - self.rho), self.b * (T::one() + self.rho))
    }
}

/// `l* = -rho / sqrt(1 - rho^2)`.
pub fn critical_point<T: Scalar>(rho: T) -> T {
    let r = one_minus_sq(rho);
    if r <= T::zero() {
        if rho > T::zero() {
            T::neg_infinity()
        } else {
            T::infinity()
        }
    } else {
        -rho / r.sqrt()
    }
}

/// `1 - v^2`, computed as `(1 - v)(1 + v)`.
#[inline]
pub fn one_minus_sq<T: Scalar>(v: T) -> T {
    (T::one() - v) * (T::one() + v)
}

/// `rho * d + q` with `q = sqrt(d^2 + c2)`, rationalized when the terms cancel.
#[inline]
fn wing_sum<T: Scalar>(rho: T, d: T, q: T, c2: T) -> T {
    if rho * d < T::zero() {
        (one_minus_sq(rho) * d * d + c2) / (q - rho * d)
    } else {
        rho * d + q
    }
}

/// Evaluation point with the `x` and `z` coordinates used by the families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint<T> {
    pub l: T,
    /// `l / sqrt(l^2 + 1)`
    pub x: T,
    /// `1 / sqrt(l^2 + 1)`
    pub z: T,
}

impl<T: Scalar> EvalPoint<T> {
    pub fn new(l: T) -> Self {
        let s = l.hypot(T::one());
        Self { l, x: l / s, z: s.recip() }
    }

    /// From `x` in `(-1, 1)`.
    pub fn from_x(x: T) -> Self {
        let z = one_minus_sq(x).sqrt();
        Self { l: x / z, x, z }
    }

    /// From `z` in `(0, 1]`, on the branch `l >= 0`.
    pub fn from_z(z: T) -> Self {
        let x = one_minus_sq(z).sqrt();
        Self { l: x / z, x, z }
    }
}

/// `(N, N', N'')` at `l`.
pub fn n_funcs<T: Scalar>(l: T, gamma: T, rho: T) -> (T, T, T) {
    let s = l.hypot(T::one());
    let inv = s.recip();
    let n = gamma + wing_sum(rho, l, s, T::one());
    let n1 = if rho * l < T::zero() {
        (rho * rho - one_minus_sq(rho) * l * l) / (s * (rho * s - l))
    } else {
        rho + l * inv
    };
    (n, n1, inv * inv * inv)
}

/// `(h, g, g2)` at `l`.
pub fn hgg2<T: Scalar>(l: T, p: &NormalizedSvi<T>) -> Result<(T, T, T)> {
    let t = terms(l, p)?;
    Ok((t.h, t.g, t.g2))
}

/// `(G1, G1+, G1-)` with `G1+ = h - b g` and `G1- = h + b g`.
pub fn g1<T: Scalar>(l: T, p: &NormalizedSvi<T>) -> Result<(T, T, T)> {
    let (h, g, _) = hgg2(l, p)?;
    let plus = h - p.b * g;
    let minus = h + p.b * g;
    Ok((plus * minus, plus, minus))
}

/// `f = -b g2 / (2 G1)`; its supremum outside the zeros of `g2` is the minimal `sigma`.
pub fn f_objective<T: Scalar>(l: T, p: &NormalizedSvi<T>) -> Result<T> {
    let t = terms(l, p)?;
    Ok(t.f(p.b))
}

/// `f~ = -G1 / g2`, the reciprocal form: `sup f = b / (2 inf f~)`.
pub fn f_tilde<T: Scalar>(l: T, p: &NormalizedSvi<T>) -> Result<T> {
    let t = terms(l, p)?;
    Ok(-t.big_g1(p.b) / t.g2)
}

/// `G1 + b g2 / (2 sigma)`, nonnegative everywhere iff the slice is free of butterfly arbitrage.
pub fn density_functional<T: Scalar>(l: T, p: &NormalizedSvi<T>) -> Result<T> {
    let t = terms(l, p)?;
    Ok(t.big_g1(p.b) + p.b * t.g2 / (p.sigma + p.sigma))
}

/// Auxiliary functions and their first derivatives in `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SviTerms<T> {
    pub n: T,
    pub n1: T,
    pub n2: T,
    pub n3: T,
    pub h: T,
    pub dh: T,
    pub g: T,
    pub dg: T,
    pub g2: T,
    pub dg2: T,
}

impl<T: Scalar> SviTerms<T> {
    pub fn big_g1(&self, b: T) -> T {
        (self.h - b * self.g) * (self.h + b * self.g)
    }

    pub fn d_big_g1(&self, b: T) -> T {
        let two = lit::<T>(2.0);
        two * (self.h * self.dh - b * b * self.g * self.dg)
    }

    pub fn f(&self, b: T) -> T {
        -b * self.g2 / (lit::<T>(2.0) * self.big_g1(b))
    }

    /// `df/dl`.
    pub fn df(&self, b: T) -> T {
        let gg = self.big_g1(b);
        -b * (self.dg2 * gg - self.g2 * self.d_big_g1(b)) / (lit::<T>(2.0) * gg * gg)
    }
}

/// All auxiliary functions at `l`; domain error where `N(l) <= 0`.
pub fn terms<T: Scalar>(l: T, p: &NormalizedSvi<T>) -> Result<SviTerms<T>> {
    let (n, n1, n2) = n_funcs(l, p.gamma, p.rho);
    if !(n > T::zero()) {
        return Err(Error::Domain(format!("N({l}) = {n} is not positive")));
    }
    let half = lit::<T>(0.5);
    let quarter = lit::<T>(0.25);
    let s = l.hypot(T::one());
    let n3 = -lit::<T>(3.0) * l * n2 / (s * s);
    let lm = l + p.mu;
    let h = T::one() - n1 * lm * half / n;
    let dh = -(n2 * lm + n1) * half / n + n1 * n1 * lm * half / (n * n);
    let g2 = n2 - n1 * n1 * half / n;
    let dg2 = n3 - n1 * n2 / n + n1 * n1 * n1 * half / (n * n);
    Ok(SviTerms {
        n,
        n1,
        n2,
        n3,
        h,
        dh,
        g: n1 * quarter,
        dg: n2 * quarter,
        g2,
        dg2,
    })
}
