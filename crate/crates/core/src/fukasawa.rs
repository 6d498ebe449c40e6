//! Necessary (Fukasawa) conditions for a general SVI slice.
//!
//! Both `G1+ = h - b g` and `G1- = h + b g` must stay positive. For fixed
//! `(gamma, b, rho)` this holds exactly when `mu` lies in an open interval whose
//! endpoints come from the root `l-` of the curve `g-(b, rho)(l) = gamma`
//! left of the minimizer `l*` of `N`. The interval is non-empty iff `gamma`
//! exceeds the threshold `F~(b, rho)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect, logspace};
use crate::scalar::{lit, Scalar};
use crate::svi::{critical_point, n_funcs, one_minus_sq};

/// Which Roger Lee wing is saturated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerateCase {
    Generic,
    #[serde(rename = "b_one_minus_rho_eq_2")]
    BOneMinusRhoEq2,
    #[serde(rename = "b_one_plus_rho_eq_2")]
    BOnePlusRhoEq2,
    #[serde(rename = "b2_rho0")]
    B2Rho0,
}

/// Admissible `mu` range `]lower, upper[`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FukasawaInterval<T> {
    pub lower: T,
    pub upper: T,
    pub degenerate_case: DegenerateCase,
}

impl<T: Scalar> FukasawaInterval<T> {
    pub fn is_empty(&self) -> bool {
        !(self.lower < self.upper)
    }

    /// Strict membership.
    pub fn contains(&self, mu: T) -> bool {
        self.lower < mu && mu < self.upper
    }

    /// `mu` within the bound tolerance of an endpoint.
    pub fn on_boundary(&self, mu: T) -> bool {
        let eps = T::bound_tolerance();
        (mu - self.lower).abs() <= eps || (mu - self.upper).abs() <= eps
    }
}

/// `rho * s + l` with `s = sqrt(l^2 + 1)`, rationalized when the terms cancel.
fn rho_s_plus_l<T: Scalar>(rho: T, l: T, s: T) -> T {
    if rho * l < T::zero() {
        (rho * rho - one_minus_sq(rho) * l * l) / (rho * s - l)
    } else {
        rho * s + l
    }
}

/// `g-(b, rho)(l) = (rho s + l)^2 (s (1/2 + b rho / 4) + b l / 4) - (rho l + s)`.
pub fn l_minus_curve<T: Scalar>(l: T, b: T, rho: T) -> T {
    let s = l.hypot(T::one());
    let quarter = lit::<T>(0.25);
    let lead = rho_s_plus_l(rho, l, s);
    let slope = s * (lit::<T>(0.5) + b * rho * quarter) + b * l * quarter;
    // rho l + s is N at gamma = 0
    let (n0, _, _) = n_funcs(l, T::zero(), rho);
    lead * lead * slope - n0
}

fn wing_saturated<T: Scalar>(wing: T) -> bool {
    (wing - lit(2.0)).abs() <= T::bound_tolerance()
}

/// The unique root `l- < l*` of `g-(b, rho)(l) = gamma`.
///
/// Brackets on a 128-point log-spaced scan leftwards from `l* - 1e-6`
/// (from `1e8` when `rho = -1`), then bisects.
pub fn solve_l_minus<T: Scalar>(gamma: T, b: T, rho: T) -> Result<T> {
    if rho.abs() > T::one() || b < T::zero() {
        return Err(Error::InvalidParams(format!("b = {b}, rho = {rho}")));
    }
    if wing_saturated(b * (T::one() - rho)) {
        return Err(Error::NoRoot(format!(
            "b(1 - rho) = 2 removes the root (b = {b}, rho = {rho})"
        )));
    }
    let ls = critical_point(rho);
    if ls == T::neg_infinity() {
        return Err(Error::NoRoot("rho = 1 has no point left of l*".into()));
    }
    let big = lit::<T>(1e8);
    let right = if ls.is_finite() {
        ls - lit(1e-6)
    } else {
        big
    };
    let resid = |l: T| l_minus_curve(l, b, rho) - gamma;
    let tol = T::zero();
    if resid(right) > T::zero() {
        return bisect(resid, right, if ls.is_finite() { ls } else { big + big }, tol)
            .ok_or_else(|| Error::NoRoot("sign change lost next to l*".into()));
    }
    let span = right + big;
    let mut prev = right;
    for d in logspace(lit::<T>(-6.0), span.log10(), 128) {
        let l = right - d;
        if resid(l) > T::zero() {
            return bisect(resid, l, prev, tol)
                .ok_or_else(|| Error::NoRoot("bracket lost its sign change".into()));
        }
        prev = l;
    }
    Err(Error::NoRoot(format!(
        "g- stays below gamma = {gamma} on [-1e8, l*) (b = {b}, rho = {rho})"
    )))
}

/// `L-(l) = 2 N(l) (1 / N'(l) + b / 4) - l`.
pub fn l_minus_bound<T: Scalar>(l: T, gamma: T, b: T, rho: T) -> Result<T> {
    let (n, n1, _) = n_funcs(l, gamma, rho);
    if n1 == T::zero() {
        return Err(Error::Domain("N'(l) = 0 at the critical point".into()));
    }
    Ok(lit::<T>(2.0) * n * (n1.recip() + b * lit(0.25)) - l)
}

/// The admissible `mu` interval with the wing-saturated special cases.
pub fn mu_interval<T: Scalar>(gamma: T, b: T, rho: T) -> Result<FukasawaInterval<T>> {
    if !(gamma.is_finite() && b.is_finite() && rho.is_finite()) || b < T::zero() {
        return Err(Error::InvalidParams("non-finite or negative input".into()));
    }
    if rho.abs() > T::one() {
        return Err(Error::InvalidParams(format!("|rho| = {} exceeds 1", rho.abs())));
    }
    let eps = T::bound_tolerance();
    let wing = b * (T::one() + rho.abs());
    if wing > lit::<T>(2.0) + eps {
        return Err(Error::RogerLeeViolation {
            wing: wing.to_f64().unwrap_or(f64::NAN),
        });
    }
    if rho.abs() < T::one() {
        if !(gamma + one_minus_sq(rho).sqrt() > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "gamma = {gamma} must exceed -sqrt(1 - rho^2)"
            )));
        }
    } else if gamma < T::zero() {
        return Err(Error::InvalidParams(format!(
            "gamma = {gamma} must be >= 0 when |rho| = 1"
        )));
    }

    let low_sat = wing_saturated(b * (T::one() - rho));
    let up_sat = wing_saturated(b * (T::one() + rho));
    let half_bg = b * gamma * lit(0.5);

    let lower = if low_sat {
        -half_bg
    } else if rho >= T::one() {
        T::neg_infinity()
    } else {
        l_minus_bound(solve_l_minus(gamma, b, rho)?, gamma, b, rho)?
    };
    let upper = if up_sat {
        half_bg
    } else if rho <= -T::one() {
        T::infinity()
    } else {
        -l_minus_bound(solve_l_minus(gamma, b, -rho)?, gamma, b, -rho)?
    };
    let degenerate_case = match (low_sat, up_sat) {
        (true, true) => DegenerateCase::B2Rho0,
        (true, false) => DegenerateCase::BOneMinusRhoEq2,
        (false, true) => DegenerateCase::BOnePlusRhoEq2,
        (false, false) => DegenerateCase::Generic,
    };
    Ok(FukasawaInterval { lower, upper, degenerate_case })
}

/// `F~(b, rho)`: the smallest `gamma` with a non-empty `mu` interval, floored at `-sqrt(1 - rho^2)`.
pub fn fukasawa_threshold<T: Scalar>(b: T, rho: T) -> Result<T> {
    if rho.abs() >= T::one() {
        return Err(Error::InvalidParams("threshold needs |rho| < 1".into()));
    }
    let eps = T::bound_tolerance();
    if b < T::zero() || b * (T::one() + rho.abs()) > lit::<T>(2.0) + eps {
        return Err(Error::InvalidParams(format!("b = {b} outside the wing bounds")));
    }
    let floor = -one_minus_sq(rho).sqrt();
    if b == T::zero() {
        return Ok(floor);
    }
    let non_empty = |gamma: T| -> Result<bool> { Ok(!mu_interval(gamma, b, rho)?.is_empty()) };
    let mut lo = floor + lit::<T>(4.0) * T::epsilon();
    if non_empty(lo)? {
        return Ok(floor);
    }
    let mut hi = T::zero();
    if !non_empty(hi)? {
        return Ok(T::zero());
    }
    let stop = lit::<T>(1e-12).max(lit::<T>(4.0) * T::epsilon());
    while hi - lo > stop {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if non_empty(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) * lit(0.5))
}
