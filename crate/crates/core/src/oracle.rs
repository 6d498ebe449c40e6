//! Brute-force minimal `sigma` and an independent density check.
//!
//! `sigma_star` is the supremum of `f = -b g2 / (2 G1)` over the region where
//! `g2 < 0`, i.e. left of the first zero `l1` and right of the second zero `l2`
//! of `g2`. The search is a dense log-spaced scan followed by golden-section
//! refinement and a bisection on the sign of `f'`. When a Roger Lee wing is
//! saturated, `f` has a finite limit at that infinity and it is compared
//! against the interior supremum.
//!
//! `durrleman_check` evaluates the Durrleman function of the raw total variance
//! on a grid in `k`. It shares no code with the normalized machinery.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fukasawa::mu_interval;
use crate::numeric::{bisect, golden_max, golden_min, linspace, logspace};
use crate::scalar::{lit, Scalar};
use crate::svi::{critical_point, n_funcs, one_minus_sq, terms, NormalizedSvi, RawSviParams};

/// Zeros of `g2`; `l1` is absent for `rho = 1`, `l2` for `rho = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Zeros<T> {
    pub l1: Option<T>,
    pub l2: Option<T>,
}

/// Where the supremum was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    LimitAtInfinity,
}

/// Which half-line to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaStarResult<T> {
    pub sigma_star: T,
    /// Location of the supremum; `+-inf` when it is a limit.
    pub argsup_l: T,
    pub side: Side,
}

/// Search controls for [`sigma_star_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Points of the log-spaced pre-scan on each side.
    pub scan_points: usize,
    /// Largest offset from the `g2` zero.
    pub max_offset: f64,
    /// Ignore the side-selection shortcuts and search both half-lines.
    pub both_sides: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { scan_points: 512, max_offset: 1e8, both_sides: false }
    }
}

fn g2_only<T: Scalar>(l: T, gamma: T, rho: T) -> T {
    let (n, n1, n2) = n_funcs(l, gamma, rho);
    n2 - n1 * n1 / (n + n)
}

/// Walks right from `start` (where `g2 > 0`) until `g2 < 0`, then bisects.
fn right_zero<T: Scalar>(gamma: T, rho: T, start: T) -> Result<T> {
    let mut lo = start;
    let mut step = lit::<T>(1e-2) * (T::one() + start.abs());
    let cap = lit::<T>(1e12);
    loop {
        let hi = lo + step;
        if g2_only(hi, gamma, rho) < T::zero() {
            return bisect(|l| g2_only(l, gamma, rho), lo, hi, T::zero())
                .ok_or_else(|| Error::NoRoot("g2 bracket lost its sign change".into()));
        }
        if hi > cap {
            return Err(Error::NoRoot("g2 stays positive on the right".into()));
        }
        lo = hi;
        step = step + step;
    }
}

/// Zeros of `g2` by bracketing outward from a point where `g2 > 0`.
pub fn g2_zeros<T: Scalar>(gamma: T, rho: T) -> Result<G2Zeros<T>> {
    if rho.abs() > T::one() {
        return Err(Error::InvalidParams(format!("|rho| = {} exceeds 1", rho.abs())));
    }
    let interior = if rho.abs() < T::one() {
        if !(gamma + one_minus_sq(rho).sqrt() > T::zero()) {
            return Err(Error::InvalidParams("N touches zero".into()));
        }
        critical_point(rho)
    } else {
        if gamma < T::zero() {
            return Err(Error::InvalidParams("gamma < 0 with |rho| = 1".into()));
        }
        T::zero()
    };
    let l2 = if rho > -T::one() {
        Some(right_zero(gamma, rho, interior)?)
    } else {
        None
    };
    let l1 = if rho < T::one() {
        Some(-right_zero(gamma, -rho, -interior)?)
    } else {
        None
    };
    Ok(G2Zeros { l1, l2 })
}

/// `lim f` at `+inf` when `b(1 + rho) = 2`; `None` otherwise.
fn right_limit<T: Scalar>(p: &NormalizedSvi<T>) -> Option<T> {
    let up = T::one() + p.rho;
    let wing = p.b * up;
    if (wing - lit(2.0)).abs() > T::bound_tolerance() {
        return None;
    }
    let denom = lit::<T>(2.0) * (p.gamma - p.mu * up);
    Some(if denom > T::zero() {
        p.b * up * up / denom
    } else {
        T::infinity()
    })
}

/// Supremum of `f` on one half-line beyond the corresponding `g2` zero.
///
/// Returns `(argsup, sup, attained_at_infinity)`.
pub fn maximize_f_on_interval<T: Scalar>(
    p: &NormalizedSvi<T>,
    side: SearchSide,
    cfg: &OracleConfig,
) -> Result<(T, T, bool)> {
    match side {
        SearchSide::Right => maximize_right(p, cfg),
        SearchSide::Left => {
            let (l, v, lim) = maximize_right(&p.inverted(), cfg)?;
            Ok((-l, v, lim))
        }
    }
}

fn maximize_right<T: Scalar>(p: &NormalizedSvi<T>, cfg: &OracleConfig) -> Result<(T, T, bool)> {
    let zero = g2_zeros(p.gamma, p.rho)?
        .l2
        .ok_or_else(|| Error::Domain("no right-hand zero of g2".into()))?;
    let f_at = |l: T| -> T {
        match terms(l, p) {
            Ok(t) => {
                let v = t.f(p.b);
                if v.is_nan() {
                    T::neg_infinity()
                } else {
                    v
                }
            }
            Err(_) => T::neg_infinity(),
        }
    };
    let limit = right_limit(p);
    let min_off = lit::<T>(1e-9) * (T::one() + zero.abs());
    // far-wing values of f lose accuracy to cancellation in G1; the closed-form limit covers them
    let max_off = if limit.is_some() {
        lit::<T>(cfg.max_offset.min(1e6))
    } else {
        lit::<T>(cfg.max_offset)
    };
    let offsets = logspace(min_off.log10(), max_off.log10(), cfg.scan_points.max(8));
    let mut best = 0;
    let mut best_v = T::neg_infinity();
    for (i, &d) in offsets.iter().enumerate() {
        let v = f_at(zero + d);
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    let t_lo = offsets[best.saturating_sub(1)].ln();
    let t_hi = offsets[(best + 1).min(offsets.len() - 1)].ln();
    let (t_star, v_star) = golden_max(|t: T| f_at(zero + t.exp()), t_lo, t_hi, lit(1e-9));
    let (mut arg, mut sup) = if v_star >= best_v {
        (zero + t_star.exp(), v_star)
    } else {
        (zero + offsets[best], best_v)
    };

    // sharpen the location on the sign change of f'
    let df = |l: T| terms(l, p).map(|t| t.df(p.b)).unwrap_or(T::nan());
    let width = lit::<T>(1e-4) * (arg - zero);
    let (a, b) = ((arg - width).max(zero + min_off), arg + width);
    if df(a) > T::zero() && df(b) < T::zero() {
        if let Some(r) = bisect(df, a, b, T::zero()) {
            let v = f_at(r);
            if v >= sup - lit::<T>(1e-14) * sup.abs() {
                arg = r;
                sup = sup.max(v);
            }
        }
    }

    if let Some(limit) = limit {
        if limit >= sup * (T::one() - lit::<T>(1e-12)) {
            return Ok((T::infinity(), limit, true));
        }
    }
    Ok((arg, sup, false))
}

/// [`sigma_star_with`] under the default configuration.
pub fn sigma_star<T: Scalar>(p: &NormalizedSvi<T>) -> Result<SigmaStarResult<T>> {
    sigma_star_with(p, &OracleConfig::default())
}

/// Minimal `sigma` for the shape `(gamma, b, rho, mu)`; `p.sigma` is ignored.
pub fn sigma_star_with<T: Scalar>(
    p: &NormalizedSvi<T>,
    cfg: &OracleConfig,
) -> Result<SigmaStarResult<T>> {
    if !(p.b > T::zero()) {
        return Err(Error::InvalidParams("sigma* needs b > 0".into()));
    }
    let interval = mu_interval(p.gamma, p.b, p.rho)?;
    if !interval.contains(p.mu) {
        return Err(Error::FukasawaViolation(format!(
            "mu = {} outside ]{}, {}[",
            p.mu, interval.lower, interval.upper
        )));
    }
    if p.rho <= -T::one() {
        let r = sigma_star_with(&p.inverted(), cfg)?;
        return Ok(SigmaStarResult { argsup_l: -r.argsup_l, ..r });
    }

    let sides: &[SearchSide] = if p.rho >= T::one() {
        &[SearchSide::Right]
    } else if cfg.both_sides {
        &[SearchSide::Right, SearchSide::Left]
    } else if p.rho == T::zero() {
        if p.mu >= T::zero() {
            &[SearchSide::Right]
        } else {
            &[SearchSide::Left]
        }
    } else if is_ssvi_shape(p) {
        if p.rho > T::zero() {
            &[SearchSide::Right]
        } else {
            &[SearchSide::Left]
        }
    } else {
        &[SearchSide::Right, SearchSide::Left]
    };

    let mut out: Option<SigmaStarResult<T>> = None;
    for &side in sides {
        let (arg, sup, at_inf) = maximize_f_on_interval(p, side, cfg)?;
        let tag = if at_inf {
            Side::LimitAtInfinity
        } else if side == SearchSide::Right {
            Side::Right
        } else {
            Side::Left
        };
        let cand = SigmaStarResult { sigma_star: sup.max(T::zero()), argsup_l: arg, side: tag };
        out = match out {
            Some(prev) if prev.sigma_star >= cand.sigma_star => Some(prev),
            _ => Some(cand),
        };
    }
    out.ok_or_else(|| Error::Domain("no side searched".into()))
}

fn is_ssvi_shape<T: Scalar>(p: &NormalizedSvi<T>) -> bool {
    let tol = lit::<T>(1e-12);
    let gamma = one_minus_sq(p.rho).sqrt();
    let ls = critical_point(p.rho);
    (p.gamma - gamma).abs() <= tol * (T::one() + gamma)
        && (p.mu - ls).abs() <= tol * (T::one() + ls.abs())
}

/// Grid for [`durrleman_check`], in normalized log-moneyness `l = (k - m) / sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurrlemanGrid {
    pub linear_points: usize,
    pub half_width: f64,
    /// Log-spaced points on each tail.
    pub tail_points: usize,
    pub tail_max: f64,
    /// Golden-section polish around the grid minimum.
    pub polish: bool,
}

impl Default for DurrlemanGrid {
    fn default() -> Self {
        Self {
            linear_points: 4001,
            half_width: 50.0,
            tail_points: 400,
            tail_max: 1e6,
            polish: true,
        }
    }
}

impl DurrlemanGrid {
    /// Scales the default grid to `linear_points`, keeping the tail/linear ratio.
    pub fn with_density(linear_points: usize) -> Self {
        let d = Self::default();
        let n = linear_points.max(3);
        Self {
            linear_points: n,
            tail_points: (n * d.tail_points / d.linear_points).max(16),
            ..d
        }
    }

    fn nodes<T: Scalar>(&self) -> Vec<T> {
        let w = lit::<T>(self.half_width);
        let lo = w.log10();
        let hi = lit::<T>(self.tail_max).log10();
        let tails = logspace(lo, hi, self.tail_points + 1);
        let mut v: Vec<T> = tails.iter().skip(1).rev().map(|&t| -t).collect();
        v.extend(linspace(-w, w, self.linear_points));
        v.extend(tails.into_iter().skip(1));
        v
    }
}

/// Smallest value of the Durrleman function on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport<T> {
    pub min: T,
    pub argmin_l: T,
    pub argmin_k: T,
    pub points: usize,
}

impl<T: Scalar> DensityReport<T> {
    /// No grid point below `-tol`.
    pub fn is_nonnegative(&self, tol: T) -> bool {
        self.min >= -tol
    }
}

/// Durrleman's `g(k) = (1 - k w'/(2w))^2 - w'^2/4 (1/w + 1/4) + w''/2`.
pub fn durrleman_function<T: Scalar>(p: &RawSviParams<T>, k: T) -> T {
    let d = k - p.m;
    let s2 = p.sigma * p.sigma;
    let q = d.hypot(p.sigma);
    let w = p.total_variance(k);
    let w1 = if p.rho * d < T::zero() {
        p.b * (p.rho * p.rho * s2 - one_minus_sq(p.rho) * d * d) / (q * (p.rho * q - d))
    } else {
        p.b * (p.rho + d / q)
    };
    let w2 = p.b * s2 / (q * q * q);
    let quarter = lit::<T>(0.25);
    let h = T::one() - k * w1 / (w + w);
    h * h - w1 * w1 * quarter * (w.recip() + quarter) + w2 * lit(0.5)
}

/// Grid minimum of the Durrleman function, grid laid out in `l` and mapped to `k = m + sigma l`.
pub fn durrleman_check<T: Scalar>(p: &RawSviParams<T>, grid: &DurrlemanGrid) -> Result<DensityReport<T>> {
    p.validate()?;
    if !(p.sigma > T::zero()) {
        return Err(Error::InvalidParams("density check needs sigma > 0".into()));
    }
    let at = |l: T| {
        let v = durrleman_function(p, p.m + p.sigma * l);
        if v.is_nan() {
            T::neg_infinity()
        } else {
            v
        }
    };
    let nodes = grid.nodes::<T>();
    let mut best = 0;
    let mut min = T::infinity();
    for (i, &l) in nodes.iter().enumerate() {
        let v = at(l);
        if v < min {
            min = v;
            best = i;
        }
    }
    let mut arg = nodes[best];
    if grid.polish && nodes.len() > 2 {
        let a = nodes[best.saturating_sub(1)];
        let b = nodes[(best + 1).min(nodes.len() - 1)];
        let (x, v) = golden_min(at, a, b, lit(1e-12));
        if v < min {
            min = v;
            arg = x;
        }
    }
    Ok(DensityReport {
        min,
        argmin_l: arg,
        argmin_k: p.m + p.sigma * arg,
        points: nodes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svi::{density_functional, f_tilde};
    use proptest::prelude::*;

    fn shape(gamma: f64, b: f64, rho: f64, mu: f64) -> NormalizedSvi<f64> {
        NormalizedSvi::shape(gamma, b, rho, mu).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn g2_zero_examples() {
        let z = g2_zeros(0.0, 1.0).unwrap();
        assert!(z.l1.is_none());
        assert!((z.l2.unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);

        let z = g2_zeros(0.0, 0.0).unwrap();
        assert!((z.l2.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((z.l1.unwrap() + 2f64.sqrt()).abs() < 1e-12);

        for rho in [0.0f64, 0.3, 0.8] {
            let gamma = (1.0 - rho * rho).sqrt();
            let z = g2_zeros(gamma, rho).unwrap();
            let want = 1.0 / ((-rho).acos() / 3.0).tan();
            assert!((z.l2.unwrap() - want).abs() < 1e-10);
        }

        let z = g2_zeros(0.4, -1.0).unwrap();
        assert!(z.l2.is_none() && z.l1.unwrap() < 0.0);
    }

    #[test]
    fn g2_is_negative_between_zeros_only_outside() {
        for (gamma, rho) in [(0.2f64, 0.5), (-0.3, -0.4), (1.5, 0.0)] {
            let z = g2_zeros(gamma, rho).unwrap();
            let (l1, l2) = (z.l1.unwrap(), z.l2.unwrap());
            assert!(g2_only(l1, gamma, rho).abs() <= 1e-12);
            assert!(g2_only(l2, gamma, rho).abs() <= 1e-12);
            for t in linspace(0.01, 0.99, 50) {
                assert!(g2_only(l1 + t * (l2 - l1), gamma, rho) > 0.0);
            }
            assert!(g2_only(l2 + 0.5, gamma, rho) < 0.0);
            assert!(g2_only(l1 - 0.5, gamma, rho) < 0.0);
        }
    }

    #[test]
    fn extremal_instance() {
        let r = sigma_star(&shape(1.0, 2.0, 0.0, 0.5)).unwrap();
        assert!(rel(r.sigma_star, 2.0) < 1e-9);
        assert_eq!(r.side, Side::LimitAtInfinity);
        assert_eq!(r.argsup_l, f64::INFINITY);
    }

    #[test]
    fn vanishing_unit_slope_instance() {
        // m <= -1 is the exact condition, so sigma* = -1 / mu
        let r = sigma_star(&shape(0.0, 1.0, 1.0, -1.0)).unwrap();
        assert!(rel(r.sigma_star, 1.0) < 1e-9);
        assert_eq!(r.side, Side::LimitAtInfinity);
    }

    #[test]
    fn ssvi_saturated_instance() {
        let rho: f64 = 0.6;
        let p = shape(0.8, 2.0 / 1.6, rho, critical_point(rho));
        let r = sigma_star(&p).unwrap();
        assert!(rel(r.sigma_star, 0.8) < 1e-9);
        assert_eq!(r.side, Side::LimitAtInfinity);
        // corrected limit of f~ at +inf: 1 / ((1 + rho) sqrt(1 - rho^2))
        let ft = f_tilde(1e9, &p).unwrap();
        assert!(rel(ft, 1.0 / (1.6 * 0.8)) < 1e-6);
    }

    #[test]
    fn rho_zero_positive_mu_searches_right() {
        let p = shape(0.5, 1.2, 0.0, 0.3);
        let cfg = OracleConfig { both_sides: true, ..Default::default() };
        let both = sigma_star_with(&p, &cfg).unwrap();
        let short = sigma_star(&p).unwrap();
        assert_eq!(short.side, Side::Right);
        assert!(rel(short.sigma_star, both.sigma_star) < 1e-12);
    }

    #[test]
    fn fukasawa_violation_is_reported() {
        assert!(matches!(
            sigma_star(&shape(0.0, 0.5, 1.0, 1.3)),
            Err(Error::FukasawaViolation(_))
        ));
    }

    #[test]
    fn durrleman_examples() {
        let flat = RawSviParams::new(0.3f64, 0.0, 0.2, 0.1, 0.5).unwrap();
        let r = durrleman_check(&flat, &DurrlemanGrid::default()).unwrap();
        assert!((r.min - 1.0).abs() < 1e-15);

        let p = shape(0.3, 1.1, 0.2, 0.1);
        let s = sigma_star(&p).unwrap().sigma_star;
        let at = durrleman_check(&p.with_sigma(s).to_raw(), &DurrlemanGrid::default()).unwrap();
        assert!(at.min >= -1e-10, "{at:?}");
        let below = durrleman_check(&p.with_sigma(0.99 * s).to_raw(), &DurrlemanGrid::default()).unwrap();
        assert!(below.min < 0.0);
    }

    #[test]
    fn durrleman_matches_normalized_functional() {
        let p = NormalizedSvi::new(0.2, 0.9, -0.35, 0.4, 0.7).unwrap();
        let raw = p.to_raw();
        for l in [-30.0f64, -2.0, 0.0, 0.5, 3.0, 80.0] {
            let a = durrleman_function(&raw, raw.m + raw.sigma * l);
            let b = density_functional(l, &p).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn reciprocity_of_sup_and_inf() {
        for (gamma, b, rho, mu) in [(0.4f64, 1.0, 0.3, 0.2), (0.0, 0.5, 0.0, 0.4), (1.0, 1.5, -0.2, -0.3)] {
            let p = shape(gamma, b, rho, mu);
            let cfg = OracleConfig { both_sides: true, ..Default::default() };
            let r = sigma_star_with(&p, &cfg).unwrap();
            // independent inf of f~ on the same half-line
            let z = g2_zeros(gamma, rho).unwrap();
            let (lo, hi) = if r.argsup_l > 0.0 {
                (z.l2.unwrap() + 1e-9, 1e6)
            } else {
                (-1e6, z.l1.unwrap() - 1e-9)
            };
            let mut best = (0.0, f64::INFINITY);
            for t in linspace(0.0f64, 1.0, 20_001) {
                let l = if r.argsup_l > 0.0 { lo + (hi - lo) * t.powi(6) } else { hi - (hi - lo) * t.powi(6) };
                let v = f_tilde(l, &p).unwrap();
                if v < best.1 {
                    best = (l, v);
                }
            }
            let (al, ah) = (best.0 - 0.05 * (1.0 + best.0.abs()), best.0 + 0.05 * (1.0 + best.0.abs()));
            let (arg, inf) = golden_min(|l| f_tilde(l, &p).unwrap_or(f64::INFINITY), al, ah, 1e-12);
            assert!(rel(r.sigma_star, b / (2.0 * inf)) < 1e-9);
            assert!((arg - r.argsup_l).abs() < 1e-5 * (1.0 + arg.abs()));
        }
    }

    #[test]
    fn rho_minus_one_routes_through_inversion() {
        let up = sigma_star(&shape(0.0, 0.6, 1.0, -0.4)).unwrap();
        let down = sigma_star(&shape(0.0, 0.6, -1.0, 0.4)).unwrap();
        assert!(rel(up.sigma_star, down.sigma_star) < 1e-14);
        assert_eq!(up.argsup_l, -down.argsup_l);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn invariant_under_inversion(rho in -0.9f64..0.9, bf in 0.1f64..0.95, gamma in 0.05f64..2.0, t in 0.05f64..0.95) {
            let b = bf * 2.0 / (1.0 + rho.abs());
            let i = mu_interval(gamma, b, rho).unwrap();
            let mu = i.lower.max(-5.0) + t * (i.upper.min(5.0) - i.lower.max(-5.0));
            let a = sigma_star(&shape(gamma, b, rho, mu)).unwrap();
            let c = sigma_star(&shape(gamma, b, -rho, -mu)).unwrap();
            prop_assert!(rel(a.sigma_star, c.sigma_star) < 1e-9);
        }

        #[test]
        fn boundary_sigma_is_tight(rho in -0.8f64..0.8, bf in 0.1f64..0.9, gamma in 0.1f64..1.5, t in 0.1f64..0.9) {
            let b = bf * 2.0 / (1.0 + rho.abs());
            let i = mu_interval(gamma, b, rho).unwrap();
            let mu = i.lower.max(-3.0) + t * (i.upper.min(3.0) - i.lower.max(-3.0));
            let p = shape(gamma, b, rho, mu);
            let s = sigma_star(&p).unwrap().sigma_star;
            prop_assume!(s > 1e-6);
            let grid = DurrlemanGrid::default();
            let at = durrleman_check(&p.with_sigma(s).to_raw(), &grid).unwrap();
            prop_assert!(at.min >= -1e-8, "at sigma*: {:?}", at);
            let below = durrleman_check(&p.with_sigma(s * (1.0 - 1e-3)).to_raw(), &grid).unwrap();
            prop_assert!(below.min < 0.0, "below sigma*: {:?}", below);
        }
    }
}
