//! Grid check that `f~` has a single critical point for SSVI at the saturated slope.
//!
//! At a critical point the second derivative of `-J1 / j2` in `x` has the sign of
//! `n = J1 j2_xx - J1_xx j2`. Since `n` decreases in `b^2`, positivity at
//! `b = 2 / (1 + rho)` on `x > (2 + sqrt 10) / 6` covers every admissible slope.

use serde::{Deserialize, Serialize};

use super::{j2, x_m2_at_one};
use crate::numeric::linspace;
use crate::scalar::{lit, Scalar};
use crate::svi::{one_minus_sq, EvalPoint};

/// `d^2 j2 / dx^2`.
pub fn j2_dxx<T: Scalar>(x: T, rho: T) -> T {
    let one = T::one();
    let two = lit::<T>(2.0);
    let three = lit::<T>(3.0);
    let rr = one_minus_sq(rho).sqrt();
    let xx = one_minus_sq(x).sqrt();
    let u = rho * x + rr * xx + one;
    let a = rho + three * x * u + x;
    let w = rho * xx - x * rr;
    let xm = x * x - one;
    let xr = rho + x;
    let c = xr * xr * xr + two * xm * a * u;
    let inner = xx * (lit::<T>(4.0) * x * a * u + three * xr * xr)
        + two * xm * w * a
        + two * xm * (three * x * w + xx * (three * rho * x + three * rr * xx + lit(4.0))) * u;
    let num = x * c * u - two * xx * w * c + xx * u * inner;
    num / (two * xx * xx * xx * u * u * u)
}

/// `d^2 J1 / dx^2 = 2 (h'^2 + h h'' - b^2 / 16)` with `J1 = h^2 - b^2 g^2`.
pub fn j1_dxx<T: Scalar>(x: T, rho: T, b: T) -> T {
    let two = lit::<T>(2.0);
    let rr = one_minus_sq(rho).sqrt();
    let x2 = one_minus_sq(x);
    let xx = x2.sqrt();
    let h = (T::one() + xx / rr) / two;
    let dh = -x / (two * rr * xx);
    let ddh = -T::one() / (two * rr * x2 * xx);
    two * (dh * dh + h * ddh - b * b / lit(16.0))
}

/// `J1 j2_xx - J1_xx j2` at slope `b`.
pub fn n_value<T: Scalar>(x: T, rho: T, b: T) -> T {
    let pt = EvalPoint::from_x(x);
    let g2 = j2(&pt, rho);
    let j1 = super::big_j1(&pt, rho, b);
    j1 * j2_dxx(x, rho) - j1_dxx(x, rho, b) * g2
}

/// `n` at the saturated slope `b = 2 / (1 + rho)`.
pub fn n_saturated<T: Scalar>(x: T, rho: T) -> T {
    n_value(x, rho, lit::<T>(2.0) / (T::one() + rho))
}

/// Upper end of both scan axes.
pub const SCAN_UPPER: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport<T> {
    pub rho_steps: usize,
    pub x_steps: usize,
    pub min_n: T,
    pub argmin_rho: T,
    pub argmin_x: T,
    pub negatives: usize,
    pub pass: bool,
}

impl<T> UniquenessReport<T> {
    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "There is unicity"
        } else {
            "No unicity"
        }
    }
}

#[derive(Clone, Copy)]
struct Partial<T> {
    min: T,
    i: usize,
    j: usize,
    negatives: usize,
}

fn scan_rows<T: Scalar>(rhos: &[T], offset: usize, xs: &[T]) -> Option<Partial<T>> {
    let mut best: Option<Partial<T>> = None;
    let mut negatives = 0;
    for (di, &rho) in rhos.iter().enumerate() {
        for (j, &x) in xs.iter().enumerate() {
            let v = n_saturated(x, rho);
            if v < T::zero() || v.is_nan() {
                negatives += 1;
            }
            if best.is_none_or(|b| v < b.min) {
                best = Some(Partial { min: v, i: offset + di, j, negatives: 0 });
            }
        }
    }
    best.map(|b| Partial { negatives, ..b })
}

/// Evaluates `n` at the saturated slope on `rho in [0, 0.999]` by `x in [(2 + sqrt 10)/6, 0.999]`.
///
/// Rows are split across `workers` threads; the reduction keeps the first minimum in row-major
/// order, so the report does not depend on `workers`.
pub fn scan_uniqueness<T: Scalar>(rho_steps: usize, x_steps: usize, workers: usize) -> UniquenessReport<T> {
    let upper = lit::<T>(SCAN_UPPER);
    let rhos = linspace(T::zero(), upper, rho_steps);
    let xs = linspace(x_m2_at_one(), upper, x_steps);
    let workers = workers.max(1).min(rhos.len().max(1));
    let chunk = rhos.len().div_ceil(workers).max(1);

    let partials: Vec<Option<Partial<T>>> = if workers == 1 {
        vec![scan_rows(&rhos, 0, &xs)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = rhos
                .chunks(chunk)
                .enumerate()
                .map(|(k, rows)| {
                    let xs = &xs;
                    s.spawn(move || scan_rows(rows, k * chunk, xs))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        })
    };

    let mut best: Option<Partial<T>> = None;
    let mut negatives = 0;
    for p in partials.into_iter().flatten() {
        negatives += p.negatives;
        if best.is_none_or(|b| p.min < b.min) {
            best = Some(p);
        }
    }
    match best {
        Some(b) => UniquenessReport {
            rho_steps,
            x_steps,
            min_n: b.min,
            argmin_rho: rhos[b.i],
            argmin_x: xs[b.j],
            negatives,
            pass: negatives == 0,
        },
        None => UniquenessReport {
            rho_steps,
            x_steps,
            min_n: T::nan(),
            argmin_rho: T::nan(),
            argmin_x: T::nan(),
            negatives: 0,
            pass: false,
        },
    }
}
