//! Scalar root bracketing and one-dimensional search.

use crate::scalar::{from_usize, lit, Scalar};

/// Evenly spaced points on `[a, b]`, both ends included.
pub fn linspace<T: Scalar>(a: T, b: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / from_usize::<T>(n - 1);
            (0..n)
                .map(|i| if i + 1 == n { b } else { a + step * from_usize(i) })
                .collect()
        }
    }
}

/// `n` points spaced evenly in log10 between `10^lo_exp` and `10^hi_exp`.
pub fn logspace<T: Scalar>(lo_exp: T, hi_exp: T, n: usize) -> Vec<T> {
    let ten = lit::<T>(10.0);
    linspace(lo_exp, hi_exp, n)
        .into_iter()
        .map(|e| ten.powf(e))
        .collect()
}

/// Bisection on a sign change of `f` over `[lo, hi]`.
///
/// Runs until the bracket stops shrinking in floating point, or `abs_tol` is reached.
/// Returns `None` if `f(lo)` and `f(hi)` share a strict sign.
pub fn bisect<T: Scalar, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, abs_tol: T) -> Option<T> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Some(a);
    }
    if fb == T::zero() {
        return Some(b);
    }
    if fa.is_nan() || fb.is_nan() || (fa > T::zero()) == (fb > T::zero()) {
        return None;
    }
    let a_positive = fa > T::zero();
    let half = lit::<T>(0.5);
    for _ in 0..2000 {
        let mid = a + (b - a) * half;
        if mid <= a.min(b) || mid >= a.max(b) || (b - a).abs() <= abs_tol {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Some(mid);
        }
        if (fm > T::zero()) == a_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(a + (b - a) * half)
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `rel_tol * (1 + |x|)`. Returns `(argmax, max)`.
pub fn golden_max<T: Scalar, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, rel_tol: T) -> (T, T) {
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) / lit(2.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        if (b - a).abs() <= rel_tol * (T::one() + c.abs().max(d.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a minimum; thin wrapper over [`golden_max`].
pub fn golden_min<T: Scalar, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, rel_tol: T) -> (T, T) {
    let (x, v) = golden_max(|t| -f(t), lo, hi, rel_tol);
    (x, -v)
}
