//! `certify` and `bound`.

use serde_json::{json, Value};
use smile_domain::{durrleman_check, sigma_star};

use crate::output::{density_grid, Failure, EXIT_ARBITRAGE, EXIT_FREE, SCHEMA};
use crate::slice::{Kernel, SliceCmd};

/// Density tolerance used when comparing the verdict with the oracle.
pub const DENSITY_TOL: f64 = 1e-8;

pub fn certify(slice: &SliceCmd, oracle: bool) -> Result<(Value, i32), Failure> {
    let r = slice.resolve(None)?;
    let cert = r.kernel.certify()?;
    log::info!("{} certified: verdict {}", r.family, cert.verdict);
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "certify",
        "family": r.family,
        "input": { "native": r.native, "raw": r.raw },
        "derived": r.derived,
        "certificate": cert,
        "verdict": cert.verdict,
    });
    if oracle {
        let grid = density_grid()?;
        let d = durrleman_check(&r.raw, &grid)?;
        let free = d.min >= -DENSITY_TOL;
        doc["oracle"] = json!({
            "durrleman_min": d.min,
            "argmin_k": d.argmin_k,
            "argmin_l": d.argmin_l,
            "points": d.points,
            "tolerance": DENSITY_TOL,
            "agrees": free == cert.verdict,
        });
        if free != cert.verdict {
            log::warn!("density oracle disagrees: min {} vs verdict {}", d.min, cert.verdict);
        }
    }
    let code = if cert.verdict { EXIT_FREE } else { EXIT_ARBITRAGE };
    Ok((doc, code))
}

pub struct BoundReport {
    pub doc: Value,
    pub closed: f64,
    pub oracle: Option<(f64, f64)>,
}

pub fn bound(slice: &SliceCmd, oracle: bool) -> Result<BoundReport, Failure> {
    let r = slice.resolve(Some(1.0))?;
    let cert = r.kernel.certify_strict()?;
    let closed = cert
        .bounds
        .sigma_star
        .ok_or_else(|| Failure::new("no_bound", "no sigma bound for this slice"))?;
    let method = if matches!(r.kernel, Kernel::Svi(_)) { "oracle" } else { "closed_form" };
    let shape = cert.normalized.map(|n| json!({ "gamma": n.gamma, "b": n.b, "rho": n.rho, "mu": n.mu }));
    let mut native = r.native.clone();
    if !matches!(r.kernel, Kernel::Svi(_)) {
        native.remove("sigma");
    }
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "bound",
        "family": r.family,
        "input": native,
        "shape": shape,
        "sigma_star": closed,
        "method": method,
    });
    let mut pair = None;
    if oracle {
        let n = cert
            .normalized
            .ok_or_else(|| Failure::new("degenerate", "flat smile has no sigma bound"))?;
        let o = sigma_star(&n)?;
        let gap = (closed - o.sigma_star).abs() / o.sigma_star.abs();
        doc["oracle"] = json!({
            "sigma_star": o.sigma_star,
            "argsup_l": o.argsup_l,
            "side": o.side,
            "relative_gap": gap,
        });
        pair = Some((o.sigma_star, gap));
    }
    Ok(BoundReport { doc, closed, oracle: pair })
}
