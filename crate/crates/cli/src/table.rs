//! Boundary curves as CSV.

use std::fmt::Write;

use clap::ValueEnum;
use smile_domain::numeric::linspace;
use smile_domain::ssvi::{self, uniqueness};
use smile_domain::{symmetric, vanishing, Ssvi};

use crate::output::Failure;

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum TableId {
    /// b, mu, sigma_star, subdomain_bound for upward shifts mu <= 0.
    VanishingSubdomain,
    /// gamma, z_at_b_zero, z_at_b_max, gamma in (-1, 2].
    SymmetricZstar,
    /// Same columns, gamma in (-1, 100].
    SymmetricZstarWide,
    /// b, fukasawa_threshold, m_diagnostic, b in (0, 2).
    GammaAdmissibility,
    /// gamma, z_inflection, j1_prime, gamma in (-1, 0).
    SymmetricProof,
    /// rho, x, n at the saturated slope.
    SsviNCurves,
    /// rho, b, sigma_star, subdomain_bound, gj_bound over b.
    SsviGjVsB,
    /// Same columns over rho.
    SsviGjVsRho,
}

/// Open grid: `n` points strictly inside `(a, b)`.
fn open_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let all = linspace(a, b, n + 2);
    all[1..=n].to_vec()
}

/// Smallest sigma for SSVI at slope `b`, or `None` past the wing bound.
fn ssvi_sigma_star(b: f64, rho: f64) -> Option<f64> {
    let p = Ssvi::from_svi_form(b, rho, 1.0).ok()?;
    ssvi::certify(&p).ok()?.bounds.sigma_star
}

/// Sufficient `sigma` from `theta phi^2 (1 + |rho|) <= 4`: `b (1 + |rho|) sqrt(1 - rho^2) / 2`.
fn gj_bound(b: f64, rho: f64) -> f64 {
    b * (1.0 + rho.abs()) * (1.0 - rho * rho).sqrt() / 2.0
}

fn ssvi_row(out: &mut String, rho: f64, b: f64) {
    if b * (1.0 + rho.abs()) >= 2.0 {
        return;
    }
    let (Some(star), Ok(sub)) = (ssvi_sigma_star(b, rho), ssvi::subdomain_bound(b, rho)) else {
        return;
    };
    let _ = writeln!(out, "{rho},{b},{star},{sub},{}", gj_bound(b, rho));
}

pub fn table(id: TableId) -> Result<String, Failure> {
    let mut out = String::new();
    match id {
        TableId::VanishingSubdomain => {
            out.push_str("b,mu,sigma_star,subdomain_bound\n");
            for b in open_grid(0.0, 1.0, 99) {
                let sub = vanishing::subdomain_bound(b);
                for mu in [0.0, -0.25, -0.5, -1.0, -2.0] {
                    if let Ok(d) = vanishing::domain_point(b, mu) {
                        let _ = writeln!(out, "{b},{mu},{},{sub}", d.sigma_star);
                    }
                }
            }
        }
        TableId::SymmetricZstar | TableId::SymmetricZstarWide => {
            let hi = if matches!(id, TableId::SymmetricZstar) { 2.0 } else { 100.0 };
            out.push_str("gamma,z_at_b_zero,z_at_b_max\n");
            for g in linspace(-1.0, hi, 301).into_iter().skip(1) {
                if let Ok((z0, zg)) = symmetric::z_interval(g) {
                    let _ = writeln!(out, "{g},{z0},{zg}");
                }
            }
        }
        TableId::GammaAdmissibility => {
            out.push_str("b,fukasawa_threshold,m_diagnostic\n");
            for b in open_grid(0.0, 2.0, 199) {
                let f = symmetric::fukasawa_threshold_closed(b)?;
                let m = symmetric::m_diagnostic(b)?;
                let _ = writeln!(out, "{b},{f},{m}");
            }
        }
        TableId::SymmetricProof => {
            out.push_str("gamma,z_inflection,j1_prime\n");
            for g in open_grid(-1.0, 0.0, 199) {
                if let (Ok(z), Ok(v)) = (symmetric::z_inflection(g), symmetric::j1_prime_at_inflection(g)) {
                    let _ = writeln!(out, "{g},{z},{v}");
                }
            }
        }
        TableId::SsviNCurves => {
            out.push_str("rho,x,n\n");
            let lo = ssvi::x_m2_at_one::<f64>();
            for rho in [0.0, 0.3, 0.6, 0.9, 0.99] {
                for x in linspace(lo, uniqueness::SCAN_UPPER, 200) {
                    let _ = writeln!(out, "{rho},{x},{}", uniqueness::n_saturated(x, rho));
                }
            }
        }
        TableId::SsviGjVsB => {
            out.push_str("rho,b,sigma_star,subdomain_bound,gj_bound\n");
            for rho in [0.0, 0.5, 0.9] {
                for b in open_grid(0.0, 2.0 / (1.0 + rho), 99) {
                    ssvi_row(&mut out, rho, b);
                }
            }
        }
        TableId::SsviGjVsRho => {
            out.push_str("rho,b,sigma_star,subdomain_bound,gj_bound\n");
            for b in [0.25, 0.5, 1.0] {
                for rho in open_grid(-1.0, 1.0, 199) {
                    ssvi_row(&mut out, rho, b);
                }
            }
        }
    }
    Ok(out)
}
