//! Arbitrage-free slices drawn through the explicit domain parametrizations.
//!
//! Coordinates are drawn uniformly from a box, then `sigma = factor * sigma*` with
//! `factor` uniform in `[factor_min, factor_max]`, `factor_min >= 1`.

use clap::{Args, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use smile_domain::{ssvi, symmetric, vanishing, Extremal, RawSvi};
use vanishing::Direction;

use crate::output::{Failure, SCHEMA};
use crate::slice::Kernel;

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SampleArgs {
    #[command(subcommand)]
    pub family: SampleFamily,
    #[arg(long, default_value_t = 10, global = true)]
    pub count: usize,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0, global = true)]
    pub factor_min: f64,
    #[arg(long, default_value_t = 2.0, global = true)]
    pub factor_max: f64,
}

#[derive(Subcommand, Debug, Clone)]
#[command(rename_all = "kebab-case")]
pub enum SampleFamily {
    /// Coordinates (b, x) with x in ((2 + b) / (4 - b), 1).
    VanishingUp(VanishingBox),
    VanishingDown(VanishingBox),
    /// Coordinates (gamma, q).
    Extremal(ExtremalBox),
    /// Coordinates (u, t): gamma = gamma*(u), z at fraction t of the z interval.
    Symmetric(SymmetricBox),
    /// Coordinates (l, rho) with l >= l_bar(0, |rho|).
    Ssvi(SsviBox),
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct VanishingBox {
    #[arg(long, default_value_t = 0.1)]
    pub b_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub b_max: f64,
    #[arg(long, default_value_t = 0.94)]
    pub x_min: f64,
    #[arg(long, default_value_t = 0.999)]
    pub x_max: f64,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct ExtremalBox {
    #[arg(long, default_value_t = 0.5)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = -0.8)]
    pub q_min: f64,
    #[arg(long, default_value_t = 0.8)]
    pub q_max: f64,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SymmetricBox {
    #[arg(long, default_value_t = -0.5)]
    pub u_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.95)]
    pub t_max: f64,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SsviBox {
    #[arg(long, default_value_t = 4.5)]
    pub l_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub l_max: f64,
    #[arg(long, default_value_t = -0.9)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 0.9)]
    pub rho_max: f64,
}

fn check_range(name: &str, lo: f64, hi: f64, ok: impl Fn(f64) -> bool) -> Result<(), Failure> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi && ok(lo) && ok(hi)) {
        return Err(Failure::new("invalid_box", format!("{name} range [{lo}, {hi}] is empty or outside the domain")));
    }
    Ok(())
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..=hi)
}

fn raw_json(p: &RawSvi) -> Value {
    json!({ "a": p.a, "b": p.b, "rho": p.rho, "m": p.m, "sigma": p.sigma })
}

/// One draw: coordinates, native parameters, kernel.
type Draw = (Value, Value, Kernel);

fn draw_vanishing(rng: &mut ChaCha8Rng, bx: &VanishingBox, dir: Direction, factor: f64) -> Result<Draw, Failure> {
    let b = draw(rng, bx.b_min, bx.b_max);
    let x = draw(rng, bx.x_min, bx.x_max);
    let mu_up = vanishing::mu_star(x, b)?;
    let star = vanishing::sigma_star_closed(x, b, dir)?;
    let mu = match dir {
        Direction::Upward => mu_up,
        Direction::Downward => -mu_up,
    };
    let p = smile_domain::Vanishing::new(b, mu, factor * star, dir)?;
    let native = json!({ "b": p.b, "mu": p.mu, "sigma": p.sigma });
    Ok((json!({ "b": b, "x": x, "factor": factor, "sigma_star": star }), native, Kernel::Vanishing(p)))
}

fn draw_extremal(rng: &mut ChaCha8Rng, bx: &ExtremalBox, factor: f64) -> Result<Draw, Failure> {
    let gamma = draw(rng, bx.gamma_min, bx.gamma_max);
    let q = draw(rng, bx.q_min, bx.q_max);
    let star = smile_domain::extremal::sigma_bound(gamma, q)?;
    let p = Extremal::new(gamma, q, factor * star)?;
    let native = json!({ "gamma": p.gamma, "q": p.q, "sigma": p.sigma });
    Ok((json!({ "gamma": gamma, "q": q, "factor": factor, "sigma_star": star }), native, Kernel::Extremal(p)))
}

fn draw_symmetric(rng: &mut ChaCha8Rng, bx: &SymmetricBox, factor: f64) -> Result<Draw, Failure> {
    let u = draw(rng, bx.u_min, bx.u_max);
    let t = draw(rng, bx.t_min, bx.t_max);
    let gamma = symmetric::gamma_star(u)?;
    let (z0, zg) = symmetric::z_interval(gamma)?;
    let z = z0 + t * (zg - z0);
    let d = symmetric::domain_point(u, z)?;
    let p = d.params(factor * d.sigma_star)?;
    let native = json!({ "gamma": p.gamma, "b": p.b, "sigma": p.sigma });
    let coords = json!({ "u": u, "t": t, "z": z, "factor": factor, "sigma_star": d.sigma_star });
    Ok((coords, native, Kernel::Symmetric(p)))
}

fn draw_ssvi(rng: &mut ChaCha8Rng, bx: &SsviBox, factor: f64) -> Result<Draw, Failure> {
    let l = draw(rng, bx.l_min, bx.l_max);
    let rho = draw(rng, bx.rho_min, bx.rho_max);
    let floor = ssvi::l_bar_zero(rho.abs())?;
    if !(l > floor) {
        return Err(Failure::new("invalid_box", format!("l = {l} is below l_bar(0, {}) = {floor}", rho.abs())));
    }
    let d = ssvi::SsviDomainPoint::new(l, rho)?;
    let p = d.params(factor * d.sigma_star)?;
    let native = json!({ "theta": p.theta, "phi": p.phi, "rho": p.rho });
    let coords = json!({ "l": l, "rho": rho, "factor": factor, "sigma_star": d.sigma_star });
    Ok((coords, native, Kernel::Ssvi(p)))
}

pub fn sample(a: &SampleArgs) -> Result<Value, Failure> {
    check_range("factor", a.factor_min, a.factor_max, |f| f >= 1.0)?;
    let (family, bx) = match &a.family {
        SampleFamily::VanishingUp(b) | SampleFamily::VanishingDown(b) => {
            check_range("b", b.b_min, b.b_max, |v| v > 0.0 && v < 1.0)?;
            let lower = vanishing::x_lower(b.b_max);
            check_range("x", b.x_min, b.x_max, |v| v > lower && v < 1.0)?;
            let name = if matches!(a.family, SampleFamily::VanishingUp(_)) { "vanishing-up" } else { "vanishing-down" };
            (name, json!({ "b": [b.b_min, b.b_max], "x": [b.x_min, b.x_max] }))
        }
        SampleFamily::Extremal(b) => {
            check_range("gamma", b.gamma_min, b.gamma_max, |v| v > 0.0)?;
            check_range("q", b.q_min, b.q_max, |v| v.abs() < 1.0)?;
            ("extremal", json!({ "gamma": [b.gamma_min, b.gamma_max], "q": [b.q_min, b.q_max] }))
        }
        SampleFamily::Symmetric(b) => {
            check_range("u", b.u_min, b.u_max, |v| v > -1.0)?;
            check_range("t", b.t_min, b.t_max, |v| v > 0.0 && v < 1.0)?;
            ("symmetric", json!({ "u": [b.u_min, b.u_max], "t": [b.t_min, b.t_max] }))
        }
        SampleFamily::Ssvi(b) => {
            check_range("l", b.l_min, b.l_max, |v| v > 0.0)?;
            check_range("rho", b.rho_min, b.rho_max, |v| v.abs() < 1.0)?;
            ("ssvi", json!({ "l": [b.l_min, b.l_max], "rho": [b.rho_min, b.rho_max] }))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut out = Vec::with_capacity(a.count);
    for i in 0..a.count {
        let factor = draw(&mut rng, a.factor_min, a.factor_max);
        let (coords, native, kernel) = match &a.family {
            SampleFamily::VanishingUp(b) => draw_vanishing(&mut rng, b, Direction::Upward, factor)?,
            SampleFamily::VanishingDown(b) => draw_vanishing(&mut rng, b, Direction::Downward, factor)?,
            SampleFamily::Extremal(b) => draw_extremal(&mut rng, b, factor)?,
            SampleFamily::Symmetric(b) => draw_symmetric(&mut rng, b, factor)?,
            SampleFamily::Ssvi(b) => draw_ssvi(&mut rng, b, factor)?,
        };
        let cert = kernel.certify()?;
        if !cert.verdict {
            return Err(Failure::new("sample_rejected", format!("draw {i} failed to certify: {coords}")));
        }
        out.push(json!({ "coords": coords, "native": native, "raw": raw_json(&kernel.raw()) }));
    }
    log::info!("{} {family} samples with seed {}", out.len(), a.seed);
    Ok(json!({
        "schema": SCHEMA,
        "command": "sample",
        "family": family,
        "seed": a.seed,
        "count": a.count,
        "box": bx,
        "factor": [a.factor_min, a.factor_max],
        "samples": out,
    }))
}
