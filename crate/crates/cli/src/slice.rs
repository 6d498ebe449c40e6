//! Family arguments shared by `certify` and `bound`, resolved into a single slice.

use std::collections::BTreeMap;

use clap::{Args, Subcommand};
use smile_domain::{
    extremal, ssvi, symmetric, vanishing, Certificate, DomainCertificate, Error, Extremal, Family,
    HestonLt, OracleConfig, RawSvi, Result, Ssvi, Symmetric, Vanishing,
};
use vanishing::Direction;

/// `a,b,rho,m,sigma`.
pub fn parse_raw(s: &str) -> std::result::Result<RawSvi, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match v[..] {
        [a, b, rho, m, sigma] => Ok(RawSvi { a, b, rho, m, sigma }),
        _ => Err(format!("expected 5 comma-separated values a,b,rho,m,sigma, got {}", v.len())),
    }
}

#[derive(Subcommand, Debug, Clone)]
#[command(rename_all = "kebab-case")]
pub enum SliceCmd {
    /// Vanishing upward SVI (a = 0, rho = 1).
    VanishingUp(VanishingArgs),
    /// Vanishing downward SVI (a = 0, rho = -1).
    VanishingDown(VanishingArgs),
    /// Extremal decorrelated SVI (b = 2, rho = 0).
    Extremal(ExtremalArgs),
    /// Symmetric SVI (rho = 0, m = 0).
    Symmetric(SymmetricArgs),
    /// SSVI slice, as (theta, phi, rho) or (b, rho, sigma).
    Ssvi(SsviArgs),
    /// Long-term Heston slice, mapped to SSVI.
    HestonLt(HestonArgs),
    /// Any raw SVI slice, bounded by the numerical oracle.
    Svi(SviArgs),
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct VanishingArgs {
    #[arg(long)]
    pub b: Option<f64>,
    /// Normalized shift m / sigma.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Raw parameters `a,b,rho,m,sigma`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_raw, conflicts_with_all = ["b", "mu", "sigma"])]
    pub raw: Option<RawSvi>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Shift as a fraction of gamma, in (-1, 1).
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_raw, conflicts_with_all = ["gamma", "q", "sigma"])]
    pub raw: Option<RawSvi>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SymmetricArgs {
    /// Normalized level a / (b sigma).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_raw, conflicts_with_all = ["gamma", "b", "sigma"])]
    pub raw: Option<RawSvi>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SsviArgs {
    #[arg(long, conflicts_with_all = ["b", "sigma"])]
    pub theta: Option<f64>,
    #[arg(long, conflicts_with_all = ["b", "sigma"])]
    pub phi: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_raw, conflicts_with_all = ["theta", "phi", "rho", "b", "sigma"])]
    pub raw: Option<RawSvi>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct HestonArgs {
    #[arg(long)]
    pub kappa: f64,
    #[arg(long)]
    pub theta_bar: f64,
    #[arg(long)]
    pub sigma_vol: f64,
    #[arg(long)]
    pub rho: f64,
    /// Maturity; defaults to the sub-domain threshold maturity.
    #[arg(long)]
    pub maturity: Option<f64>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SviArgs {
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_raw, conflicts_with_all = ["a", "b", "rho", "m", "sigma"])]
    pub raw: Option<RawSvi>,
}

/// The family kernel a slice is certified with.
#[derive(Debug, Clone, Copy)]
pub enum Kernel {
    Vanishing(Vanishing),
    Extremal(Extremal),
    Symmetric(Symmetric),
    Ssvi(Ssvi),
    Svi(RawSvi),
}

/// A parsed slice: native coordinates, raw parameters and derived quantities.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub family: &'static str,
    pub kernel: Kernel,
    pub native: BTreeMap<String, f64>,
    pub raw: RawSvi,
    pub derived: BTreeMap<String, f64>,
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParams(format!("missing --{name}")))
}

/// `sigma` when given, otherwise `fallback` when the caller does not need it.
fn sigma_or(v: Option<f64>, fallback: Option<f64>) -> Result<f64> {
    match (v, fallback) {
        (Some(s), _) => Ok(s),
        (None, Some(f)) => Ok(f),
        (None, None) => Err(Error::InvalidParams("missing --sigma".into())),
    }
}

fn map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

impl SliceCmd {
    pub fn family(&self) -> &'static str {
        match self {
            SliceCmd::VanishingUp(_) => "vanishing-up",
            SliceCmd::VanishingDown(_) => "vanishing-down",
            SliceCmd::Extremal(_) => "extremal",
            SliceCmd::Symmetric(_) => "symmetric",
            SliceCmd::Ssvi(_) => "ssvi",
            SliceCmd::HestonLt(_) => "heston-lt",
            SliceCmd::Svi(_) => "svi",
        }
    }

    /// Resolves the slice. `sigma_fallback` stands in for a missing `sigma` when only the
    /// shape matters.
    pub fn resolve(&self, sigma_fallback: Option<f64>) -> Result<Resolved> {
        let family = self.family();
        let (kernel, native, derived) = match self {
            SliceCmd::VanishingUp(a) | SliceCmd::VanishingDown(a) => {
                let dir = if matches!(self, SliceCmd::VanishingUp(_)) {
                    Direction::Upward
                } else {
                    Direction::Downward
                };
                let p = match a.raw {
                    Some(raw) => {
                        let p = Vanishing::from_raw(&raw)?;
                        if p.direction != dir {
                            return Err(Error::InvalidParams(format!("rho = {} does not match {family}", raw.rho)));
                        }
                        p
                    }
                    None => Vanishing::new(need(a.b, "b")?, need(a.mu, "mu")?, sigma_or(a.sigma, sigma_fallback)?, dir)?,
                };
                let native = map(&[("b", p.b), ("mu", p.mu), ("sigma", p.sigma)]);
                (Kernel::Vanishing(p), native, BTreeMap::new())
            }
            SliceCmd::Extremal(a) => {
                let p = match a.raw {
                    Some(raw) => Extremal::from_raw(&raw)?,
                    None => Extremal::new(need(a.gamma, "gamma")?, need(a.q, "q")?, sigma_or(a.sigma, sigma_fallback)?)?,
                };
                let native = map(&[("gamma", p.gamma), ("q", p.q), ("sigma", p.sigma)]);
                (Kernel::Extremal(p), native, map(&[("mu", p.mu())]))
            }
            SliceCmd::Symmetric(a) => {
                let p = match a.raw {
                    Some(raw) => Symmetric::from_raw(&raw)?,
                    None => Symmetric::new(need(a.gamma, "gamma")?, need(a.b, "b")?, sigma_or(a.sigma, sigma_fallback)?)?,
                };
                let native = map(&[("gamma", p.gamma), ("b", p.b), ("sigma", p.sigma)]);
                (Kernel::Symmetric(p), native, BTreeMap::new())
            }
            SliceCmd::Ssvi(a) => {
                let p = match (a.raw, a.theta, a.phi) {
                    (Some(raw), _, _) => Ssvi::from_raw(&raw)?,
                    (None, Some(theta), Some(phi)) => Ssvi::new(theta, phi, need(a.rho, "rho")?)?,
                    (None, None, None) => Ssvi::from_svi_form(
                        need(a.b, "b")?,
                        need(a.rho, "rho")?,
                        sigma_or(a.sigma, sigma_fallback)?,
                    )?,
                    _ => return Err(Error::InvalidParams("--theta and --phi go together".into())),
                };
                let native = map(&[("theta", p.theta), ("phi", p.phi), ("rho", p.rho)]);
                (Kernel::Ssvi(p), native, map(&[("b", p.b()), ("sigma", p.sigma())]))
            }
            SliceCmd::HestonLt(a) => {
                let h = HestonLt::new(a.kappa, a.theta_bar, a.sigma_vol, a.rho, a.maturity.unwrap_or(1.0))?;
                let threshold = ssvi::lt_heston_threshold(&h)?;
                let h = h.with_maturity(a.maturity.unwrap_or(threshold))?;
                let p = h.to_ssvi()?;
                let native = map(&[
                    ("kappa", h.kappa),
                    ("theta_bar", h.theta_bar),
                    ("sigma_vol", h.sigma_vol),
                    ("rho", h.rho),
                    ("maturity", h.maturity),
                ]);
                let derived = map(&[
                    ("b", p.b()),
                    ("sigma", p.sigma()),
                    ("theta", p.theta),
                    ("phi", p.phi),
                    ("threshold_maturity", threshold),
                ]);
                (Kernel::Ssvi(p), native, derived)
            }
            SliceCmd::Svi(a) => {
                let raw = match a.raw {
                    Some(raw) => raw,
                    None => RawSvi::new(
                        need(a.a, "a")?,
                        need(a.b, "b")?,
                        need(a.rho, "rho")?,
                        need(a.m, "m")?,
                        sigma_or(a.sigma, sigma_fallback)?,
                    )?,
                };
                raw.validate()?;
                let native = map(&[("a", raw.a), ("b", raw.b), ("rho", raw.rho), ("m", raw.m), ("sigma", raw.sigma)]);
                (Kernel::Svi(raw), native, BTreeMap::new())
            }
        };
        Ok(Resolved { family, raw: kernel.raw(), kernel, native, derived })
    }
}

impl Kernel {
    pub fn raw(&self) -> RawSvi {
        match self {
            Kernel::Vanishing(p) => p.to_raw(),
            Kernel::Extremal(p) => p.to_raw(),
            Kernel::Symmetric(p) => p.to_raw(),
            Kernel::Ssvi(p) => p.to_raw(),
            Kernel::Svi(p) => *p,
        }
    }

    fn family(&self) -> Family {
        match self {
            Kernel::Vanishing(p) => match p.direction {
                Direction::Upward => Family::VanishingUpward,
                Direction::Downward => Family::VanishingDownward,
            },
            Kernel::Extremal(_) => Family::ExtremalDecorrelated,
            Kernel::Symmetric(_) => Family::Symmetric,
            Kernel::Ssvi(_) => Family::Ssvi,
            Kernel::Svi(_) => Family::Generic,
        }
    }

    /// Family verdict; arbitrage shows up as an error.
    pub fn certify_strict(&self) -> Result<Certificate> {
        match self {
            Kernel::Vanishing(p) => vanishing::certify(p),
            Kernel::Extremal(p) => extremal::certify(p),
            Kernel::Symmetric(p) => symmetric::certify(p),
            Kernel::Ssvi(p) => ssvi::certify(p),
            Kernel::Svi(p) => smile_domain::certify_svi(p, &OracleConfig::default()),
        }
    }

    /// Family verdict; Roger Lee and Fukasawa failures become failing certificates.
    pub fn certify(&self) -> Result<Certificate> {
        match self.certify_strict() {
            Err(e) if e.is_arbitrage() => DomainCertificate::rejected(self.family(), self.raw(), &e),
            other => other,
        }
    }
}
