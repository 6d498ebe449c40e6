//! Random slices for the implication-chain checks, built from points of the unit cube.
#![allow(dead_code)]

use smile_domain::vanishing::Direction;
use smile_domain::{
    durrleman_check, extremal, ssvi, symmetric, vanishing, DurrlemanGrid, Extremal, RawSvi, Ssvi,
    Symmetric, Vanishing,
};

/// Density tolerance of the verdict comparison.
pub const DENSITY_TOL: f64 = 1e-8;

/// Range of `sigma / sigma*`, drawn log-uniformly so that sufficient conditions get hit.
pub const FACTOR: (f64, f64) = (0.5, 8.0);

#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub raw: RawSvi,
    pub verdict: bool,
    /// Verdict of the mirror smile `k -> -k`.
    pub mirror_verdict: bool,
    /// Sufficient conditions that held, by name.
    pub sufficient: Vec<(&'static str, bool)>,
}

impl Case {
    pub fn density_free(&self) -> bool {
        durrleman_check(&self.raw, &DurrlemanGrid::default()).unwrap().min >= -DENSITY_TOL
    }
}

fn lerp(lo: f64, hi: f64, t: f64) -> f64 {
    lo + (hi - lo) * t
}

fn factor(t: f64) -> f64 {
    lerp(FACTOR.0.ln(), FACTOR.1.ln(), t).exp()
}

pub const FAMILIES: [&str; 5] = ["vanishing-up", "vanishing-down", "extremal", "symmetric", "ssvi"];

pub fn case(family: &str, u: [f64; 3]) -> Case {
    match family {
        "vanishing-up" => vanishing_case(u, Direction::Upward),
        "vanishing-down" => vanishing_case(u, Direction::Downward),
        "extremal" => extremal_case(u),
        "symmetric" => symmetric_case(u),
        "ssvi" => ssvi_case(u),
        other => panic!("unknown family {other}"),
    }
}

pub fn vanishing_case(u: [f64; 3], dir: Direction) -> Case {
    let b = lerp(0.05, 0.95, u[0]);
    let mu_up = lerp(-3.0, 0.95 * vanishing::fukasawa_bound(b), u[1]);
    let mu = dir.upward_mu(mu_up);
    let star = vanishing::certify(&Vanishing::new(b, mu, 1.0, dir).unwrap())
        .unwrap()
        .bounds
        .sigma_star
        .unwrap();
    let p = Vanishing::new(b, mu, factor(u[2]) * star, dir).unwrap();
    let mirror_dir = match dir {
        Direction::Upward => Direction::Downward,
        Direction::Downward => Direction::Upward,
    };
    let m = Vanishing::from_raw(&p.to_raw().invert()).unwrap();
    assert_eq!(m.direction, mirror_dir);
    Case {
        label: format!("{dir:?} b={b} mu={mu} sigma={}", p.sigma),
        raw: p.to_raw(),
        verdict: vanishing::certify(&p).unwrap().verdict,
        mirror_verdict: vanishing::certify(&m).unwrap().verdict,
        sufficient: vec![("subdomain", vanishing::subdomain_check(b, mu, p.sigma, dir))],
    }
}

pub fn extremal_case(u: [f64; 3]) -> Case {
    let gamma = lerp(0.3, 4.0, u[0]);
    let q = lerp(-0.9, 0.9, u[1]);
    let star = extremal::sigma_bound(gamma, q).unwrap();
    let p = Extremal::new(gamma, q, factor(u[2]) * star).unwrap();
    let m = Extremal::from_raw(&p.to_raw().invert()).unwrap();
    Case {
        label: format!("extremal gamma={gamma} q={q} sigma={}", p.sigma),
        raw: p.to_raw(),
        verdict: extremal::certify(&p).unwrap().verdict,
        mirror_verdict: extremal::certify(&m).unwrap().verdict,
        sufficient: vec![],
    }
}

pub fn symmetric_case(u: [f64; 3]) -> Case {
    let b = lerp(0.05, 1.95, u[0]);
    let floor = symmetric::fukasawa_threshold_closed(b).unwrap();
    let gamma = lerp(floor + 0.02 * (1.0 + floor.abs()), 3.0, u[1]);
    let star = symmetric::certify(&Symmetric::new(gamma, b, 1.0).unwrap())
        .unwrap()
        .bounds
        .sigma_star
        .unwrap();
    let p = Symmetric::new(gamma, b, factor(u[2]) * star).unwrap();
    let m = Symmetric::from_raw(&p.to_raw().invert()).unwrap();
    Case {
        label: format!("symmetric gamma={gamma} b={b} sigma={}", p.sigma),
        raw: p.to_raw(),
        verdict: symmetric::certify(&p).unwrap().verdict,
        mirror_verdict: symmetric::certify(&m).unwrap().verdict,
        sufficient: vec![],
    }
}

pub fn ssvi_case(u: [f64; 3]) -> Case {
    let rho = lerp(-0.95, 0.95, u[0]);
    let cap = 2.0 / (1.0 + rho.abs());
    let b = lerp(0.02 * cap, 0.98 * cap, u[1]);
    let star = ssvi::certify(&Ssvi::from_svi_form(b, rho, 1.0).unwrap())
        .unwrap()
        .bounds
        .sigma_star
        .unwrap();
    let p = Ssvi::from_svi_form(b, rho, factor(u[2]) * star).unwrap();
    let m = Ssvi::from_raw(&p.to_raw().invert()).unwrap();
    Case {
        label: format!("ssvi rho={rho} b={b} sigma={}", p.sigma()),
        raw: p.to_raw(),
        verdict: ssvi::certify(&p).unwrap().verdict,
        mirror_verdict: ssvi::certify(&m).unwrap().verdict,
        sufficient: vec![
            ("gj", ssvi::gj_sufficient(&p)),
            ("subdomain", ssvi::subdomain_check(&p).unwrap()),
        ],
    }
}

/// Violations of the implication chain, one message each.
pub fn chain_violations(c: &Case) -> Vec<String> {
    let mut out = Vec::new();
    for &(name, held) in &c.sufficient {
        if held && !c.verdict {
            out.push(format!("{name} holds but certify fails: {}", c.label));
        }
    }
    let free = c.density_free();
    if free != c.verdict {
        out.push(format!("certify {} vs density {}: {}", c.verdict, free, c.label));
    }
    if c.mirror_verdict != c.verdict {
        out.push(format!("mirror verdict differs: {}", c.label));
    }
    out
}
