//! Invariant suite behind the `verify` command.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{decay_bound, lipschitz_bound, plateau_lower_bound};
use crate::error::{Error, Result};
use crate::moments::{solve_moment_system, verify_moments, DiscreteMeasure};
use crate::polyapprox::{remez_sqrt, NodeScheme};
use crate::profile::{build_f, build_g, RadialBump};
use crate::quad::QuadConfig;

pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
pub const DUALITY_TOLERANCE: f64 = 1e-6;
/// Shape slack; raised to the bump's rounding floor when that is larger.
pub const SHAPE_SLACK: f64 = 1e-10;
pub const SUPPORT_TOLERANCE: f64 = 1e-6;
pub const SLOPE_TOLERANCE: f64 = 1e-6;
pub const BOUND_SLACK: f64 = 1e-6;
pub const PLATEAU_CONSTANT: f64 = 0.5;
pub const DECAY_FROM: f64 = 0.62;

const SHAPE_GRID: usize = 10_000;
const DECAY_GRID: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub d: u32,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, d: u32, passed: bool, detail: String) -> Self {
        Check {
            name,
            d,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Perturbation {
    pub index: usize,
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub dims: Vec<u32>,
    pub scheme: NodeScheme,
    /// Plateau half-width; nonzero adds the lower-bound check.
    pub eps: f64,
    pub quad: QuadConfig,
    pub perturb: Option<Perturbation>,
}

/// Runs every check for every dimension; order follows `cfg.dims`.
pub fn run_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if let Some(&d) = cfg.dims.iter().find(|&&d| d < 3 || d % 2 == 0) {
        return Err(Error::invalid(format!(
            "dimension {d} must be odd and at least 3"
        )));
    }
    let per_d: Vec<Vec<Check>> = cfg
        .dims
        .par_iter()
        .map(|&d| checks_for(d, cfg))
        .collect::<Result<_>>()?;
    Ok(per_d.into_iter().flatten().collect())
}

fn checks_for(d: u32, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = (d as usize - 1) / 2;
    let mut measure = solve_moment_system(&cfg.scheme.nodes(n)?)?;
    if let Some(p) = cfg.perturb {
        let mut w = measure.weights().to_vec();
        let slot = w.get_mut(p.index).ok_or_else(|| {
            Error::invalid(format!("perturb index {} out of range for d={d}", p.index))
        })?;
        *slot += p.delta;
        measure = DiscreteMeasure::from_weights(measure.nodes().clone(), w)?;
    }

    let mut out = vec![residual_check(d, &measure), alternation_check(d, &measure)];
    if matches!(cfg.scheme, NodeScheme::Optimal { .. }) {
        let lo = cfg.scheme.lo();
        let level = remez_sqrt(n, lo * lo)?.level();
        let product = measure.gamma() * level;
        out.push(Check::new(
            "duality",
            d,
            (product - 1.0).abs() <= DUALITY_TOLERANCE,
            format!("gamma*level = {product:.12}"),
        ));
    }

    let gamma = measure.gamma();
    let tv_even = measure.tv_even();
    let bump = build_f(build_g(measure)).with_quad(cfg.quad);
    debug_assert_eq!(bump.d(), d);
    out.extend(shape_checks(&bump));
    out.push(lipschitz_check(&bump, tv_even));
    if cfg.eps == 0.0 && d >= 5 && matches!(cfg.scheme, NodeScheme::Optimal { .. }) {
        out.push(decay_check(&bump, gamma));
    }
    if cfg.eps > 0.0 {
        let bound = plateau_lower_bound(cfg.eps, n, PLATEAU_CONSTANT);
        out.push(Check::new(
            "plateau_lower_bound",
            d,
            gamma >= bound,
            format!("gamma = {gamma:.6e}, lower bound = {bound:.6e}"),
        ));
    }
    Ok(out)
}

fn residual_check(d: u32, m: &DiscreteMeasure) -> Check {
    let res = verify_moments(m);
    let (worst, value) = res.iter().enumerate().fold((0, 0.0f64), |acc, (i, r)| {
        if r.abs() > acc.1 {
            (i, r.abs())
        } else {
            acc
        }
    });
    let limit = RESIDUAL_TOLERANCE * m.gamma().max(1.0);
    Check::new(
        "moment_residual",
        d,
        value <= limit,
        format!("max |residual| = {value:.3e} at row {worst}, limit {limit:.3e}"),
    )
}

fn alternation_check(d: u32, m: &DiscreteMeasure) -> Check {
    let w = m.weights();
    let ok = w.iter().all(|x| *x != 0.0) && w.windows(2).all(|p| p[0].signum() != p[1].signum());
    Check::new("sign_alternation", d, ok, format!("weights {w:?}"))
}

fn shape_checks(bump: &RadialBump) -> Vec<Check> {
    let d = bump.d();
    let radii: Vec<f64> = (1..SHAPE_GRID)
        .map(|k| k as f64 / SHAPE_GRID as f64)
        .collect();
    let f = bump.eval_many(&radii);

    let worst_rise = f
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = f
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let f0 = bump.eval_f(0.0);
    let slack = SHAPE_SLACK.max(bump.rounding_floor());

    let outside: Vec<f64> = (0..=100).map(|k| 1.0 + k as f64 / 100.0).collect();
    let tail = bump
        .eval_many(&outside)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));

    let end = bump.linear_segment_end();
    let slope = bump.linear_slope();
    let probes: Vec<f64> = (1..=8).map(|k| end * k as f64 / 8.0).collect();
    let slope_err = probes
        .iter()
        .map(|&r| ((bump.eval_f(r) - f0) / r - slope).abs())
        .fold(0.0f64, f64::max);

    vec![
        Check::new(
            "monotone",
            d,
            worst_rise <= slack,
            format!("largest increase between grid points {worst_rise:.3e}, slack {slack:.3e}"),
        ),
        Check::new(
            "range",
            d,
            lo >= -slack && hi.max(f0) <= 1.0 + slack,
            format!("f in [{lo:.3e}, {:.12}]", hi.max(f0)),
        ),
        Check::new(
            "support",
            d,
            tail <= SUPPORT_TOLERANCE,
            format!("max |f| on [1, 2] = {tail:.3e}"),
        ),
        Check::new(
            "linear_segment",
            d,
            slope_err <= SLOPE_TOLERANCE,
            format!("slope {slope:.12} on [0, {end:.6}], max deviation {slope_err:.3e}"),
        ),
    ]
}

fn lipschitz_check(bump: &RadialBump, tv_even: f64) -> Check {
    let d = bump.d();
    let radii: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
    let sup = bump
        .eval_prime_many(&radii)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let bound = lipschitz_bound(d, tv_even);
    Check::new(
        "lipschitz",
        d,
        sup <= bound * (1.0 + BOUND_SLACK),
        format!("max |f'| = {sup:.6}, bound = {bound:.6}"),
    )
}

fn decay_check(bump: &RadialBump, gamma: f64) -> Check {
    let d = bump.d();
    let radii: Vec<f64> = (1..=DECAY_GRID)
        .map(|k| DECAY_FROM + (1.0 - DECAY_FROM) * k as f64 / (DECAY_GRID + 1) as f64)
        .collect();
    let f = bump.eval_many(&radii);
    let floor = bump.rounding_floor();
    let worst = radii
        .iter()
        .zip(&f)
        .map(|(&r, &v)| v - decay_bound(d, gamma, r) * (1.0 + BOUND_SLACK))
        .fold(f64::NEG_INFINITY, f64::max);
    Check::new(
        "decay_envelope",
        d,
        worst <= floor,
        format!("max f - envelope = {worst:.3e}, rounding floor {floor:.3e}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dims: Vec<u32>) -> VerifyConfig {
        VerifyConfig {
            dims,
            scheme: NodeScheme::Optimal { lo: 0.0 },
            eps: 0.0,
            quad: QuadConfig::default(),
            perturb: None,
        }
    }

    #[test]
    fn small_range_passes() {
        let checks = run_checks(&cfg(vec![3, 5, 7])).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks
            .iter()
            .any(|c| c.name == "decay_envelope" && c.d == 5));
    }

    #[test]
    fn corrupted_weight_is_named() {
        let mut c = cfg(vec![3]);
        c.perturb = Some(Perturbation {
            index: 1,
            delta: 0.1,
        });
        let checks = run_checks(&c).unwrap();
        let failed: Vec<_> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"moment_residual"), "{failed:?}");
    }

    #[test]
    fn plateau_adds_lower_bound() {
        let c = VerifyConfig {
            scheme: NodeScheme::Optimal { lo: 0.5 },
            eps: 0.5,
            ..cfg(vec![7])
        };
        let checks = run_checks(&c).unwrap();
        let plateau = checks
            .iter()
            .find(|c| c.name == "plateau_lower_bound")
            .unwrap();
        assert!(plateau.passed, "{plateau:?}");
    }

    #[test]
    fn rejects_even_dimension() {
        assert!(run_checks(&cfg(vec![4])).is_err());
    }
}
