//! Analytic constants and bounds, dimension sweeps and empirical law fits.

mod fit;
mod special;
mod sweep;

pub use fit::{fit_exp_law, fit_power_law, ExpLaw, PowerLaw};
pub use special::{gamma_ratio, ln_gamma};
pub use sweep::{run_sweep, write_sweep_csv, SweepRecord, SWEEP_HEADER};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::solve_moment_system;
use crate::polyapprox::nodes_optimal;

/// `c_d = 1 / ∫_{-1}^{1} (1 − s²)^{(d−3)/2} ds = Γ(d/2) / (√π Γ((d−1)/2))`.
///
/// Defined for every `d ≥ 2`; the bump construction only uses odd `d ≥ 3`.
/// Small `d` use the recurrence `c_d = c_{d−2} (d − 2)/(d − 3)`, which is
/// exact to a few ulps; larger `d` use a log-gamma difference.
pub fn c_d(d: u32) -> f64 {
    assert!(d >= 2, "c_d needs d >= 2, got {d}");
    if d <= RECURRENCE_MAX_D {
        let start = if d % 2 == 1 { 3 } else { 2 };
        let base = if d % 2 == 1 { 0.5 } else { 1.0 / PI };
        return (start + 2..=d)
            .step_by(2)
            .fold(base, |c, k| c * (k - 2) as f64 / (k - 3) as f64);
    }
    let d = d as f64;
    gamma_ratio(d / 2.0, (d - 1.0) / 2.0) / PI.sqrt()
}

const RECURRENCE_MAX_D: u32 = 401;

/// Lipschitz bound for a radial function whose even-reflected measure has
/// total variation `tv_even`: `tv_even · c_d / (d − 1)`.
pub fn lipschitz_bound(d: u32, tv_even: f64) -> f64 {
    tv_even * c_d(d) / (d as f64 - 1.0)
}

/// Decay envelope `(2 c_d γ / r) · ((1 − r²)/r)^{(d−3)/2}` for `0 < r < 1`.
pub fn decay_bound(d: u32, gamma_half: f64, r: f64) -> f64 {
    let k = (d as i32 - 3) / 2;
    2.0 * c_d(d) * gamma_half / r * ((1.0 - r * r) / r).powi(k)
}

/// Lower bound `c ε² √(π n) / (1 − ε²)^{n+1}` on the norm of a plateau measure.
pub fn plateau_lower_bound(eps: f64, n: usize, c: f64) -> f64 {
    let e2 = eps * eps;
    c * e2 * (PI * n as f64).sqrt() / (1.0 - e2).powi(n as i32 + 1)
}

/// Norm of the inner layer `x ↦ (|x| − ε)/(1 − ε)` of the two-layer
/// representation: `|S^{d−1}| / ∫ σ(ν_1) dH / (1 − ε) = (d − 1) / (c_d (1 − ε))`.
pub fn depth_sep_norm(d: u32, eps: f64) -> f64 {
    (d as f64 - 1.0) / (c_d(d) * (1.0 - eps))
}

/// `γ_m` of the optimal measure with `m + 2` atoms on `[0, 1]`.
pub fn optimal_gamma(m: usize) -> Result<f64> {
    Ok(solve_moment_system(&nodes_optimal(m, 0.0)?)?.gamma())
}

/// Norm bound `2 γ_m Σ |y_i| / r_i` for interpolating the labelled points with
/// rescaled bumps, `r_i` being the distance to the nearest other point.
///
/// `gamma_index` defaults to `(d + 1) / 2`.
pub fn fit_dataset_bound(
    points: &[(Vec<f64>, f64)],
    d: usize,
    gamma_index: Option<usize>,
) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two data points"));
    }
    if let Some((i, _)) = points.iter().enumerate().find(|(_, (x, _))| x.len() != d) {
        return Err(Error::invalid(format!("point {i} is not in dimension {d}")));
    }
    let mut sum = 0.0;
    for (i, (xi, yi)) in points.iter().enumerate() {
        let ri = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (xj, _))| {
                xi.iter()
                    .zip(xj)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        if ri == 0.0 {
            return Err(Error::DuplicatePoint(i));
        }
        sum += yi.abs() / ri;
    }
    if sum == 0.0 {
        return Ok(0.0);
    }
    let gamma = optimal_gamma(gamma_index.unwrap_or(d.div_ceil(2)))?;
    Ok(2.0 * gamma * sum)
}

/// Balanced mollification radius and the resulting approximation rate for
/// `m` neurons and smoothness `alpha`.
pub fn mollification_rate(d: usize, alpha: f64, m: u64) -> (f64, f64) {
    let denom = 2.0 * (d as f64 + 1.0 + alpha);
    let m = m as f64;
    (m.powf(-1.0 / denom), m.powf(-alpha / denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫_{-1}^{1} (1 − s²)^k ds = 2 Π_{j=1}^{k} 2j / (2j + 1)`.
    fn weight_mass(k: u32) -> f64 {
        (1..=k).fold(2.0, |acc, j| acc * (2 * j) as f64 / (2 * j + 1) as f64)
    }

    #[test]
    fn c_d_matches_weight_mass() {
        for d in (3..=61).step_by(2) {
            let expect = 1.0 / weight_mass((d - 3) / 2);
            assert!((c_d(d) - expect).abs() <= 1e-13 * expect, "d={d}");
        }
        assert!((c_d(3) - 0.5).abs() < 1e-15);
        assert!((c_d(5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn c_d_asymptote() {
        for d in [51u32, 101, 1001, 10_001] {
            let ratio = c_d(d) * (2.0 * PI / d as f64).sqrt();
            assert!((ratio - 1.0).abs() <= 0.05, "d={d}: {ratio}");
            assert!(ratio.is_finite());
        }
    }

    #[test]
    fn c_d_branches_agree() {
        let d = RECURRENCE_MAX_D as f64;
        let via_gamma = gamma_ratio(d / 2.0, (d - 1.0) / 2.0) / PI.sqrt();
        assert!((c_d(RECURRENCE_MAX_D) - via_gamma).abs() < 1e-12 * via_gamma);
        assert!((c_d(2) - 1.0 / PI).abs() < 1e-16);
        assert!((c_d(4) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_examples() {
        assert!((lipschitz_bound(3, 1.0) - 0.25).abs() < 1e-15);
        assert!((lipschitz_bound(3, 16.0) - 4.0).abs() < 1e-14);
        assert!(1.5 <= lipschitz_bound(3, 16.0));
    }

    #[test]
    fn decay_examples() {
        assert!((decay_bound(3, 8.0, 0.8) - 10.0).abs() < 1e-12);
        assert!(decay_bound(7, 20.0, 1.0 - 1e-9) < 1e-12);
    }

    #[test]
    fn plateau_examples() {
        let v = plateau_lower_bound(0.5, 5, 1.0);
        let expect = 0.25 * (5.0 * PI).sqrt() / 0.75f64.powi(6);
        assert!((v - expect).abs() < 1e-12);
        assert!((v - 5.567).abs() < 1e-3);
        assert!(plateau_lower_bound(1e-9, 5, 1.0) < 1e-16);
    }

    #[test]
    fn depth_separation_examples() {
        assert!((depth_sep_norm(3, 0.0) - 4.0).abs() < 1e-14);
        assert!((depth_sep_norm(9, 0.5) - 2.0 * depth_sep_norm(9, 0.0)).abs() < 1e-12);
        // Exact asymptote is √(2πd).
        let d = 201;
        let ratio = depth_sep_norm(d, 0.0) / (2.0 * PI * d as f64).sqrt();
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn dataset_bound() {
        let zero = vec![(vec![0.0, 0.0, 0.0], 0.0), (vec![1.0, 0.0, 0.0], 0.0)];
        assert_eq!(fit_dataset_bound(&zero, 3, None).unwrap(), 0.0);

        let two = vec![(vec![0.0, 0.0, 0.0], 1.0), (vec![1.0, 0.0, 0.0], 0.0)];
        let g2 = optimal_gamma(2).unwrap();
        assert!((fit_dataset_bound(&two, 3, None).unwrap() - 2.0 * g2).abs() < 1e-12);

        let scaled: Vec<_> = two
            .iter()
            .map(|(x, y)| (x.iter().map(|v| 2.0 * v).collect(), *y))
            .collect();
        let a = fit_dataset_bound(&two, 3, None).unwrap();
        let b = fit_dataset_bound(&scaled, 3, None).unwrap();
        assert!((b - a / 2.0).abs() < 1e-12);

        let dup = vec![(vec![0.0], 1.0), (vec![0.0], 2.0)];
        assert!(matches!(
            fit_dataset_bound(&dup, 1, None),
            Err(Error::DuplicatePoint(0))
        ));
        assert!(fit_dataset_bound(&two[..1], 3, None).is_err());
    }

    #[test]
    fn mollification_examples() {
        let (eps, rate) = mollification_rate(3, 1.0, 1_000_000);
        assert!((eps - 10f64.powf(-0.6)).abs() < 1e-14);
        assert!((rate - 10f64.powf(-0.6)).abs() < 1e-14);
        assert_eq!(mollification_rate(5, 2.0, 1), (1.0, 1.0));
        // Rate exponent α / (2(d + 1 + α)) → 1/2 as α grows.
        let m = 1u64 << 40;
        let (_, rate) = mollification_rate(3, 1e9, m);
        let exponent = -rate.ln() / (m as f64).ln();
        assert!((exponent - 0.5).abs() < 1e-6);
    }
}
