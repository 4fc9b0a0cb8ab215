//! Atom weights from the generalized Vandermonde moment system.
//!
//! For nodes `s_0 < … < s_{n+1}` the weights solve
//!
//! ```text
//! Σ μ_i s_i       = 1
//! Σ μ_i s_i^{2k}  = 0      k = 0..n
//! ```
//!
//! These are exactly the conditions under which the piecewise-linear profile
//! `g(s) = Σ μ_i (s_i − |s|)_+` has `g(0) = 1`, vanishes outside `(−1, 1)` and
//! is orthogonal to the even polynomials needed for the radial reduction.

use std::io::Write;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::linalg;
use crate::polyapprox::NodeSet;

/// Above this `n` the system is eliminated in double-double arithmetic.
pub const EXTENDED_PRECISION_ABOVE: usize = 10;

/// Nodes closer than this are treated as coincident.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-14;

/// Accepted relative residual is `RESIDUAL_FACTOR·(1 + γ)`.
pub const RESIDUAL_FACTOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    nodes: NodeSet,
    weights: Vec<f64>,
    gamma: f64,
}

impl DiscreteMeasure {
    /// Wraps raw weights without checking the moment conditions.
    pub fn from_weights(nodes: NodeSet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != nodes.points().len() {
            return Err(Error::invalid(format!(
                "{} weights for {} nodes",
                weights.len(),
                nodes.points().len()
            )));
        }
        let gamma = weights.iter().map(|w| w.abs()).sum();
        Ok(DiscreteMeasure {
            nodes,
            weights,
            gamma,
        })
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn points(&self) -> &[f64] {
        self.nodes.points()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.nodes.n()
    }

    /// `Σ|μ_i|`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total variation of the even reflection; the atom at the origin is
    /// counted twice, so this is `2γ` for every measure.
    pub fn tv_even(&self) -> f64 {
        2.0 * self.gamma
    }

    /// Atoms as `(s_i, μ_i)` pairs.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points()
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Writes `i,s_i,mu_i` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["i", "s_i", "mu_i"])?;
        for (i, (s, mu)) in self.atoms().enumerate() {
            w.write_record([i.to_string(), g17(s), g17(mu)])?;
        }
        w.flush()
    }
}

fn system_rows<T: Copy>(
    points: &[f64],
    lift: impl Fn(f64) -> T,
    mul: impl Fn(T, T) -> T,
    one: T,
) -> Vec<Vec<T>> {
    let n = points.len() - 2;
    let mut rows = Vec::with_capacity(n + 2);
    rows.push(points.iter().map(|&s| lift(s)).collect());
    let mut even: Vec<T> = vec![one; points.len()];
    for k in 0..=n {
        if k > 0 {
            for (e, &s) in even.iter_mut().zip(points) {
                let s = lift(s);
                *e = mul(*e, mul(s, s));
            }
        }
        rows.push(even.clone());
    }
    rows
}

/// Residual vector in double-double: entry 0 is `Σμ_i s_i − 1`, entry
/// `k + 1` is `Σμ_i s_i^{2k}`.
fn residuals_dd(points: &[f64], weights: &[f64]) -> Vec<f64> {
    let rows = system_rows(points, Dd::new, |a, b| a * b, Dd::ONE);
    rows.iter()
        .enumerate()
        .map(|(k, row)| {
            let acc: Dd = row.iter().zip(weights).map(|(&v, &w)| v * Dd::new(w)).sum();
            let target = if k == 0 { Dd::ONE } else { Dd::ZERO };
            (acc - target).to_f64()
        })
        .collect()
}

pub fn solve_moment_system(nodes: &NodeSet) -> Result<DiscreteMeasure> {
    let points = nodes.points();
    if let Some(w) = points
        .windows(2)
        .find(|w| w[1] - w[0] < COINCIDENCE_TOLERANCE)
    {
        return Err(Error::SingularSystem(format!(
            "nodes {} and {} coincide within {COINCIDENCE_TOLERANCE:e}",
            w[0], w[1]
        )));
    }
    let m = points.len();
    let singular = |p: linalg::SingularPivot| {
        Error::SingularSystem(format!("moment system, pivot column {}", p.col))
    };
    let mut rhs = vec![0.0; m];
    rhs[0] = 1.0;

    let weights: Vec<f64> = if nodes.n() > EXTENDED_PRECISION_ABOVE {
        let a = system_rows(points, Dd::new, |a, b| a * b, Dd::ONE);
        let b = rhs.iter().map(|&v| Dd::new(v)).collect();
        linalg::solve(a, b)
            .map_err(singular)?
            .iter()
            .map(|x| x.to_f64())
            .collect()
    } else {
        let a = system_rows(points, |s| s, |a, b| a * b, 1.0);
        linalg::solve(a, rhs).map_err(singular)?
    };
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::SingularSystem("non-finite weights".into()));
    }

    let measure = DiscreteMeasure::from_weights(nodes.clone(), weights)?;
    let residual = residuals_dd(points, measure.weights())
        .iter()
        .fold(0.0f64, |a, r| a.max(r.abs()));
    let threshold = RESIDUAL_FACTOR * (1.0 + measure.gamma());
    if residual > threshold {
        return Err(Error::IllConditioned {
            residual,
            threshold,
        });
    }
    Ok(measure)
}

pub fn gamma_norm(m: &DiscreteMeasure) -> f64 {
    m.gamma()
}

pub fn verify_moments(m: &DiscreteMeasure) -> Vec<f64> {
    residuals_dd(m.points(), m.weights())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyapprox::{
        nodes_chebyshev, nodes_equidistant, nodes_optimal, remez_sqrt, NodeScheme,
    };

    fn custom(points: &[f64]) -> NodeSet {
        NodeSet::new(NodeScheme::Custom, points.to_vec()).unwrap()
    }

    #[test]
    fn d3_weights_are_exact() {
        let m = solve_moment_system(&custom(&[0.0, 0.5, 1.0])).unwrap();
        let rounded: Vec<f64> = m
            .weights()
            .iter()
            .map(|w| (w * 1e12).round() / 1e12)
            .collect();
        assert_eq!(rounded, vec![-3.0, 4.0, -1.0]);
        assert!((gamma_norm(&m) - 8.0).abs() < 1e-12);
        assert!((m.tv_even() - 16.0).abs() < 1e-12);
        assert!(verify_moments(&m).iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn two_point_measure() {
        let m = solve_moment_system(&custom(&[0.0, 1.0])).unwrap();
        assert_eq!(m.weights(), &[-1.0, 1.0]);
        assert_eq!(gamma_norm(&m), 2.0);
    }

    #[test]
    fn residual_of_perturbed_weights() {
        let m =
            DiscreteMeasure::from_weights(custom(&[0.0, 0.5, 1.0]), vec![-3.0, 4.0, -1.1]).unwrap();
        let r = verify_moments(&m);
        assert_eq!(r.len(), 3);
        assert!((r[1] + 0.1).abs() < 1e-15, "{r:?}");
    }

    #[test]
    fn duality_with_remez_level() {
        for n in 0..=15 {
            let poly = remez_sqrt(n, 0.0).unwrap();
            let m =
                solve_moment_system(&crate::polyapprox::nodes_from_minimax(&poly, 0.0).unwrap())
                    .unwrap();
            let prod = m.gamma() * poly.level();
            assert!((prod - 1.0).abs() < 1e-6, "n={n}: {prod}");
        }
    }

    #[test]
    fn optimal_weights_alternate() {
        for n in 0..=15 {
            let m = solve_moment_system(&nodes_optimal(n, 0.0).unwrap()).unwrap();
            for w in m.weights().windows(2) {
                assert!(w[0] * w[1] < 0.0, "n={n}");
            }
        }
    }

    #[test]
    fn high_degree_residuals_are_small() {
        let m = solve_moment_system(&nodes_optimal(10, 0.0).unwrap()).unwrap();
        let worst = verify_moments(&m)
            .iter()
            .fold(0.0f64, |a, r| a.max(r.abs()));
        assert!(worst <= 1e-8 * m.gamma());
    }

    #[test]
    fn gamma_dominates_inverse_level_for_any_nodes() {
        for n in 1..=12 {
            let e = remez_sqrt(n, 0.0).unwrap().level();
            for nodes in [nodes_equidistant(n, 0.0).unwrap(), nodes_chebyshev(n)] {
                let g = solve_moment_system(&nodes).unwrap().gamma();
                assert!(g * e >= 1.0 - 1e-9, "n={n} {:?}", nodes.scheme());
            }
        }
    }

    #[test]
    fn coincident_nodes_are_rejected() {
        let nodes = custom(&[0.0, 0.5, 0.5 + 1e-15, 1.0]);
        assert!(matches!(
            solve_moment_system(&nodes),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let m = solve_moment_system(&custom(&[0.0, 0.5, 1.0])).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("i,s_i,mu_i"));
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
    }
}
