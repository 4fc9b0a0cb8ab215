//! Best uniform polynomial approximation of `√t` on `[lo, 1]` and the node
//! schemes built from it.
//!
//! The minimax polynomial is found with the Remez exchange. Each iteration
//! solves the levelled interpolation system on the current reference, then
//! moves the reference to the local extrema of the new error curve. Extrema
//! are found by two nested bisections: first the sign changes of the error
//! between consecutive reference points, then the sign changes of its
//! derivative between consecutive roots. The outer reference points stay
//! pinned at `lo` and `1`.
//!
//! Coefficients in the monomial basis grow roughly like `5^n`, so the
//! interpolation system and every polynomial evaluation run in double-double
//! arithmetic.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemezConfig {
    pub max_iterations: usize,
    /// Stop once max|r| / min|r| over the updated reference falls below this.
    pub ratio_tolerance: f64,
    /// Bisections stop when the bracket is narrower than this.
    pub bisection_width: f64,
    /// Exchange steps run after the ratio test passes, with bisections
    /// carried to floating-point resolution.
    pub polish_iterations: usize,
}

impl Default for RemezConfig {
    fn default() -> Self {
        RemezConfig {
            max_iterations: 100,
            ratio_tolerance: 1.001,
            bisection_width: 1e-13,
            polish_iterations: 3,
        }
    }
}

/// Best L∞ approximant `p` of `√t` on `[lo, 1]` with its equioscillation data.
#[derive(Debug, Clone)]
pub struct MinimaxPoly {
    degree: usize,
    lo: f64,
    coeffs: Vec<Dd>,
    /// Signed level: `r(t_i) = (-1)^i * signed_level`.
    signed_level: f64,
    extremals: Vec<f64>,
    iterations: usize,
}

impl MinimaxPoly {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Monomial coefficients `α_0..α_n`, rounded to `f64`.
    pub fn coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    /// Equioscillation magnitude `e > 0`.
    pub fn level(&self) -> f64 {
        self.signed_level.abs()
    }

    pub fn extremals(&self) -> &[f64] {
        &self.extremals
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn eval(&self, t: f64) -> f64 {
        horner(&self.coeffs, t).to_f64()
    }

    /// `r(t) = √t − p(t)`.
    pub fn residual(&self, t: f64) -> f64 {
        residual(&self.coeffs, t)
    }
}

fn horner(coeffs: &[Dd], t: f64) -> Dd {
    let t = Dd::new(t);
    coeffs.iter().rev().fold(Dd::ZERO, |acc, &c| acc * t + c)
}

fn residual(coeffs: &[Dd], t: f64) -> f64 {
    (Dd::new(t).sqrt() - horner(coeffs, t)).to_f64()
}

fn residual_slope(coeffs: &[Dd], t: f64) -> f64 {
    let t_dd = Dd::new(t);
    let mut acc = Dd::ZERO;
    for (j, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * t_dd + c * Dd::new(j as f64);
    }
    (Dd::ONE / (Dd::new(2.0) * t_dd.sqrt()) - acc).to_f64()
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub(crate) fn bisect<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    width: f64,
    what: &'static str,
) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::LostBracket { what, lo: a, hi: b });
    }
    let left_sign = fa.signum();
    while b - a > width {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == left_sign {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Solves `Σ α_j t_i^j + (-1)^i e = √t_i` on the reference.
fn levelled_solve(reference: &[f64]) -> Result<(Vec<Dd>, f64)> {
    let m = reference.len();
    let n = m - 2;
    let mut a = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, &t) in reference.iter().enumerate() {
        let td = Dd::new(t);
        let mut row = Vec::with_capacity(m);
        let mut p = Dd::ONE;
        for _ in 0..=n {
            row.push(p);
            p *= td;
        }
        row.push(if i % 2 == 0 { Dd::ONE } else { -Dd::ONE });
        a.push(row);
        rhs.push(td.sqrt());
    }
    let x = linalg::solve(a, rhs).map_err(|p| {
        Error::SingularSystem(format!("levelled Remez system, pivot column {}", p.col))
    })?;
    let level = x[n + 1].to_f64();
    Ok((x[..=n].to_vec(), level))
}

/// One exchange step: the new reference and its max|r| / min|r| ratio.
fn exchange(coeffs: &[Dd], reference: &[f64], lo: f64, width: f64) -> Result<(Vec<f64>, f64)> {
    let r = |t: f64| residual(coeffs, t);
    let slope = |t: f64| residual_slope(coeffs, t);

    let roots = reference
        .windows(2)
        .map(|w| bisect(r, w[0], w[1], width, "error root"))
        .collect::<Result<Vec<_>>>()?;

    let mut updated = Vec::with_capacity(reference.len());
    updated.push(lo);
    for w in roots.windows(2) {
        updated.push(bisect(slope, w[0], w[1], width, "error extremum")?);
    }
    updated.push(1.0);

    let (min, max) = updated
        .iter()
        .map(|&t| r(t).abs())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    Ok((updated, max / min))
}

pub fn remez_sqrt(n: usize, lo: f64) -> Result<MinimaxPoly> {
    remez_sqrt_with(n, lo, &RemezConfig::default())
}

pub fn remez_sqrt_with(n: usize, lo: f64, cfg: &RemezConfig) -> Result<MinimaxPoly> {
    if !(0.0..1.0).contains(&lo) {
        return Err(Error::invalid(format!("left endpoint {lo} outside [0, 1)")));
    }
    let mut reference: Vec<f64> = (0..n + 2)
        .map(|i| lo + (1.0 - lo) * i as f64 / (n + 1) as f64)
        .collect();
    reference[n + 1] = 1.0;

    let mut ratio = f64::INFINITY;
    for iteration in 1..=cfg.max_iterations {
        let (coeffs, signed_level) = levelled_solve(&reference)?;
        if n == 0 {
            return Ok(MinimaxPoly {
                degree: n,
                lo,
                coeffs,
                signed_level,
                extremals: reference,
                iterations: iteration,
            });
        }

        let (updated, r) = exchange(&coeffs, &reference, lo, cfg.bisection_width)?;
        ratio = r;
        reference = updated;

        if ratio < cfg.ratio_tolerance {
            for _ in 0..cfg.polish_iterations {
                let (coeffs, _) = levelled_solve(&reference)?;
                reference = exchange(&coeffs, &reference, lo, 0.0)?.0;
            }
            // Re-level on the final reference so r(t_i) = ±e holds exactly.
            let (coeffs, signed_level) = levelled_solve(&reference)?;
            return Ok(MinimaxPoly {
                degree: n,
                lo,
                coeffs,
                signed_level,
                extremals: reference,
                iterations: iteration,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        ratio,
    })
}

/// How a node set was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeScheme {
    /// Extremal points of the minimax approximation on `[lo, 1]`.
    Optimal { lo: f64 },
    /// `lo + (1 − lo)·i/(n+1)`.
    Equidistant { lo: f64 },
    /// `1/2 + cos(iπ/(n+1))/2`, sorted.
    Chebyshev,
    /// Caller-supplied points.
    Custom,
}

impl NodeScheme {
    pub fn name(&self) -> &'static str {
        match self {
            NodeScheme::Optimal { .. } => "optimal",
            NodeScheme::Equidistant { .. } => "equidistant",
            NodeScheme::Chebyshev => "chebyshev",
            NodeScheme::Custom => "custom",
        }
    }

    /// Left end of the node interval.
    pub fn lo(&self) -> f64 {
        match *self {
            NodeScheme::Optimal { lo } | NodeScheme::Equidistant { lo } => lo,
            NodeScheme::Chebyshev | NodeScheme::Custom => 0.0,
        }
    }

    /// Generates `n + 2` nodes.
    pub fn nodes(&self, n: usize) -> Result<NodeSet> {
        match *self {
            NodeScheme::Optimal { lo } => nodes_optimal(n, lo),
            NodeScheme::Equidistant { lo } => nodes_equidistant(n, lo),
            NodeScheme::Chebyshev => Ok(nodes_chebyshev(n)),
            NodeScheme::Custom => Err(Error::invalid(
                "custom node sets must be built with NodeSet::new",
            )),
        }
    }
}

/// Break points `s_0 < … < s_{n+1} = 1` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    scheme: NodeScheme,
    points: Vec<f64>,
}

impl NodeSet {
    pub fn new(scheme: NodeScheme, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("a node set needs at least two points"));
        }
        if points.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::invalid("nodes must lie in [0, 1]"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("nodes must be strictly increasing"));
        }
        if *points.last().unwrap() != 1.0 {
            return Err(Error::invalid("last node must be 1"));
        }
        Ok(NodeSet { scheme, points })
    }

    /// Number of interior degrees of freedom; there are `n + 2` points.
    pub fn n(&self) -> usize {
        self.points.len() - 2
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn scheme(&self) -> NodeScheme {
        self.scheme
    }
}

/// Nodes `s_i = √t_i` from the extremals of a minimax polynomial on `[lo², 1]`.
pub fn nodes_from_minimax(poly: &MinimaxPoly, lo: f64) -> Result<NodeSet> {
    let mut points: Vec<f64> = poly.extremals().iter().map(|t| t.sqrt()).collect();
    points[0] = lo;
    *points.last_mut().unwrap() = 1.0;
    NodeSet::new(NodeScheme::Optimal { lo }, points)
}

pub fn nodes_optimal(n: usize, lo: f64) -> Result<NodeSet> {
    if !(0.0..1.0).contains(&lo) {
        return Err(Error::invalid(format!("left endpoint {lo} outside [0, 1)")));
    }
    let poly = remez_sqrt(n, lo * lo)?;
    nodes_from_minimax(&poly, lo)
}

pub fn nodes_equidistant(n: usize, lo: f64) -> Result<NodeSet> {
    if !(0.0..1.0).contains(&lo) {
        return Err(Error::invalid(format!("left endpoint {lo} outside [0, 1)")));
    }
    let mut points: Vec<f64> = (0..n + 2)
        .map(|i| lo + (1.0 - lo) * i as f64 / (n + 1) as f64)
        .collect();
    points[n + 1] = 1.0;
    NodeSet::new(NodeScheme::Equidistant { lo }, points)
}

pub fn nodes_chebyshev(n: usize) -> NodeSet {
    let m = (n + 1) as f64;
    let mut points: Vec<f64> = (0..n + 2)
        .rev()
        .map(|i| 0.5 + (i as f64 * std::f64::consts::PI / m).cos() / 2.0)
        .collect();
    points[0] = 0.0;
    points[n + 1] = 1.0;
    NodeSet {
        scheme: NodeScheme::Chebyshev,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn degree_one_reproduces_worked_example() {
        let p = remez_sqrt(1, 0.0).unwrap();
        let c = p.coeffs();
        assert!(
            close(c[0], 0.125, 1e-12) && close(c[1], 1.0, 1e-12),
            "{c:?}"
        );
        assert!(close(p.level(), 0.125, 1e-12));
        let t = p.extremals();
        assert!(
            close(t[0], 0.0, 0.0) && close(t[1], 0.25, 1e-12) && t[2] == 1.0,
            "{t:?}"
        );
    }

    #[test]
    fn degree_zero_is_midrange() {
        let p = remez_sqrt(0, 0.0).unwrap();
        assert_eq!(p.coeffs(), vec![0.5]);
        assert_eq!(p.level(), 0.5);
        assert_eq!(p.extremals(), &[0.0, 1.0]);
    }

    #[test]
    fn residual_alternates_and_levels() {
        for n in 0..=15 {
            let p = remez_sqrt(n, 0.0).unwrap();
            let e = p.level();
            let t = p.extremals();
            assert_eq!(t.len(), n + 2);
            assert_eq!((t[0], t[n + 1]), (0.0, 1.0));
            let r: Vec<f64> = t.iter().map(|&x| p.residual(x)).collect();
            for w in r.windows(2) {
                assert!(w[0] * w[1] < 0.0, "n={n}: {r:?}");
            }
            for v in &r {
                assert!(v.abs() >= e / 1.001 && v.abs() <= e * 1.001, "n={n}");
            }
        }
    }

    #[test]
    fn level_sandwich_on_dense_grid() {
        for n in [1, 2, 5, 9, 15] {
            let p = remez_sqrt(n, 0.0).unwrap();
            let e = p.level();
            let grid_max = (0..=10_000)
                .map(|k| p.residual(k as f64 / 10_000.0).abs())
                .fold(0.0, f64::max);
            assert!(grid_max >= e * (1.0 - 1e-12), "n={n}");
            assert!(grid_max <= 1.001 * e, "n={n}: {grid_max} vs {e}");
        }
    }

    #[test]
    fn level_decreases_with_degree() {
        let levels: Vec<f64> = (0..=15)
            .map(|n| remez_sqrt(n, 0.0).unwrap().level())
            .collect();
        for w in levels.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(remez_sqrt(2, 1.0).is_err());
        assert!(remez_sqrt(2, -0.1).is_err());
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let cfg = RemezConfig {
            max_iterations: 1,
            ..RemezConfig::default()
        };
        match remez_sqrt_with(6, 0.0, &cfg) {
            Err(Error::NonConvergence { iterations: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bisection_requires_sign_change() {
        let e = bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-13, "test").unwrap_err();
        assert!(matches!(e, Error::LostBracket { .. }));
        let root = bisect(|x| x - 0.3, 0.0, 1.0, 1e-13, "test").unwrap();
        assert!((root - 0.3).abs() < 1e-13);
    }

    #[test]
    fn optimal_nodes_examples() {
        let s = nodes_optimal(1, 0.0).unwrap();
        assert!(close(s.points()[1], 0.5, 1e-12));
        assert_eq!(s.points()[0], 0.0);
        assert_eq!(nodes_optimal(0, 0.0).unwrap().points(), &[0.0, 1.0]);

        let s = nodes_optimal(1, 0.3).unwrap();
        let p = s.points();
        assert_eq!((p[0], p[2]), (0.3, 1.0));
        assert!(p[0] < p[1] && p[1] < p[2]);
        let poly = remez_sqrt(1, 0.09).unwrap();
        let r: Vec<f64> = poly.extremals().iter().map(|&t| poly.residual(t)).collect();
        assert!(r[0] * r[1] < 0.0 && r[1] * r[2] < 0.0);
    }

    #[test]
    fn optimal_nodes_square_to_extremals() {
        for n in [3, 8] {
            let poly = remez_sqrt(n, 0.0).unwrap();
            let s = nodes_from_minimax(&poly, 0.0).unwrap();
            for (si, ti) in s.points().iter().zip(poly.extremals()) {
                assert!((si * si - ti).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equidistant_examples() {
        assert_eq!(
            nodes_equidistant(1, 0.0).unwrap().points(),
            &[0.0, 0.5, 1.0]
        );
        assert_eq!(
            nodes_equidistant(3, 0.0).unwrap().points(),
            &[0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let p = nodes_equidistant(1, 0.1).unwrap();
        assert!(close(p.points()[1], 0.55, 1e-15));
        assert_eq!((p.points()[0], p.points()[2]), (0.1, 1.0));
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(nodes_chebyshev(0).points(), &[0.0, 1.0]);
        let p = nodes_chebyshev(1);
        assert!(close(p.points()[1], 0.5, 1e-15));
        let p = nodes_chebyshev(2);
        for (a, b) in p.points().iter().zip([0.0, 0.25, 0.75, 1.0]) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn schemes_agree_at_n_equal_one() {
        let o = nodes_optimal(1, 0.0).unwrap();
        let e = nodes_equidistant(1, 0.0).unwrap();
        let c = nodes_chebyshev(1);
        for i in 0..3 {
            assert!(close(o.points()[i], e.points()[i], 1e-12));
            assert!(close(c.points()[i], e.points()[i], 1e-15));
        }
    }

    #[test]
    fn node_set_validation() {
        assert!(NodeSet::new(NodeScheme::Custom, vec![0.5, 0.2, 1.0]).is_err());
        assert!(NodeSet::new(NodeScheme::Custom, vec![0.0, 0.9]).is_err());
        assert!(NodeSet::new(NodeScheme::Custom, vec![-0.1, 1.0]).is_err());
        assert!(NodeSet::new(NodeScheme::Custom, vec![0.2, 1.0]).is_ok());
    }
}
