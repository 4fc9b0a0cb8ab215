//! Composite Simpson quadrature on panels split at known kinks.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadConfig {
    /// Total Simpson points over the integration interval (odd, ≥ 11).
    pub points: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { points: 1001 }
    }
}

impl QuadConfig {
    pub fn new(points: usize) -> Option<Self> {
        (points >= 11 && points % 2 == 1).then_some(QuadConfig { points })
    }

    pub fn doubled(self) -> Self {
        QuadConfig {
            points: 2 * self.points - 1,
        }
    }

    pub fn intervals(self) -> usize {
        self.points - 1
    }
}

/// Composite Simpson with `m` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    debug_assert!(m >= 2 && m.is_multiple_of(2));
    let h = (b - a) / m as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..m {
        let x = a + k as f64 * h;
        if k % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b))
}

/// A panel `[a, b]` with its (even) Simpson subinterval count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub intervals: usize,
}

/// Splits `[a, b]` at the sorted `breaks` strictly inside it and shares
/// `intervals` subintervals between the panels in proportion to length.
/// Each panel gets at least two.
pub fn panels(a: f64, b: f64, breaks: &[f64], intervals: usize) -> Vec<Panel> {
    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(a);
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.dedup();
    let len = b - a;
    edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let share = intervals as f64 * (w[1] - w[0]) / len;
            let m = 2 * ((share / 2.0).round() as usize).max(1);
            Panel {
                a: w[0],
                b: w[1],
                intervals: m,
            }
        })
        .collect()
}

/// Composite Simpson over kink-aware panels.
pub fn piecewise_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    intervals: usize,
) -> f64 {
    panels(a, b, breaks, intervals)
        .iter()
        .map(|p| simpson(&f, p.a, p.b, p.intervals))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fourth_order_convergence() {
        let exact = 1.0 - (-1.0f64).exp();
        let e1 = (simpson(|x| (-x).exp(), 0.0, 1.0, 10) - exact).abs();
        let e2 = (simpson(|x| (-x).exp(), 0.0, 1.0, 20) - exact).abs();
        let order = (e1 / e2).log2();
        assert!((order - 4.0).abs() < 0.1, "{order}");
    }

    #[test]
    fn panels_cover_interval_and_respect_breaks() {
        let p = panels(0.0, 1.0, &[0.0, 0.3, 0.7, 1.5], 100);
        assert_eq!(p.len(), 3);
        assert_eq!((p[0].a, p[0].b), (0.0, 0.3));
        assert_eq!((p[2].a, p[2].b), (0.7, 1.0));
        assert!(p.iter().all(|q| q.intervals % 2 == 0 && q.intervals >= 2));
        assert_eq!(p.iter().map(|q| q.intervals).sum::<usize>(), 100);
    }

    #[test]
    fn kinked_integrand_is_exact_when_split() {
        let f = |x: f64| (x - 0.37).abs();
        let exact = 0.37 * 0.37 / 2.0 + 0.63 * 0.63 / 2.0;
        assert!((piecewise_simpson(f, 0.0, 1.0, &[0.37], 10) - exact).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(QuadConfig::new(1001).is_some());
        assert!(QuadConfig::new(1000).is_none());
        assert!(QuadConfig::new(9).is_none());
        assert_eq!(QuadConfig::default().doubled().points, 2001);
    }
}
