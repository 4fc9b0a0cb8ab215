//! The one-dimensional profile `g` and the radial bump `f` it induces.
//!
//! `g(s) = Σ μ_i (s_i − |s|)_+` is even and piecewise linear with kinks at
//! `±s_i`. In `d = 2m + 1` dimensions the bump is
//!
//! ```text
//! f(r) = c_d ∫_{-1}^{1} g(r s) (1 − s²)^{(d−3)/2} ds
//!      = 2 c_d ∫_0^1 g(r s) (1 − s²)^{(d−3)/2} ds
//! ```
//!
//! For fixed `r` the integrand is a polynomial between consecutive kinks
//! `s = s_i / r`, so the Simpson panels are split there.

use std::io::Write;

use rayon::prelude::*;

use crate::analysis::c_d;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::moments::DiscreteMeasure;
use crate::quad::{self, QuadConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileG {
    measure: DiscreteMeasure,
}

impl ProfileG {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn eval(&self, s: f64) -> f64 {
        let a = s.abs();
        self.measure
            .atoms()
            .map(|(si, mu)| mu * (si - a).max(0.0))
            .sum()
    }

    /// `g′(s)`; right derivative at kinks for `s > 0`, and `0` at the origin.
    pub fn derivative(&self, s: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let a = s.abs();
        let slope: f64 = -self
            .measure
            .atoms()
            .filter(|&(si, _)| si > a)
            .map(|(_, mu)| mu)
            .sum::<f64>();
        if s > 0.0 {
            slope
        } else {
            -slope
        }
    }

    /// `g′(0⁺)`; equals `μ_0` when `s_0 = 0`, and `0` for plateau measures.
    pub fn slope_at_origin(&self) -> f64 {
        -self
            .measure
            .atoms()
            .filter(|&(si, _)| si > 0.0)
            .map(|(_, mu)| mu)
            .sum::<f64>()
    }

    /// Sorted kink locations in `(0, 1]`.
    pub fn kinks(&self) -> Vec<f64> {
        self.measure
            .points()
            .iter()
            .copied()
            .filter(|&s| s > 0.0)
            .collect()
    }
}

pub fn build_g(m: DiscreteMeasure) -> ProfileG {
    ProfileG { measure: m }
}

const ROUNDING_ULPS: f64 = 256.0;

/// Radial bump in odd dimension `d`, stored by its profile.
#[derive(Debug, Clone)]
pub struct RadialBump {
    d: u32,
    g: ProfileG,
    quad: QuadConfig,
    cd: f64,
}

/// Dimension-reduced bump using the full moment set of `g`: `d = 2n + 1`.
pub fn build_f(g: ProfileG) -> RadialBump {
    let d = 2 * g.measure.n() as u32 + 1;
    match RadialBump::new(d.max(3), g) {
        Ok(b) => b,
        Err(e) => unreachable!("d = 2n + 1 is always admissible: {e}"),
    }
}

/// `f_{m,n}`: the profile of an `n`-moment measure in dimension `m_dim = 2m + 1 ≤ 2n + 1`.
pub fn mixed_profile(m_dim: u32, g: ProfileG) -> Result<RadialBump> {
    RadialBump::new(m_dim, g)
}

impl RadialBump {
    pub fn new(d: u32, g: ProfileG) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "dimension {d} must be odd and at least 3"
            )));
        }
        let m = (d as usize - 1) / 2;
        let n = g.measure.n();
        if m > n.max(1) {
            return Err(Error::invalid(format!(
                "dimension {d} needs {m} even moments but the measure only satisfies {n}"
            )));
        }
        Ok(RadialBump {
            d,
            g,
            quad: QuadConfig::default(),
            cd: c_d(d),
        })
    }

    pub fn with_quad(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn g(&self) -> &ProfileG {
        &self.g
    }

    pub fn quad(&self) -> QuadConfig {
        self.quad
    }

    pub fn cd(&self) -> f64 {
        self.cd
    }

    fn weight_power(&self) -> i32 {
        (self.d as i32 - 3) / 2
    }

    /// For each panel of the `s`-integral at radius `r`: `(panel, A, B)`
    /// with `g(r s) = A − r B s` on the panel.
    fn affine_panels(&self, r: f64) -> Vec<(quad::Panel, f64, f64)> {
        let ratios: Vec<f64> = self.g.measure.points().iter().map(|s| s / r).collect();
        let panels = quad::panels(0.0, 1.0, &ratios, self.quad.intervals());
        panels
            .into_iter()
            .map(|p| {
                let (mut a, mut b) = (0.0, 0.0);
                for ((&c, &s), &mu) in ratios
                    .iter()
                    .zip(self.g.measure.points())
                    .zip(self.g.measure.weights())
                {
                    if c >= p.b {
                        a += mu * s;
                        b += mu;
                    }
                }
                (p, a, b)
            })
            .collect()
    }

    pub fn eval_f(&self, r: f64) -> f64 {
        let r = r.abs();
        if r == 0.0 {
            return self.g.eval(0.0);
        }
        let k = self.weight_power();
        let total: f64 = self
            .affine_panels(r)
            .iter()
            .map(|&(p, a, b)| {
                quad::simpson(
                    |s| (a - r * b * s) * (1.0 - s * s).powi(k),
                    p.a,
                    p.b,
                    p.intervals,
                )
            })
            .sum();
        2.0 * self.cd * total
    }

    /// Radial derivative; at `r = 0` returns the slope of the linear segment.
    pub fn eval_f_prime(&self, r: f64) -> f64 {
        let r = r.abs();
        if r == 0.0 {
            return self.linear_slope();
        }
        let k = self.weight_power();
        let total: f64 = self
            .affine_panels(r)
            .iter()
            .map(|&(p, _, b)| {
                quad::simpson(|s| -b * s * (1.0 - s * s).powi(k), p.a, p.b, p.intervals)
            })
            .sum();
        2.0 * self.cd * total
    }

    /// Slope of `f` on `[0, s_1]`:
    /// `g′(0⁺)·∫₀¹ s w / ∫₀¹ w = 2 c_d g′(0⁺) / (d − 1)`.
    pub fn linear_slope(&self) -> f64 {
        2.0 * self.cd * self.g.slope_at_origin() / (self.d as f64 - 1.0)
    }

    /// Absolute accuracy floor of `eval_f`: the integrand cancels terms of
    /// size up to `2 c_d γ`, and the `f64` weights only satisfy the moment
    /// conditions to a few ulps of that.
    pub fn rounding_floor(&self) -> f64 {
        ROUNDING_ULPS * f64::EPSILON * 2.0 * self.cd * self.g.measure.gamma()
    }

    /// Right end of the segment on which `f` is affine.
    pub fn linear_segment_end(&self) -> f64 {
        self.g.kinks().first().copied().unwrap_or(1.0)
    }

    pub fn eval_many(&self, radii: &[f64]) -> Vec<f64> {
        radii.par_iter().map(|&r| self.eval_f(r)).collect()
    }

    pub fn eval_prime_many(&self, radii: &[f64]) -> Vec<f64> {
        radii.par_iter().map(|&r| self.eval_f_prime(r)).collect()
    }

    /// `∫_0^1 f(r) dr`.
    pub fn radial_l1(&self) -> f64 {
        integrate_unit_interval(|r| self.eval_f(r), &self.g.kinks(), self.quad, |_| 1.0)
    }

    /// Average of `f` over the unit ball: `d ∫_0^1 f(r) r^{d−1} dr`.
    pub fn ball_average(&self) -> f64 {
        let p = self.d as i32 - 1;
        self.d as f64
            * integrate_unit_interval(
                |r| self.eval_f(r),
                &self.g.kinks(),
                self.quad,
                |r| r.powi(p),
            )
    }

    /// Writes `r,f,f_prime` rows for the given radii.
    pub fn write_profile_csv<W: Write>(&self, out: W, radii: &[f64]) -> std::io::Result<()> {
        let f = self.eval_many(radii);
        let fp = self.eval_prime_many(radii);
        write_profile_rows(out, radii, &f, &fp)
    }
}

pub(crate) fn write_profile_rows<W: Write>(
    out: W,
    r: &[f64],
    f: &[f64],
    fp: &[f64],
) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["r", "f", "f_prime"])?;
    for ((r, f), fp) in r.iter().zip(f).zip(fp) {
        w.write_record([g17(*r), g17(*f), g17(*fp)])?;
    }
    w.flush()
}

/// `∫_0^1 h(r) weight(r) dr` by Simpson on panels split at `kinks`.
pub fn integrate_unit_interval<H, W>(h: H, kinks: &[f64], quad: QuadConfig, weight: W) -> f64
where
    H: Fn(f64) -> f64 + Sync,
    W: Fn(f64) -> f64 + Sync,
{
    quad::panels(0.0, 1.0, kinks, quad.intervals())
        .par_iter()
        .map(|p| quad::simpson(|r| h(r) * weight(r), p.a, p.b, p.intervals))
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

/// Default export grid: 1001 equispaced radii on `[0, 1.2]`.
pub fn default_radii() -> Vec<f64> {
    (0..=1000).map(|k| 1.2 * k as f64 / 1000.0).collect()
}

/// Closed-form bump for `d = 3` with nodes `(0, 1/2, 1)`.
pub fn closed_form_d3(r: f64) -> f64 {
    let r = r.abs();
    if r <= 0.5 {
        1.0 - 1.5 * r
    } else if r < 1.0 {
        r / 2.0 - 1.0 + 1.0 / (2.0 * r)
    } else {
        0.0
    }
}
