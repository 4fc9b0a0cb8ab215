use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::lipschitz_bound;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::moments::solve_moment_system;
use crate::polyapprox::{remez_sqrt, NodeScheme};
use crate::profile::{build_f, build_g};
use crate::quad::QuadConfig;

pub const SWEEP_HEADER: [&str; 9] = [
    "d",
    "scheme",
    "gamma",
    "gamma_over_d",
    "remez_level",
    "lipschitz_bound",
    "max_abs_fprime",
    "radial_l1",
    "ball_avg",
];

/// Radii at which `|f′|` is sampled.
const FPRIME_SAMPLES: usize = 1001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub d: u32,
    pub scheme: &'static str,
    pub gamma: f64,
    pub gamma_over_d: f64,
    pub lipschitz_bound: f64,
    pub max_abs_fprime: f64,
    pub radial_l1: f64,
    pub ball_avg: f64,
    /// Minimax level of `√t` on `[lo², 1]` at degree `(d − 1)/2`.
    pub remez_level: f64,
}

impl SweepRecord {
    fn fields(&self) -> [String; 9] {
        [
            self.d.to_string(),
            self.scheme.to_string(),
            g17(self.gamma),
            g17(self.gamma_over_d),
            g17(self.remez_level),
            g17(self.lipschitz_bound),
            g17(self.max_abs_fprime),
            g17(self.radial_l1),
            g17(self.ball_avg),
        ]
    }
}

fn sweep_one(d: u32, scheme: &NodeScheme, quad: QuadConfig) -> Result<SweepRecord> {
    let n = (d as usize - 1) / 2;
    let measure = solve_moment_system(&scheme.nodes(n)?)?;
    let gamma = measure.gamma();
    let lip = lipschitz_bound(d, measure.tv_even());
    let lo = scheme.lo();
    let remez_level = remez_sqrt(n, lo * lo)?.level();
    let bump = build_f(build_g(measure)).with_quad(quad);
    let radii: Vec<f64> = (0..FPRIME_SAMPLES)
        .map(|k| k as f64 / (FPRIME_SAMPLES - 1) as f64)
        .collect();
    let max_abs_fprime = bump
        .eval_prime_many(&radii)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(SweepRecord {
        d,
        scheme: scheme.name(),
        gamma,
        gamma_over_d: gamma / d as f64,
        lipschitz_bound: lip,
        max_abs_fprime,
        radial_l1: bump.radial_l1(),
        ball_avg: bump.ball_average(),
        remez_level,
    })
}

/// One record per dimension, in the order of `d_list`.
pub fn run_sweep(
    d_list: &[u32],
    scheme: &NodeScheme,
    quad: QuadConfig,
) -> Result<Vec<SweepRecord>> {
    if let Some(&d) = d_list.iter().find(|&&d| d < 3 || d % 2 == 0) {
        return Err(Error::invalid(format!(
            "dimension {d} must be odd and at least 3"
        )));
    }
    d_list
        .par_iter()
        .map(|&d| sweep_one(d, scheme, quad))
        .collect()
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()
}
