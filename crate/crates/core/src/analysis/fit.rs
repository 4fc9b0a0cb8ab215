//! Ordinary least squares in log coordinates.

use serde::Serialize;

use crate::error::{Error, Result};

/// `y ≈ coeff · x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub coeff: f64,
    pub exponent: f64,
}

/// `y ≈ exp(intercept + slope · x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpLaw {
    pub intercept: f64,
    pub slope: f64,
}

fn check_positive(v: &[f64]) -> Result<()> {
    match v
        .iter()
        .enumerate()
        .find(|(_, &x)| !(x > 0.0 && x.is_finite()))
    {
        Some((index, &value)) => Err(Error::NonPositive { index, value }),
        None => Ok(()),
    }
}

/// Returns `(intercept, slope)` of the least-squares line through `(u, v)`.
fn line_fit(u: &[f64], v: &[f64]) -> Result<(f64, f64)> {
    if u.len() != v.len() {
        return Err(Error::invalid(format!(
            "{} abscissae for {} ordinates",
            u.len(),
            v.len()
        )));
    }
    if u.len() < 2 {
        return Err(Error::invalid("need at least two samples to fit a law"));
    }
    let n = u.len() as f64;
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let sxx: f64 = u.iter().map(|x| (x - mu) * (x - mu)).sum();
    let sxy: f64 = u.iter().zip(v).map(|(x, y)| (x - mu) * (y - mv)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("abscissae are all equal"));
    }
    let slope = sxy / sxx;
    Ok((mv - slope * mu, slope))
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLaw> {
    check_positive(xs)?;
    check_positive(ys)?;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (intercept, exponent) = line_fit(&lx, &ly)?;
    Ok(PowerLaw {
        coeff: intercept.exp(),
        exponent,
    })
}

pub fn fit_exp_law(xs: &[f64], ys: &[f64]) -> Result<ExpLaw> {
    check_positive(ys)?;
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (intercept, slope) = line_fit(xs, &ly)?;
    Ok(ExpLaw { intercept, slope })
}
