//! Deterministic SVG line charts of exported profile and sweep CSVs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_Y: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log: bool,
    pub series: Vec<Series>,
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if header.is_empty() || rows.is_empty() {
        return Err(Error::invalid(format!(
            "{} has no data rows",
            path.display()
        )));
    }
    Ok((header, rows))
}

fn column(header: &[String], name: &str, path: &Path) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::invalid(format!("{} lacks a '{name}' column", path.display())))
}

fn number(s: &str, path: &Path) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::invalid(format!("{}: '{s}' is not a number", path.display())))
}

/// One polyline of `f` against `r` per profile CSV.
pub fn profile_chart(inputs: &[&Path], log: bool) -> Result<Chart> {
    let mut series = Vec::new();
    for path in inputs {
        let (header, rows) = read_table(path)?;
        let (ri, fi) = (column(&header, "r", path)?, column(&header, "f", path)?);
        let points = rows
            .iter()
            .map(|row| Ok((number(&row[ri], path)?, number(&row[fi], path)?)))
            .collect::<Result<Vec<_>>>()?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        series.push(Series { label, points });
    }
    Ok(Chart {
        title: "radial profiles".into(),
        x_label: "r".into(),
        y_label: "f(r)".into(),
        log,
        series,
    })
}

/// `gamma` against `d`, one polyline per scheme, from sweep CSVs.
pub fn sweep_chart(inputs: &[&Path], log: bool) -> Result<Chart> {
    let mut by_scheme: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for path in inputs {
        let (header, rows) = read_table(path)?;
        let (di, si, gi) = (
            column(&header, "d", path)?,
            column(&header, "scheme", path)?,
            column(&header, "gamma", path)?,
        );
        for row in &rows {
            by_scheme
                .entry(row[si].clone())
                .or_default()
                .push((number(&row[di], path)?, number(&row[gi], path)?));
        }
    }
    let series = by_scheme
        .into_iter()
        .map(|(label, mut points)| {
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series { label, points }
        })
        .collect();
    Ok(Chart {
        title: "norm versus dimension".into(),
        x_label: "d".into(),
        y_label: "gamma".into(),
        log,
        series,
    })
}

/// Picks the chart kind from the first file's header.
pub fn chart_from_csv(inputs: &[&Path], log: bool) -> Result<Chart> {
    let first = inputs
        .first()
        .ok_or_else(|| Error::invalid("no input files"))?;
    let (header, _) = read_table(first)?;
    if header.iter().any(|h| h == "gamma") {
        sweep_chart(inputs, log)
    } else {
        profile_chart(inputs, log)
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = values
            .map(|v| if log { v.log10() } else { v })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                (a.min(v), b.max(v))
            });
        if !lo.is_finite() || !hi.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        Axis { lo, hi, log }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn label(&self, t: f64) -> String {
        let v = self.lo + t * (self.hi - self.lo);
        let v = if self.log { 10f64.powf(v) } else { v };
        format!("{v:.3}")
    }
}

/// Renders the chart; identical charts produce identical bytes.
pub fn render_svg(chart: &Chart) -> String {
    let usable = |p: &&(f64, f64)| {
        p.0.is_finite() && p.1.is_finite() && (!chart.log || (p.0 > 0.0 && p.1 > 0.0))
    };
    let pts = || {
        chart
            .series
            .iter()
            .flat_map(|s| s.points.iter().filter(usable))
    };
    let xa = Axis::fit(pts().map(|p| p.0), chart.log);
    let ya = Axis::fit(pts().map(|p| p.1), chart.log);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let px = |x: f64| MARGIN_LEFT + xa.unit(x) * plot_w;
    let py = |y: f64| MARGIN_Y + (1.0 - ya.unit(y)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(&chart.title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let x = MARGIN_LEFT + t * plot_w;
        let y = MARGIN_Y + (1.0 - t) * plot_h;
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN_Y + 16.0,
            xa.label(t)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            ya.label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 6.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">{}</text>"#,
        MARGIN_Y + plot_h / 2.0,
        MARGIN_Y + plot_h / 2.0,
        escape(&chart.y_label)
    );

    for (i, s) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .filter(usable)
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = MARGIN_Y + 16.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#,
            lx + 26.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
