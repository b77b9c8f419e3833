//! Minimal deterministic SVG line plots.
//!
//! Output depends only on the table contents and the plot spec: fixed
//! viewport, fixed palette, fixed number formatting, no timestamps.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiments::table::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#d62728", "#ff7f0e", "#9467bd", "#8c564b",
];

/// Which columns to draw.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_column: String,
    pub y_columns: Vec<String>,
    pub x_label: String,
    pub y_label: String,
}

impl PlotSpec {
    pub fn new(title: &str, x_column: &str, y_columns: &[&str], y_label: &str) -> Self {
        PlotSpec {
            title: title.to_string(),
            x_column: x_column.to_string(),
            y_columns: y_columns.iter().map(|c| c.to_string()).collect(),
            x_label: x_column.to_string(),
            y_label: y_label.to_string(),
        }
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders one polyline per y column against the x column.
pub fn emit_svg(data: &Table, spec: &PlotSpec) -> Result<String> {
    let xs = data.column(&spec.x_column)?;
    let series = spec
        .y_columns
        .iter()
        .map(|c| data.column(c).map(|v| (c.as_str(), v)))
        .collect::<Result<Vec<_>>>()?;
    if xs.is_empty() || series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (x0, x1) = padded_range(xs.iter().copied()).ok_or(Error::EmptySeries)?;
    let (y0, y1) = padded_range(series.iter().flat_map(|(_, v)| v.iter().copied()))
        .ok_or(Error::EmptySeries)?;

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * plot_h;

    let mut s = String::new();
    let w = &mut s;
    // writes into a String are infallible
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(
            w,
            r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{tx:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{xv:.3e}</text>"#,
            TOP + plot_h + 18.0
        );
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{LEFT:.2}" y2="{ty:.2}" stroke="black"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{yv:.3e}</text>"#,
            LEFT - 8.0,
            ty + 3.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(&spec.y_label)
    );
    for (k, (name, ys)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" data-series="{}" points="{}"/>"#,
            escape(name),
            points.join(" ")
        );
        let ly = TOP + 14.0 + 14.0 * k as f64;
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{ly:.2}" font-family="sans-serif" font-size="10" fill="{color}" text-anchor="end">{}</text>"#,
            WIDTH - RIGHT - 6.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
