//! Minimal hand-emitted SVG plots: polyline charts, scatter plots and bar
//! charts. No styling beyond axes, ticks and a small legend.

use std::fs;
use std::path::Path;

use crate::error::Result;

const W: f64 = 720.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

const COLORS: &[&str] = &["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn open_svg(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{title}</text>\n",
        W / 2.0
    )
}

fn axes(out: &mut String, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) {
    let x0 = MARGIN;
    let y0 = H - MARGIN;
    let x1 = W - MARGIN;
    let y1 = MARGIN;
    out.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_range.0 + f * (x_range.1 - x_range.0);
        let yv = y_range.0 + f * (y_range.1 - y_range.0);
        let xp = x0 + f * (x1 - x0);
        let yp = y0 - f * (y0 - y1);
        out.push_str(&format!(
            "<line x1=\"{xp}\" y1=\"{y0}\" x2=\"{xp}\" y2=\"{}\" stroke=\"black\"/>\n\
             <text x=\"{xp}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{xv:.3}</text>\n",
            y0 + 5.0,
            y0 + 20.0
        ));
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{yp}\" x2=\"{x0}\" y2=\"{yp}\" stroke=\"black\"/>\n\
             <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{yv:.3}</text>\n",
            x0 - 5.0,
            x0 - 8.0,
            yp + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{x_label}</text>\n",
        (x0 + x1) / 2.0,
        H - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{y_label}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));
}

fn to_px(x: f64, y: f64, x_range: (f64, f64), y_range: (f64, f64)) -> (f64, f64) {
    let fx = (x - x_range.0) / (x_range.1 - x_range.0);
    let fy = (y - y_range.0) / (y_range.1 - y_range.0);
    (MARGIN + fx * (W - 2.0 * MARGIN), H - MARGIN - fy * (H - 2.0 * MARGIN))
}

/// Multi-series polyline chart.
pub fn line_plot(path: &Path, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
    let x_range = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let y_range = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let mut out = open_svg(title);
    axes(&mut out, x_label, y_label, x_range, y_range);
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y, x_range, y_range);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            W - MARGIN - 140.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            s.label
        ));
    }
    out.push_str("</svg>\n");
    fs::write(path, out)?;
    Ok(())
}

/// Scatter plot with one marker style per series.
pub fn scatter_plot(path: &Path, title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<()> {
    let x_range = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let y_range = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let mut out = open_svg(title);
    axes(&mut out, x_label, y_label, x_range, y_range);
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y, x_range, y_range);
            out.push_str(&format!(
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{color}\"/>\n"
            ));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            W - MARGIN - 140.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            s.label
        ));
    }
    out.push_str("</svg>\n");
    fs::write(path, out)?;
    Ok(())
}

/// Vertical bar chart of labeled values.
pub fn bar_chart(path: &Path, title: &str, y_label: &str, bars: &[(String, f64)]) -> Result<()> {
    let y_max = bars.iter().map(|b| b.1).fold(0.0f64, f64::max).max(1e-12);
    let mut out = open_svg(title);
    axes(&mut out, "", y_label, (0.0, bars.len() as f64), (0.0, y_max));
    let slot = (W - 2.0 * MARGIN) / bars.len() as f64;
    for (i, (label, v)) in bars.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let bh = (v / y_max) * (H - 2.0 * MARGIN);
        let x = MARGIN + i as f64 * slot + 0.15 * slot;
        let y = H - MARGIN - bh;
        out.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{bh:.2}\" fill=\"{color}\"/>\n",
            0.7 * slot
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{label}</text>\n",
            x + 0.35 * slot,
            H - MARGIN + 20.0
        ));
    }
    out.push_str("</svg>\n");
    fs::write(path, out)?;
    Ok(())
}
