//! CSV and SVG artifacts.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coa::IterationRecord;
use crate::pareto::{lexicographic, ArchivedPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExportError {
    #[error("nothing to plot: frontier and reference are both empty")]
    NothingToPlot,
    #[error("inconsistent frontier: {0}")]
    Inconsistent(String),
}

/// C `%.{sig}g` formatting, with `-0` written as `0`.
pub fn format_sig(v: f64, sig: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Twelve significant digits, the precision of every CSV field.
pub fn fmt12(v: f64) -> String {
    format_sig(v, 12)
}

/// Frontier table sorted by objective vector (then decision vector).
///
/// Columns: `x1..xn, f1..fk, efficiency, iteration`.
pub fn frontier_csv(points: &[ArchivedPoint]) -> Result<String, ExportError> {
    let (n, k) = match points.first() {
        Some(p) => (p.x.len(), p.f.len()),
        None => (0, 0),
    };
    if points.iter().any(|p| p.x.len() != n || p.f.len() != k) {
        return Err(ExportError::Inconsistent("ragged frontier".into()));
    }
    let mut sorted: Vec<&ArchivedPoint> = points.iter().collect();
    sorted.sort_by(|a, b| lexicographic(&a.f, &b.f).then_with(|| lexicographic(&a.x, &b.x)));

    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.extend((1..=k).map(|i| format!("f{i}")));
    header.push("efficiency".into());
    header.push("iteration".into());
    let mut out = header.join(",");
    out.push('\n');
    for p in sorted {
        let mut fields: Vec<String> = p.x.iter().chain(&p.f).map(|&v| fmt12(v)).collect();
        fields.push(fmt12(p.efficiency));
        fields.push(p.iteration.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn opt12(v: Option<f64>) -> String {
    v.map(fmt12).unwrap_or_default()
}

pub fn history_csv(history: &[IterationRecord]) -> String {
    let mut out = String::from(
        "iteration,evaluated,efficient,best_efficiency,mean_efficiency,survivors,archive_size,archive_hypervolume\n",
    );
    for r in history {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.iteration,
            r.evaluated,
            r.efficient,
            fmt12(r.best_efficiency),
            fmt12(r.mean_efficiency),
            r.survivors,
            r.archive_size,
            opt12(r.archive_hypervolume)
        );
    }
    out
}

/// Quality of one run's frontier against the grid reference front.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub problem: String,
    pub seed: u64,
    pub frontier_size: usize,
    pub generational_distance: f64,
    pub hypervolume: f64,
    pub spacing: f64,
    pub hv_reference: [f64; 2],
    pub reference_size: usize,
    pub reference_hypervolume: f64,
}

impl RunMetrics {
    const HEADER: &'static str = "problem,seed,frontier_size,generational_distance,hypervolume,spacing,hv_ref_f1,hv_ref_f2,reference_size,reference_hypervolume";

    fn fields(&self) -> [String; 10] {
        [
            self.problem.clone(),
            self.seed.to_string(),
            self.frontier_size.to_string(),
            fmt12(self.generational_distance),
            fmt12(self.hypervolume),
            fmt12(self.spacing),
            fmt12(self.hv_reference[0]),
            fmt12(self.hv_reference[1]),
            self.reference_size.to_string(),
            fmt12(self.reference_hypervolume),
        ]
    }

    pub fn csv(&self) -> String {
        format!("{}\n{}\n", Self::HEADER, self.fields().join(","))
    }

    /// The stdout line; numbers are the same strings as in [`RunMetrics::csv`].
    pub fn summary_line(&self) -> String {
        let f = self.fields();
        format!(
            "{} seed={} points={} gd={} hv={} spacing={} hv_ref=({},{}) ref_points={} ref_hv={}",
            f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9]
        )
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const PAD_LEFT: f64 = 70.0;
const PAD_RIGHT: f64 = 20.0;
const PAD_TOP: f64 = 40.0;
const PAD_BOTTOM: f64 = 50.0;

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Axis range padded by 5% of its span on each side.
fn padded_range(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let pad = if span > 0.0 { 0.05 * span } else { 0.05 * lo.abs().max(1.0) };
    (lo - pad, hi + pad)
}

/// Scatter of `frontier` over a polyline of `reference`, both in objective
/// space `(f1, f2)`. Output depends only on the inputs.
pub fn frontier_svg(title: &str, frontier: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<String, ExportError> {
    if frontier.is_empty() && reference.is_empty() {
        return Err(ExportError::NothingToPlot);
    }
    if frontier.iter().chain(reference).any(|p| p.len() < 2) {
        return Err(ExportError::Inconsistent("points need two objectives".into()));
    }
    let all = frontier.iter().chain(reference);
    let (x0, x1) = padded_range(all.clone().map(|p| p[0]));
    let (y0, y1) = padded_range(all.map(|p| p[1]));
    let plot_w = WIDTH - PAD_LEFT - PAD_RIGHT;
    let plot_h = HEIGHT - PAD_TOP - PAD_BOTTOM;
    let sx = |v: f64| PAD_LEFT + (v - x0) / (x1 - x0) * plot_w;
    let sy = |v: f64| PAD_TOP + (y1 - v) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        xml_escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD_LEFT:.2}" y="{PAD_TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let vx = x0 + t * (x1 - x0);
        let vy = y0 + t * (y1 - y0);
        let px = sx(vx);
        let py = sy(vy);
        let base = HEIGHT - PAD_BOTTOM;
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{base:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            base + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            base + 18.0,
            format_sig(vx, 4)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{PAD_LEFT:.2}" y2="{py:.2}" stroke="black"/>"#,
            PAD_LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            PAD_LEFT - 8.0,
            py + 4.0,
            format_sig(vy, 4)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">f1</text>"#,
        PAD_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">f2</text>"#,
        PAD_TOP + plot_h / 2.0,
        PAD_TOP + plot_h / 2.0
    );

    if !reference.is_empty() {
        let mut r: Vec<&Vec<f64>> = reference.iter().collect();
        r.sort_by(|a, b| lexicographic(a, b));
        let pts: Vec<String> = r.iter().map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1]))).collect();
        let _ = writeln!(
            s,
            r##"<polyline class="reference" points="{}" fill="none" stroke="#888888" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    let mut f: Vec<&Vec<f64>> = frontier.iter().collect();
    f.sort_by(|a, b| lexicographic(a, b));
    for p in f {
        let _ = writeln!(
            s,
            r##"<circle class="frontier" cx="{:.2}" cy="{:.2}" r="3" fill="#d62728" fill-opacity="0.8"/>"##,
            sx(p[0]),
            sy(p[1])
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
