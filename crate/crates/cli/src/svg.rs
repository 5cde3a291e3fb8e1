//! Minimal SVG 1.1 line charts with a fixed 800x600 viewport.
//!
//! Output depends only on the input numbers, so identical data yields
//! identical bytes.

use std::fmt::Write;

use crate::error::{CliError, CliResult};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub series: Vec<Series>,
}

/// Step of 1, 2 or 5 times a power of ten giving at most `max_ticks` intervals.
pub fn nice_step(span: f64, max_ticks: usize) -> f64 {
    let raw = span / max_ticks as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Axis range widened to whole steps, plus the tick positions inside it.
pub fn nice_ticks(lo: f64, hi: f64, max_ticks: usize) -> (f64, f64, Vec<f64>) {
    let (lo, hi) = if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    };
    let step = nice_step(hi - lo, max_ticks);
    let start = (lo / step - 1e-9).floor();
    let stop = (hi / step + 1e-9).ceil();
    let ticks = (start as i64..=stop as i64)
        .map(|k| k as f64 * step)
        .collect();
    (start * step, stop * step, ticks)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Chart {
    pub fn render(&self) -> CliResult<String> {
        if self.x.len() < 2 || self.series.is_empty() {
            return Err(CliError::EmptyData);
        }
        if self.series.iter().any(|s| s.y.len() != self.x.len()) {
            return Err(CliError::Usage("series length differs from x".into()));
        }
        let finite = |v: &&f64| v.is_finite();
        let (x_min, x_max) = min_max(self.x.iter().filter(finite).copied());
        let (y_min, y_max) = min_max(
            self.series
                .iter()
                .flat_map(|s| s.y.iter().filter(finite).copied()),
        );
        let (x0, x1, x_ticks) = nice_ticks(x_min, x_max, 8);
        let (y0, y1, y_ticks) = nice_ticks(y_min, y_max, 8);
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut out = String::new();
        let w = &mut out;
        writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        )
        .unwrap();
        writeln!(
            w,
            r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="28" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        )
        .unwrap();

        let x_step = x_ticks.get(1).map_or(1.0, |t| t - x_ticks[0]);
        for &t in &x_ticks {
            let x = px(t);
            writeln!(
                w,
                r##"<line x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
                TOP + plot_h
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
                TOP + plot_h + 18.0,
                tick_label(t, x_step)
            )
            .unwrap();
        }
        let y_step = y_ticks.get(1).map_or(1.0, |t| t - y_ticks[0]);
        for &t in &y_ticks {
            let y = py(t);
            writeln!(
                w,
                r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##,
                LEFT + plot_w
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
                LEFT - 8.0,
                y + 4.0,
                tick_label(t, y_step)
            )
            .unwrap();
        }
        writeln!(
            w,
            r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="20" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 20 {:.2})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for (k, s) in self.series.iter().enumerate() {
            let points: Vec<String> = self
                .x
                .iter()
                .zip(&s.y)
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            writeln!(
                w,
                r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
                PALETTE[k % PALETTE.len()],
                points.join(" ")
            )
            .unwrap();
        }

        let lx = LEFT + plot_w - 160.0;
        writeln!(
            w,
            r##"<rect x="{:.2}" y="{:.2}" width="150.00" height="{:.2}" fill="white" fill-opacity="0.9" stroke="#999999"/>"##,
            lx - 8.0,
            TOP + 6.0,
            20.0 * self.series.len() as f64 + 8.0
        )
        .unwrap();
        for (k, s) in self.series.iter().enumerate() {
            let ly = TOP + 20.0 + 20.0 * k as f64;
            writeln!(
                w,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/>"#,
                lx + 30.0,
                PALETTE[k % PALETTE.len()]
            )
            .unwrap();
            writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
                lx + 38.0,
                ly + 4.0,
                escape(&s.label)
            )
            .unwrap();
        }
        writeln!(w, "</svg>").unwrap();
        Ok(out)
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}
