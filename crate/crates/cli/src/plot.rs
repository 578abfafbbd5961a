//! Deterministic line plots as static SVG.

use std::fmt::Write;

use anyhow::{bail, Result};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let vals: Vec<f64> = values.map(|v| if log { v.log10() } else { v }).collect();
        let (mut lo, mut hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            let pad = if log { 0.5 } else { 0.5 * lo.abs().max(1.0) };
            lo -= pad;
            hi += pad;
        } else {
            let pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
        Self { lo, hi, log }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data units.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let step = ((b - a) / 6 + 1).max(1);
            return (a..=b).step_by(step as usize).map(|e| 10f64.powi(e)).collect();
        }
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the plot; empty input, non-finite values and nonpositive values on a log
/// axis are errors that list the offending rows.
pub fn render(plot: &Plot) -> Result<String> {
    if plot.series.is_empty() || plot.series.iter().any(|s| s.points.is_empty()) {
        bail!("plot series must be nonempty");
    }
    let mut bad = Vec::new();
    for s in &plot.series {
        for (i, &(x, y)) in s.points.iter().enumerate() {
            let ok = x.is_finite() && y.is_finite() && (!plot.log_x || x > 0.0) && (!plot.log_y || y > 0.0);
            if !ok {
                bad.push(format!("{}[{i}] = ({x}, {y})", s.label));
            }
        }
    }
    if !bad.is_empty() {
        bail!("plot values not finite or not positive on a log axis: {}", bad.join(", "));
    }
    let all = || plot.series.iter().flat_map(|s| s.points.iter());
    let xa = Axis::fit(all().map(|p| p.0), plot.log_x);
    let ya = Axis::fit(all().map(|p| p.1), plot.log_y);
    let (pw, ph) = (WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B);
    let px = |x: f64| MARGIN_L + xa.frac(x) * pw;
    let py = |y: f64| MARGIN_T + (1.0 - ya.frac(y)) * ph;

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#)?;
    writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(w, r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#, MARGIN_L + pw / 2.0, escape(&plot.title))?;
    writeln!(w, r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#)?;
    for t in xa.ticks() {
        let x = px(t);
        writeln!(w, r##"<line x1="{x:.2}" y1="{MARGIN_T}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, MARGIN_T + ph)?;
        writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_T + ph + 18.0, label(t))?;
    }
    for t in ya.ticks() {
        let y = py(t);
        writeln!(w, r##"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, MARGIN_L + pw)?;
        writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN_L - 6.0, y + 4.0, label(t))?;
    }
    let x_title = format!("{}{}", plot.x_label, if plot.log_x { " (log)" } else { "" });
    let y_title = format!("{}{}", plot.y_label, if plot.log_y { " (log)" } else { "" });
    writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_L + pw / 2.0, HEIGHT - 15.0, escape(&x_title))?;
    writeln!(
        w,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0,
        escape(&y_title)
    )?;
    for (k, s) in plot.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        if s.points.len() > 1 {
            let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            writeln!(w, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "))?;
        }
        for &(x, y) in &s.points {
            writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y))?;
        }
        let ly = MARGIN_T + 10.0 + 20.0 * k as f64;
        let lx = MARGIN_L + pw + 12.0;
        writeln!(w, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0)?;
        writeln!(w, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.label))?;
    }
    writeln!(w, "</svg>")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(series: Vec<Series>) -> Plot {
        Plot { title: "t".into(), x_label: "x".into(), y_label: "y".into(), log_x: false, log_y: true, series }
    }

    #[test]
    fn single_point_has_one_marker() {
        let svg = render(&plot(vec![Series::new("a", vec![(1.0, 2.0)])])).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(r#"width="800" height="600""#));
    }

    #[test]
    fn legend_lists_each_series() {
        let svg = render(&plot(vec![
            Series::new("first", vec![(1.0, 1.0), (2.0, 3.0)]),
            Series::new("second", vec![(1.0, 2.0), (2.0, 5.0)]),
        ]))
        .unwrap();
        assert!(svg.contains(">first<") && svg.contains(">second<"));
        assert_eq!(svg, render(&plot(vec![
            Series::new("first", vec![(1.0, 1.0), (2.0, 3.0)]),
            Series::new("second", vec![(1.0, 2.0), (2.0, 5.0)]),
        ])).unwrap());
    }

    #[test]
    fn rejects_empty_and_bad_values() {
        assert!(render(&plot(vec![])).is_err());
        assert!(render(&plot(vec![Series::new("a", vec![])])).is_err());
        let err = render(&plot(vec![Series::new("a", vec![(1.0, 1.0), (2.0, f64::NAN), (3.0, -1.0)])])).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("a[1]") && msg.contains("a[2]"), "{msg}");
    }
}
