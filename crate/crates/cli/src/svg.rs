//! Static SVG plots: markers, polylines and bars on a single pair of axes.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

pub const BLUE: &str = "#1f77b4";
pub const RED: &str = "#d62728";
pub const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mark {
    Circle,
    Cross,
    Line,
    /// Vertical bars of the given width in data units, rising from y = 0.
    Bars(f64),
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub mark: Mark,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, color: &str, mark: Mark, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color: color.to_string(),
            mark,
            points,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    pub series: Vec<Series>,
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            ..Self::default()
        }
    }

    pub fn with_x_range(mut self, lo: f64, hi: f64) -> Self {
        self.x_range = Some((lo, hi));
        self
    }

    pub fn push(&mut self, series: Series) {
        self.series.push(series);
    }

    fn data_range(&self, pick: impl Fn(&(f64, f64)) -> f64, include_zero: bool) -> (f64, f64) {
        let values = self.series.iter().flat_map(|s| s.points.iter().map(&pick));
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if include_zero {
            lo = lo.min(0.0);
            hi = hi.max(0.0);
        }
        let (plo, phi) = padded(lo, hi);
        if include_zero && lo == 0.0 {
            (0.0, phi)
        } else {
            (plo, phi)
        }
    }

    pub fn render(&self) -> String {
        let bars = self.series.iter().any(|s| matches!(s.mark, Mark::Bars(_)));
        let (x0, x1) = self.x_range.unwrap_or_else(|| {
            let pad = self
                .series
                .iter()
                .filter_map(|s| match s.mark {
                    Mark::Bars(w) => Some(w / 2.0),
                    _ => None,
                })
                .fold(0.0, f64::max);
            let (lo, hi) = self.data_range(|p| p.0, false);
            (lo - pad, hi + pad)
        });
        let (y0, y1) = self.y_range.unwrap_or_else(|| self.data_range(|p| p.1, bars));
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );

        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{0:.2}" x2="{px:.2}" y2="{1:.2}" stroke="black"/><text x="{px:.2}" y="{2:.2}" text-anchor="middle">{3}</text>"#,
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{0:.2}" y1="{py:.2}" x2="{LEFT:.2}" y2="{py:.2}" stroke="black"/><text x="{1:.2}" y="{2:.2}" text-anchor="end">{3}</text>"#,
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for series in &self.series {
            let c = &series.color;
            match series.mark {
                Mark::Line => {
                    let pts: Vec<String> = series
                        .points
                        .iter()
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                        .collect();
                    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{c}"/>"#, pts.join(" "));
                }
                Mark::Circle => {
                    for &(x, y) in &series.points {
                        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{c}"/>"#, sx(x), sy(y));
                    }
                }
                Mark::Cross => {
                    for &(x, y) in &series.points {
                        let (px, py) = (sx(x), sy(y));
                        let _ = writeln!(
                            s,
                            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{c}"/>"#,
                            px - 3.0,
                            py - 3.0,
                            px + 3.0,
                            py + 3.0,
                            px - 3.0,
                            py + 3.0,
                            px + 3.0,
                            py - 3.0
                        );
                    }
                }
                Mark::Bars(w) => {
                    for &(x, y) in &series.points {
                        let (left, right) = (sx(x - w / 2.0), sx(x + w / 2.0));
                        let (top, base) = (sy(y.max(0.0)), sy(y.min(0.0)));
                        let _ = writeln!(
                            s,
                            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{c}" stroke="black"/>"#,
                            right - left,
                            base - top
                        );
                    }
                }
            }
        }

        for (i, series) in self.series.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT + 15.0;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                y - 9.0,
                series.color,
                x + 15.0,
                y,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
