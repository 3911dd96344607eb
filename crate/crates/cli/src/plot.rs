//! Static SVG line charts: largest-component fraction against the
//! percentage of corrupted nodes, one curve per series.

use std::fmt::Write as _;

use robustnet::adversary::Strategy;
use robustnet::protocols::ProtocolKind;
use robustnet::MetricsOver;

use crate::error::{CliError, Result};
use crate::sweep::SweepRow;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 250.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 52.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct AxesSpec {
    pub title: String,
    pub metrics: Vec<MetricsOver>,
    /// Right end of the x axis in percent. Defaults to 90 for random
    /// failures and 30 for the targeted adversary.
    pub x_max: Option<f64>,
}

impl AxesSpec {
    pub fn new(title: impl Into<String>, metrics: Vec<MetricsOver>) -> Self {
        AxesSpec {
            title: title.into(),
            metrics,
            x_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub protocol: ProtocolKind,
    pub m: u32,
    pub q: f64,
    pub metric: MetricsOver,
    pub label: String,
    /// (percent corrupted, mean fraction) sorted by x.
    pub points: Vec<(f64, f64)>,
}

/// Groups rows into series, averaging replicates. With full participation
/// the participant series equals the overall one, so `q = 1` rows always
/// contribute their overall fraction as the reference curve.
pub fn build_series(rows: &[SweepRow], metrics: &[MetricsOver]) -> Vec<Series> {
    let many_q = rows.iter().any(|r| r.q != rows[0].q);
    let mut series: Vec<(Series, Vec<(f64, f64, usize)>)> = Vec::new();
    for r in rows {
        let wanted: Vec<MetricsOver> = if r.q >= 1.0 {
            vec![MetricsOver::All]
        } else {
            metrics.to_vec()
        };
        for metric in wanted {
            let Some(y) = r.fraction_over(metric) else {
                continue;
            };
            let idx = match series.iter().position(|(s, _)| {
                s.protocol == r.protocol && s.m == r.m && s.q == r.q && s.metric == metric
            }) {
                Some(i) => i,
                None => {
                    let s = Series {
                        protocol: r.protocol,
                        m: r.m,
                        q: r.q,
                        metric,
                        label: label(r.protocol, r.m, r.q, metric, many_q),
                        points: Vec::new(),
                    };
                    series.push((s, Vec::new()));
                    series.len() - 1
                }
            };
            let acc = &mut series[idx].1;
            let x = r.fraction * 100.0;
            match acc.iter_mut().find(|(px, _, _)| (*px - x).abs() < 1e-9) {
                Some(p) => {
                    p.1 += y;
                    p.2 += 1;
                }
                None => acc.push((x, y, 1)),
            }
        }
    }
    series
        .into_iter()
        .map(|(mut s, mut acc)| {
            acc.sort_by(|a, b| a.0.total_cmp(&b.0));
            s.points = acc
                .into_iter()
                .map(|(x, sum, k)| (x, sum / k as f64))
                .collect();
            s
        })
        .collect()
}

fn label(protocol: ProtocolKind, m: u32, q: f64, metric: MetricsOver, many_q: bool) -> String {
    let mut s = match protocol {
        ProtocolKind::None => "no enrichment".to_string(),
        _ if m == 0 => format!("{protocol} m=0 (none)"),
        _ => format!("{protocol} m={m}"),
    };
    if many_q || q < 1.0 {
        let _ = write!(s, " q={}", trim_float(q));
    }
    match metric {
        MetricsOver::All if q < 1.0 => s.push_str(" all"),
        MetricsOver::All => {}
        MetricsOver::Participants => s.push_str(" participants"),
        MetricsOver::NonParticipants => s.push_str(" non-participants"),
    }
    s
}

fn trim_float(x: f64) -> String {
    let s = format!("{x:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn default_x_max(rows: &[SweepRow]) -> f64 {
    let data_max = rows.iter().map(|r| r.fraction * 100.0).fold(0.0, f64::max);
    let nominal: f64 = if rows.iter().all(|r| r.adversary == Strategy::TargetedDegree) {
        30.0
    } else {
        90.0
    };
    nominal.max(data_max)
}

/// Renders the chart. Errors on empty input or when no row has a value
/// for the selected metrics.
pub fn emit_plot(rows: &[SweepRow], axes: &AxesSpec) -> Result<String> {
    if rows.is_empty() {
        return Err(CliError::usage("nothing to plot: no rows"));
    }
    let series = build_series(rows, &axes.metrics);
    if series.is_empty() {
        return Err(CliError::usage("nothing to plot for the selected metrics"));
    }
    let x_max = axes.x_max.unwrap_or_else(|| default_x_max(rows));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / x_max * plot_w;
    let sy = |y: f64| TOP + (1.0 - y) * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&axes.title)
    );

    // grid and ticks
    let x_step = if x_max <= 40.0 { 5.0 } else { 10.0 };
    let mut x = 0.0;
    while x <= x_max + 1e-9 {
        let px = sx(x);
        let _ = writeln!(
            w,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
            TOP,
            TOP + plot_h
        );
        let _ = writeln!(
            w,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            trim_float(x)
        );
        x += x_step;
    }
    for i in 0..=10 {
        let y = i as f64 / 10.0;
        let py = sy(y);
        let _ = writeln!(
            w,
            r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.1}</text>"#,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">corrupted nodes (%)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">fraction in largest component</text>"#,
        TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = match s.metric {
            MetricsOver::NonParticipants => r#" stroke-dasharray="6 4""#,
            _ => "",
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline class="series" data-label="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            escape(&s.label),
            pts.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                w,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = TOP + 10.0 + i as f64 * 20.0;
        let lx = LEFT + plot_w + 16.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash}/>"#,
            lx + 24.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
