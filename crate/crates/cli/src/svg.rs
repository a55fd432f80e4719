//! Minimal SVG line plots.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// `10 log10(y / max)`, clipped at -60 dB.
    Decibel,
}

const DB_FLOOR: f64 = -60.0;

fn transform(series: &[Series], scale: Scale) -> Vec<Series> {
    match scale {
        Scale::Linear => series.to_vec(),
        Scale::Decibel => {
            let peak = series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1))
                .fold(0.0f64, f64::max);
            series
                .iter()
                .map(|s| Series {
                    label: s.label.clone(),
                    points: s
                        .points
                        .iter()
                        .map(|&(x, y)| {
                            let db = if peak > 0.0 && y > 0.0 {
                                10.0 * (y / peak).log10()
                            } else {
                                DB_FLOOR
                            };
                            (x, db.max(DB_FLOOR))
                        })
                        .collect(),
                })
                .collect()
        }
    }
}

/// Renders one or more series as polylines on shared axes.
pub fn line_plot(title: &str, x_label: &str, series: &[Series], scale: Scale) -> String {
    let series = transform(series, scale);
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1) = all().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
        (a.min(p.0), b.max(p.0))
    });
    let (mut y0, mut y1) = all().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
        (a.min(p.1), b.max(p.1))
    });
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="25" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    let y_label = match scale {
        Scale::Linear => "linear",
        Scale::Decibel => "dB",
    };
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    )
    .unwrap();
    for (value, y) in [(y0, HEIGHT - MARGIN), (y1, MARGIN + 10.0)] {
        writeln!(svg, r#"<text x="4" y="{y}">{value:.3}</text>"#).unwrap();
    }
    for (value, x) in [(x0, MARGIN), (x1, WIDTH - MARGIN)] {
        writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle">{value:.3}</text>"#,
            HEIGHT - MARGIN + 15.0
        )
        .unwrap();
    }
    writeln!(svg, r#"<text x="4" y="{}">{y_label}</text>"#, MARGIN - 8.0).unwrap();
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            escape(&s.label)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_polyline_per_series() {
        let s = vec![
            Series {
                label: "a<b".into(),
                points: vec![(0.0, 1.0), (1.0, 0.0)],
            },
            Series {
                label: "c".into(),
                points: vec![(0.0, 0.5), (1.0, 0.25)],
            },
        ];
        let svg = line_plot("t", "x", &s, Scale::Decibel);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_plot_is_valid() {
        let svg = line_plot("empty", "x", &[], Scale::Linear);
        assert!(svg.starts_with("<svg"));
    }
}
