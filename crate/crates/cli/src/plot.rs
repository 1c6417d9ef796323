//! Static SVG emission for sweep results: mean fraction against the game
//! parameter, one polyline per strategy.

use qevo_core::ensemble::SweepResult;
use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 110.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub fn sweep_svg(result: &SweepResult<f64>) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let params: Vec<f64> = result.points.iter().map(|p| p.param).collect();
    let x_min = params.iter().cloned().fold(f64::INFINITY, f64::min);
    let x_max = params.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let x_of = |p: f64| MARGIN_LEFT + (p - x_min) / span * plot_w;
    let y_of = |f: f64| MARGIN_TOP + (1.0 - f) * plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        result.scenario
    );

    // Axes and gridlines.
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let y = y_of(f);
        let _ = write!(
            svg,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##,
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{f:.2}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
    }
    for i in 0..=4 {
        let p = x_min + span * i as f64 / 4.0;
        let x = x_of(p);
        let _ = write!(
            svg,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/>"##,
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        );
        let _ = write!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{p:.2}</text>"#,
            MARGIN_TOP + plot_h + 18.0
        );
    }
    let _ = write!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#444"/>"##,
        MARGIN_LEFT, MARGIN_TOP
    );

    // Axis labels.
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        result.game.param_name()
    );
    let _ = write!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">mean fraction</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // One series per strategy, plus a legend swatch.
    for (s, label) in result.strategy_labels.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let mut points = String::new();
        for stats in &result.points {
            let _ = write!(
                points,
                "{:.2},{:.2} ",
                x_of(stats.param),
                y_of(stats.mean_fractions[s])
            );
        }
        let _ = write!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            points.trim_end()
        );
        for stats in &result.points {
            let _ = write!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.4" fill="{color}"/>"#,
                x_of(stats.param),
                y_of(stats.mean_fractions[s])
            );
        }
        let ly = MARGIN_TOP + 14.0 + 18.0 * s as f64;
        let lx = MARGIN_LEFT + plot_w + 16.0;
        let _ = write!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.8"/>"#,
            lx + 22.0
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}">{label}</text>"#,
            lx + 28.0,
            ly + 4.0
        );
    }

    svg.push_str("</svg>\n");
    svg
}
