//! Minimal SVG charts: a scatter plot for sweeps and a cell map for
//! zero-mode counts.

use std::fmt::Write;

use ptchain::PhaseMap;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

pub const BRIGHT: &str = "#f5e50a";
pub const DARK: &str = "#000000";
const OTHER: &str = "#7f7f7f";

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        Frame { x: pad(x), y: pad(y) }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(svg: &mut String) {
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white" class="background"/>"#).unwrap();
}

fn tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{v:.4}")
    } else {
        format!("{v:.3e}")
    }
}

fn axes(svg: &mut String, frame: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    writeln!(svg, r#"<g class="axes" stroke="black" fill="none">"#).unwrap();
    writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#).unwrap();
    writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#).unwrap();
    writeln!(svg, "</g>").unwrap();
    writeln!(svg, r#"<g class="labels" font-family="sans-serif" font-size="12">"#).unwrap();
    let ty = y0 + 16.0;
    writeln!(svg, r#"<text x="{x0}" y="{ty}" text-anchor="start">{}</text>"#, tick(frame.x.0)).unwrap();
    writeln!(svg, r#"<text x="{x1}" y="{ty}" text-anchor="end">{}</text>"#, tick(frame.x.1)).unwrap();
    let tx = x0 - 6.0;
    writeln!(svg, r#"<text x="{tx}" y="{y0}" text-anchor="end">{}</text>"#, tick(frame.y.0)).unwrap();
    writeln!(svg, r#"<text x="{tx}" y="{}" text-anchor="end">{}</text>"#, y1 + 10.0, tick(frame.y.1)).unwrap();
    writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, (x0 + x1) / 2.0, HEIGHT - 10.0)
        .unwrap();
    let (lx, ly) = (16.0, (y0 + y1) / 2.0);
    writeln!(svg, r#"<text x="{lx}" y="{ly}" text-anchor="middle" transform="rotate(-90 {lx} {ly})">{ylabel}</text>"#)
        .unwrap();
    writeln!(svg, "</g>").unwrap();
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Scatter plot of `(x, y)` points, one circle each.
pub fn scatter(points: &[(f64, f64)], xlabel: &str, ylabel: &str) -> String {
    let finite: Vec<_> = points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let frame = if finite.is_empty() {
        Frame::new((0.0, 1.0), (0.0, 1.0))
    } else {
        Frame::new(bounds(finite.iter().map(|p| p.0)), bounds(finite.iter().map(|p| p.1)))
    };
    let mut svg = String::new();
    open(&mut svg);
    axes(&mut svg, &frame, xlabel, ylabel);
    writeln!(svg, r#"<g class="points" fill="navy">"#).unwrap();
    for (x, y) in finite {
        writeln!(svg, r#"<circle cx="{:.3}" cy="{:.3}" r="1.5"/>"#, frame.px(x), frame.py(y)).unwrap();
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

/// Cell map of zero-mode counts with mu across and gamma up: bright for 2,
/// dark for 0, grey for anything else.
pub fn cell_map(map: &PhaseMap) -> String {
    let (nm, ng) = (map.mu_axis.len(), map.gamma_axis.len());
    let half = |axis: &[f64]| if axis.len() > 1 { (axis[1] - axis[0]) / 2.0 } else { 0.5 };
    let (hm, hg) = (half(&map.mu_axis), half(&map.gamma_axis));
    let frame = Frame::new(
        (map.mu_axis[0] - hm, map.mu_axis[nm - 1] + hm),
        (map.gamma_axis[0] - hg, map.gamma_axis[ng - 1] + hg),
    );
    let mut svg = String::new();
    open(&mut svg);
    writeln!(svg, r#"<g class="cells" shape-rendering="crispEdges">"#).unwrap();
    for (i, &mu) in map.mu_axis.iter().enumerate() {
        for (j, &gamma) in map.gamma_axis.iter().enumerate() {
            let count = map.counts[i][j];
            let fill = match count {
                2 => BRIGHT,
                0 => DARK,
                _ => OTHER,
            };
            let (x0, x1) = (frame.px(mu - hm), frame.px(mu + hm));
            let (y0, y1) = (frame.py(gamma + hg), frame.py(gamma - hg));
            writeln!(
                svg,
                r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{fill}" data-mu="{mu}" data-gamma="{gamma}" data-count="{count}"/>"#,
                x1 - x0,
                y1 - y0
            )
            .unwrap();
        }
    }
    writeln!(svg, "</g>").unwrap();
    axes(&mut svg, &frame, "mu", "gamma");
    svg.push_str("</svg>\n");
    svg
}
