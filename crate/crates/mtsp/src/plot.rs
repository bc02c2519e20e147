//! Deterministic SVG rendering of route layouts and convergence curves.
//! Output is plain text built with fixed formatting, so identical inputs
//! produce identical bytes.

use std::fmt::Write as _;

use crate::allocator::{Solution, TraceEntry};
use crate::error::{Error, Result};
use crate::instance::Instance;

const ROUTE_SIZE: f64 = 640.0;
const ROUTE_PAD: f64 = 24.0;

const CURVE_W: f64 = 640.0;
const CURVE_H: f64 = 400.0;
const CURVE_LEFT: f64 = 56.0;
const CURVE_RIGHT: f64 = 16.0;
const CURVE_TOP: f64 = 20.0;
const CURVE_BOTTOM: f64 = 40.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

fn agent_color(g: usize) -> &'static str {
    PALETTE[g % PALETTE.len()]
}

/// Draw the allocation: one colored closed polyline per agent (a `path`
/// element, present even for an idle agent), tasks as circles colored by
/// owner, depots as black triangles on top.
pub fn render_routes_svg(inst: &Instance, sol: &Solution) -> Result<String> {
    inst.validate()?;
    if sol.assignment.len() != inst.n || sol.routes.len() != inst.k {
        return Err(Error::InvalidInput(format!(
            "instance/solution size mismatch: instance is {}x{}, solution has {} assignments and {} routes",
            inst.k,
            inst.n,
            sol.assignment.len(),
            sol.routes.len()
        )));
    }
    for route in &sol.routes {
        for &t in &route.order {
            if t < inst.k || t >= inst.k + inst.n {
                return Err(Error::InvalidInput(format!(
                    "route for agent {} references global index {t} outside the task range",
                    route.agent
                )));
            }
        }
    }

    let (xmin, ymin, xmax, ymax) = match inst.region {
        Some(r) => (r.xmin, r.ymin, r.xmax, r.ymax),
        None => {
            let all = inst.depots.iter().chain(inst.tasks.iter());
            let mut xmin = f64::INFINITY;
            let mut ymin = f64::INFINITY;
            let mut xmax = f64::NEG_INFINITY;
            let mut ymax = f64::NEG_INFINITY;
            for p in all {
                xmin = xmin.min(p.x);
                ymin = ymin.min(p.y);
                xmax = xmax.max(p.x);
                ymax = ymax.max(p.y);
            }
            (xmin, ymin, xmax, ymax)
        }
    };
    let extent = (xmax - xmin).max(ymax - ymin).max(1e-9);
    let scale = (ROUTE_SIZE - 2.0 * ROUTE_PAD) / extent;
    let sx = |x: f64| ROUTE_PAD + (x - xmin) * scale;
    let sy = |y: f64| ROUTE_SIZE - ROUTE_PAD - (y - ymin) * scale;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = ROUTE_SIZE
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{s}" height="{s}" fill="white"/>"#,
        s = ROUTE_SIZE
    );

    for route in &sol.routes {
        let depot = inst.depots[route.agent];
        let mut dattr = format!("M {:.2} {:.2}", sx(depot.x), sy(depot.y));
        for &t in &route.order {
            let p = inst.tasks[t - inst.k];
            let _ = write!(dattr, " L {:.2} {:.2}", sx(p.x), sy(p.y));
        }
        dattr.push_str(" Z");
        let _ = writeln!(
            svg,
            r#"<path d="{dattr}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            agent_color(route.agent)
        );
    }

    for (i, p) in inst.tasks.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            sx(p.x),
            sy(p.y),
            agent_color(sol.assignment[i])
        );
    }

    for p in &inst.depots {
        let (cx, cy) = (sx(p.x), sy(p.y));
        let _ = writeln!(
            svg,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="black"/>"#,
            cx,
            cy - 6.0,
            cx - 5.2,
            cy + 4.0,
            cx + 5.2,
            cy + 4.0
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Draw max-cost and total-cost series against the iteration index on
/// linear axes. Every trace point gets a marker; connecting polylines
/// appear only when there are at least two points.
pub fn render_convergence_svg(trace: &[TraceEntry]) -> Result<String> {
    if trace.is_empty() {
        return Err(Error::InvalidInput("trace must be non-empty".to_string()));
    }
    let iter_min = trace.first().map(|t| t.iter).unwrap_or(0) as f64;
    let iter_max = trace.last().map(|t| t.iter).unwrap_or(0) as f64;
    let iter_span = (iter_max - iter_min).max(1.0);
    let y_max = trace
        .iter()
        .flat_map(|t| [t.max, t.total])
        .fold(0.0f64, f64::max)
        .max(1e-12)
        * 1.05;

    let plot_w = CURVE_W - CURVE_LEFT - CURVE_RIGHT;
    let plot_h = CURVE_H - CURVE_TOP - CURVE_BOTTOM;
    let sx = |iter: f64| CURVE_LEFT + (iter - iter_min) / iter_span * plot_w;
    // Screen y grows downward, so smaller costs map to larger y.
    let sy = |v: f64| CURVE_TOP + (1.0 - v / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CURVE_W}" height="{CURVE_H}" viewBox="0 0 {CURVE_W} {CURVE_H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{CURVE_W}" height="{CURVE_H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{CURVE_LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        CURVE_TOP + plot_h,
        CURVE_LEFT + plot_w,
        CURVE_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{CURVE_LEFT}" y1="{CURVE_TOP}" x2="{CURVE_LEFT}" y2="{:.2}" stroke="black"/>"#,
        CURVE_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">iteration</text>"#,
        CURVE_LEFT + plot_w / 2.0,
        CURVE_H - 8.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{:.3}</text>"#,
        CURVE_LEFT - 6.0,
        CURVE_TOP + 4.0,
        y_max
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">0</text>"#,
        CURVE_LEFT - 6.0,
        CURVE_TOP + plot_h + 4.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{iter_min}</text>"#,
        CURVE_LEFT + 4.0,
        CURVE_TOP + plot_h + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{iter_max}</text>"#,
        CURVE_LEFT + plot_w,
        CURVE_TOP + plot_h + 16.0
    );

    for (color, series) in [
        ("#1f77b4", trace.iter().map(|t| t.max).collect::<Vec<_>>()),
        ("#ff7f0e", trace.iter().map(|t| t.total).collect::<Vec<_>>()),
    ] {
        if trace.len() >= 2 {
            let points: Vec<String> = trace
                .iter()
                .zip(&series)
                .map(|(t, &v)| format!("{:.2},{:.2}", sx(t.iter as f64), sy(v)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                points.join(" ")
            );
        }
        for (t, &v) in trace.iter().zip(&series) {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                sx(t.iter as f64),
                sy(v)
            );
        }
    }

    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-size="12" fill="#1f77b4">max_cost</text>"##,
        CURVE_LEFT + plot_w - 80.0,
        CURVE_TOP + 14.0
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-size="12" fill="#ff7f0e">total_cost</text>"##,
        CURVE_LEFT + plot_w - 80.0,
        CURVE_TOP + 30.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
