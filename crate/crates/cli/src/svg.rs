//! Standalone SVG drawing of a curve with its clamped data.

use std::fmt::Write as _;
use std::path::Path;

use elastica_core::DiscreteCurve;

use crate::error::{CliError, Result};

/// SVG text: the node polyline, endpoint markers and arrows along the
/// prescribed tangents. Curves in more than two dimensions are drawn through
/// their first two coordinates.
pub fn snapshot_svg(curve: &DiscreteCurve) -> String {
    let d = curve.dim();
    if d > 2 {
        log::warn!("rendering the (coord_0, coord_1) projection of a {d}-dimensional curve");
    }
    let pts: Vec<(f64, f64)> = (0..curve.len()).map(|i| (curve.node(i)[0], curve.node(i)[1])).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let b = curve.boundary();
    let diag = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt().max(1e-12);
    let arrow = 0.1 * diag;
    let tips = [
        (b.p0[0] + arrow * b.tau0[0], b.p0[1] + arrow * b.tau0[1]),
        (b.p1[0] + arrow * b.tau1[0], b.p1[1] + arrow * b.tau1[1]),
    ];
    for &(x, y) in &tips {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (w, h) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
    let (mx, my) = (0.05 * w, 0.05 * h);
    // SVG y points down: draw (x, -y)
    let view = (x0 - mx, -y1 - my, w + 2.0 * mx, h + 2.0 * my);
    let stroke = 0.004 * diag;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        view.0,
        view.1,
        view.2,
        view.3,
        (800.0 * view.3 / view.2).round().clamp(1.0, 4000.0)
    )
    .unwrap();
    writeln!(
        s,
        r#"<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="crimson"/></marker></defs>"#
    )
    .unwrap();
    let poly: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{}", -y)).collect();
    writeln!(
        s,
        r#"<polyline fill="none" stroke="black" stroke-width="{stroke}" points="{}"/>"#,
        poly.join(" ")
    )
    .unwrap();
    for (p, tip) in [(&b.p0, tips[0]), (&b.p1, tips[1])] {
        writeln!(
            s,
            r#"<line class="tangent" x1="{}" y1="{}" x2="{}" y2="{}" stroke="crimson" stroke-width="{stroke}" marker-end="url(#head)"/>"#,
            p[0],
            -p[1],
            tip.0,
            -tip.1
        )
        .unwrap();
        writeln!(
            s,
            r#"<circle class="endpoint" cx="{}" cy="{}" r="{}" fill="crimson"/>"#,
            p[0],
            -p[1],
            3.0 * stroke
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_snapshot(curve: &DiscreteCurve, path: &Path) -> Result<()> {
    std::fs::write(path, snapshot_svg(curve)).map_err(CliError::io(path))
}
