//! Deterministic SVG renderer for curve and plane projections.
//!
//! Multiplicative objects are drawn in bridge (log) coordinates by
//! default, where the geometry is Euclidean; raw axes draw the positive
//! orthant values instead. Everything is emitted with fixed precision so
//! identical inputs produce identical bytes.

use mulgeo::{CurveJet, MNum, MPlane};

use crate::{CliError, Projection};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 16.0;
const MARGIN_B: f64 = 40.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
/// Half-width of the wireframe patch around a plane's anchor point, in
/// log units, and the number of rulings per direction.
const PLANE_SPAN: f64 = 3.0;
const PLANE_LINES: usize = 7;
const PLANE_POINTS: usize = 33;

pub struct PlotItem {
    pub label: String,
    pub geometry: Geometry,
}

pub enum Geometry {
    Curve(CurveJet),
    Plane(MPlane),
}

/// A polyline in projected plot coordinates.
struct Path {
    color: usize,
    points: Vec<(f64, f64)>,
}

pub fn render_plot(
    items: &[PlotItem],
    n: usize,
    projection: Projection,
    raw_axes: bool,
) -> Result<String, CliError> {
    if items.is_empty() {
        return Err(CliError::usage("nothing to plot; give at least one --curve or --spec"));
    }
    let mut paths = Vec::new();
    for (idx, item) in items.iter().enumerate() {
        match &item.geometry {
            Geometry::Curve(curve) => {
                paths.push(Path {
                    color: idx % PALETTE.len(),
                    points: curve_points(curve, n, projection, raw_axes)?,
                });
            }
            Geometry::Plane(plane) => {
                for line in plane_wireframe(plane, projection, raw_axes) {
                    paths.push(Path { color: idx % PALETTE.len(), points: line });
                }
            }
        }
    }

    let (lo, hi) = bounds(&paths)?;
    let to_px = |p: (f64, f64)| -> (f64, f64) {
        let sx = (WIDTH - MARGIN_L - MARGIN_R) / (hi.0 - lo.0);
        let sy = (HEIGHT - MARGIN_T - MARGIN_B) / (hi.1 - lo.1);
        (MARGIN_L + (p.0 - lo.0) * sx, HEIGHT - MARGIN_B - (p.1 - lo.1) * sy)
    };

    let (xa, ya) = projection.axis_names();
    let axis_label = |name: &str| {
        if raw_axes {
            name.to_string()
        } else {
            format!("log {name}")
        }
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    out.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#404040\"/>\n",
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    ));

    for k in 0..=4 {
        let fx = lo.0 + (hi.0 - lo.0) * k as f64 / 4.0;
        let fy = lo.1 + (hi.1 - lo.1) * k as f64 / 4.0;
        let (px, _) = to_px((fx, lo.1));
        let (_, py) = to_px((lo.0, fy));
        out.push_str(&format!(
            "<line x1=\"{px:.3}\" y1=\"{}\" x2=\"{px:.3}\" y2=\"{}\" stroke=\"#404040\"/>\n",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 4.0
        ));
        out.push_str(&format!(
            "<text x=\"{px:.3}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{fx:.2}</text>\n",
            HEIGHT - MARGIN_B + 16.0
        ));
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py:.3}\" x2=\"{MARGIN_L}\" y2=\"{py:.3}\" stroke=\"#404040\"/>\n",
            MARGIN_L - 4.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.3}\" font-size=\"10\" text-anchor=\"end\">{fy:.2}</text>\n",
            MARGIN_L - 6.0,
            py + 3.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.3}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2.0,
        HEIGHT - 8.0,
        axis_label(xa)
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {:.3})\">{}</text>\n",
        MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0,
        MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0,
        axis_label(ya)
    ));

    for path in &paths {
        let mut pts = String::new();
        for &p in &path.points {
            let (px, py) = to_px(p);
            pts.push_str(&format!("{px:.3},{py:.3} "));
        }
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            PALETTE[path.color],
            pts.trim_end()
        ));
    }

    for (idx, item) in items.iter().enumerate() {
        let y = MARGIN_T + 14.0 + 14.0 * idx as f64;
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.3}\" x2=\"{}\" y2=\"{y:.3}\" stroke=\"{}\" \
             stroke-width=\"1.5\"/>\n",
            MARGIN_L + 8.0,
            MARGIN_L + 28.0,
            PALETTE[idx % PALETTE.len()]
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.3}\" font-size=\"10\">{}</text>\n",
            MARGIN_L + 32.0,
            y + 3.0,
            escape(&item.label)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn curve_points(
    curve: &CurveJet,
    n: usize,
    projection: Projection,
    raw_axes: bool,
) -> Result<Vec<(f64, f64)>, CliError> {
    let (u0, u1) = curve.u_domain();
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let u = u0 + (i as f64 + 0.5) * (u1 - u0) / n as f64;
        let logs = curve.point(MNum::from_log(u))?.log_image();
        pts.push(project(logs, projection, raw_axes));
    }
    Ok(pts)
}

/// Rulings of the patch `anchor + alpha e1 + beta e2` of the plane's
/// log image, with `anchor` the point of the plane closest to the
/// origin of log coordinates.
fn plane_wireframe(plane: &MPlane, projection: Projection, raw_axes: bool) -> Vec<Vec<(f64, f64)>> {
    let nl = plane.normal.log_image();
    let d = plane.offset.log();
    let nn = nl[0] * nl[0] + nl[1] * nl[1] + nl[2] * nl[2];
    let anchor = [nl[0] * d / nn, nl[1] * d / nn, nl[2] * d / nn];

    // in-plane frame: cross the normal with its least-aligned axis
    let a = [nl[0].abs(), nl[1].abs(), nl[2].abs()];
    let least = if a[0] <= a[1] && a[0] <= a[2] {
        [1.0, 0.0, 0.0]
    } else if a[1] <= a[2] {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let cross = |u: [f64; 3], v: [f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let unit = |v: [f64; 3]| {
        let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / s, v[1] / s, v[2] / s]
    };
    let e1 = unit(cross(nl, least));
    let e2 = unit(cross(nl, e1));

    let mut lines = Vec::new();
    for i in 0..PLANE_LINES {
        let alpha = -PLANE_SPAN + 2.0 * PLANE_SPAN * i as f64 / (PLANE_LINES - 1) as f64;
        let mut along_e2 = Vec::with_capacity(PLANE_POINTS);
        let mut along_e1 = Vec::with_capacity(PLANE_POINTS);
        for j in 0..PLANE_POINTS {
            let beta = -PLANE_SPAN + 2.0 * PLANE_SPAN * j as f64 / (PLANE_POINTS - 1) as f64;
            let p1 = std::array::from_fn(|k| anchor[k] + alpha * e1[k] + beta * e2[k]);
            let p2 = std::array::from_fn(|k| anchor[k] + beta * e1[k] + alpha * e2[k]);
            along_e2.push(project(p1, projection, raw_axes));
            along_e1.push(project(p2, projection, raw_axes));
        }
        lines.push(along_e2);
        lines.push(along_e1);
    }
    lines
}

fn project(logs: [f64; 3], projection: Projection, raw_axes: bool) -> (f64, f64) {
    let coords = if raw_axes {
        [logs[0].exp(), logs[1].exp(), logs[2].exp()]
    } else {
        logs
    };
    match projection {
        Projection::Xy => (coords[0], coords[1]),
        Projection::Xz => (coords[0], coords[2]),
        Projection::Yz => (coords[1], coords[2]),
    }
}

/// Padded data bounds; degenerate extents widen to a unit box.
fn bounds(paths: &[Path]) -> Result<((f64, f64), (f64, f64)), CliError> {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in paths.iter().flat_map(|p| p.points.iter()) {
        lo.0 = lo.0.min(p.0);
        lo.1 = lo.1.min(p.1);
        hi.0 = hi.0.max(p.0);
        hi.1 = hi.1.max(p.1);
    }
    if !(lo.0.is_finite() && lo.1.is_finite() && hi.0.is_finite() && hi.1.is_finite()) {
        return Err(CliError::usage("plot data is empty or non-finite"));
    }
    let pad = |l: &mut f64, h: &mut f64| {
        let span = *h - *l;
        if span <= f64::EPSILON {
            *l -= 0.5;
            *h += 0.5;
        } else {
            *l -= 0.08 * span;
            *h += 0.08 * span;
        }
    };
    pad(&mut lo.0, &mut hi.0);
    pad(&mut lo.1, &mut hi.1);
    Ok((lo, hi))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
