//! Deterministic SVG rendering. Coordinates are y-up (the mathematical
//! convention of the figures): the page transform flips the axis, so a
//! point `(x, y)` lands at `(x, height - y)` in SVG space. All floats are
//! printed with four decimals and collections are iterated in sorted
//! order, so identical inputs produce byte-identical output.

use crate::atbd::AlmostToricDiagram2D;
use crate::complex::DualComplex;
use std::fmt::Write as _;

const PALETTE: [&str; 8] = [
    "#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn fmt(v: f64) -> String {
    // avoid "-0.0000"
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.4}")
}

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
    height: f64,
    margin: f64,
}

impl Frame {
    fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64, target: f64) -> Frame {
        let w = (max_x - min_x).max(1e-9);
        let h = (max_y - min_y).max(1e-9);
        let scale = target / w.max(h);
        Frame {
            min_x,
            min_y,
            scale,
            height: h * scale,
            margin: 24.0,
        }
    }

    fn point(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.margin + (x - self.min_x) * self.scale,
            self.margin + self.height - (y - self.min_y) * self.scale,
        )
    }

    fn size(&self, content_width: f64) -> (f64, f64) {
        (
            content_width * self.scale + 2.0 * self.margin,
            self.height + 2.0 * self.margin,
        )
    }
}

fn svg_header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(w),
        fmt(h),
        fmt(w),
        fmt(h)
    )
}

fn cross(out: &mut String, x: f64, y: f64, r: f64, colour: &str) {
    let _ = writeln!(
        out,
        "<path d=\"M {} {} L {} {} M {} {} L {} {}\" stroke=\"{colour}\" stroke-width=\"1.5\" />",
        fmt(x - r),
        fmt(y - r),
        fmt(x + r),
        fmt(y + r),
        fmt(x - r),
        fmt(y + r),
        fmt(x + r),
        fmt(y - r),
    );
}

/// Render a 2D almost toric base diagram: solid polygon edges (coloured by
/// label), dotted branch cuts ending in a cross at the node, and dots on
/// the interior integral points of the edges.
pub fn render_diagram2d(d: &AlmostToricDiagram2D) -> String {
    let (min_x, min_y, max_x, max_y) = d.bounds_f64();
    let frame = Frame::new(min_x, min_y, max_x, max_y, 420.0);
    let (w, h) = frame.size(max_x - min_x);
    let mut out = svg_header(w, h);

    // stable label -> colour assignment
    let mut labels: Vec<&str> = d
        .edge_labels
        .iter()
        .flatten()
        .map(|s| s.as_str())
        .collect();
    labels.sort();
    labels.dedup();
    let colour_of = |label: &Option<String>| -> &str {
        match label {
            Some(l) => {
                let idx = labels.iter().position(|x| *x == l).unwrap_or(0);
                PALETTE[idx % PALETTE.len()]
            }
            None => "#000000",
        }
    };

    let n = d.polygon.len();
    for i in 0..n {
        let a = d.polygon[i].to_f64();
        let b = d.polygon[(i + 1) % n].to_f64();
        let (x1, y1) = frame.point(a.0, a.1);
        let (x2, y2) = frame.point(b.0, b.1);
        let colour = colour_of(&d.edge_labels[i]);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{colour}\" stroke-width=\"2\" />",
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2),
        );
        if let Some(label) = &d.edge_labels[i] {
            let (mx, my) = frame.point(0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{colour}\">{label}</text>",
                fmt(mx + 4.0),
                fmt(my - 4.0),
            );
        }
    }

    if d.show_lattice_points {
        for (x, y) in d.boundary_lattice_points() {
            let (px, py) = frame.point(x as f64, y as f64);
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#000000\" />",
                fmt(px),
                fmt(py),
            );
        }
    }

    for (i, node) in d.nodes.iter().enumerate() {
        let pos = node.position.to_f64();
        let exit = d
            .cut_exit(i)
            .map(|e| e.to_f64())
            .unwrap_or(pos);
        let (x1, y1) = frame.point(pos.0, pos.1);
        let (x2, y2) = frame.point(exit.0, exit.1);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"3 3\" />",
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2),
        );
        cross(&mut out, x1, y1, 4.0, "#000000");
    }

    out.push_str("</svg>\n");
    out
}

/// Render a dual complex of dimension <= 2: vertices on a circle, edges
/// as chords, 2-cells shaded.
pub fn render_dual_complex(d: &DualComplex) -> String {
    let size = 420.0;
    let margin = 24.0;
    let total = size + 2.0 * margin;
    let mut out = svg_header(total, total);
    let vertices = &d.cells[0];
    let n = vertices.len().max(1);
    let pos = |idx: usize| -> (f64, f64) {
        let angle = std::f64::consts::TAU * idx as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
        (
            margin + size / 2.0 + size / 2.0 * angle.cos(),
            margin + size / 2.0 + size / 2.0 * angle.sin(),
        )
    };
    let index_of = |vertex: &str| -> usize {
        vertices
            .iter()
            .position(|c| c.id.vertices[0] == vertex)
            .expect("vertex exists")
    };
    if d.cells.len() > 2 {
        for cell in &d.cells[2] {
            let pts: Vec<(f64, f64)> = cell
                .id
                .vertices
                .iter()
                .map(|v| pos(index_of(v)))
                .collect();
            let path: Vec<String> = pts
                .iter()
                .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
                .collect();
            let _ = writeln!(
                out,
                "<polygon points=\"{}\" fill=\"#7570b3\" fill-opacity=\"0.25\" stroke=\"none\" />",
                path.join(" ")
            );
        }
    }
    if d.cells.len() > 1 {
        for cell in &d.cells[1] {
            let a = pos(index_of(&cell.id.vertices[0]));
            let b = pos(index_of(&cell.id.vertices[1]));
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1b9e77\" stroke-width=\"2\" />",
                fmt(a.0),
                fmt(a.1),
                fmt(b.0),
                fmt(b.1),
            );
        }
    }
    for (i, cell) in vertices.iter().enumerate() {
        let (x, y) = pos(i);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#d95f02\" />",
            fmt(x),
            fmt(y),
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>",
            fmt(x + 6.0),
            fmt(y - 6.0),
            cell.id.vertices[0],
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Render an amoeba point cloud with the critical points and flowline
/// overlays. The marked point `(-ln 2, -ln 2)` is drawn with its label.
pub fn render_amoeba(
    points: &[(f64, f64)],
    critical: &[(f64, f64)],
    flowlines: &[Vec<(f64, f64)>],
    range: f64,
) -> String {
    let frame = Frame::new(-range, -range, range, range, 420.0);
    let (w, h) = frame.size(2.0 * range);
    let mut out = svg_header(w, h);
    // axes
    let (x0, y0) = frame.point(-range, 0.0);
    let (x1, y1) = frame.point(range, 0.0);
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"1\" />",
        fmt(x0),
        fmt(y0),
        fmt(x1),
        fmt(y1),
    );
    let (x0, y0) = frame.point(0.0, -range);
    let (x1, y1) = frame.point(0.0, range);
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"1\" />",
        fmt(x0),
        fmt(y0),
        fmt(x1),
        fmt(y1),
    );
    for &(r1, r2) in points {
        if r1.abs() > range || r2.abs() > range {
            continue;
        }
        let (x, y) = frame.point(r1, r2);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"1\" fill=\"#1b9e77\" fill-opacity=\"0.5\" />",
            fmt(x),
            fmt(y),
        );
    }
    for line in flowlines {
        if line.is_empty() {
            continue;
        }
        let path: Vec<String> = line
            .iter()
            .map(|&(r1, r2)| {
                let (x, y) = frame.point(r1.clamp(-range, range), r2.clamp(-range, range));
                format!("{},{}", fmt(x), fmt(y))
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#e7298a\" stroke-width=\"1.5\" />",
            path.join(" ")
        );
    }
    for &(r1, r2) in critical {
        let (x, y) = frame.point(r1, r2);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"#7570b3\" />",
            fmt(x),
            fmt(y),
        );
    }
    let ln2 = std::f64::consts::LN_2;
    let (x, y) = frame.point(-ln2, -ln2);
    let _ = writeln!(
        out,
        "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" />",
        fmt(x),
        fmt(y),
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"11\">(-ln2, -ln2)</text>",
        fmt(x + 6.0),
        fmt(y + 12.0),
    );
    out.push_str("</svg>\n");
    out
}

/// Convenience: amoeba figure for a configuration, with the critical
/// points and the two saddle-to-minimum flowlines overlaid.
pub fn amoeba_figure(
    cfg: &crate::negvertex::NegVertexConfig,
    resolution: usize,
    range: f64,
) -> Result<String, crate::negvertex::NegVertexError> {
    let points = crate::negvertex::amoeba_sample(resolution, range);
    let report = crate::negvertex::critical_points(cfg)?;
    let ln2 = std::f64::consts::LN_2;
    let critical = vec![(-ln2, -ln2), (report.a, report.b), (report.b, report.a)];
    let mut flowlines = Vec::new();
    for side in [1e-3, -1e-3] {
        let u1 = (report.a.exp() * f64::cos(side), report.a.exp() * f64::sin(side));
        if let Some(start) = crate::negvertex::amoeba_image(u1.0, u1.1) {
            if let Ok(trace) = crate::negvertex::flow_trace(start, cfg) {
                flowlines.push(trace);
            }
            // the swapped flowline from the other saddle
            if let Ok(trace) = crate::negvertex::flow_trace(
                (
                    crate::negvertex::amoeba_image(u1.0, u1.1).expect("on curve").1,
                    crate::negvertex::amoeba_image(u1.0, u1.1).expect("on curve").0,
                ),
                cfg,
            ) {
                flowlines.push(trace);
            }
        }
    }
    Ok(render_amoeba(&points, &critical, &flowlines, range))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_dual_complex;
    use crate::fixtures;

    #[test]
    fn k4_svg_contains_vertices_and_edges() {
        let d = build_dual_complex(&fixtures::pair_of_pants_presentation()).unwrap();
        let svg = render_dual_complex(&d);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<line").count(), 6);
    }

    #[test]
    fn diagram_svg_is_deterministic() {
        let d = fixtures::paper_quadrilateral();
        let a = render_diagram2d(&d);
        let b = render_diagram2d(&d);
        assert_eq!(a.as_bytes(), b.as_bytes());
        assert!(a.contains("stroke-dasharray"), "branch cut drawn dotted");
        // 14 boundary lattice points on the fixture
        assert_eq!(a.matches("r=\"2.5\"").count(), 14);
    }

    #[test]
    fn amoeba_svg_marks_the_special_point() {
        let cfg = fixtures::default_negvertex_config();
        let svg = amoeba_figure(&cfg, 50, 4.0).unwrap();
        assert!(svg.contains("(-ln2, -ln2)"));
        let again = amoeba_figure(&cfg, 50, 4.0).unwrap();
        assert_eq!(svg.as_bytes(), again.as_bytes());
    }

    #[test]
    fn b3_extract_has_two_interior_dots_per_edge() {
        let d = fixtures::negative_vertex_diagram();
        let b3 = d.facet_extract("B3").unwrap();
        let svg = render_diagram2d(&b3);
        // 3 corners + 2 interior dots per edge = 9 boundary lattice points
        assert_eq!(svg.matches("r=\"2.5\"").count(), 9);
    }
}
