//! Text serializations: CSV, Wavefront OBJ and minimal SVG.
//!
//! Floats are written with 17 significant digits so every value round-trips
//! exactly and identical inputs give byte-identical files.

use std::fmt::Write as _;

use crate::curves::GeneratingCurve;
use crate::ode::{first_integral_a0, CurveState, Event};
use crate::surface::{ResidualReport, SurfaceMesh};

/// `v` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Comma-separated table with a header row and LF line endings.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    preamble: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|h| h.as_ref().to_string()).collect(), ..Self::default() }
    }

    /// Adds a `# key=value` line before the header.
    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.preamble.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| fmt_f64(v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.preamble {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Curve samples as `s,x,z,theta` with a `family`/`z0`/`a` preamble.
pub fn curve_csv(curve: &GeneratingCurve) -> String {
    let a = curve.a().map(fmt_f64).unwrap_or_else(|| "none".into());
    let mut t = CsvTable::new(&["s", "x", "z", "theta"])
        .meta("family", curve.family.name())
        .meta("z0", fmt_f64(curve.apex_height))
        .meta("a", a);
    for p in &curve.samples {
        t.push_floats(&[p.s, p.x, p.z, p.theta]);
    }
    t.render()
}

/// Orbit samples; with `conserved` the a = 0 first integral is appended.
pub fn orbit_csv(samples: &[CurveState], conserved: bool) -> String {
    let mut header = vec!["s", "x", "z", "theta"];
    if conserved {
        header.push("first_integral");
    }
    let mut t = CsvTable::new(&header);
    for p in samples {
        let mut row = vec![p.s, p.x, p.z, p.theta];
        if conserved {
            row.push(first_integral_a0(p));
        }
        t.push_floats(&row);
    }
    t.render()
}

pub fn events_csv(events: &[(&str, Event)]) -> String {
    let mut t = CsvTable::new(&["direction", "kind", "s", "x", "z", "theta"]);
    for (dir, e) in events {
        let mut row = vec![dir.to_string(), e.kind.name().to_string()];
        row.extend([e.s, e.state.x, e.state.z, e.state.theta].map(fmt_f64));
        t.push(row);
    }
    t.render()
}

/// Triangulated mesh with per-vertex normals. Each grid quad becomes two
/// triangles wound counterclockwise when seen from the side `Nᵉ` points to
/// (for meshes whose normal is `Ψ_s × Ψ_t`).
pub fn mesh_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::with_capacity(mesh.vertices.len() * 120);
    let _ = writeln!(out, "# {:?} mesh {}x{}", mesh.provenance, mesh.ns, mesh.nt);
    for p in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z));
    }
    for c in &mesh.curvature {
        let [x, y, z] = c.n_e.0;
        let _ = writeln!(out, "vn {} {} {}", fmt_f64(x), fmt_f64(y), fmt_f64(z));
    }
    let id = |i: usize, j: usize| i * mesh.nt + j + 1;
    for i in 0..mesh.ns.saturating_sub(1) {
        for j in 0..mesh.nt.saturating_sub(1) {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
            let _ = writeln!(out, "f {a}//{a} {c}//{c} {d}//{d}");
        }
    }
    out
}

/// Per-vertex residual table `i,j,x,y,z,h,residual`.
pub fn residual_csv(mesh: &SurfaceMesh, h: &[f64], report: &ResidualReport) -> String {
    let mut t = CsvTable::new(&["i", "j", "x", "y", "z", "h", "residual"]);
    for i in 0..mesh.ns {
        for j in 0..mesh.nt {
            let k = mesh.index(i, j);
            let p = mesh.vertices[k];
            let mut row = vec![i.to_string(), j.to_string()];
            row.extend([p.x, p.y, p.z, h[k], report.per_vertex[k]].map(fmt_f64));
            t.push(row);
        }
    }
    t.render()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub stroke: String,
    pub width: f64,
    pub dashed: bool,
}

impl Polyline {
    pub fn new(points: Vec<(f64, f64)>, stroke: &str) -> Self {
        Self { points, stroke: stroke.to_string(), width: 1.5, dashed: false }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self.width = 1.0;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgPlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Data window `(x_lo, x_hi, y_lo, y_hi)`.
    pub window: (f64, f64, f64, f64),
    pub lines: Vec<Polyline>,
    /// Labelled tick positions on each axis.
    pub x_ticks: Vec<(f64, String)>,
    pub y_ticks: Vec<(f64, String)>,
}

const VIEW_W: f64 = 640.0;
const VIEW_H: f64 = 480.0;
const MARGIN: f64 = 50.0;

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str, window: (f64, f64, f64, f64)) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            window,
            lines: Vec::new(),
            x_ticks: Vec::new(),
            y_ticks: Vec::new(),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1, y0, y1) = self.window;
        let px = MARGIN + (x - x0) / (x1 - x0) * (VIEW_W - 2.0 * MARGIN);
        let py = VIEW_H - MARGIN - (y - y0) / (y1 - y0) * (VIEW_H - 2.0 * MARGIN);
        (px, py)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.window;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW_W} {VIEW_H}" width="{VIEW_W}" height="{VIEW_H}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            VIEW_W / 2.0,
            escape(&self.title)
        );
        // axes along the window's lower and left edges
        let (ax0, ay0) = self.map(x0, y0);
        let (ax1, ay1) = self.map(x1, y1);
        let _ = writeln!(out, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax1:.2}" y2="{ay0:.2}" stroke="black"/>"#);
        let _ = writeln!(out, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax0:.2}" y2="{ay1:.2}" stroke="black"/>"#);
        for (v, label) in &self.x_ticks {
            let (px, _) = self.map(*v, y0);
            let _ = writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{ay0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
                ay0 + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
                ay0 + 18.0,
                escape(label)
            );
        }
        for (v, label) in &self.y_ticks {
            let (_, py) = self.map(x0, *v);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{ax0:.2}" y2="{py:.2}" stroke="black"/>"#,
                ax0 - 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{}</text>"#,
                ax0 - 8.0,
                py + 4.0,
                escape(label)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
            VIEW_W / 2.0,
            VIEW_H - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 14 {:.2})">{}</text>"#,
            VIEW_H / 2.0,
            VIEW_H / 2.0,
            escape(&self.y_label)
        );
        for line in &self.lines {
            let pts: Vec<String> = line
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| {
                    let (px, py) = self.map(x, y);
                    format!("{px:.2},{py:.2}")
                })
                .collect();
            if pts.len() < 2 {
                continue;
            }
            let dash = if line.dashed { r#" stroke-dasharray="6,4""# } else { "" };
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="{}"{dash} points="{}"/>"#,
                line.stroke,
                line.width,
                pts.join(" ")
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Symmetric window around a point set with a relative margin.
pub fn bounding_window(points: impl IntoIterator<Item = (f64, f64)>, margin: f64) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in points {
        if x.is_finite() && y.is_finite() {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !(x0 < x1) {
        (x0, x1) = (x0 - 1.0, x0 + 1.0);
    }
    if !(y0 < y1) {
        (y0, y1) = (y0 - 1.0, y0 + 1.0);
    }
    let (dx, dy) = ((x1 - x0) * margin, (y1 - y0) * margin);
    (x0 - dx, x1 + dx, y0 - dy, y1 + dy)
}
