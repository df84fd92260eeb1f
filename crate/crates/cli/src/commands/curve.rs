use hypreaper::curves::{build_minimal_reaper, build_reaper, half_width, to_bigraph, GeneratingCurve};
use hypreaper::export::{bounding_window, curve_csv, Polyline, SvgPlot};
use serde::Serialize;

use super::{ode_params, require_z0};
use crate::args::{MinimalArgs, ReaperArgs};
use crate::error::CliError;
use crate::output::{Checks, Output};

#[derive(Serialize)]
struct ReaperSummary<'a> {
    command: &'static str,
    z0: f64,
    a: f64,
    samples: usize,
    apex_height: f64,
    turning_x: f64,
    turning_z: f64,
    end_intercepts: (f64, f64),
    z_min: f64,
    checks: &'a Checks,
}

#[derive(Serialize)]
struct MinimalSummary<'a> {
    command: &'static str,
    z0: f64,
    samples: usize,
    apex_height: f64,
    x_span: f64,
    half_width: f64,
    span_defect: f64,
    symmetry_defect: f64,
    z_min: f64,
    checks: &'a Checks,
}

fn ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    let step = nice_step((hi - lo) / 5.0);
    let mut v = Vec::new();
    let mut t = (lo / step).ceil() * step;
    while t <= hi + 1e-12 {
        let t_clean = if t.abs() < 1e-12 { 0.0 } else { t };
        v.push((t_clean, format!("{t_clean}")));
        t += step;
    }
    v
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn render(curve: &GeneratingCurve, title: &str) -> String {
    let pts: Vec<(f64, f64)> = curve.samples.iter().map(|p| (p.x, p.z)).collect();
    let (x0, x1, _, y1) = bounding_window(pts.iter().copied(), 0.05);
    let window = (x0, x1, 0.0, y1);
    let mut plot = SvgPlot::new(title, "x", "z", window);
    plot.x_ticks = ticks(x0, x1);
    plot.y_ticks = ticks(0.0, y1);
    plot.lines.push(Polyline::new(pts, "black"));
    plot.render()
}

pub fn run_reaper(args: ReaperArgs) -> Result<(), CliError> {
    let a = args.a.unwrap_or(1.0);
    if a == 0.0 {
        return Err(CliError::Usage("a = 0 gives the minimal family; use the `minimal` command".into()));
    }
    let params = ode_params(&args.ode, a, 1e-3)?;
    let z0 = require_z0(args.z0, &params)?;
    let out = Output::new(args.io.out.as_deref())?;
    let curve = build_reaper(z0, a, &params)?;

    let mut checks = Checks::default();
    checks.below("apex_height", (curve.apex_height - z0).abs(), 1e-10);
    checks.flag("turning_point", curve.turning_index.is_some());
    checks.flag("bigraph", to_bigraph(&curve).is_ok());
    let turning = curve.turning_index.map(|t| curve.samples[t]);

    out.write("reaper_curve.csv", &curve_csv(&curve))?;
    if !args.no_svg {
        out.write("reaper_curve.svg", &render(&curve, &format!("reaper z0 = {z0}, a = {a}")))?;
    }
    out.write_json(
        "reaper_summary.json",
        &ReaperSummary {
            command: "reaper",
            z0,
            a,
            samples: curve.len(),
            apex_height: curve.apex_height,
            turning_x: turning.map_or(f64::NAN, |p| p.x),
            turning_z: turning.map_or(f64::NAN, |p| p.z),
            end_intercepts: curve.end_intercepts(),
            z_min: params.z_min,
            checks: &checks,
        },
    )?;
    checks.finish()
}

pub fn run_minimal(args: MinimalArgs) -> Result<(), CliError> {
    let params = ode_params(&args.ode, 0.0, 1e-6)?;
    let z0 = require_z0(args.z0, &params)?;
    let out = Output::new(args.io.out.as_deref())?;
    let curve = build_minimal_reaper(z0, &params)?;

    let n = curve.len();
    let symmetry_defect = (0..n)
        .map(|i| {
            let (p, q) = (curve.samples[i], curve.samples[n - 1 - i]);
            (p.x + q.x).abs().max((p.z - q.z).abs())
        })
        .fold(0.0, f64::max);
    let w = half_width(z0, 1e-13)?;
    let span = curve.x_span();
    let mut checks = Checks::default();
    checks.below("apex_height", (curve.apex_height - z0).abs(), 1e-10);
    checks.below("symmetry", symmetry_defect, 1e-8);
    if params.z_min <= 1e-3 * z0 {
        checks.below("span_vs_quadrature", (span - 2.0 * w).abs(), 5e-3 * z0);
    }

    out.write("minimal_curve.csv", &curve_csv(&curve))?;
    if !args.no_svg {
        out.write("minimal_curve.svg", &render(&curve, &format!("minimal reaper z0 = {z0}")))?;
    }
    out.write_json(
        "minimal_summary.json",
        &MinimalSummary {
            command: "minimal",
            z0,
            samples: n,
            apex_height: curve.apex_height,
            x_span: span,
            half_width: w,
            span_defect: span - 2.0 * w,
            symmetry_defect,
            z_min: params.z_min,
            checks: &checks,
        },
    )?;
    checks.finish()
}
