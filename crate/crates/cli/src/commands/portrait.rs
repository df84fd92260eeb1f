use std::f64::consts::{FRAC_PI_2, PI};

use hypreaper::export::{fmt_f64, CsvTable, Polyline, SvgPlot};
use hypreaper::phase::{classify_region, trace_orbit, OrbitReport, PhasePoint};
use serde::Serialize;

use super::ode_params;
use crate::args::PortraitArgs;
use crate::error::CliError;
use crate::output::{Checks, Output};

const GAMMA_POINTS: usize = 200;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Serialize)]
struct PortraitSummary<'a> {
    command: &'static str,
    z_max: f64,
    gamma_points: usize,
    asymptotes: [f64; 2],
    orbits: Vec<OrbitReport>,
    checks: &'a Checks,
}

/// Points of `z = −tan θ` with `0 < z ≤ z_max` on both branches.
fn gamma_branches(z_max: f64) -> [Vec<(f64, f64)>; 2] {
    let reach = z_max.atan();
    let branch = |start: f64| -> Vec<(f64, f64)> {
        (0..GAMMA_POINTS)
            .map(|k| {
                let theta = start + reach * k as f64 / GAMMA_POINTS as f64;
                (theta, -theta.tan())
            })
            .collect()
    };
    [branch(-reach), branch(PI - reach)]
}

pub fn run(args: PortraitArgs) -> Result<(), CliError> {
    let z_max = args.z_max.unwrap_or(4.0);
    if !(z_max > 0.0 && z_max.is_finite()) {
        return Err(CliError::Usage(format!("z_max must be positive, got {z_max}")));
    }
    let grid = args.grid.unwrap_or(24);
    if grid < 2 {
        return Err(CliError::Usage(format!("grid must be at least 2, got {grid}")));
    }
    let params = ode_params(&args.ode, 1.0, 1e-3)?;
    let heights = if args.no_orbits { Vec::new() } else { args.orbits.clone().unwrap_or_else(|| vec![2.0]) };
    if let Some(&z0) = heights.iter().find(|&&z| !(z > params.z_min && z.is_finite())) {
        return Err(CliError::Usage(format!("z0 must exceed z_min (z0 = {z0}, z_min = {})", params.z_min)));
    }
    let out = Output::new(args.io.out.as_deref())?;
    let mut checks = Checks::default();

    let gamma = gamma_branches(z_max);
    let mut t = CsvTable::new(&["branch", "theta", "z"]);
    for (b, pts) in gamma.iter().enumerate() {
        for &(theta, z) in pts {
            t.push(vec![b.to_string(), fmt_f64(theta), fmt_f64(z)]);
        }
    }
    out.write("portrait_gamma.csv", &t.render())?;

    let mut regions = CsvTable::new(&["z", "theta", "dz_sign", "dtheta_sign"]);
    for i in 1..=grid {
        for j in 1..=grid {
            let z = z_max * i as f64 / grid as f64;
            let theta = -FRAC_PI_2 + 1.5 * PI * j as f64 / grid as f64;
            let tag = classify_region(&PhasePoint::new(z, theta)?);
            regions.push(vec![
                fmt_f64(z),
                fmt_f64(theta),
                tag.dz_sign.symbol().to_string(),
                tag.dtheta_sign.symbol().to_string(),
            ]);
        }
    }
    out.write("portrait_regions.csv", &regions.render())?;

    let mut plot = SvgPlot::new("phase portrait, a = 1", "theta", "z", (-FRAC_PI_2, PI, 0.0, z_max));
    plot.x_ticks = vec![(-FRAC_PI_2, "-pi/2".into()), (0.0, "0".into()), (FRAC_PI_2, "pi/2".into()), (PI, "pi".into())];
    plot.y_ticks = (0..=4).map(|k| z_max * k as f64 / 4.0).map(|z| (z, format!("{z}"))).collect();
    for asymptote in [0.0, FRAC_PI_2] {
        plot.lines.push(Polyline::new(vec![(asymptote, 0.0), (asymptote, z_max)], "gray").dashed());
    }
    for pts in &gamma {
        plot.lines.push(Polyline::new(pts.clone(), "black"));
    }

    let mut reports = Vec::with_capacity(heights.len());
    for (idx, &z0) in heights.iter().enumerate() {
        let traced = trace_orbit(z0, &params)?;
        let mut samples: Vec<_> = traced.backward.samples[1..].iter().rev().copied().collect();
        samples.extend_from_slice(&traced.forward.samples);
        let mut t = CsvTable::new(&["s", "theta", "z"]).meta("z0", fmt_f64(z0)).meta("a", fmt_f64(1.0));
        for p in &samples {
            t.push_floats(&[p.s, p.theta, p.z]);
        }
        out.write(&format!("portrait_orbit_{idx}.csv"), &t.render())?;
        checks.below(&format!("orbit_{idx}_apex"), (traced.report.apex_height - z0).abs(), 1e-10);
        let pts = samples.iter().filter(|p| p.z <= z_max).map(|p| (p.theta, p.z)).collect();
        plot.lines.push(Polyline::new(pts, COLORS[idx % COLORS.len()]));
        reports.push(traced.report);
    }
    out.write("portrait.svg", &plot.render())?;
    out.write_json(
        "portrait_summary.json",
        &PortraitSummary {
            command: "portrait",
            z_max,
            gamma_points: 2 * GAMMA_POINTS,
            asymptotes: [0.0, FRAC_PI_2],
            orbits: reports,
            checks: &checks,
        },
    )?;
    checks.finish()
}
