use hypreaper::curves::{build_minimal_reaper, half_width};
use hypreaper::export::{fmt_f64, CsvTable};
use hypreaper::ode::OdeParams;
use hypreaper::phase::{trace_orbit, wrap_angle};
use hypreaper::Error;
use rayon::prelude::*;
use serde::Serialize;

use super::ode_params;
use crate::args::SweepArgs;
use crate::error::CliError;
use crate::output::{Checks, Output};

#[derive(Debug, Clone, Serialize)]
struct Row {
    z0: f64,
    forward_theta: f64,
    backward_theta: f64,
    turning_x: Option<f64>,
    half_width: Option<f64>,
    measured_half_width: Option<f64>,
    is_bigraph: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    command: &'static str,
    a: f64,
    z_min: f64,
    rows: &'a [Row],
    #[serde(skip_serializing_if = "Option::is_none")]
    half_width_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit_half_width: Option<f64>,
    checks: &'a Checks,
}

fn heights(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    if let Some(v) = &args.z0_values {
        if v.is_empty() {
            return Err(CliError::Usage("z0_values is empty".into()));
        }
        return Ok(v.clone());
    }
    let lo = args.z0_min.unwrap_or(0.5);
    let hi = args.z0_max.unwrap_or(4.0);
    let n = args.count.unwrap_or(8);
    if !(lo < hi) {
        return Err(CliError::Usage(format!("z0 range is empty or reversed: [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(CliError::Usage(format!("count must be at least 2, got {n}")));
    }
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect())
}

fn row(z0: f64, params: &OdeParams) -> Result<Row, Error> {
    if params.a == 0.0 {
        let curve = build_minimal_reaper(z0, params)?;
        let (first, last) = (curve.samples[0], curve.samples[curve.len() - 1]);
        Ok(Row {
            z0,
            forward_theta: wrap_angle(last.theta),
            backward_theta: wrap_angle(first.theta),
            turning_x: None,
            half_width: Some(half_width(z0, 1e-14)?),
            measured_half_width: Some(0.5 * curve.x_span()),
            is_bigraph: false,
            error: None,
        })
    } else {
        let r = trace_orbit(z0, params)?.report;
        Ok(Row {
            z0,
            forward_theta: r.forward_asymptote,
            backward_theta: r.backward_asymptote,
            turning_x: Some(r.turning_x),
            half_width: None,
            measured_half_width: None,
            is_bigraph: r.is_bigraph,
            error: None,
        })
    }
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn run(args: SweepArgs) -> Result<(), CliError> {
    let a = args.a.unwrap_or(1.0);
    let params = ode_params(&args.ode, a, 1e-6)?;
    let z0s = heights(&args)?;
    if let Some(&z0) = z0s.iter().find(|&&z| !(z > params.z_min && z.is_finite())) {
        return Err(CliError::Usage(format!("z0 must exceed z_min (z0 = {z0}, z_min = {})", params.z_min)));
    }
    let out = Output::new(args.io.out.as_deref())?;

    // collect() on an indexed parallel iterator keeps input order
    let results: Vec<Result<Row, Error>> = z0s.par_iter().map(|&z0| row(z0, &params)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for (z0, r) in z0s.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e @ Error::Classification(_)) => rows.push(Row {
                z0: *z0,
                forward_theta: f64::NAN,
                backward_theta: f64::NAN,
                turning_x: None,
                half_width: None,
                measured_half_width: None,
                is_bigraph: false,
                error: Some(e.to_string()),
            }),
            Err(e) => return Err(e.into()),
        }
    }

    let mut checks = Checks::default();
    let (mut fit, mut unit) = (None, None);
    if a == 0.0 {
        let x: Vec<f64> = rows.iter().map(|r| r.z0).collect();
        let y: Vec<f64> = rows.iter().filter_map(|r| r.half_width).collect();
        let w1 = half_width(1.0, 1e-14)?;
        unit = Some(w1);
        if x.len() >= 2 {
            let s = slope(&x, &y);
            checks.below("half_width_slope", (s - w1).abs(), 1e-6);
            fit = Some(s);
        }
    } else {
        let failed = rows.iter().filter(|r| !r.is_bigraph).count();
        checks.below("non_bigraph_rows", failed as f64, 0.5);
    }

    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut t = CsvTable::new(&[
        "z0",
        "forward_theta",
        "backward_theta",
        "turning_x",
        "half_width",
        "measured_half_width",
        "is_bigraph",
    ])
    .meta("a", fmt_f64(a));
    for r in &rows {
        t.push(vec![
            fmt_f64(r.z0),
            fmt_f64(r.forward_theta),
            fmt_f64(r.backward_theta),
            opt(r.turning_x),
            opt(r.half_width),
            opt(r.measured_half_width),
            r.is_bigraph.to_string(),
        ]);
    }
    out.write("sweep.csv", &t.render())?;
    out.write_json(
        "sweep_summary.json",
        &SweepSummary {
            command: "sweep",
            a,
            z_min: params.z_min,
            rows: &rows,
            half_width_slope: fit,
            unit_half_width: unit,
            checks: &checks,
        },
    )?;
    checks.finish()
}
