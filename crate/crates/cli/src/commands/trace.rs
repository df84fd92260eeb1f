use std::f64::consts::PI;

use hypreaper::export::{events_csv, orbit_csv};
use hypreaper::ode::{first_integral_a0, integrate_orbit, CurveState, Direction, IntegrationResult};
use hypreaper::phase::{trace_orbit, wrap_angle, OrbitReport};
use serde::Serialize;

use super::{ode_params, require_z0};
use crate::args::TraceArgs;
use crate::error::CliError;
use crate::output::{Checks, Output};

#[derive(Serialize)]
struct ReaperTrace<'a> {
    command: &'static str,
    z0: f64,
    report: &'a OrbitReport,
    checks: &'a Checks,
}

#[derive(Serialize)]
struct MinimalTrace<'a> {
    command: &'static str,
    z0: f64,
    a: f64,
    apex_height: f64,
    first_integral: f64,
    max_first_integral_deviation: f64,
    forward_terminal_theta: f64,
    backward_terminal_theta: f64,
    z_min: f64,
    checks: &'a Checks,
}

/// Both halves joined in increasing arc length.
fn joined(forward: &IntegrationResult, backward: &IntegrationResult) -> Vec<CurveState> {
    let mut v: Vec<CurveState> = backward.samples[1..].iter().rev().copied().collect();
    v.extend_from_slice(&forward.samples);
    v
}

pub fn run(args: TraceArgs) -> Result<(), CliError> {
    let a = args.a.unwrap_or(1.0);
    let params = ode_params(&args.ode, a, 1e-6)?;
    let z0 = require_z0(args.z0, &params)?;
    let out = Output::new(args.io.out.as_deref())?;
    let mut checks = Checks::default();

    let (forward, backward) = if a == 0.0 {
        let apex = CurveState::apex(z0);
        (integrate_orbit(apex, &params, Direction::Forward)?, integrate_orbit(apex, &params, Direction::Backward)?)
    } else {
        let traced = trace_orbit(z0, &params)?;
        let r = &traced.report;
        checks.below("apex_height", (r.apex_height - z0).abs(), 1e-10);
        if params.z_min <= 1e-2 {
            checks.below("forward_asymptote", r.forward_asymptote.abs(), 2.0 * params.z_min);
            checks.below("backward_asymptote", (r.backward_asymptote - PI).abs(), 2.0 * params.z_min);
        }
        out.write_json("trace_report.json", &ReaperTrace { command: "trace", z0, report: r, checks: &checks })?;
        (traced.forward, traced.backward)
    };

    let samples = joined(&forward, &backward);
    out.write("trace_orbit.csv", &orbit_csv(&samples, a == 0.0))?;
    let mut events: Vec<(&str, _)> = forward.events.iter().map(|e| ("forward", *e)).collect();
    events.extend(backward.events.iter().map(|e| ("backward", *e)));
    out.write("trace_events.csv", &events_csv(&events))?;

    if a == 0.0 {
        let target = z0.powi(4);
        let deviation = samples
            .iter()
            .filter(|p| p.theta.cos().powi(2) >= 1e-4)
            .map(|p| (first_integral_a0(p) - target).abs())
            .fold(0.0, f64::max);
        checks.below("first_integral", deviation, 1e-9 * target.max(1.0));
        let report = MinimalTrace {
            command: "trace",
            z0,
            a,
            apex_height: samples.iter().map(|p| p.z).fold(f64::NEG_INFINITY, f64::max),
            first_integral: target,
            max_first_integral_deviation: deviation,
            forward_terminal_theta: wrap_angle(forward.terminal_state().theta),
            backward_terminal_theta: wrap_angle(backward.terminal_state().theta),
            z_min: params.z_min,
            checks: &checks,
        };
        out.write_json("trace_report.json", &report)?;
    }
    checks.finish()
}
