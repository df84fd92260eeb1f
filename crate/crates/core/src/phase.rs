//! The phase plane `Θ = {(z, θ) : z > 0}` of the a = 1 translator system.
//!
//! Orbits are the `(z, θ)` traces of solutions. The curve `Γ: z = −tan θ` is
//! where the generating curve has zero curvature; together with the line
//! `θ = 0` it cuts `Θ` into regions on which `z` and `θ` are monotone.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{integrate_orbit, CurveState, Direction, Event, EventKind, IntegrationResult, OdeParams};

/// Half-width of the band around Γ treated as lying on it.
pub const GAMMA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub z: f64,
    pub theta: f64,
}

impl PhasePoint {
    /// A point of the reduced chart `z > 0`, `θ ∈ (−π/2, π]`.
    pub fn new(z: f64, theta: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::Domain(format!("phase point needs z > 0, got {z}")));
        }
        if !(theta > -FRAC_PI_2 && theta <= PI) {
            return Err(Error::Domain(format!("phase point angle {theta} outside (-pi/2, pi]")));
        }
        Ok(Self { z, theta })
    }

    pub fn from_state(state: &CurveState) -> Self {
        Self { z: state.z, theta: state.theta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64) -> Self {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionTag {
    pub dz_sign: Sign,
    pub dtheta_sign: Sign,
}

/// Height of Γ over the angle `theta`: `z = −tan θ`.
pub fn gamma_curve(theta: f64) -> Result<f64> {
    let admissible = (theta > -FRAC_PI_2 && theta < 0.0) || (theta > FRAC_PI_2 && theta < PI);
    if !admissible {
        return Err(Error::Domain(format!("Gamma exists only for theta in (-pi/2, 0) or (pi/2, pi), got {theta}")));
    }
    Ok(-theta.tan())
}

/// Wraps an unwrapped angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Signs of `z'` and `θ'` at `p` for the a = 1 system.
pub fn classify_region(p: &PhasePoint) -> RegionTag {
    let (sin, cos) = p.theta.sin_cos();
    let dz_sign = if p.theta == 0.0 || p.theta == PI { Sign::Zero } else { Sign::of(sin) };
    let on_gamma = cos != 0.0 && (p.z + p.theta.tan()).abs() <= GAMMA_TOL;
    let dtheta_sign = if on_gamma { Sign::Zero } else { Sign::of(-(sin + p.z * cos)) };
    RegionTag { dz_sign, dtheta_sign }
}

/// The orbit `(z(−s), θ(−s) − π)`: the same generating curve traversed backwards.
///
/// Samples keep their order (the direction flag flips instead), `x` is
/// unchanged, and the angle shift is `−π` when the orbit's mean angle is
/// positive and `+π` otherwise, which makes the map an involution.
pub fn symmetry_dual(orbit: &IntegrationResult) -> IntegrationResult {
    let n = orbit.samples.len().max(1) as f64;
    let mean = orbit.samples.iter().map(|s| s.theta).sum::<f64>() / n;
    let shift = if mean > 0.0 { -PI } else { PI };
    let map = |s: &CurveState| CurveState { s: -s.s, x: s.x, z: s.z, theta: s.theta + shift };
    IntegrationResult {
        samples: orbit.samples.iter().map(map).collect(),
        events: orbit.events.iter().map(|e| Event { kind: e.kind, s: -e.s, state: map(&e.state) }).collect(),
        termination: orbit.termination,
        direction: match orbit.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        },
        stats: orbit.stats,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub a: f64,
    pub apex_height: f64,
    /// Arc length of the single forward zero of the curvature.
    pub gamma_crossing_s: f64,
    /// Arc length of the single backward vertical tangent (θ = π/2).
    pub theta_halfpi_crossing_s: f64,
    /// x-coordinate of the vertical tangent: the leftmost point of the curve.
    pub turning_x: f64,
    /// Angle at the forward height cutoff; tends to 0.
    pub forward_asymptote: f64,
    /// Angle at the backward height cutoff; tends to π.
    pub backward_asymptote: f64,
    pub forward_terminal_s: f64,
    pub backward_terminal_s: f64,
    pub z_min: f64,
    pub is_bigraph: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracedOrbit {
    pub report: OrbitReport,
    pub forward: IntegrationResult,
    pub backward: IntegrationResult,
}

fn single_event(result: &IntegrationResult, kind: EventKind, what: &str) -> Result<Event> {
    let mut it = result.events_of(kind);
    match (it.next(), it.next()) {
        (Some(e), None) => Ok(*e),
        (None, _) => Err(Error::Classification(format!("missing {what} within s_max"))),
        (Some(_), Some(_)) => {
            Err(Error::Classification(format!("expected exactly one {what}, found {}", result.count(kind))))
        }
    }
}

fn require_cutoff(result: &IntegrationResult, what: &str) -> Result<()> {
    if result.termination == EventKind::HeightCutoff {
        Ok(())
    } else {
        Err(Error::Classification(format!("missing {what} height cutoff within s_max")))
    }
}

fn require_descent(result: &IntegrationResult, what: &str) -> Result<()> {
    match result.samples.windows(2).find(|w| !(w[1].z < w[0].z)) {
        None => Ok(()),
        Some(w) => Err(Error::Classification(format!(
            "{what} height is not decreasing away from the apex near s = {}",
            w[1].s
        ))),
    }
}

/// Integrates the orbit through the apex `(z0, 0)` in both directions and
/// checks the structure the a ≠ 0 classification predicts.
pub fn trace_orbit(z0: f64, params: &OdeParams) -> Result<TracedOrbit> {
    params.validate()?;
    if params.a == 0.0 {
        return Err(Error::Validation("orbit classification needs a != 0".into()));
    }
    if params.a < 0.0 {
        return Err(Error::Validation(
            "orbit classification is stated for a > 0; a < 0 is its mirror image under x -> -x".into(),
        ));
    }
    if !(z0 > params.z_min) {
        return Err(Error::Validation(format!("z0 must exceed z_min (z0 = {z0}, z_min = {})", params.z_min)));
    }
    let apex = CurveState::apex(z0);
    let forward = integrate_orbit(apex, params, Direction::Forward)?;
    let backward = integrate_orbit(apex, params, Direction::Backward)?;

    let gamma = single_event(&forward, EventKind::GammaCrossing, "forward Gamma-crossing")?;
    let turn = single_event(&backward, EventKind::ThetaHalfPi, "backward theta = pi/2 crossing")?;
    require_cutoff(&forward, "forward")?;
    require_cutoff(&backward, "backward")?;
    require_descent(&forward, "forward")?;
    require_descent(&backward, "backward")?;

    let apex_height = forward.samples.iter().chain(&backward.samples).map(|s| s.z).fold(f64::NEG_INFINITY, f64::max);
    let f_end = forward.terminal_state();
    let b_end = backward.terminal_state();
    let report = OrbitReport {
        a: params.a,
        apex_height,
        gamma_crossing_s: gamma.s,
        theta_halfpi_crossing_s: turn.s,
        turning_x: turn.state.x,
        forward_asymptote: wrap_angle(f_end.theta),
        backward_asymptote: wrap_angle(b_end.theta),
        forward_terminal_s: f_end.s,
        backward_terminal_s: b_end.s,
        z_min: params.z_min,
        is_bigraph: true,
    };
    Ok(TracedOrbit { report, forward, backward })
}

pub fn trace_and_classify(z0: f64, params: &OdeParams) -> Result<OrbitReport> {
    trace_orbit(z0, params).map(|t| t.report)
}
