//! The translator ODE for generating curves of parabolic rotational surfaces.
//!
//! A generating curve `α(s) = (x(s), 0, z(s))` is parametrized by Euclidean arc
//! length with tangent `(cos θ, 0, sin θ)`. The surface `Ψ(s, t) = (x(s), t, z(s))`
//! is a translator for `ξ = a∂x + b∂y` iff
//!
//! ```text
//! x' = cos θ,   z' = sin θ,   θ' = −(2/z²)(a·sin θ + z·cos θ)
//! ```
//!
//! `b` never enters. Solutions for parameter `a` map to solutions for `λa`
//! under `(s, x, z) ↦ (λs, λx, λz)`, so `a = 1` is a normalization, not a
//! restriction.

mod integrator;

pub use integrator::{integrate_orbit, propagate, Direction, Event, EventKind, IntegrationResult, IntegrationStats};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive_height, Error, Result};

/// One arc-length sample of a generating curve. `theta` is unwrapped along an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveState {
    pub s: f64,
    pub x: f64,
    pub z: f64,
    pub theta: f64,
}

impl CurveState {
    pub const fn new(s: f64, x: f64, z: f64, theta: f64) -> Self {
        Self { s, x, z, theta }
    }

    /// The apex initial condition `(s, x, z, θ) = (0, 0, z0, 0)`.
    pub const fn apex(z0: f64) -> Self {
        Self::new(0.0, 0.0, z0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeParams {
    /// Killing-field component along ∂x.
    pub a: f64,
    /// Integration stops when the height reaches this value.
    pub z_min: f64,
    /// Arc-length budget per direction.
    pub s_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum arc-length gap between emitted samples; `None` emits one
    /// sample per accepted step.
    pub output_step: Option<f64>,
}

impl Default for OdeParams {
    fn default() -> Self {
        Self { a: 1.0, z_min: 1e-6, s_max: 100.0, rel_tol: 1e-10, abs_tol: 1e-10, output_step: Some(0.01) }
    }
}

impl OdeParams {
    pub fn with_a(a: f64) -> Self {
        Self { a, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t <= 1e-2;
        if !self.a.is_finite() {
            return Err(Error::Validation(format!("a must be finite, got {}", self.a)));
        }
        if !(self.z_min > 0.0 && self.z_min.is_finite()) {
            return Err(Error::Validation(format!("z_min must be positive, got {}", self.z_min)));
        }
        if !(self.s_max > 0.0 && self.s_max.is_finite()) {
            return Err(Error::Validation(format!("s_max must be positive, got {}", self.s_max)));
        }
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::Validation(format!(
                "tolerances must lie in (0, 1e-2], got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if let Some(h) = self.output_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Validation(format!("output step must be positive, got {h}")));
            }
        }
        Ok(())
    }
}

/// Derivatives `(x', z', θ')` at `state` for Killing parameter `a`.
pub fn rhs(state: &CurveState, a: f64) -> Result<(f64, f64, f64)> {
    require_positive_height(state.z)?;
    let [dx, dz, dtheta] = field(state.z, state.theta, a);
    Ok((dx, dz, dtheta))
}

#[inline]
pub(crate) fn field(z: f64, theta: f64, a: f64) -> [f64; 3] {
    let (sin, cos) = theta.sin_cos();
    [cos, sin, -(2.0 / (z * z)) * (a * sin + z * cos)]
}

/// Curvature `θ'` of the generating curve; the surface's Euclidean mean
/// curvature is half of it.
pub fn curvature(z: f64, theta: f64, a: f64) -> f64 {
    field(z, theta, a)[2]
}

/// `z⁴ / cos²θ`, conserved along solutions with `a = 0` (value `z0⁴` for apex
/// height `z0`). Returns `+∞` where the tangent is vertical.
pub fn first_integral_a0(state: &CurveState) -> f64 {
    let c = state.theta.cos();
    if c == 0.0 || (state.theta.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-15 {
        return f64::INFINITY;
    }
    state.z.powi(4) / (c * c)
}

/// Defect of the minimal (a = 0) graph equation `z''/(1+z'²) = −2/z`.
pub fn minimal_graph_residual(z: f64, dz: f64, ddz: f64) -> Result<f64> {
    require_positive_height(z)?;
    Ok(ddz / (1.0 + dz * dz) + 2.0 / z)
}

/// Defect of the a = 1 graph equation `u''/(1+u'²) = −2/u − 2u'/u²`.
pub fn graph_residual_a1(u: f64, du: f64, ddu: f64) -> Result<f64> {
    require_positive_height(u)?;
    Ok(ddu / (1.0 + du * du) + 2.0 / u + 2.0 * du / (u * u))
}
