//! Generating curves of the parabolic rotational translators.
//!
//! For `a = 0` the curves through an apex `(0, z0)` are the minimal reapers:
//! concave symmetric graphs meeting the ideal boundary orthogonally. For
//! `a ≠ 0` they are bi-graphs whose two branches both run off to `x → +∞`
//! (for `a > 0`) while descending to `z = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{curvature, integrate_orbit, propagate, CurveState, Direction, EventKind, OdeParams};
use crate::quadrature;

/// Tolerance used when re-integrating between stored samples.
pub const RESAMPLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveFamily {
    MinimalReaper,
    Reaper,
    VerticalPlane,
    /// Closed-form test profiles (lines, circle arcs); not translators in general.
    Profile,
}

impl CurveFamily {
    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::MinimalReaper => "MinimalReaper",
            CurveFamily::Reaper => "Reaper",
            CurveFamily::VerticalPlane => "VerticalPlane",
            CurveFamily::Profile => "Profile",
        }
    }
}

/// How states between samples are recovered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Solution of the translator ODE with parameter `a`.
    Ode { a: f64 },
    /// `x = x0`, `z = s`, upward tangent.
    Vertical { x0: f64 },
    /// `x = s`, `z = height`.
    Horizontal { height: f64 },
    /// `(x, z) = (cx + r sin(s/r), cz + r cos(s/r))`, clockwise.
    Circle { cx: f64, cz: f64, r: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingCurve {
    /// Samples in increasing arc length.
    pub samples: Vec<CurveState>,
    /// Curvature `θ'` at each sample.
    pub curvature: Vec<f64>,
    pub family: CurveFamily,
    pub shape: Shape,
    pub apex_height: f64,
    /// Index of the vertical-tangent sample (θ = π/2) for reapers.
    pub turning_index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Lower,
    Upper,
}

/// A reaper split at its turning point into two graphs over the x-axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiGraph {
    /// `(x, u)` from the turning point outwards, x strictly increasing.
    pub lower: Vec<(f64, f64)>,
    /// `(x, u)` from the turning point through the apex, x strictly increasing.
    pub upper: Vec<(f64, f64)>,
}

impl GeneratingCurve {
    fn from_states(
        samples: Vec<CurveState>,
        family: CurveFamily,
        shape: Shape,
        turning_index: Option<usize>,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Validation("a curve needs at least two samples".into()));
        }
        if let Some(bad) = samples.windows(2).find(|w| !(w[1].s > w[0].s)) {
            return Err(Error::Validation(format!("arc length not increasing at s = {}", bad[1].s)));
        }
        let curvature = samples.iter().map(|p| shape_curvature(shape, p)).collect();
        let apex_height = samples.iter().map(|p| p.z).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { samples, curvature, family, shape, apex_height, turning_index })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The Killing parameter of ODE curves (0 for vertical planes).
    pub fn a(&self) -> Option<f64> {
        match self.shape {
            Shape::Ode { a } => Some(a),
            Shape::Vertical { .. } => Some(0.0),
            _ => None,
        }
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.samples[0].s, self.samples[self.samples.len() - 1].s)
    }

    /// The state at arc length `s`, re-integrated from the nearest stored sample
    /// at or below `s` (closed-form for non-ODE shapes).
    pub fn state_at(&self, s: f64) -> Result<CurveState> {
        let (lo, hi) = self.s_range();
        if !(s >= lo && s <= hi) {
            return Err(Error::Domain(format!("s = {s} outside the curve's range [{lo}, {hi}]")));
        }
        let origin = self.samples[0];
        match self.shape {
            Shape::Ode { a } => {
                let base = self.samples[self.anchor(s)];
                if base.s == s {
                    return Ok(base);
                }
                propagate(base, a, s - base.s, RESAMPLE_TOL, RESAMPLE_TOL)
            }
            Shape::Vertical { x0 } => Ok(CurveState::new(s, x0, origin.z + (s - origin.s), FRAC_PI_2)),
            Shape::Horizontal { height } => Ok(CurveState::new(s, origin.x + (s - origin.s), height, 0.0)),
            Shape::Circle { cx, cz, r } => {
                let phi = s / r;
                Ok(CurveState::new(s, cx + r * phi.sin(), cz + r * phi.cos(), -phi))
            }
        }
    }

    /// Index of the sample to propagate from to reach `s`: the neighbour on
    /// the apex side, so propagation runs away from `s = 0` as the curve was
    /// integrated. Towards the apex the boundary layer is unstable.
    fn anchor(&self, s: f64) -> usize {
        let k = self.samples.partition_point(|p| p.s <= s);
        if k > 0 && self.samples[k - 1].s == s {
            return k - 1;
        }
        if s < 0.0 && k < self.samples.len() {
            k
        } else {
            k.saturating_sub(1)
        }
    }

    /// `n` samples equally spaced in arc length over `[s_lo, s_hi]`. The
    /// turning index moves to the nearest new sample.
    pub fn resample(&self, s_lo: f64, s_hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(s_lo < s_hi) {
            return Err(Error::Validation(format!(
                "resampling needs n >= 2 and s_lo < s_hi (got n = {n}, [{s_lo}, {s_hi}])"
            )));
        }
        let ds = (s_hi - s_lo) / (n - 1) as f64;
        let samples = (0..n)
            .map(|i| {
                let s = if i + 1 == n { s_hi } else { s_lo + ds * i as f64 };
                self.state_at(s)
            })
            .collect::<Result<Vec<_>>>()?;
        let turning_index = self.turning_index.and_then(|t| {
            let st = self.samples[t].s;
            let idx = ((st - s_lo) / ds).round();
            (idx >= 0.0 && idx < n as f64).then_some(idx as usize)
        });
        Self::from_states(samples, self.family, self.shape, turning_index)
    }

    /// x-intercepts of both ends, extrapolating the last two samples linearly
    /// to `z = 0`.
    pub fn end_intercepts(&self) -> (f64, f64) {
        let n = self.samples.len();
        (extrapolate(&self.samples[1], &self.samples[0]), extrapolate(&self.samples[n - 2], &self.samples[n - 1]))
    }

    /// Horizontal extent between the extrapolated end intercepts.
    pub fn x_span(&self) -> f64 {
        let (l, r) = self.end_intercepts();
        (r - l).abs()
    }

    /// The state on one branch of a reaper with the given x-coordinate.
    pub fn branch_state_at_x(&self, branch: Branch, x: f64) -> Result<CurveState> {
        let t = self.require_turning()?;
        let range = match branch {
            Branch::Lower => 0..t + 1,
            Branch::Upper => t..self.samples.len(),
        };
        let part = &self.samples[range];
        let (x_lo, x_hi) = part.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.x), h.max(p.x)));
        if !(x >= x_lo && x <= x_hi) {
            return Err(Error::Domain(format!("x = {x} outside the branch's range [{x_lo}, {x_hi}]")));
        }
        // bracket in arc length; x is monotone on the branch
        let k = part
            .windows(2)
            .position(|w| (w[0].x - x) * (w[1].x - x) <= 0.0)
            .ok_or_else(|| Error::Domain(format!("no bracket for x = {x}")))?;
        let (p0, p1) = (part[k], part[k + 1]);
        if p0.x == x {
            return Ok(p0);
        }
        if p1.x == x {
            return Ok(p1);
        }
        let a = self.a().unwrap_or(0.0);
        let (mut lo, mut hi) = (p0.s, p1.s);
        let increasing = p1.x > p0.x;
        let mut s = p0.s + (p1.s - p0.s) * (x - p0.x) / (p1.x - p0.x);
        let base = if p1.s <= 0.0 { p1 } else { p0 };
        let mut best = base;
        for _ in 0..60 {
            let st = propagate(base, a, s - base.s, RESAMPLE_TOL, RESAMPLE_TOL)?;
            best = st;
            let dx = st.x - x;
            if dx.abs() <= 1e-14 * (1.0 + x.abs()) {
                break;
            }
            if (dx < 0.0) == increasing {
                lo = s;
            } else {
                hi = s;
            }
            let c = st.theta.cos();
            let newton = s - dx / c;
            s = if c != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-15 * (1.0 + s.abs()) {
                break;
            }
        }
        Ok(best)
    }

    fn require_turning(&self) -> Result<usize> {
        if self.family == CurveFamily::MinimalReaper {
            return Err(Error::Validation(
                "minimal reapers are a single graph over the x-axis; use the samples directly".into(),
            ));
        }
        self.turning_index.ok_or_else(|| Error::Validation("curve has no turning point".into()))
    }

    /// The same curve with `x ↦ 2·x0 − x`, keeping the arc-length direction.
    pub fn mirrored(&self, x0: f64) -> Result<Self> {
        let samples = self.samples.iter().map(|p| CurveState::new(p.s, 2.0 * x0 - p.x, p.z, PI - p.theta)).collect();
        let shape = match self.shape {
            Shape::Ode { a } => Shape::Ode { a: -a },
            other => return Err(Error::Validation(format!("mirroring is only defined for ODE curves, got {other:?}"))),
        };
        Self::from_states(samples, self.family, shape, self.turning_index)
    }
}

fn shape_curvature(shape: Shape, p: &CurveState) -> f64 {
    match shape {
        Shape::Ode { a } => curvature(p.z, p.theta, a),
        Shape::Vertical { .. } | Shape::Horizontal { .. } => 0.0,
        Shape::Circle { r, .. } => -1.0 / r,
    }
}

fn extrapolate(inner: &CurveState, outer: &CurveState) -> f64 {
    let dz = outer.z - inner.z;
    if dz == 0.0 {
        return outer.x;
    }
    outer.x - (outer.x - inner.x) * outer.z / dz
}

fn check_apex(z0: f64, params: &OdeParams) -> Result<()> {
    params.validate()?;
    if !(z0 > params.z_min && z0.is_finite()) {
        return Err(Error::Validation(format!("z0 must exceed z_min (z0 = {z0}, z_min = {})", params.z_min)));
    }
    Ok(())
}

/// Integrates from the apex both ways and joins the halves in increasing `s`.
fn both_ways(z0: f64, params: &OdeParams) -> Result<(Vec<CurveState>, Option<usize>)> {
    let apex = CurveState::apex(z0);
    let forward = integrate_orbit(apex, params, Direction::Forward)?;
    let backward = integrate_orbit(apex, params, Direction::Backward)?;
    let nb = backward.samples.len();
    let turning = backward
        .events_of(EventKind::ThetaHalfPi)
        .next()
        .and_then(|e| backward.samples.iter().position(|p| p.s == e.s))
        .filter(|&j| j > 0)
        .map(|j| nb - 1 - j);
    let mut samples: Vec<CurveState> = backward.samples[1..].iter().rev().copied().collect();
    samples.extend_from_slice(&forward.samples);
    Ok((samples, turning))
}

/// The reaper `𝒢(z0)` for Killing parameter `a ≠ 0` (`params.a` is ignored).
pub fn build_reaper(z0: f64, a: f64, params: &OdeParams) -> Result<GeneratingCurve> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Validation(format!(
            "reapers need a finite a != 0 (got {a}); use build_minimal_reaper for a = 0"
        )));
    }
    if a < 0.0 {
        return build_reaper(z0, -a, params)?.mirrored(0.0);
    }
    let params = OdeParams { a, ..*params };
    check_apex(z0, &params)?;
    let (samples, turning) = both_ways(z0, &params)?;
    GeneratingCurve::from_states(samples, CurveFamily::Reaper, Shape::Ode { a }, turning)
}

/// The minimal reaper `𝒢⁰(z0)` (`params.a` is ignored).
pub fn build_minimal_reaper(z0: f64, params: &OdeParams) -> Result<GeneratingCurve> {
    let params = OdeParams { a: 0.0, ..*params };
    check_apex(z0, &params)?;
    let (samples, _) = both_ways(z0, &params)?;
    GeneratingCurve::from_states(samples, CurveFamily::MinimalReaper, Shape::Ode { a: 0.0 }, None)
}

/// The vertical line `x = x0` between two heights, generating a totally
/// geodesic vertical plane.
pub fn vertical_plane(x0: f64, z_lo: f64, z_hi: f64) -> Result<GeneratingCurve> {
    if !(z_lo > 0.0 && z_lo < z_hi && x0.is_finite() && z_hi.is_finite()) {
        return Err(Error::Validation(format!("vertical plane needs 0 < z_lo < z_hi (got {z_lo}, {z_hi})")));
    }
    let samples = vec![CurveState::new(z_lo, x0, z_lo, FRAC_PI_2), CurveState::new(z_hi, x0, z_hi, FRAC_PI_2)];
    GeneratingCurve::from_states(samples, CurveFamily::VerticalPlane, Shape::Vertical { x0 }, None)
}

/// Horizontal segment `z = height`, `x ∈ [x_lo, x_hi]`, with `n` samples.
pub fn horizontal_profile(height: f64, x_lo: f64, x_hi: f64, n: usize) -> Result<GeneratingCurve> {
    if !(height > 0.0 && x_lo < x_hi && n >= 2) {
        return Err(Error::Validation("horizontal profile needs height > 0, x_lo < x_hi, n >= 2".into()));
    }
    let dx = (x_hi - x_lo) / (n - 1) as f64;
    let samples = (0..n)
        .map(|i| {
            let x = if i + 1 == n { x_hi } else { x_lo + dx * i as f64 };
            CurveState::new(x, x, height, 0.0)
        })
        .collect();
    GeneratingCurve::from_states(samples, CurveFamily::Profile, Shape::Horizontal { height }, None)
}

/// Circle arc `(cx + r sin φ, cz + r cos φ)` for `φ ∈ [phi_lo, phi_hi]`,
/// arc length `s = r·φ`, `n` samples.
pub fn circle_profile(cx: f64, cz: f64, r: f64, phi_lo: f64, phi_hi: f64, n: usize) -> Result<GeneratingCurve> {
    if !(r > 0.0 && phi_lo < phi_hi && n >= 2) {
        return Err(Error::Validation("circle profile needs r > 0, phi_lo < phi_hi, n >= 2".into()));
    }
    let dphi = (phi_hi - phi_lo) / (n - 1) as f64;
    let samples: Vec<CurveState> = (0..n)
        .map(|i| {
            let phi = if i + 1 == n { phi_hi } else { phi_lo + dphi * i as f64 };
            CurveState::new(r * phi, cx + r * phi.sin(), cz + r * phi.cos(), -phi)
        })
        .collect();
    if let Some(p) = samples.iter().find(|p| !(p.z > 0.0)) {
        return Err(Error::Domain(format!("circle profile leaves the half-space at s = {}", p.s)));
    }
    GeneratingCurve::from_states(samples, CurveFamily::Profile, Shape::Circle { cx, cz, r }, None)
}

/// `w(z0) = ∫₀^{z0} z²/√(z0⁴ − z⁴) dz`, half the width of `𝒢⁰(z0)`.
///
/// With `z² = z0² sin φ` and `φ = ψ²` the integrand becomes
/// `z0·ψ·√(sin ψ²)` on `[0, √(π/2)]`, which is smooth at both ends.
pub fn half_width(z0: f64, quad_tol: f64) -> Result<f64> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return Err(Error::Domain(format!("half width needs z0 > 0, got {z0}")));
    }
    let upper = FRAC_PI_2.sqrt();
    let r = quadrature::integrate(|psi: f64| psi * (psi * psi).sin().max(0.0).sqrt(), 0.0, upper, quad_tol / z0)?;
    Ok(z0 * r.value)
}

/// Splits a reaper at its turning point into lower and upper graphs.
pub fn to_bigraph(curve: &GeneratingCurve) -> Result<BiGraph> {
    let t = curve.require_turning()?;
    let lower: Vec<(f64, f64)> = curve.samples[..=t].iter().rev().map(|p| (p.x, p.z)).collect();
    let upper: Vec<(f64, f64)> = curve.samples[t..].iter().map(|p| (p.x, p.z)).collect();
    for (name, branch) in [("lower", &lower), ("upper", &upper)] {
        if let Some(w) = branch.windows(2).find(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Classification(format!("{name} branch is not a graph near x = {}", w[1].0)));
        }
    }
    Ok(BiGraph { lower, upper })
}
