//! Rotational surfaces, their curvature, and translator residuals.
//!
//! Each mesh carries curvature computed analytically from its generating data.
//! [`mesh_curvature_fd`] recomputes it from the vertices alone so the two can
//! be cross-checked.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::curves::GeneratingCurve;
use crate::error::{require_positive_height, Error, Result};
use crate::halfspace::{
    normal_dot_field, soliton_residual_pointwise, CurvatureData, EuclideanVector, HalfSpacePoint, KillingFieldParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    /// `Ψ(s, t) = (x(s), t, z(s))`.
    Parabolic,
    /// `Ψ(s, t) = (x(s) cos t, x(s) sin t, z(s))`.
    Spherical,
    /// `Ψ(s, t) = t·(x(s), y(s), 1)`.
    HyperbolicCone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureSource {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub ns: usize,
    pub nt: usize,
    pub s_values: Vec<f64>,
    pub t_values: Vec<f64>,
    /// Row-major in `s`: vertex `(i, j)` is at `i * nt + j`.
    pub vertices: Vec<HalfSpacePoint>,
    pub curvature: Vec<CurvatureData>,
    pub provenance: Provenance,
}

impl SurfaceMesh {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nt + j
    }

    pub fn vertex(&self, i: usize, j: usize) -> &HalfSpacePoint {
        &self.vertices[self.index(i, j)]
    }

    /// Mean spacing in `s` and `t`.
    pub fn spacing(&self) -> (f64, f64) {
        (mean_spacing(&self.s_values), mean_spacing(&self.t_values))
    }

    /// The same mesh with the opposite orientation.
    pub fn flipped(&self) -> Self {
        Self { curvature: self.curvature.iter().map(CurvatureData::flipped).collect(), ..self.clone() }
    }

    fn check(&self) -> Result<()> {
        for (p, c) in self.vertices.iter().zip(&self.curvature) {
            c.validate(p.z, 1e-10)?;
        }
        Ok(())
    }
}

fn mean_spacing(v: &[f64]) -> f64 {
    if v.len() < 2 {
        0.0
    } else {
        (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64
    }
}

fn t_grid(t_lo: f64, t_hi: f64, nt: usize) -> Result<Vec<f64>> {
    if nt < 2 || !(t_lo < t_hi) || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::Validation(format!(
            "ruling grid needs nt >= 2 and t_lo < t_hi (got nt = {nt}, [{t_lo}, {t_hi}])"
        )));
    }
    let dt = (t_hi - t_lo) / (nt - 1) as f64;
    Ok((0..nt).map(|j| if j + 1 == nt { t_hi } else { t_lo + dt * j as f64 }).collect())
}

/// Extrudes a generating curve along horizontal rulings parallel to `∂y`.
pub fn extrude_parabolic(curve: &GeneratingCurve, t_lo: f64, t_hi: f64, nt: usize) -> Result<SurfaceMesh> {
    let t_values = t_grid(t_lo, t_hi, nt)?;
    let mut vertices = Vec::with_capacity(curve.len() * nt);
    let mut curvature = Vec::with_capacity(curve.len() * nt);
    for (p, &k) in curve.samples.iter().zip(&curve.curvature) {
        let (sin, cos) = p.theta.sin_cos();
        let data = CurvatureData::from_euclidean(p.z, 0.5 * k, EuclideanVector::new(-sin, 0.0, cos))?;
        for &t in &t_values {
            vertices.push(HalfSpacePoint::new(p.x, t, p.z)?);
            curvature.push(data);
        }
    }
    Ok(SurfaceMesh {
        ns: curve.len(),
        nt,
        s_values: curve.samples.iter().map(|p| p.s).collect(),
        t_values,
        vertices,
        curvature,
        provenance: Provenance::Parabolic,
    })
}

fn require_off_axis(curve: &GeneratingCurve) -> Result<()> {
    match curve.samples.iter().find(|p| !(p.x > 0.0)) {
        Some(p) => Err(Error::Degenerate(format!("profile reaches the rotation axis (x = {} at s = {})", p.x, p.s))),
        None => Ok(()),
    }
}

/// Rotates a profile about the z-axis over a full turn (`nt` points including
/// both ends).
pub fn revolve_spherical(curve: &GeneratingCurve, nt: usize) -> Result<SurfaceMesh> {
    require_off_axis(curve)?;
    let t_values = t_grid(0.0, TAU, nt)?;
    let mut vertices = Vec::with_capacity(curve.len() * nt);
    let mut curvature = Vec::with_capacity(curve.len() * nt);
    for (p, &k) in curve.samples.iter().zip(&curve.curvature) {
        let (dz, dx) = p.theta.sin_cos();
        let h_e = 0.5 * (k + dz / p.x);
        for &t in &t_values {
            let (st, ct) = t.sin_cos();
            vertices.push(HalfSpacePoint::new(p.x * ct, p.x * st, p.z)?);
            let n_e = EuclideanVector::new(-dz * ct, -dz * st, dx);
            curvature.push(CurvatureData::from_euclidean(p.z, h_e, n_e)?);
        }
    }
    Ok(SurfaceMesh {
        ns: curve.len(),
        nt,
        s_values: curve.samples.iter().map(|p| p.s).collect(),
        t_values,
        vertices,
        curvature,
        provenance: Provenance::Spherical,
    })
}

/// A point of a unit-speed plane curve at height 1 with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSample {
    pub s: f64,
    pub p: [f64; 2],
    pub dp: [f64; 2],
    pub ddp: [f64; 2],
}

impl ConeSample {
    fn alpha(&self) -> EuclideanVector {
        EuclideanVector::new(self.p[0], self.p[1], 1.0)
    }

    fn cross(&self) -> EuclideanVector {
        EuclideanVector::new(self.dp[0], self.dp[1], 0.0).cross(&self.alpha())
    }

    /// `|α|² − ⟨α′, α⟩²`, which equals `|α′ × α|²` for unit-speed `α`.
    fn gram(&self) -> f64 {
        let alpha = self.alpha();
        let along = self.dp[0] * alpha.x() + self.dp[1] * alpha.y();
        alpha.dot(&alpha) - along * along
    }
}

/// Derivatives of an arc-length sampled profile by second-order differences.
pub fn cone_samples_fd(points: &[[f64; 2]], ds: f64) -> Result<Vec<ConeSample>> {
    if points.len() < 4 || !(ds > 0.0) {
        return Err(Error::Validation("a cone profile needs at least 4 points and ds > 0".into()));
    }
    let n = points.len();
    Ok((0..n)
        .map(|i| {
            let coord = |c: usize| move |k: usize| points[k][c];
            ConeSample {
                s: ds * i as f64,
                p: points[i],
                dp: [d1(coord(0), i, n, ds), d1(coord(1), i, n, ds)],
                ddp: [d2(coord(0), i, n, ds), d2(coord(1), i, n, ds)],
            }
        })
        .collect())
}

/// Radial graph over a profile at height 1, for `t ∈ [t_lo, t_hi]`, `t_lo > 0`.
pub fn radial_cone(profile: &[ConeSample], t_lo: f64, t_hi: f64, nt: usize) -> Result<SurfaceMesh> {
    if !(t_lo > 0.0) {
        return Err(Error::Domain(format!("radial parameter must stay positive, got t_lo = {t_lo}")));
    }
    let t_values = t_grid(t_lo, t_hi, nt)?;
    let mut vertices = Vec::with_capacity(profile.len() * nt);
    let mut curvature = Vec::with_capacity(profile.len() * nt);
    for (i, c) in profile.iter().enumerate() {
        let d = c.gram();
        if !(d > 0.0) {
            return Err(Error::Degenerate(format!("profile is radial at sample {i}")));
        }
        let cross = c.cross();
        let n_e = cross * (1.0 / d.sqrt());
        let alpha = c.alpha();
        let bend = EuclideanVector::new(c.ddp[0], c.ddp[1], 0.0).dot(&cross);
        for &t in &t_values {
            vertices.push(HalfSpacePoint::new(t * c.p[0], t * c.p[1], t)?);
            let h_e = alpha.dot(&alpha) * bend / (2.0 * t * d * d.sqrt());
            curvature.push(CurvatureData::from_euclidean(t, h_e, n_e)?);
        }
    }
    Ok(SurfaceMesh {
        ns: profile.len(),
        nt,
        s_values: profile.iter().map(|c| c.s).collect(),
        t_values,
        vertices,
        curvature,
        provenance: Provenance::HyperbolicCone,
    })
}

fn d1(f: impl Fn(usize) -> f64, k: usize, n: usize, h: f64) -> f64 {
    if k == 0 {
        (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h)
    } else if k == n - 1 {
        (3.0 * f(k) - 4.0 * f(k - 1) + f(k - 2)) / (2.0 * h)
    } else {
        (f(k + 1) - f(k - 1)) / (2.0 * h)
    }
}

fn d2(f: impl Fn(usize) -> f64, k: usize, n: usize, h: f64) -> f64 {
    if k == 0 {
        (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h)
    } else if k == n - 1 {
        (2.0 * f(k) - 5.0 * f(k - 1) + 4.0 * f(k - 2) - f(k - 3)) / (h * h)
    } else {
        (f(k + 1) - 2.0 * f(k) + f(k - 1)) / (h * h)
    }
}

fn require_uniform(v: &[f64], what: &str) -> Result<f64> {
    let h = mean_spacing(v);
    let span = (v[v.len() - 1] - v[0]).abs();
    for (k, w) in v.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * span.max(1.0) {
            return Err(Error::Validation(format!(
                "{what} grid is not uniform near index {k}; resample the curve first"
            )));
        }
    }
    Ok(h)
}

/// Curvature recomputed from the vertex positions with second-order
/// differences (one-sided on the boundary rows and columns). The normal is
/// `Ψ_s × Ψ_t` normalized.
pub fn mesh_curvature_fd(mesh: &SurfaceMesh) -> Result<Vec<CurvatureData>> {
    if mesh.ns < 4 || mesh.nt < 4 {
        return Err(Error::Validation(format!(
            "finite differences need at least 4x4 vertices, got {}x{}",
            mesh.ns, mesh.nt
        )));
    }
    let hs = require_uniform(&mesh.s_values, "s")?;
    let ht = require_uniform(&mesh.t_values, "t")?;
    let (ns, nt) = (mesh.ns, mesh.nt);
    let pos = |i: usize, j: usize, c: usize| mesh.vertices[i * nt + j].as_vector().0[c];
    let mut out = Vec::with_capacity(ns * nt);
    for i in 0..ns {
        for j in 0..nt {
            let mut ps = [0.0; 3];
            let mut pt = [0.0; 3];
            let mut pss = [0.0; 3];
            let mut ptt = [0.0; 3];
            let mut pst = [0.0; 3];
            for c in 0..3 {
                ps[c] = d1(|k| pos(k, j, c), i, ns, hs);
                pt[c] = d1(|k| pos(i, k, c), j, nt, ht);
                pss[c] = d2(|k| pos(k, j, c), i, ns, hs);
                ptt[c] = d2(|k| pos(i, k, c), j, nt, ht);
                pst[c] = d1(|k| d1(|l| pos(k, l, c), j, nt, ht), i, ns, hs);
            }
            let (ps, pt) = (EuclideanVector(ps), EuclideanVector(pt));
            let (e_, f_, g_) = (ps.dot(&ps), ps.dot(&pt), pt.dot(&pt));
            let det = e_ * g_ - f_ * f_;
            let normal = ps.cross(&pt).normalized();
            let n_e = match normal {
                Some(n) if det > 1e-14 * e_ * g_ => n,
                _ => {
                    return Err(Error::Degenerate(format!("singular metric at vertex ({i}, {j}) (EG - F^2 = {det:e})")))
                }
            };
            let l = EuclideanVector(pss).dot(&n_e);
            let m = EuclideanVector(pst).dot(&n_e);
            let n = EuclideanVector(ptt).dot(&n_e);
            let h_e = (l * g_ - 2.0 * m * f_ + n * e_) / (2.0 * det);
            let z = mesh.vertices[i * nt + j].z;
            out.push(CurvatureData::from_euclidean(z, h_e, n_e)?);
        }
    }
    Ok(out)
}

/// Per-vertex hyperbolic mean curvature from finite differences.
pub fn mesh_mean_curvature_fd(mesh: &SurfaceMesh) -> Result<Vec<f64>> {
    Ok(mesh_curvature_fd(mesh)?.iter().map(|c| c.h).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Row-major over `rows × cols`.
    pub per_vertex: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub grid_spacing: f64,
}

impl ResidualReport {
    pub fn from_values(per_vertex: Vec<f64>, rows: usize, cols: usize, grid_spacing: f64) -> Self {
        let abs: Vec<f64> = per_vertex.iter().map(|v| v.abs()).collect();
        let max_abs = abs.iter().copied().fold(0.0, f64::max);
        let mean_abs = if abs.is_empty() { 0.0 } else { pairwise_sum(&abs) / abs.len() as f64 };
        // rounding in the mean must not break max >= mean
        let mean_abs = mean_abs.min(max_abs);
        Self { max_abs, mean_abs, per_vertex, rows, cols, grid_spacing }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.per_vertex[i * self.cols + j]
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let (l, r) = v.split_at(v.len() / 2);
        pairwise_sum(l) + pairwise_sum(r)
    }
}

/// Defect `H − ⟨N, ξ⟩` at every vertex.
pub fn soliton_residual(mesh: &SurfaceMesh, k: KillingFieldParams, source: CurvatureSource) -> Result<ResidualReport> {
    let fd;
    let curvature = match source {
        CurvatureSource::Analytic => {
            mesh.check()?;
            &mesh.curvature
        }
        CurvatureSource::FiniteDifference => {
            fd = mesh_curvature_fd(mesh)?;
            &fd
        }
    };
    let values = mesh
        .vertices
        .iter()
        .zip(curvature)
        .map(|(p, c)| soliton_residual_pointwise(c, p, k))
        .collect::<Result<Vec<_>>>()?;
    let (hs, ht) = mesh.spacing();
    Ok(ResidualReport::from_values(values, mesh.ns, mesh.nt, hs.max(ht)))
}

/// Coefficients of `{1, cos t, sin t}` in the translator defect of a spherical
/// rotational surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierObstruction {
    pub s: Vec<f64>,
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

impl FourierObstruction {
    pub fn reconstruct(&self, i: usize, t: f64) -> f64 {
        let (st, ct) = t.sin_cos();
        self.c0[i] + self.c1[i] * ct + self.c2[i] * st
    }

    /// Largest magnitude of each coefficient over the profile.
    pub fn max_abs(&self) -> [f64; 3] {
        let m = |v: &[f64]| v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        [m(&self.c0), m(&self.c1), m(&self.c2)]
    }
}

pub fn spherical_obstruction(curve: &GeneratingCurve, k: KillingFieldParams) -> Result<FourierObstruction> {
    if let Some(p) = curve.samples.iter().find(|p| !(p.x > 0.0)) {
        return Err(Error::Domain(format!("profile needs x > 0, got x = {} at s = {}", p.x, p.s)));
    }
    let n = curve.len();
    let mut out = FourierObstruction {
        s: Vec::with_capacity(n),
        c0: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
        c2: Vec::with_capacity(n),
    };
    for (p, &kappa) in curve.samples.iter().zip(&curve.curvature) {
        let (dz, dx) = p.theta.sin_cos();
        out.s.push(p.s);
        out.c0.push(0.5 * p.z * (kappa + dz / p.x) + dx);
        out.c1.push(k.a * dz / p.z);
        out.c2.push(k.b * dz / p.z);
    }
    Ok(out)
}

/// The two t-independent parts of the defect of a radial graph `t·α(s)`:
/// `√D·(H − ⟨N, ξ⟩) = L(s) − R(s)/t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    pub l_max_abs: f64,
    pub r_max_abs: f64,
    pub tol: f64,
    pub l_vanishes: bool,
    pub r_vanishes: bool,
}

impl ConeReport {
    /// The radial graph is a translator only if both parts vanish.
    pub fn is_translator(&self) -> bool {
        self.l_vanishes && self.r_vanishes
    }
}

pub fn hyperbolic_cone_check(profile: &[ConeSample], k: KillingFieldParams, tol: f64) -> Result<ConeReport> {
    let mut l = Vec::with_capacity(profile.len());
    let mut r = Vec::with_capacity(profile.len());
    for (i, c) in profile.iter().enumerate() {
        let d = c.gram();
        if !(d > 0.0) {
            return Err(Error::Degenerate(format!("|alpha|^2 - <alpha', alpha>^2 = {d:e} at sample {i}")));
        }
        let alpha = c.alpha();
        let cross = c.cross();
        let bend = EuclideanVector::new(c.ddp[0], c.ddp[1], 0.0).dot(&cross);
        l.push(alpha.dot(&alpha) * bend / (2.0 * d) + cross.z());
        r.push(cross.dot(&k.euclidean()));
    }
    let m = |v: &[f64]| v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let (l_max_abs, r_max_abs) = (m(&l), m(&r));
    Ok(ConeReport { l, r, l_max_abs, r_max_abs, tol, l_vanishes: l_max_abs <= tol, r_vanishes: r_max_abs <= tol })
}

/// Scalar field on a uniform grid, `values[i * ny + j]` at `(x0 + i·h, y0 + j·h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            for j in 0..ny {
                values.push(f(i, j));
            }
        }
        Self { nx, ny, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny + j]
    }
}

/// Central-difference defect of the translator equation for a graph `z = u(x, y)`,
///
/// ```text
/// div(Du/W) + (2/(u²W))·(u + a·u_x + b·u_y),   W = √(1 + |Du|²),
/// ```
///
/// which is `(2/u)(H − ⟨N, ξ⟩)` for the upward normal. Interior nodes only.
pub fn graph_pde_residual(u: &GridField, k: KillingFieldParams, h: f64) -> Result<ResidualReport> {
    if u.nx < 3 || u.ny < 3 || u.values.len() != u.nx * u.ny {
        return Err(Error::Validation(format!("grid must be at least 3x3, got {}x{}", u.nx, u.ny)));
    }
    if !(h > 0.0) {
        return Err(Error::Validation(format!("grid spacing must be positive, got {h}")));
    }
    for (idx, &v) in u.values.iter().enumerate() {
        require_positive_height(v)
            .map_err(|_| Error::Domain(format!("graph must be positive, got u = {v} at node {}", idx)))?;
    }
    let (rows, cols) = (u.nx - 2, u.ny - 2);
    let mut values = Vec::with_capacity(rows * cols);
    for i in 1..u.nx - 1 {
        for j in 1..u.ny - 1 {
            let c = u.at(i, j);
            let ux = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * h);
            let uy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * h);
            let uxx = (u.at(i + 1, j) - 2.0 * c + u.at(i - 1, j)) / (h * h);
            let uyy = (u.at(i, j + 1) - 2.0 * c + u.at(i, j - 1)) / (h * h);
            let uxy =
                (u.at(i + 1, j + 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1) + u.at(i - 1, j - 1)) / (4.0 * h * h);
            let w2 = 1.0 + ux * ux + uy * uy;
            let w = w2.sqrt();
            let div = ((1.0 + uy * uy) * uxx - 2.0 * ux * uy * uxy + (1.0 + ux * ux) * uyy) / (w2 * w);
            values.push(div + 2.0 / (c * c * w) * (c + k.a * ux + k.b * uy));
        }
    }
    Ok(ResidualReport::from_values(values, rows, cols, h))
}

/// `⟨N, ξ⟩` at each vertex from the stored analytic normals.
pub fn normal_field_values(mesh: &SurfaceMesh, k: KillingFieldParams) -> Vec<f64> {
    mesh.vertices.iter().zip(&mesh.curvature).map(|(p, c)| normal_dot_field(&c.n_e, p.z, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{circle_profile, horizontal_profile, vertical_plane};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn horosphere_both_ways() {
        let line = horizontal_profile(0.7, -1.0, 1.0, 33).unwrap();
        let mesh = extrude_parabolic(&line, -1.0, 1.0, 17).unwrap();
        let k = KillingFieldParams::new(1.3, -0.4);
        for source in [CurvatureSource::Analytic, CurvatureSource::FiniteDifference] {
            let r = soliton_residual(&mesh, k, source).unwrap();
            assert!(r.per_vertex.iter().all(|v| (v - 1.0).abs() < 1e-12), "{source:?}");
        }
    }

    #[test]
    fn vertical_plane_is_flat_exactly() {
        let v = vertical_plane(0.25, 0.5, 4.5).unwrap().resample(0.5, 4.5, 17).unwrap();
        let mesh = extrude_parabolic(&v, -2.0, 2.0, 9).unwrap();
        let h = mesh_mean_curvature_fd(&mesh).unwrap();
        assert!(h.iter().all(|&v| v == 0.0));
        let r = soliton_residual(&mesh, KillingFieldParams::new(0.0, 3.0), CurvatureSource::Analytic).unwrap();
        assert!(r.max_abs < 1e-15);
    }

    #[test]
    fn hemisphere_is_minimal() {
        let arc = circle_profile(0.0, 0.0, 1.0, 0.2, 1.3, 200).unwrap();
        let mesh = revolve_spherical(&arc, 64).unwrap();
        assert!(mesh.curvature.iter().all(|c| c.h.abs() < 1e-14));
        let fd = mesh_mean_curvature_fd(&mesh).unwrap();
        assert!(fd.iter().all(|h| h.abs() < 1e-2));
    }

    #[test]
    fn spherical_needs_positive_radius() {
        let arc = circle_profile(0.0, 0.0, 1.0, 0.0, 1.0, 10).unwrap();
        assert!(matches!(revolve_spherical(&arc, 8), Err(Error::Degenerate(_))));
        assert!(spherical_obstruction(&arc, KillingFieldParams::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn fourier_matches_direct() {
        let arc = circle_profile(1.0, 0.6, 0.5, -1.0, 1.2, 40).unwrap();
        let k = KillingFieldParams::new(1.0, 0.5);
        let mesh = revolve_spherical(&arc, 24).unwrap();
        let direct = soliton_residual(&mesh, k, CurvatureSource::Analytic).unwrap();
        let ob = spherical_obstruction(&arc, k).unwrap();
        for i in 0..mesh.ns {
            for j in 0..mesh.nt {
                let rec = ob.reconstruct(i, mesh.t_values[j]);
                assert!((rec - direct.get(i, j)).abs() < 1e-10);
            }
        }
    }

    fn line_profile(start: [f64; 2], dir: [f64; 2], n: usize, ds: f64) -> Vec<ConeSample> {
        (0..n)
            .map(|i| {
                let s = ds * i as f64;
                ConeSample { s, p: [start[0] + s * dir[0], start[1] + s * dir[1]], dp: dir, ddp: [0.0, 0.0] }
            })
            .collect()
    }

    #[test]
    fn cone_line_examples() {
        let k = KillingFieldParams::new(0.6, 0.8);
        let through_origin = line_profile([-1.2, -1.6], [0.6, 0.8], 50, 0.05);
        let rep = hyperbolic_cone_check(&through_origin, k, 1e-12).unwrap();
        assert!(rep.is_translator());

        let skew = line_profile([0.0, -1.0], [1.0, 0.0], 50, 0.05);
        let rep = hyperbolic_cone_check(&skew, k, 1e-12).unwrap();
        assert!(!rep.r_vanishes);
    }

    #[test]
    fn cone_circle() {
        let n = 400;
        let ds = TAU / n as f64;
        let pts: Vec<[f64; 2]> = (0..=n).map(|i| [(ds * i as f64).cos(), (ds * i as f64).sin()]).collect();
        let samples = cone_samples_fd(&pts, ds).unwrap();
        let rep = hyperbolic_cone_check(&samples, KillingFieldParams::new(1.0, 0.0), 1e-6).unwrap();
        assert!(!rep.l_vanishes);
        assert!(rep.l.iter().all(|v| (v + 1.5).abs() < 1e-3));
    }

    #[test]
    fn cone_mesh_curvature_agrees_with_fd() {
        let n = 81;
        let ds = 1.0 / (n - 1) as f64;
        let samples: Vec<ConeSample> = (0..n)
            .map(|i| {
                let s = 0.3 + ds * i as f64;
                ConeSample { s, p: [s.cos(), s.sin()], dp: [-s.sin(), s.cos()], ddp: [-s.cos(), -s.sin()] }
            })
            .collect();
        let mesh = radial_cone(&samples, 0.5, 1.5, 41).unwrap();
        let fd = mesh_curvature_fd(&mesh).unwrap();
        for (a, b) in mesh.curvature.iter().zip(&fd) {
            assert!((a.h - b.h).abs() < 1e-3);
            assert!((a.n_e - b.n_e).norm() < 1e-3);
        }
    }

    #[test]
    fn graph_pde_constant_and_degenerate() {
        let u = GridField::from_fn(5, 5, |_, _| 2.0);
        let r = graph_pde_residual(&u, KillingFieldParams::new(1.0, 3.0), 0.1).unwrap();
        assert!(r.per_vertex.iter().all(|&v| v == 1.0));
        let bad = GridField::from_fn(4, 4, |i, _| i as f64);
        assert!(matches!(graph_pde_residual(&bad, KillingFieldParams::new(1.0, 0.0), 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn flipping_negates_residual() {
        let arc = circle_profile(1.0, 0.6, 0.5, -1.0, 1.2, 20).unwrap();
        let mesh = revolve_spherical(&arc, 12).unwrap();
        let k = KillingFieldParams::new(1.0, 0.0);
        let r = soliton_residual(&mesh, k, CurvatureSource::Analytic).unwrap();
        let f = soliton_residual(&mesh.flipped(), k, CurvatureSource::Analytic).unwrap();
        for (a, b) in r.per_vertex.iter().zip(&f.per_vertex) {
            assert_eq!(*a, -*b);
        }
        assert_eq!(r.max_abs, f.max_abs);
    }

    #[test]
    fn nonuniform_grid_is_rejected() {
        let arc = circle_profile(0.0, 2.0, 1.0, -FRAC_PI_2, 0.0, 10).unwrap();
        let mut mesh = extrude_parabolic(&arc, 0.0, 1.0, 6).unwrap();
        mesh.s_values[3] += 0.01;
        assert!(mesh_curvature_fd(&mesh).is_err());
    }
}
