//! Primitives of the upper half-space model of hyperbolic 3-space.
//!
//! Points are Euclidean coordinates `(x, y, z)` with `z > 0`; the hyperbolic
//! metric is the Euclidean one scaled by `1/z²`. The hyperbolic unit normal is
//! never stored: every formula works with the Euclidean unit normal `Nᵉ` and
//! the height, using `N = z·Nᵉ`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive_height, Error, Result};

/// Default tolerance for unit-normal and consistency checks.
pub const CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HalfSpacePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        require_positive_height(z)?;
        Ok(Self { x, y, z })
    }

    pub fn as_vector(&self) -> EuclideanVector {
        EuclideanVector::new(self.x, self.y, self.z)
    }

    /// Image under the parabolic translation generated by `k` at flow time `t`,
    /// i.e. the horizontal Euclidean shift by `t·(a, b, 0)`.
    pub fn translated(&self, k: KillingFieldParams, t: f64) -> Self {
        Self { x: self.x + t * k.a, y: self.y + t * k.b, z: self.z }
    }

    /// Euclidean homothety from the origin; an isometry of the model for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda * self.x, lambda * self.y, lambda * self.z)
    }

    /// Reflection in the vertical plane `x = x0`.
    pub fn reflected_x(&self, x0: f64) -> Self {
        Self { x: 2.0 * x0 - self.x, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EuclideanVector(pub [f64; 3]);

impl EuclideanVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Self([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }
}

impl Add for EuclideanVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for EuclideanVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Mul<f64> for EuclideanVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self([self.0[0] * rhs, self.0[1] * rhs, self.0[2] * rhs])
    }
}

impl Neg for EuclideanVector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// The parabolic Killing field `ξ = a∂x + b∂y`.
///
/// The pair is stored as given. Soliton problems reject `(0, 0)` through
/// [`KillingFieldParams::nontrivial`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KillingFieldParams {
    pub a: f64,
    pub b: f64,
}

impl KillingFieldParams {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn nontrivial(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Validation(format!("non-finite Killing field ({a}, {b})")));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::Validation("a and b must not both vanish".into()));
        }
        Ok(Self { a, b })
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    /// Euclidean components of ξ; the field is the same at every point.
    pub fn euclidean(&self) -> EuclideanVector {
        EuclideanVector::new(self.a, self.b, 0.0)
    }
}

/// Curvature data of a surface at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    /// Euclidean mean curvature (average of the principal curvatures w.r.t. `n_e`).
    pub h_e: f64,
    /// Euclidean unit normal.
    pub n_e: EuclideanVector,
    /// Hyperbolic mean curvature.
    pub h: f64,
}

impl CurvatureData {
    /// Assembles the data at height `z`, computing `H = z·Hₑ + (Nᵉ)₃`.
    pub fn from_euclidean(z: f64, h_e: f64, n_e: EuclideanVector) -> Result<Self> {
        let h = mean_curvature_from_euclidean(z, h_e, n_e.z())?;
        Ok(Self { h_e, n_e, h })
    }

    pub fn flipped(&self) -> Self {
        Self { h_e: -self.h_e, n_e: -self.n_e, h: -self.h }
    }

    pub fn validate(&self, z: f64, tol: f64) -> Result<()> {
        let unit_defect = (self.n_e.norm() - 1.0).abs();
        if !(unit_defect <= tol) {
            return Err(Error::Validation(format!("normal is not unit length (| |N_e| - 1 | = {unit_defect:e})")));
        }
        let expected = mean_curvature_from_euclidean(z, self.h_e, self.n_e.z())?;
        let defect = (self.h - expected).abs();
        if !(defect <= tol) {
            return Err(Error::Validation(format!(
                "H = {} disagrees with z*H_e + N_e3 = {expected} (defect {defect:e})",
                self.h
            )));
        }
        Ok(())
    }
}

/// Hyperbolic inner product of two tangent vectors at `p`: `⟨u, v⟩ₑ / z²`.
pub fn hyp_inner(p: &HalfSpacePoint, u: &EuclideanVector, v: &EuclideanVector) -> Result<f64> {
    require_positive_height(p.z)?;
    Ok(u.dot(v) / (p.z * p.z))
}

/// Hyperbolic mean curvature from Euclidean data: `H = z·Hₑ + (Nᵉ)₃`.
pub fn mean_curvature_from_euclidean(z: f64, h_e: f64, ne3: f64) -> Result<f64> {
    require_positive_height(z)?;
    Ok(z * h_e + ne3)
}

/// `⟨N, ξ⟩` in the hyperbolic metric, with `N = z·Nᵉ`.
pub fn normal_dot_field(n_e: &EuclideanVector, z: f64, k: KillingFieldParams) -> f64 {
    n_e.dot(&k.euclidean()) / z
}

/// Defect `H − ⟨N, ξ⟩` of the translator equation at one point.
pub fn soliton_residual_pointwise(c: &CurvatureData, p: &HalfSpacePoint, k: KillingFieldParams) -> Result<f64> {
    require_positive_height(p.z)?;
    c.validate(p.z, CONSISTENCY_TOL)?;
    Ok(c.h - normal_dot_field(&c.n_e, p.z, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64, z: f64) -> HalfSpacePoint {
        HalfSpacePoint::new(x, y, z).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let ex = EuclideanVector::new(1.0, 0.0, 0.0);
        let ey = EuclideanVector::new(0.0, 1.0, 0.0);
        assert_eq!(hyp_inner(&p(0.0, 0.0, 1.0), &ex, &ex).unwrap(), 1.0);
        assert_eq!(hyp_inner(&p(0.0, 0.0, 2.0), &ex, &ex).unwrap(), 0.25);
        assert_eq!(hyp_inner(&p(5.0, -3.0, 2.0), &ex, &ey).unwrap(), 0.0);
    }

    #[test]
    fn nonpositive_heights_rejected() {
        assert!(HalfSpacePoint::new(0.0, 0.0, 0.0).is_err());
        assert!(HalfSpacePoint::new(0.0, 0.0, -1.0).is_err());
        let bad = HalfSpacePoint { x: 0.0, y: 0.0, z: 0.0 };
        let e = EuclideanVector::new(1.0, 0.0, 0.0);
        assert!(matches!(hyp_inner(&bad, &e, &e), Err(Error::Domain(_))));
        assert!(mean_curvature_from_euclidean(-1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn mean_curvature_examples() {
        // horosphere
        assert_eq!(mean_curvature_from_euclidean(3.7, 0.0, 1.0).unwrap(), 1.0);
        // vertical plane
        assert_eq!(mean_curvature_from_euclidean(0.4, 0.0, 0.0).unwrap(), 0.0);
        // hemisphere of radius r with inward normal is totally geodesic
        let r = 2.5;
        for z in [0.1, 1.0, 2.4] {
            let h = mean_curvature_from_euclidean(z, 1.0 / r, -z / r).unwrap();
            assert!(h.abs() < 1e-15);
        }
    }

    #[test]
    fn residual_examples() {
        let up = EuclideanVector::new(0.0, 0.0, 1.0);
        let horo = CurvatureData::from_euclidean(1.0, 0.0, up).unwrap();
        for (a, b) in [(1.0, 0.0), (0.0, 4.0), (-2.0, 3.0)] {
            let r = soliton_residual_pointwise(&horo, &p(0.0, 0.0, 1.0), KillingFieldParams::new(a, b)).unwrap();
            assert_eq!(r, 1.0);
        }

        // vertical plane parallel to (a, b, 0): normal ⟂ ξ, H = 0
        let (a, b) = (3.0, 4.0);
        let n = EuclideanVector::new(-b / 5.0, a / 5.0, 0.0);
        let plane = CurvatureData::from_euclidean(0.7, 0.0, n).unwrap();
        let r = soliton_residual_pointwise(&plane, &p(1.0, 2.0, 0.7), KillingFieldParams::new(a, b)).unwrap();
        assert!(r.abs() < 1e-15);
    }

    #[test]
    fn residual_on_grim_reaper_state_vanishes() {
        // a = 1, b = 0; θ' taken from the translator ODE.
        let (z, theta) = (1.3_f64, 0.4_f64);
        let dtheta = -(2.0 / (z * z)) * (theta.sin() + z * theta.cos());
        let n = EuclideanVector::new(-theta.sin(), 0.0, theta.cos());
        let c = CurvatureData::from_euclidean(z, dtheta / 2.0, n).unwrap();
        let r = soliton_residual_pointwise(&c, &p(0.0, 0.0, z), KillingFieldParams::new(1.0, 0.0)).unwrap();
        assert!(r.abs() < 1e-14, "{r}");
    }

    #[test]
    fn inconsistent_curvature_rejected() {
        let c = CurvatureData { h_e: 0.0, n_e: EuclideanVector::new(0.0, 0.0, 1.0), h: 0.5 };
        let err = soliton_residual_pointwise(&c, &p(0.0, 0.0, 1.0), KillingFieldParams::new(1.0, 0.0));
        assert!(matches!(err, Err(Error::Validation(_))));
        let c = CurvatureData { h_e: 0.0, n_e: EuclideanVector::new(0.0, 0.0, 2.0), h: 2.0 };
        assert!(c.validate(1.0, CONSISTENCY_TOL).is_err());
    }

    #[test]
    fn trivial_field_rejected_for_soliton_problems() {
        assert!(KillingFieldParams::nontrivial(0.0, 0.0).is_err());
        assert!(KillingFieldParams::nontrivial(0.0, 1.0).is_ok());
        assert!(KillingFieldParams::new(0.0, 0.0).is_trivial());
    }

    fn unit_vector() -> impl Strategy<Value = EuclideanVector> {
        (0.0..std::f64::consts::PI, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(polar, azimuth)| {
            EuclideanVector::new(polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos())
        })
    }

    proptest! {
        #[test]
        fn conformal_scaling(z in 1e-3..1e3f64, u in unit_vector()) {
            let q = p(0.0, 0.0, z);
            let val = hyp_inner(&q, &u, &u).unwrap() * z * z;
            prop_assert!((val - 1.0).abs() < 1e-13);
        }

        #[test]
        fn mean_curvature_linear(z in 1e-3..10.0f64, h1 in -5.0..5.0f64, h2 in -5.0..5.0f64,
                                 n1 in -1.0..1.0f64, n2 in -1.0..1.0f64, lam in -3.0..3.0f64) {
            let lhs = mean_curvature_from_euclidean(z, h1 + lam * h2, n1 + lam * n2).unwrap();
            let rhs = mean_curvature_from_euclidean(z, h1, n1).unwrap()
                + lam * mean_curvature_from_euclidean(z, h2, n2).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn residual_invariant_under_field_flow(
            x in -5.0..5.0f64, y in -5.0..5.0f64, z in 0.05..5.0f64,
            a in -3.0..3.0f64, b in -3.0..3.0f64, t in -10.0..10.0f64,
            n in unit_vector(), h_e in -2.0..2.0f64,
        ) {
            let k = KillingFieldParams::new(a, b);
            let q = p(x, y, z);
            let c = CurvatureData::from_euclidean(z, h_e, n).unwrap();
            let r0 = soliton_residual_pointwise(&c, &q, k).unwrap();
            let r1 = soliton_residual_pointwise(&c, &q.translated(k, t), k).unwrap();
            prop_assert_eq!(r0, r1);
        }

        #[test]
        fn orientation_flip_negates_residual(
            z in 0.05..5.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64,
            n in unit_vector(), h_e in -2.0..2.0f64,
        ) {
            let k = KillingFieldParams::new(a, b);
            let q = p(0.0, 0.0, z);
            let c = CurvatureData::from_euclidean(z, h_e, n).unwrap();
            let r = soliton_residual_pointwise(&c, &q, k).unwrap();
            let rf = soliton_residual_pointwise(&c.flipped(), &q, k).unwrap();
            prop_assert!((r + rf).abs() < 1e-12 * (1.0 + r.abs()));
        }
    }
}
