//! Grim-reaper translating solitons of the mean curvature flow in the upper
//! half-space model of hyperbolic 3-space, for the parabolic Killing field
//! `ξ = a∂x + b∂y`.

// `!(a < b)` also rejects NaN, which is the point wherever it appears
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod error;
pub mod export;
pub mod halfspace;
pub mod ode;
pub mod phase;
pub mod quadrature;
pub mod surface;

pub use error::{Error, Result};
