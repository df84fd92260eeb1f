//! Python bindings for the reaper curves, phase-plane tools and surface checks.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use reaper::curves::{self, Branch};
use reaper::halfspace::KillingFieldParams;
use reaper::ode::{self, CurveState};
use reaper::phase::{self, PhasePoint};
use reaper::surface::{self, CurvatureSource, GridField};
use reaper::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Validation(_) => PyValueError::new_err(e.to_string()),
        Error::Classification(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Integration { .. } | Error::Degenerate(_) => PyArithmeticError::new_err(e.to_string()),
    }
}

type StateTuple = (f64, f64, f64, f64);
type Coefficients = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

fn tuple(p: CurveState) -> StateTuple {
    (p.s, p.x, p.z, p.theta)
}

/// Integration settings; `a` is overridden by the builders that take it explicitly.
#[pyclass(name = "OdeParams", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
struct PyOdeParams {
    a: f64,
    z_min: f64,
    s_max: f64,
    rel_tol: f64,
    abs_tol: f64,
    output_step: Option<f64>,
}

#[pymethods]
impl PyOdeParams {
    #[new]
    #[pyo3(signature = (a=1.0, z_min=1e-6, s_max=100.0, rel_tol=1e-10, abs_tol=1e-10, output_step=Some(0.01)))]
    fn new(a: f64, z_min: f64, s_max: f64, rel_tol: f64, abs_tol: f64, output_step: Option<f64>) -> Self {
        Self { a, z_min, s_max, rel_tol, abs_tol, output_step }
    }

    fn __repr__(&self) -> String {
        format!(
            "OdeParams(a={}, z_min={}, s_max={}, rel_tol={}, abs_tol={}, output_step={:?})",
            self.a, self.z_min, self.s_max, self.rel_tol, self.abs_tol, self.output_step
        )
    }
}

impl PyOdeParams {
    fn core(&self) -> ode::OdeParams {
        ode::OdeParams {
            a: self.a,
            z_min: self.z_min,
            s_max: self.s_max,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            output_step: self.output_step,
        }
    }
}

fn params_or(p: Option<PyRef<'_, PyOdeParams>>, z_min: f64) -> ode::OdeParams {
    p.map(|p| p.core()).unwrap_or(ode::OdeParams { z_min, ..ode::OdeParams::default() })
}

#[pyclass(name = "OrbitReport", get_all, frozen)]
struct PyOrbitReport {
    a: f64,
    apex_height: f64,
    gamma_crossing_s: f64,
    theta_halfpi_crossing_s: f64,
    turning_x: f64,
    forward_asymptote: f64,
    backward_asymptote: f64,
    forward_terminal_s: f64,
    backward_terminal_s: f64,
    z_min: f64,
    is_bigraph: bool,
}

impl From<phase::OrbitReport> for PyOrbitReport {
    fn from(r: phase::OrbitReport) -> Self {
        Self {
            a: r.a,
            apex_height: r.apex_height,
            gamma_crossing_s: r.gamma_crossing_s,
            theta_halfpi_crossing_s: r.theta_halfpi_crossing_s,
            turning_x: r.turning_x,
            forward_asymptote: r.forward_asymptote,
            backward_asymptote: r.backward_asymptote,
            forward_terminal_s: r.forward_terminal_s,
            backward_terminal_s: r.backward_terminal_s,
            z_min: r.z_min,
            is_bigraph: r.is_bigraph,
        }
    }
}

/// Sampled generating curve in the `xz`-plane.
#[pyclass(name = "GeneratingCurve", frozen)]
struct PyCurve(curves::GeneratingCurve);

#[pymethods]
impl PyCurve {
    #[getter]
    fn family(&self) -> &'static str {
        self.0.family.name()
    }

    #[getter]
    fn apex_height(&self) -> f64 {
        self.0.apex_height
    }

    #[getter]
    fn turning_index(&self) -> Option<usize> {
        self.0.turning_index
    }

    #[getter]
    fn s(&self) -> Vec<f64> {
        self.0.samples.iter().map(|p| p.s).collect()
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.0.samples.iter().map(|p| p.x).collect()
    }

    #[getter]
    fn z(&self) -> Vec<f64> {
        self.0.samples.iter().map(|p| p.z).collect()
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        self.0.samples.iter().map(|p| p.theta).collect()
    }

    /// Curvature `θ'` at each sample.
    #[getter]
    fn curvature(&self) -> Vec<f64> {
        self.0.curvature.clone()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn s_range(&self) -> (f64, f64) {
        self.0.s_range()
    }

    /// `(s, x, z, theta)` at arc length `s`.
    fn state_at(&self, s: f64) -> PyResult<StateTuple> {
        self.0.state_at(s).map(tuple).map_err(py_err)
    }

    fn resample(&self, s_lo: f64, s_hi: f64, n: usize) -> PyResult<Self> {
        self.0.resample(s_lo, s_hi, n).map(Self).map_err(py_err)
    }

    /// x-intercepts of both ends, extrapolated linearly to `z = 0`.
    fn end_intercepts(&self) -> (f64, f64) {
        self.0.end_intercepts()
    }

    fn x_span(&self) -> f64 {
        self.0.x_span()
    }

    /// State on the `"lower"` or `"upper"` branch with the given x.
    fn branch_state_at_x(&self, branch: &str, x: f64) -> PyResult<StateTuple> {
        let b = match branch {
            "lower" => Branch::Lower,
            "upper" => Branch::Upper,
            other => return Err(PyValueError::new_err(format!("branch must be 'lower' or 'upper', got {other:?}"))),
        };
        self.0.branch_state_at_x(b, x).map(tuple).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("GeneratingCurve(family={}, z0={}, samples={})", self.family(), self.0.apex_height, self.0.len())
    }
}

#[pyclass(name = "ResidualReport", get_all, frozen)]
struct PyResidualReport {
    max_abs: f64,
    mean_abs: f64,
    per_vertex: Vec<f64>,
    rows: usize,
    cols: usize,
    grid_spacing: f64,
}

impl From<surface::ResidualReport> for PyResidualReport {
    fn from(r: surface::ResidualReport) -> Self {
        Self {
            max_abs: r.max_abs,
            mean_abs: r.mean_abs,
            per_vertex: r.per_vertex,
            rows: r.rows,
            cols: r.cols,
            grid_spacing: r.grid_spacing,
        }
    }
}

#[pyclass(name = "SurfaceMesh", frozen)]
struct PyMesh(surface::SurfaceMesh);

#[pymethods]
impl PyMesh {
    /// `Ψ(s, t) = (x(s), t, z(s))` for `t ∈ [t_lo, t_hi]`.
    #[staticmethod]
    fn parabolic(curve: &PyCurve, t_lo: f64, t_hi: f64, nt: usize) -> PyResult<Self> {
        surface::extrude_parabolic(&curve.0, t_lo, t_hi, nt).map(Self).map_err(py_err)
    }

    /// Rotation of the profile about the z-axis.
    #[staticmethod]
    fn spherical(curve: &PyCurve, nt: usize) -> PyResult<Self> {
        surface::revolve_spherical(&curve.0, nt).map(Self).map_err(py_err)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.ns, self.0.nt)
    }

    #[getter]
    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.0.vertices.iter().map(|p| (p.x, p.y, p.z)).collect()
    }

    /// Hyperbolic mean curvature at each vertex.
    #[getter]
    fn mean_curvature(&self) -> Vec<f64> {
        self.0.curvature.iter().map(|c| c.h).collect()
    }

    /// Hyperbolic mean curvature from finite differences of the vertices.
    fn mean_curvature_fd(&self) -> PyResult<Vec<f64>> {
        surface::mesh_mean_curvature_fd(&self.0).map_err(py_err)
    }

    /// `H − ⟨N, ξ⟩` per vertex for `ξ = a∂x + b∂y`; `source` is
    /// `"analytic"` or `"fd"`.
    #[pyo3(signature = (a, b, source="analytic"))]
    fn soliton_residual(&self, a: f64, b: f64, source: &str) -> PyResult<PyResidualReport> {
        let src = match source {
            "analytic" => CurvatureSource::Analytic,
            "fd" => CurvatureSource::FiniteDifference,
            other => return Err(PyValueError::new_err(format!("source must be 'analytic' or 'fd', got {other:?}"))),
        };
        let k = KillingFieldParams::nontrivial(a, b).map_err(py_err)?;
        surface::soliton_residual(&self.0, k, src).map(Into::into).map_err(py_err)
    }
}

/// Sign symbols `(dz, dtheta)` of the field at `(z, theta)` for `a = 1`.
#[pyfunction]
fn classify_region(z: f64, theta: f64) -> PyResult<(char, char)> {
    let tag = phase::classify_region(&PhasePoint::new(z, theta).map_err(py_err)?);
    Ok((tag.dz_sign.symbol(), tag.dtheta_sign.symbol()))
}

/// Height of the zero-curvature locus at angle `theta`.
#[pyfunction]
fn gamma_curve(theta: f64) -> PyResult<f64> {
    phase::gamma_curve(theta).map_err(py_err)
}

/// Derivatives `(x', z', theta')` at the given state.
#[pyfunction]
#[pyo3(signature = (z, theta, a=1.0))]
fn rhs(z: f64, theta: f64, a: f64) -> PyResult<(f64, f64, f64)> {
    ode::rhs(&CurveState::new(0.0, 0.0, z, theta), a).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (z0, params=None))]
fn trace_and_classify(z0: f64, params: Option<PyRef<'_, PyOdeParams>>) -> PyResult<PyOrbitReport> {
    phase::trace_and_classify(z0, &params_or(params, 1e-6)).map(Into::into).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (z0, a=1.0, params=None))]
fn build_reaper(z0: f64, a: f64, params: Option<PyRef<'_, PyOdeParams>>) -> PyResult<PyCurve> {
    curves::build_reaper(z0, a, &params_or(params, 1e-3)).map(PyCurve).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (z0, params=None))]
fn build_minimal_reaper(z0: f64, params: Option<PyRef<'_, PyOdeParams>>) -> PyResult<PyCurve> {
    curves::build_minimal_reaper(z0, &params_or(params, 1e-6)).map(PyCurve).map_err(py_err)
}

/// Half of the x-extent of the minimal reaper with apex height `z0`, by quadrature.
#[pyfunction]
#[pyo3(signature = (z0, tol=1e-12))]
fn half_width(z0: f64, tol: f64) -> PyResult<f64> {
    curves::half_width(z0, tol).map_err(py_err)
}

/// Residuals `(s, c0, c1, c2)` of the `{1, cos t, sin t}` expansion of the
/// translator defect on the rotation of `curve`.
#[pyfunction]
fn spherical_obstruction(curve: &PyCurve, a: f64, b: f64) -> PyResult<Coefficients> {
    let k = KillingFieldParams::nontrivial(a, b).map_err(py_err)?;
    let o = surface::spherical_obstruction(&curve.0, k).map_err(py_err)?;
    Ok((o.s, o.c0, o.c1, o.c2))
}

/// Graph-equation residual of heights `u[i][j]` over a square grid of spacing `h`.
#[pyfunction]
fn graph_pde_residual(u: Vec<Vec<f64>>, a: f64, b: f64, h: f64) -> PyResult<PyResidualReport> {
    let nx = u.len();
    let ny = u.first().map_or(0, Vec::len);
    if u.iter().any(|row| row.len() != ny) {
        return Err(PyValueError::new_err("rows of u must have equal length"));
    }
    let field = GridField::from_fn(nx, ny, |i, j| u[i][j]);
    let k = KillingFieldParams::nontrivial(a, b).map_err(py_err)?;
    surface::graph_pde_residual(&field, k, h).map(Into::into).map_err(py_err)
}

#[pymodule]
fn hypreaper(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOdeParams>()?;
    m.add_class::<PyOrbitReport>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyMesh>()?;
    m.add_class::<PyResidualReport>()?;
    m.add_function(wrap_pyfunction!(classify_region, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_curve, m)?)?;
    m.add_function(wrap_pyfunction!(rhs, m)?)?;
    m.add_function(wrap_pyfunction!(trace_and_classify, m)?)?;
    m.add_function(wrap_pyfunction!(build_reaper, m)?)?;
    m.add_function(wrap_pyfunction!(build_minimal_reaper, m)?)?;
    m.add_function(wrap_pyfunction!(half_width, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(graph_pde_residual, m)?)?;
    Ok(())
}
