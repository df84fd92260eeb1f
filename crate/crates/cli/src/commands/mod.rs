pub mod curve;
pub mod mesh;
pub mod portrait;
pub mod sweep;
pub mod trace;

use hypreaper::ode::OdeParams;

use crate::args::OdeOpts;
use crate::error::CliError;

/// Integration parameters from the flags, with a per-command default cutoff.
pub fn ode_params(opts: &OdeOpts, a: f64, default_z_min: f64) -> Result<OdeParams, CliError> {
    let d = OdeParams::default();
    let params = OdeParams {
        a,
        z_min: opts.z_min.unwrap_or(default_z_min),
        s_max: opts.s_max.unwrap_or(d.s_max),
        rel_tol: opts.rel_tol.unwrap_or(d.rel_tol),
        abs_tol: opts.abs_tol.unwrap_or(d.abs_tol),
        output_step: Some(opts.output_step.unwrap_or(0.01)),
    };
    params.validate()?;
    Ok(params)
}

pub fn require_z0(z0: Option<f64>, params: &OdeParams) -> Result<f64, CliError> {
    let z0 = z0.ok_or_else(|| CliError::Usage("missing --z0".into()))?;
    if !(z0 > params.z_min && z0.is_finite()) {
        return Err(CliError::Usage(format!("z0 must exceed z_min (z0 = {z0}, z_min = {})", params.z_min)));
    }
    Ok(z0)
}
