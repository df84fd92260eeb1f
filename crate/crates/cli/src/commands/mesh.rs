use hypreaper::curves::{
    build_minimal_reaper, build_reaper, circle_profile, horizontal_profile, vertical_plane, GeneratingCurve,
};
use hypreaper::export::{mesh_obj, residual_csv, CsvTable};
use hypreaper::halfspace::KillingFieldParams;
use hypreaper::surface::{
    extrude_parabolic, mesh_curvature_fd, revolve_spherical, soliton_residual, spherical_obstruction, CurvatureSource,
    ResidualReport, SurfaceMesh,
};
use serde::Serialize;

use super::{ode_params, require_z0};
use crate::args::{MeshArgs, MeshFamily, ProfileKind};
use crate::error::CliError;
use crate::output::{Checks, Output};

#[derive(Serialize)]
struct SourceSummary {
    max_abs: f64,
    mean_abs: f64,
}

impl From<&ResidualReport> for SourceSummary {
    fn from(r: &ResidualReport) -> Self {
        Self { max_abs: r.max_abs, mean_abs: r.mean_abs }
    }
}

#[derive(Serialize)]
struct ObstructionSummary {
    c0_max_abs: f64,
    c1_max_abs: f64,
    c2_max_abs: f64,
    reconstruction_error: f64,
}

#[derive(Serialize)]
struct MeshSummary<'a> {
    command: &'static str,
    family: MeshFamily,
    a: f64,
    b: f64,
    ns: usize,
    nt: usize,
    grid_spacing: (f64, f64),
    analytic: SourceSummary,
    finite_difference: SourceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<ObstructionSummary>,
    checks: &'a Checks,
}

/// The curve resampled uniformly in arc length, as finite differences need.
fn uniform(curve: &GeneratingCurve, ns: usize) -> Result<GeneratingCurve, CliError> {
    let (lo, hi) = curve.s_range();
    Ok(curve.resample(lo, hi, ns)?)
}

pub fn run(args: MeshArgs) -> Result<(), CliError> {
    let family = args.family.unwrap_or(MeshFamily::Reaper);
    let a = args.a.unwrap_or(1.0);
    let b = args.b.unwrap_or(0.0);
    let ns = args.ns.unwrap_or(201);
    let nt = args.nt.unwrap_or(41);
    let extent = args.extent.unwrap_or(1.0);
    if ns < 4 || nt < 4 {
        return Err(CliError::Usage(format!("ns and nt must be at least 4 (got {ns}, {nt})")));
    }
    if !(extent > 0.0) {
        return Err(CliError::Usage(format!("extent must be positive, got {extent}")));
    }

    // translators of the a = 0 families only move along ∂y
    let k = match family {
        MeshFamily::Reaper | MeshFamily::Horosphere | MeshFamily::Spherical => KillingFieldParams::new(a, b),
        MeshFamily::Minimal | MeshFamily::Vertical => KillingFieldParams::new(0.0, b),
    };
    let mut checks = Checks::default();
    let mut obstruction = None;
    let mut obstruction_csv = None;

    let mesh: SurfaceMesh = match family {
        MeshFamily::Reaper | MeshFamily::Minimal => {
            let params = ode_params(&args.ode, k.a, 0.05)?;
            let z0 = require_z0(args.z0.or(Some(1.0)), &params)?;
            let curve = if family == MeshFamily::Reaper {
                if a == 0.0 {
                    return Err(CliError::Usage("reaper meshes need a != 0; use --family minimal".into()));
                }
                build_reaper(z0, a, &params)?
            } else {
                build_minimal_reaper(z0, &params)?
            };
            extrude_parabolic(&uniform(&curve, ns)?, -extent, extent, nt)?
        }
        MeshFamily::Vertical => {
            let curve = vertical_plane(0.0, 0.25, 4.0)?;
            extrude_parabolic(&uniform(&curve, ns)?, -extent, extent, nt)?
        }
        MeshFamily::Horosphere => {
            let height = positive(args.height.unwrap_or(1.0), "height")?;
            let line = horizontal_profile(height, -extent, extent, ns)?;
            extrude_parabolic(&line, -extent, extent, nt)?
        }
        MeshFamily::Spherical => {
            let profile = match args.profile.unwrap_or(ProfileKind::Circle) {
                ProfileKind::Circle => {
                    let r = positive(args.radius.unwrap_or(1.0), "radius")?;
                    let cz = args.center_z.unwrap_or(0.5);
                    circle_profile(0.0, cz, r, 0.2, 2.0, ns)?
                }
                ProfileKind::Line => {
                    let height = positive(args.height.unwrap_or(1.0), "height")?;
                    horizontal_profile(height, 0.5, 2.0, ns)?
                }
            };
            let mesh = revolve_spherical(&profile, nt)?;
            let ob = spherical_obstruction(&profile, k)?;
            let direct = soliton_residual(&mesh, k, CurvatureSource::Analytic)?;
            let mut err = 0.0_f64;
            for i in 0..mesh.ns {
                for j in 0..mesh.nt {
                    err = err.max((ob.reconstruct(i, mesh.t_values[j]) - direct.get(i, j)).abs());
                }
            }
            let [c0, c1, c2] = ob.max_abs();
            checks.below("fourier_reconstruction", err, 1e-10);
            checks.above("obstruction_nonzero", c0.max(c1).max(c2), 1e-8);
            let mut t = CsvTable::new(&["s", "c0", "c1", "c2"]);
            for i in 0..ob.s.len() {
                t.push_floats(&[ob.s[i], ob.c0[i], ob.c1[i], ob.c2[i]]);
            }
            obstruction_csv = Some(t.render());
            obstruction =
                Some(ObstructionSummary { c0_max_abs: c0, c1_max_abs: c1, c2_max_abs: c2, reconstruction_error: err });
            mesh
        }
    };

    let analytic = soliton_residual(&mesh, k, CurvatureSource::Analytic)?;
    let fd_curvature = mesh_curvature_fd(&mesh)?;
    let fd = soliton_residual(&mesh, k, CurvatureSource::FiniteDifference)?;
    let h: Vec<f64> = mesh.curvature.iter().map(|c| c.h).collect();
    let h_fd: Vec<f64> = fd_curvature.iter().map(|c| c.h).collect();

    match family {
        MeshFamily::Reaper | MeshFamily::Minimal | MeshFamily::Vertical => {
            checks.below("analytic_residual", analytic.max_abs, 1e-8);
        }
        MeshFamily::Horosphere => {
            let dev = h.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
            checks.below("horosphere_h", dev, 1e-12);
        }
        MeshFamily::Spherical => {}
    }

    let out = Output::new(args.io.out.as_deref())?;
    out.write("mesh.obj", &mesh_obj(&mesh))?;
    out.write("mesh_residual.csv", &residual_csv(&mesh, &h, &analytic))?;
    out.write("mesh_residual_fd.csv", &residual_csv(&mesh, &h_fd, &fd))?;
    if let Some(text) = obstruction_csv {
        out.write("mesh_obstruction.csv", &text)?;
    }
    out.write_json(
        "mesh_summary.json",
        &MeshSummary {
            command: "mesh",
            family,
            a: k.a,
            b: k.b,
            ns: mesh.ns,
            nt: mesh.nt,
            grid_spacing: mesh.spacing(),
            analytic: (&analytic).into(),
            finite_difference: (&fd).into(),
            obstruction,
            checks: &checks,
        },
    )?;
    checks.finish()
}

fn positive(v: f64, name: &str) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}
