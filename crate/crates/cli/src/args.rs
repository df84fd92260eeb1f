use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "hypreaper", version, about = "Grim-reaper translators in hyperbolic space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace and classify the orbit through the apex (z0, 0).
    Trace(TraceArgs),
    /// Build the reaper generating curve for a != 0.
    Reaper(ReaperArgs),
    /// Build the minimal (a = 0) reaper generating curve.
    Minimal(MinimalArgs),
    /// Build a surface mesh and verify the translator equation on it.
    Mesh(MeshArgs),
    /// Emit the phase portrait of the a = 1 system.
    Portrait(PortraitArgs),
    /// Sweep the apex height over a range.
    Sweep(SweepArgs),
}

/// Options every command accepts. `config` names a JSON file whose keys are
/// the long flag names with underscores; flags given on the command line win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct IoOpts {
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON configuration file.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct OdeOpts {
    /// Height at which integration stops.
    #[arg(long)]
    pub z_min: Option<f64>,
    /// Arc-length budget per direction.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Relative tolerance, per unit arc length.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance, per unit arc length.
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Arc-length spacing of emitted samples.
    #[arg(long)]
    pub output_step: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceArgs {
    /// Apex height.
    #[arg(long, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    /// Killing-field component along x.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ode: OdeOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoOpts,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ReaperArgs {
    /// Apex height.
    #[arg(long, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    /// Killing-field component along x.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Skip the SVG rendering.
    #[arg(long)]
    pub no_svg: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub ode: OdeOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoOpts,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimalArgs {
    /// Apex height.
    #[arg(long, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    /// Skip the SVG rendering.
    #[arg(long)]
    pub no_svg: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub ode: OdeOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshFamily {
    Reaper,
    Minimal,
    Vertical,
    Horosphere,
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Circle,
    Line,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct MeshArgs {
    #[arg(long, value_enum)]
    pub family: Option<MeshFamily>,
    /// Apex height.
    #[arg(long, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    /// Killing-field component along x.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Killing-field component along y.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Height of the horosphere, or of the line profile.
    #[arg(long, allow_negative_numbers = true)]
    pub height: Option<f64>,
    /// Profile rotated by the spherical family.
    #[arg(long, value_enum)]
    pub profile: Option<ProfileKind>,
    /// Height of the circle profile's centre (on the rotation axis).
    #[arg(long, allow_negative_numbers = true)]
    pub center_z: Option<f64>,
    /// Radius of the circle profile.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Samples along the generating curve.
    #[arg(long)]
    pub ns: Option<usize>,
    /// Samples along the rulings or around the axis.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Half-length of the rulings of parabolic meshes.
    #[arg(long)]
    pub extent: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ode: OdeOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoOpts,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PortraitArgs {
    /// Apex heights of the orbits to draw (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub orbits: Option<Vec<f64>>,
    /// Draw only the curvature-zero curve and the regions.
    #[arg(long)]
    pub no_orbits: bool,
    /// Upper height of the portrait window.
    #[arg(long)]
    pub z_max: Option<f64>,
    /// Region-tag grid resolution per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ode: OdeOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoOpts,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepArgs {
    /// Lowest apex height of the range.
    #[arg(long, allow_negative_numbers = true)]
    pub z0_min: Option<f64>,
    /// Highest apex height of the range.
    #[arg(long, allow_negative_numbers = true)]
    pub z0_max: Option<f64>,
    /// Number of evenly spaced apex heights.
    #[arg(long)]
    pub count: Option<usize>,
    /// Explicit apex heights (comma separated); overrides the range.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub z0_values: Option<Vec<f64>>,
    /// Killing-field component along x.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ode: OdeOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoOpts,
}
