//! Command-line surface. Every subcommand struct serializes with keys equal
//! to its long flag names, which is what run manifests and `--config` files
//! carry.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "twdp", version, about = "Phase statistics of the two-wave with diffuse power channel")]
pub struct Cli {
    /// Directory receiving output files and manifests.
    #[arg(long, global = true, env = "TWDP_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// JSON file of subcommand flags, or a run manifest; flags on the command
    /// line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

pub const SUBCOMMANDS: [&str; 5] = ["pdf", "bounds", "pe", "mc", "geosim"];

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Conditional phase density on a uniform grid over [-π, π].
    Pdf(PdfArgs),
    /// Truncation bounds of the mixture index across a K or ν range.
    Bounds(BoundsArgs),
    /// M-PSK phase-synchronization error probability against K.
    Pe(PeArgs),
    /// Monte Carlo phase histogram with the analytic density alongside.
    Mc(McArgs),
    /// Geometric two-ray plus Clarke-scattering simulator.
    Geosim(GeosimArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pdf(_) => "pdf",
            Command::Bounds(_) => "bounds",
            Command::Pe(_) => "pe",
            Command::Mc(_) => "mc",
            Command::Geosim(_) => "geosim",
        }
    }
}

/// Channel given either in normalized `(K, Γ, Ω)` form or, with
/// `--physical`, as `(V1, V2, σ²)`.
#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ChannelArgs {
    #[arg(long = "K", default_value_t = 10.0, allow_negative_numbers = true)]
    #[serde(rename = "K")]
    pub k: f64,
    #[arg(long = "Gamma", default_value_t = 0.7, allow_negative_numbers = true)]
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[arg(long = "Omega", default_value_t = 1.0)]
    #[serde(rename = "Omega")]
    pub omega: f64,
    /// Phase of the stronger specular ray, radians.
    #[arg(long = "Phi1", default_value_t = 0.0, allow_negative_numbers = true)]
    #[serde(rename = "Phi1")]
    pub phi1: f64,
    /// Read the channel from --V1, --V2, --sigma2 instead.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub physical: bool,
    #[arg(long = "V1", allow_negative_numbers = true)]
    #[serde(rename = "V1", skip_serializing_if = "Option::is_none")]
    pub v1: Option<f64>,
    #[arg(long = "V2", allow_negative_numbers = true)]
    #[serde(rename = "V2", skip_serializing_if = "Option::is_none")]
    pub v2: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdfMethod {
    /// Truncated mixture series.
    Series,
    /// Closed form through Humbert and triple hypergeometric series.
    Closed,
    /// Direct numerical integration over the envelope.
    Oracle,
}

impl PdfMethod {
    pub fn name(self) -> &'static str {
        match self {
            PdfMethod::Series => "series",
            PdfMethod::Closed => "closed",
            PdfMethod::Oracle => "oracle",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct PdfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 99.9)]
    pub alpha_pct: f64,
    #[arg(long, default_value_t = 2001)]
    pub grid_points: usize,
    #[arg(long, value_enum, default_value_t = PdfMethod::Series)]
    pub method: PdfMethod,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleArg {
    /// Normal-approximation interval only.
    Wald,
    /// Normal-approximation interval widened until the target is met.
    Covering,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct BoundsArgs {
    #[arg(long = "K-min")]
    #[serde(rename = "K-min", skip_serializing_if = "Option::is_none")]
    pub k_min: Option<f64>,
    #[arg(long = "K-max")]
    #[serde(rename = "K-max", skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    #[arg(long = "K-step")]
    #[serde(rename = "K-step", skip_serializing_if = "Option::is_none")]
    pub k_step: Option<f64>,
    #[arg(long = "nu-min")]
    #[serde(rename = "nu-min", skip_serializing_if = "Option::is_none")]
    pub nu_min: Option<f64>,
    #[arg(long = "nu-max")]
    #[serde(rename = "nu-max", skip_serializing_if = "Option::is_none")]
    pub nu_max: Option<f64>,
    #[arg(long = "nu-step")]
    #[serde(rename = "nu-step", skip_serializing_if = "Option::is_none")]
    pub nu_step: Option<f64>,
    #[arg(long = "Gamma", default_value_t = 1.0)]
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[arg(long, default_value_t = 99.9)]
    pub alpha_pct: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::Covering)]
    pub rule: RuleArg,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct PeArgs {
    #[arg(long = "Gamma", default_value_t = 0.4)]
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[arg(long = "Omega", default_value_t = 1.0)]
    #[serde(rename = "Omega")]
    pub omega: f64,
    /// Modulation orders, comma separated.
    #[arg(long = "M", value_delimiter = ',', default_value = "2,4,8,16", action = clap::ArgAction::Set, num_args = 1)]
    #[serde(rename = "M", serialize_with = "join_list")]
    pub m: Vec<u32>,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long = "K-grid", default_value = "0:20:1")]
    #[serde(rename = "K-grid")]
    pub k_grid: String,
    #[arg(long, default_value_t = twdp_core::perf::PE_ALPHA_PCT)]
    pub alpha_pct: f64,
    #[arg(long, default_value_t = twdp_core::perf::DEFAULT_QUAD_TOL)]
    pub quad_tol: f64,
    /// Evaluate the pure Rician closed form instead (requires Γ = 0).
    #[arg(long, hide = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub rician_oracle: bool,
}

fn join_list<S: serde::Serializer>(v: &[u32], s: S) -> Result<S::Ok, S::Error> {
    let joined: Vec<String> = v.iter().map(u32::to_string).collect();
    s.serialize_str(&joined.join(","))
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct McArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Number of channel draws; accepts forms like `1e7`.
    #[arg(long, default_value = "1e7", value_parser = parse_count)]
    pub n_samples: u64,
    #[arg(long, default_value_t = twdp_core::simulate::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 256)]
    pub n_bins: usize,
    /// Retained power of the analytic column.
    #[arg(long, default_value_t = twdp_core::perf::PE_ALPHA_PCT)]
    pub alpha_pct: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportArg {
    Realizations,
    Histogram,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseReferenceArg {
    /// Raw received phase.
    Fixed,
    /// Received phase relative to the instantaneous LoS phase.
    TrackLos,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
#[command(args_override_self = true)]
pub struct GeosimArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Transmitter `x,y` in metres.
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Set,
          default_value = "0,5", allow_negative_numbers = true)]
    #[serde(serialize_with = "join_point")]
    pub tx_position: Vec<f64>,
    /// A point `x,y` on the reflecting line, metres.
    #[arg(long, value_delimiter = ',', num_args = 1, action = clap::ArgAction::Set,
          default_value = "3.6633,-4.0613", allow_negative_numbers = true)]
    #[serde(serialize_with = "join_point")]
    pub reflector_position: Vec<f64>,
    #[arg(long, default_value_t = 25.0244, allow_negative_numbers = true)]
    pub reflector_angle_deg: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rx_velocity: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub doppler_max_hz: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub sample_time_s: f64,
    #[arg(long, default_value_t = 7.5e-3)]
    pub duration_s: f64,
    #[arg(long, default_value_t = 200)]
    pub n_realizations: usize,
    #[arg(long, default_value_t = 64)]
    pub n_scatter_sinusoids: usize,
    #[arg(long, default_value_t = twdp_core::simulate::DEFAULT_GEO_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 256)]
    pub n_bins: usize,
    #[arg(long, value_enum, default_value_t = PhaseReferenceArg::Fixed)]
    pub phase_reference: PhaseReferenceArg,
    #[arg(long, value_enum, default_value_t = ExportArg::Histogram)]
    pub export: ExportArg,
    /// Retained power of the analytic column.
    #[arg(long, default_value_t = twdp_core::perf::PE_ALPHA_PCT)]
    pub alpha_pct: f64,
}

fn join_point<S: serde::Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let joined: Vec<String> = v.iter().map(f64::to_string).collect();
    s.serialize_str(&joined.join(","))
}

/// Parses a nonnegative integer count written plainly or as `1e7`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a nonnegative integer"))
    }
}
