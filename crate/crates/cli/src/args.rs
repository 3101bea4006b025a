use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperon::dataio::Format;
use hyperon::Vec3;

#[derive(Parser, Debug)]
#[command(
    name = "hyperon",
    version,
    about = "Weak hyperon decays as quantum channels: tables, simulation, entanglement and Bell analysis"
)]
pub struct Cli {
    /// Master seed for simulation and optimizer starts.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report format; event files are always CSV.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Phase, visibility and predictability of every tabulated decay.
    Table(ParamsArg),
    /// Visibility, predictability and output intensities of a two-arm device.
    Complementarity(ComplementarityArgs),
    /// Generate an event file.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Estimate quantities from a pair event file.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Maximize a Bell expression or locate its violation threshold.
    Bell(BellArgs),
    /// Evaluate the Mermin-Peres contextuality expression.
    Context(ContextArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ParamsArg {
    /// Parameter file (default: $HYPERON_PARAMS, else the bundled table).
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ComplementarityArgs {
    #[command(flatten)]
    pub params: ParamsArg,

    /// Take splitting and phase from a tabulated decay, e.g. `Lambda` or `Sigma+ -> n pi+`.
    #[arg(long, conflicts_with_all = ["splitting", "chi_sp"])]
    pub hyperon: Option<String>,

    /// Branch weights `a,b` of the two arms.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub splitting: Option<(f64, f64)>,

    /// Phase of the second arm, in units of pi.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub chi_sp: f64,

    /// Phase between the splitters, in units of pi.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub chi: f64,

    /// Polar angle of the incoming spin, in units of pi.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
    pub theta: f64,

    /// Azimuth of the incoming spin, in units of pi.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub phi: f64,

    /// Length of the incoming Bloch vector.
    #[arg(long, default_value_t = 1.0)]
    pub purity: f64,
}

#[derive(Subcommand, Debug)]
pub enum Simulate {
    /// Single decays of a polarized hyperon.
    Single(SingleArgs),
    /// Singlet pairs seen through two decays.
    Pair(PairArgs),
    /// Two sequential decays, e.g. Xi- -> Lambda pi-, Lambda -> p pi-.
    Cascade(CascadeArgs),
}

#[derive(Args, Debug)]
pub struct EventsArg {
    /// Number of events.
    #[arg(long)]
    pub events: u64,
}

#[derive(Args, Debug)]
pub struct SingleArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[command(flatten)]
    pub events: EventsArg,
    /// Decay to simulate, e.g. `Lambda` or `Lambda -> n pi0`.
    #[arg(long, default_value = "Lambda")]
    pub hyperon: String,
    /// Polarization `x,y,z` of the parent, `|s| <= 1`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,1")]
    pub pol: Vec3,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[command(flatten)]
    pub events: EventsArg,
    /// Analyzing-power product `alpha_L * alpha_Lbar` (magnitude).
    #[arg(long, allow_negative_numbers = true)]
    pub k: f64,
}

#[derive(Args, Debug)]
pub struct CascadeArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[command(flatten)]
    pub events: EventsArg,
    /// First decay.
    #[arg(long, default_value = "Xi-")]
    pub first: String,
    /// Second decay, of the first decay's daughter hyperon.
    #[arg(long, default_value = "Lambda")]
    pub second: String,
    /// Polarization `x,y,z` of the first parent.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,0")]
    pub pol: Vec3,
}

#[derive(Subcommand, Debug)]
pub enum Analyze {
    /// Entanglement witness `1/3 + 3 <n1.n2>`; negative means entangled.
    Witness(AnalyzeArgs),
    /// Spin-correlation matrix `9 <n1_i n2_j>`.
    Correlations(CorrelationArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Pair event file.
    #[arg(long)]
    pub events: std::path::PathBuf,
}

#[derive(Args, Debug)]
pub struct CorrelationArgs {
    #[command(flatten)]
    pub input: AnalyzeArgs,
    /// Divide by this analyzing-power product to estimate the spin correlations.
    #[arg(long, allow_negative_numbers = true)]
    pub renormalize: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BellArgs {
    /// Bell expression.
    #[arg(long, value_enum, default_value_t = InequalityArg::I2)]
    pub inequality: InequalityArg,
    /// Analyzing-power product in [0, 1].
    #[arg(long, allow_negative_numbers = true, required_unless_present = "threshold")]
    pub k: Option<f64>,
    /// Report the smallest k allowing a violation instead.
    #[arg(long, conflicts_with = "k")]
    pub threshold: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InequalityArg {
    #[value(name = "I2", alias = "i2")]
    I2,
    #[value(name = "I3", alias = "i3")]
    I3,
    #[value(name = "I4", alias = "i4")]
    I4,
}

#[derive(Args, Debug)]
pub struct ContextArgs {
    /// Asymmetry of the first decay.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Asymmetry of the second decay.
    #[arg(long, allow_negative_numbers = true)]
    pub alphabar: f64,
}

fn parse_numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let v = parse_numbers(s, 3)?;
    Ok(Vec3::new(v[0], v[1], v[2]))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_numbers(s, 2)?;
    Ok((v[0], v[1]))
}
