use std::path::PathBuf;

use amforge_core::{FormulationId, MockMode, ToleranceSweep};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "amforge", version, about = "Power-converter topology formulations, canonicalization and metrics")]
pub struct Cli {
    /// Worker threads for data-parallel stages (output order is unaffected).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample valid, pairwise non-isomorphic designs as circuit JSON lines.
    Sample(SampleArgs),
    /// Encode circuit JSON lines into a formulation dataset.
    Encode(EncodeArgs),
    /// Decode a dataset back into circuit JSON lines.
    Decode(DecodeArgs),
    /// Check structural validity of circuit JSON lines.
    Validate(InputArgs),
    /// Print canonical keys, or isomorphism classes with --dedup.
    Canon(CanonArgs),
    /// Token-length statistics for a dataset or a circuit file.
    Stats(StatsArgs),
    /// Success rates over a tolerance sweep plus the MSE pair.
    Eval(EvalArgs),
    /// Encode and decode random designs, reporting exact round-trips.
    Roundtrip(RoundtripArgs),
    /// Score a dataset with a mock generator, writing a results file.
    Mock(MockArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file; `-` reads standard input.
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Device counts, as a list (`3,4,5`) or a range (`3-6`).
    #[arg(long, default_value = "3-5", value_parser = parse_devices)]
    pub devices: DeviceCounts,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative weights of Sa, Sb, C, L.
    #[arg(long, default_value = "1,1,1,1", value_parser = parse_weights)]
    pub weights: KindWeights,
    /// Attach a seeded synthetic spec to every design.
    #[arg(long)]
    pub with_spec: bool,
    /// Output file; `-` writes standard output.
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long, value_parser = parse_formulation)]
    pub formulation: FormulationId,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
    /// `key,duty,ratio,eff` table used when a line carries no spec.
    #[arg(long)]
    pub perf: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Expected formulation of every record.
    #[arg(long, value_parser = parse_formulation)]
    pub formulation: Option<FormulationId>,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    /// Print one `key<TAB>count` line per isomorphism class.
    #[arg(long)]
    pub dedup: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    /// Formulations to encode when the input holds circuits (default: all).
    #[arg(long, value_parser = parse_formulation, value_delimiter = ',')]
    pub formulation: Vec<FormulationId>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub results: PathBuf,
    /// `start:stop:step`, both ends inclusive.
    #[arg(long, default_value = "0.01:0.1:0.01", value_parser = parse_sweep)]
    pub tolerances: ToleranceSweep,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[arg(long, value_parser = parse_formulation)]
    pub formulation: FormulationId,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "3-6", value_parser = parse_devices)]
    pub devices: DeviceCounts,
}

#[derive(Debug, Args)]
pub struct MockArgs {
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    /// `echo`, `perturb:EPS` or `corrupt:P`.
    #[arg(long, default_value = "echo", value_parser = parse_mode)]
    pub mode: MockMode,
    /// Ground-truth table; defaults to each record's own spec.
    #[arg(long)]
    pub perf: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

fn parse_formulation(s: &str) -> Result<FormulationId, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceCounts(pub Vec<usize>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KindWeights(pub [f64; 4]);

fn parse_devices(s: &str) -> Result<DeviceCounts, String> {
    let num = |p: &str| p.trim().parse::<usize>().map_err(|_| format!("`{p}` is not a device count"));
    let counts: Vec<usize> = match s.split_once('-') {
        Some((lo, hi)) => (num(lo)?..=num(hi)?).collect(),
        None => s.split(',').map(num).collect::<Result<_, _>>()?,
    };
    if counts.is_empty() || counts.contains(&0) {
        return Err(format!("`{s}` selects no positive device counts"));
    }
    Ok(DeviceCounts(counts))
}

fn parse_weights(s: &str) -> Result<KindWeights, String> {
    let ws: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
        .collect::<Result<_, _>>()?;
    let ws: [f64; 4] = ws.try_into().map_err(|_| "expected four weights for Sa,Sb,C,L".to_string())?;
    Ok(KindWeights(ws))
}

fn parse_sweep(s: &str) -> Result<ToleranceSweep, String> {
    s.parse().map_err(|e: amforge_core::MetricsError| e.to_string())
}

fn parse_mode(s: &str) -> Result<MockMode, String> {
    let prob = |v: &str| match v.parse::<f64>() {
        Ok(x) if (0.0..=1.0).contains(&x) => Ok(x),
        _ => Err(format!("`{v}` is not a probability")),
    };
    match s.split_once(':') {
        None if s == "echo" => Ok(MockMode::Echo),
        Some(("perturb", v)) => match v.parse::<f64>() {
            Ok(x) if x.is_finite() && x >= 0.0 => Ok(MockMode::Perturb(x)),
            _ => Err(format!("`{v}` is not a non-negative offset")),
        },
        Some(("corrupt", v)) => prob(v).map(MockMode::Corrupt),
        _ => Err(format!("`{s}` is not echo, perturb:EPS or corrupt:P")),
    }
}
