use std::path::PathBuf;

use benford_forensics::datagen::GeneratorSpec;
use benford_forensics::ingest::LoadOptions;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands;
use crate::error::Result;
use crate::input::{self, ColumnKind};
use crate::report::to_json;

#[derive(Debug, Parser)]
#[command(name = "benford", version, about = "Significant-digit (Benford) conformity analysis of count data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive panel plus a conformity test per digit position for one column.
    Analyze(AnalyzeArgs),
    /// Both count columns of a paired dataset, digit positions 1 and 2 by default.
    Compare(CompareArgs),
    /// Re-test conformity after trimming the largest/smallest values.
    TrimSweep(TrimSweepArgs),
    /// Write a seeded synthetic sample as a one-column `count` CSV.
    Gen(GenArgs),
    /// Expected vs observed relative frequencies for plotting.
    PlotData(PlotDataArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Dataset file (.csv or .json), or a one-column `count` CSV for --column generic.
    pub file: PathBuf,
    /// Accept counts written with digit-group separators such as "93 500 000".
    #[arg(long)]
    pub thousands_separators: bool,
}

impl InputArgs {
    fn options(&self) -> LoadOptions {
        LoadOptions {
            thousands_separators: self.thousands_separators,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// count_a1, count_a2, or generic.
    #[arg(long, default_value = "count_a1")]
    pub column: ColumnKind,
    #[arg(long, default_value = "1,2")]
    pub digits: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "1,2")]
    pub digits: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrimSweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "count_a1")]
    pub column: ColumnKind,
    #[arg(long, default_value = "0.01,0.05,0.10")]
    pub fractions: String,
    /// Comma-separated subset of top, bottom, both.
    #[arg(long, default_value = "top,bottom")]
    pub ends: String,
    #[arg(long, default_value_t = 1)]
    pub digit: u32,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    #[value(alias = "log-uniform", alias = "log_uniform")]
    Loguniform,
    Exponential,
    #[value(alias = "geometric-sequence", alias = "geometric_sequence")]
    Geometric,
    #[value(alias = "uniform-integer", alias = "uniform_integer")]
    Uniform,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Log-uniform lower exponent (inclusive).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lo_exp: f64,
    /// Log-uniform upper exponent (exclusive).
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub hi_exp: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub rate: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub base: f64,
    /// Number of powers for the geometric family.
    #[arg(long, default_value_t = 10)]
    pub length: usize,
    /// Uniform-integer lower bound (inclusive).
    #[arg(long, default_value_t = 1)]
    pub lo: u64,
    /// Uniform-integer upper bound (inclusive).
    #[arg(long, default_value_t = 999_999)]
    pub hi: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GenArgs {
    pub fn spec(&self) -> GeneratorSpec {
        match self.family {
            Family::Loguniform => GeneratorSpec::log_uniform(self.lo_exp, self.hi_exp, self.n, self.seed),
            Family::Exponential => GeneratorSpec::exponential(self.rate, self.n, self.seed),
            Family::Geometric => GeneratorSpec::geometric(self.base, self.length),
            Family::Uniform => GeneratorSpec::uniform_integer(self.lo, self.hi, self.n, self.seed),
        }
    }
}

#[derive(Debug, Args)]
pub struct PlotDataArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "count_a1")]
    pub column: ColumnKind,
    #[arg(long, default_value_t = 1)]
    pub digit: u32,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(a) => {
            let positions = input::parse_positions(&a.digits)?;
            let report = commands::analyze(&a.input.file, a.column, &positions, a.alpha, a.input.options())?;
            commands::write_output(a.json.as_ref(), &to_json(&report))
        }
        Command::Compare(a) => {
            let positions = input::parse_positions(&a.digits)?;
            let report = commands::compare(&a.input.file, &positions, a.alpha, a.input.options())?;
            commands::write_output(a.json.as_ref(), &to_json(&report))
        }
        Command::TrimSweep(a) => {
            let fractions = input::parse_fractions(&a.fractions)?;
            let ends = input::parse_ends(&a.ends)?;
            let position = benford_forensics::DigitPosition::new(a.digit)?;
            let report = commands::trim_sweep_report(
                &a.input.file,
                a.column,
                &fractions,
                &ends,
                position,
                a.alpha,
                a.input.options(),
            )?;
            commands::write_output(a.json.as_ref(), &to_json(&report))
        }
        Command::Gen(a) => commands::write_output(a.out.as_ref(), &commands::gen_csv(&a.spec())?),
        Command::PlotData(a) => {
            let position = benford_forensics::DigitPosition::new(a.digit)?;
            let csv = commands::plot_data(&a.input.file, a.column, position, a.alpha, a.input.options())?;
            commands::write_output(a.out.as_ref(), &csv)
        }
    }
}
