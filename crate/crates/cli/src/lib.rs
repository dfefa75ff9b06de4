//! Command-line front end: CSV ingestion, estimator reports and the built-in
//! 11-point example self-test.

pub mod csv_io;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use vanhecke_core::{
    empirical_mse, NoiseModel, SampleSet, SimulationConfig, TrendBasis, TrendSystem,
    WhiteNoiseModel,
};

pub use error::CliError;
pub use report::{EstimateReport, VarianceReport, WeightsReport};

/// The 11-point white-noise signal used by `vanhecke example`.
pub const EXAMPLE_CSV: &str = "\
# uncorrelated signal at x = 1..11
x,v
1,4.12
2,1.38
3,5.71
4,1.25
5,2.24
6,0.81
7,1.67
8,7.42
9,7.91
10,1.63
11,2.05
";

/// Two-decimal renderings the example must reproduce: mean, standard error,
/// imaginary error.
pub const EXAMPLE_EXPECTED: [&str; 3] = ["3.29", "0.74", "0.26"];

pub fn example_samples() -> SampleSet {
    csv_io::parse_samples(EXAMPLE_CSV.as_bytes()).expect("embedded example parses")
}

#[derive(Debug, Parser)]
#[command(name = "vanhecke", version, about = "Best linear unbiased estimation with complex zero-variance points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complex constant-mean estimate of a CSV signal.
    Estimate {
        csv: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kriging weights and Lagrange multipliers at a point.
    Weights {
        csv: PathBuf,
        /// Evaluation point `RE` or `RE,IM`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        at: Complex64,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Minimized estimation variance at a point.
    Variance {
        csv: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        at: Complex64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo check of the prediction error at an off-sample point.
    Simulate {
        /// Abscissas are 1..=n.
        #[arg(long, default_value_t = 11)]
        n: usize,
        /// Trend coefficients, offset first; their count sets the degree.
        #[arg(long, value_delimiter = ',', default_value = "1,0.5", allow_hyphen_values = true)]
        beta: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 5.5, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, default_value_t = 200_000)]
        reps: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the estimator on the built-in 11-point signal and check it.
    Example {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OutputArgs {
    /// Decimal places in text output.
    #[arg(long, default_value_t = 2)]
    pub digits: usize,
    /// Emit JSON at full precision.
    #[arg(long)]
    pub json: bool,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',');
    let mut next = |what: &str| -> Result<Option<f64>, String> {
        parts
            .next()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("{what} part `{p}` is not a finite number"))
            })
            .transpose()
    };
    let re = next("real")?.ok_or("missing real part")?;
    let im = next("imaginary")?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err("expected RE or RE,IM".into());
    }
    Ok(Complex64::new(re, im))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Execute a parsed command, returning what should go to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Estimate { csv, output } => {
            let samples = csv_io::read_samples(csv)?;
            estimate_output(&samples, *output)
        }
        Command::Weights { csv, at, degree, json } => {
            let samples = csv_io::read_samples(csv)?;
            let report = WeightsReport::compute(&samples, TrendBasis::new(*degree), *at)?;
            Ok(if *json { to_json(&report) } else { report.render_text() })
        }
        Command::Variance { csv, at, sigma2, degree, json } => {
            let samples = csv_io::read_samples(csv)?;
            let report = variance_report(&samples, TrendBasis::new(*degree), *at, *sigma2)?;
            Ok(if *json { to_json(&report) } else { report.render_text() })
        }
        Command::Simulate { n, beta, sigma, at, reps, seed, json } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let abscissas: Vec<f64> = (1..=*n).map(|i| i as f64).collect();
            let model = WhiteNoiseModel::new(beta.clone(), *sigma)?;
            let config = SimulationConfig::new(*reps, *seed)?;
            let report = empirical_mse(&abscissas, model.basis(), &model, *at, &config)?;
            Ok(if *json { to_json(&report) } else { report.to_key_values() })
        }
        Command::Example { output } => {
            let samples = example_samples();
            let report = EstimateReport::from_samples(&samples)?;
            check_example(&report)?;
            Ok(render_estimate(&report, *output))
        }
    }
}

pub fn estimate_output(samples: &SampleSet, output: OutputArgs) -> Result<String, CliError> {
    let report = EstimateReport::from_samples(samples)?;
    Ok(render_estimate(&report, output))
}

fn render_estimate(report: &EstimateReport, output: OutputArgs) -> String {
    if output.json {
        to_json(report)
    } else {
        report.render_text(output.digits)
    }
}

pub fn variance_report(
    samples: &SampleSet,
    basis: TrendBasis,
    at: Complex64,
    sigma2: f64,
) -> Result<VarianceReport, CliError> {
    let noise = NoiseModel::white(sigma2)?;
    let system = TrendSystem::for_samples(samples, basis)?;
    Ok(VarianceReport {
        degree: basis.degree(),
        at: at.into(),
        sigma2,
        variance: (system.variance_factor(at) * noise.sigma2()).into(),
    })
}

/// Compare the example report against the expected two-decimal values.
pub fn check_example(report: &EstimateReport) -> Result<(), CliError> {
    let got = [report.mean, report.standard_error, report.imaginary_error].map(|v| format!("{v:.2}"));
    let names = ["mean", "standard_error", "imaginary_error"];
    let mismatches: Vec<String> = names
        .iter()
        .zip(&got)
        .zip(EXAMPLE_EXPECTED)
        .filter(|((_, g), e)| g.as_str() != *e)
        .map(|((name, g), e)| format!("{name} {g} != {e}"))
        .collect();
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelfTest(mismatches.join("; ")))
    }
}
