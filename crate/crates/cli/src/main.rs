//! `critrad`: radius formula, limiting integrals and Monte-Carlo runs from the
//! command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or domain error.

mod manifest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use critrad::asymptotics::{
    boundary_layer_integral, boundary_layer_limit, critical_radius, limit_probability, psi_integral,
    AsymptoticParams,
};
use critrad::harness::run_cdf_experiment;
use critrad::{ExperimentConfig, Region};

use manifest::OutputDir;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] critrad::Error),
    #[error("invalid config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn io(context: String, source: std::io::Error) -> Self {
        CliError::Io { context, source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "critrad",
    version,
    about = "Critical transmission radii of 3-D random geometric graphs"
)]
struct Cli {
    /// Cap the number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate r_n, ξ and the limiting probability exp(−e^{−c}).
    Radius(RadiusArgs),
    /// Run a Monte-Carlo experiment from a TOML config.
    Simulate(SimulateArgs),
    /// Convergence table of the limiting integrals on the unit ball.
    Quadrature(QuadratureArgs),
    /// Run the built-in property checks.
    Selftest,
}

#[derive(Args, Debug)]
struct RadiusArgs {
    #[arg(long)]
    n: f64,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value = "unit-ball")]
    region: Region,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct QuadratureArgs {
    /// Comma-separated sizes, e.g. 1e4,1e5,1e6.
    #[arg(long = "n", value_delimiter = ',', num_args = 0..)]
    n: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value = "unit-ball")]
    region: Region,
    /// Write quadrature.csv and a manifest here instead of printing the table.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `radius --json` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusReport {
    pub region: Region,
    pub n: f64,
    pub k: u32,
    pub c: f64,
    pub xi: f64,
    pub r_n: f64,
    pub probability: f64,
}

/// `x` with 12 significant digits.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

/// Sample sizes print as integers when they are whole.
fn count(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{n:.0}")
    } else {
        sig12(n)
    }
}

fn cmd_radius(args: &RadiusArgs, json: bool) -> Result<String, CliError> {
    let params = AsymptoticParams::for_region(&args.region, args.n, args.k, args.c)?;
    let report = RadiusReport {
        region: args.region,
        n: args.n,
        k: args.k,
        c: args.c,
        xi: params.xi,
        r_n: params.radius()?,
        probability: limit_probability(args.c),
    };
    if json {
        return Ok(serde_json::to_string_pretty(&report).expect("serialisable") + "\n");
    }
    Ok(format!(
        "r_n         {}\nxi          {}\nprobability {}\n",
        sig12(report.r_n),
        sig12(report.xi),
        sig12(report.probability)
    ))
}

fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let config: ExperimentConfig = toml::from_str(&text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(config)
}

fn cmd_simulate(args: &SimulateArgs, json: bool) -> Result<String, CliError> {
    let mut config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate()?;
    let started = chrono::Utc::now();
    let report = run_cdf_experiment(&config)?;
    let mut out = OutputDir::create(&args.out)?;
    out.write("report.json", &report.to_json())?;
    out.write("trials.csv", &report.trials_csv())?;
    out.write("cdf.csv", &report.cdf_csv())?;
    let manifest = out.finish("simulate", Some(&args.config), Some(config.seed), started)?;
    if json {
        return Ok(serde_json::to_string_pretty(&manifest).expect("serialisable") + "\n");
    }
    Ok(format!(
        "{}wrote {} files to {}\n",
        report.summary(),
        manifest.files.len() + 1,
        args.out.display()
    ))
}

#[derive(Debug, Clone, Serialize)]
struct QuadratureRow {
    n: f64,
    r_n: f64,
    psi_integral: f64,
    lemma2_lhs: f64,
    lemma2_rhs: f64,
    abs_deviation: f64,
}

fn cmd_quadrature(args: &QuadratureArgs, json: bool) -> Result<String, CliError> {
    if args.region != Region::UnitBall {
        return Err(CliError::Invalid(format!(
            "quadrature supports only unit-ball, got {}",
            args.region.name()
        )));
    }
    if args.n.is_empty() {
        return Err(CliError::Invalid("--n needs at least one value".into()));
    }
    let started = chrono::Utc::now();
    let rows = args
        .n
        .iter()
        .map(|&n| {
            let params = AsymptoticParams::for_region(&args.region, n, args.k, args.c)?;
            let r = critical_radius(n, args.k, params.xi)?;
            let psi = psi_integral(&args.region, n, r, args.k)?.value;
            Ok(QuadratureRow {
                n,
                r_n: r,
                psi_integral: psi,
                lemma2_lhs: boundary_layer_integral(n, r, args.k)?.value,
                lemma2_rhs: boundary_layer_limit(args.k, params.xi),
                abs_deviation: (psi - (-args.c).exp()).abs(),
            })
        })
        .collect::<Result<Vec<_>, critrad::Error>>()?;

    let mut csv = String::from("n,r_n,psi_integral,lemma2_lhs,lemma2_rhs,abs_deviation\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            count(r.n),
            sig12(r.r_n),
            sig12(r.psi_integral),
            sig12(r.lemma2_lhs),
            sig12(r.lemma2_rhs),
            sig12(r.abs_deviation)
        );
    }
    match &args.out {
        Some(dir) => {
            let mut out = OutputDir::create(dir)?;
            out.write("quadrature.csv", &csv)?;
            let manifest = out.finish("quadrature", None, None, started)?;
            if json {
                return Ok(serde_json::to_string_pretty(&manifest).expect("serialisable") + "\n");
            }
            Ok(format!("wrote quadrature.csv to {}\n", dir.display()))
        }
        None if json => Ok(serde_json::to_string_pretty(&rows).expect("serialisable") + "\n"),
        None => Ok(csv),
    }
}

fn cmd_selftest(json: bool) -> Result<String, CliError> {
    let checks = critrad::selftest::run_all();
    let out = if json {
        serde_json::to_string_pretty(&checks).expect("serialisable") + "\n"
    } else {
        let mut s = String::new();
        for c in &checks {
            let _ = writeln!(
                s,
                "{} {:<42} {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        s
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        print!("{out}");
        return Err(CliError::Invalid(format!("{failed} self-test check(s) failed")));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Radius(args) => cmd_radius(args, cli.json),
        Command::Simulate(args) => cmd_simulate(args, cli.json),
        Command::Quadrature(args) => cmd_quadrature(args, cli.json),
        Command::Selftest => cmd_selftest(cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.0160470271234567), "0.0160470271235");
        assert_eq!(sig12(1.791759469228055), "1.79175946923");
        assert_eq!(sig12(1e6), "1000000.00000");
        assert_eq!(sig12(1e13), "1.00000000000e13");
        assert_eq!(sig12(-2.5e-7), "-2.50000000000e-7");
    }

    #[test]
    fn radius_json_round_trips() {
        let args = RadiusArgs {
            n: 1e6,
            k: 0,
            c: 0.0,
            region: Region::UnitBall,
        };
        let text = cmd_radius(&args, true).unwrap();
        let back: RadiusReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.r_n, critical_radius(1e6, 0, back.xi).unwrap());
        assert_eq!(serde_json::to_string_pretty(&back).unwrap() + "\n", text);
    }
}
