//! Command-line harness: configuration, suite orchestration and reports.

pub mod anchors;
pub mod config;
pub mod emit;
pub mod error;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use config::{Format, RegimeChoice, RunConfig, Suite};
use error::{exit, CliError};
use report::{Environment, Report, Summary};

/// Thread cap read at start-up.
pub const THREADS_ENV: &str = "SECLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "seclab", version, about = "Numerical checks of sectorial estimates for elliptic operators")]
pub struct Cli {
    #[arg(value_enum)]
    pub suite: Suite,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub p: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Coefficient field as `name(args)`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeChoice>,
    #[arg(long)]
    pub gradient_m: Option<f64>,
    /// Directory for `report.csv` / `report.json`; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Cli {
    /// The file configuration (or defaults) with flag overrides applied.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        c.suite = Some(self.suite);
        if self.p.is_some() {
            c.p = self.p.clone();
        }
        if self.field.is_some() {
            c.field = self.field.clone();
        }
        c.theta = self.theta.or(c.theta);
        c.n = self.n.or(c.n);
        c.samples = self.samples.or(c.samples);
        c.gradient_m = self.gradient_m.or(c.gradient_m);
        c.seed = self.seed.unwrap_or(c.seed);
        c.regime = self.regime.unwrap_or(c.regime);
        c.format = self.format.unwrap_or(c.format);
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        Ok(c)
    }
}

/// Runs the configured suite and assembles the report.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let suite = config
        .suite
        .ok_or_else(|| CliError::Usage("no suite given".into()))?;
    let records = suites::run_suite(suite, config)?;
    Ok(Report {
        config: config.clone(),
        environment: Environment {
            precision: "f64".into(),
            seed: config.seed,
            rng: seclab_core::sampling::RNG_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            threads: rayon::current_num_threads(),
        },
        summary: Summary::of(&records),
        records,
    })
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} = `{v}` is not a positive integer")))?;
    // a pool built earlier in the process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    init_threads()?;
    let config = cli.resolve()?;
    let report = run(&config)?;
    match &config.out {
        Some(dir) => {
            emit::emit_tables(&report, config.format, dir)?;
        }
        None => {
            let text = emit::render(&report, config.format)?;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(report.summary.exit_code())
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::PASS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("seclab: {e}");
            e.exit_code()
        }
    }
}
