use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dpgof::ingest::{self, to_freq_pairs};
use dpgof::rng::stream;
use dpgof::sim::draw_alternative;
use dpgof::{
    bootstrap::bootstrap_tests, loglog, run_power_study, AlternativeSpec, BootstrapConfig,
    ErrorClass, FrequencyTable, GofReport, InputFormat, PowerStudyConfig, StatisticId,
};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "dpgof",
    version,
    about = "Goodness-of-fit tests for the discrete Pareto distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Master seed for every random stream (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Significance level.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Number of bootstrap replicates.
    #[arg(long = "boot-reps", global = true)]
    boot_reps: Option<usize>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Data file format: input for `test` and `loglog`, output for `sample`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Raw)]
    format: Format,
    /// Where to write the machine-readable result (`-` for stdout).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// One positive integer per line.
    Raw,
    /// `value count` per line.
    Freq,
}

impl From<Format> for InputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Raw => InputFormat::RawCounts,
            Format::Freq => InputFormat::FreqPairs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit the shape exponent and run bootstrap goodness-of-fit tests.
    ///
    /// The JSON report goes to --output.
    Test {
        data: PathBuf,
        /// Statistic labels: K, Z:<a>, T:<beta>, CN, SBEN. Repeatable.
        #[arg(long = "stat", short, default_value = "K")]
        stats: Vec<StatisticId>,
    },
    /// Log-log frequency regression; the CSV of points goes to --output.
    Loglog { data: PathBuf },
    /// Monte Carlo size and power study; the CSV table goes to --output.
    ///
    /// --seed, --alpha, --boot-reps and --workers override the config.
    PowerStudy {
        /// JSON config (schema_version 1).
        config: Option<PathBuf>,
        /// Built-in grid instead of a config file.
        #[arg(long, value_enum, conflicts_with = "config")]
        preset: Option<Preset>,
        /// Print the resolved config as JSON and exit.
        #[arg(long)]
        dump_config: bool,
        /// Also write the full result table as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Report progress on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Draw a sample from DPareto(nu), optionally perturbed by DU(k).
    Sample {
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        n: usize,
        /// Add an independent DU(k) draw.
        #[arg(long, conflicts_with = "max_du")]
        sum_du: Option<u64>,
        /// Take the maximum with an independent DU(k) draw.
        #[arg(long)]
        max_du: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// n = 10, MC = 1000, b = 500, all tests.
    FullN10,
    /// n = 20, MC = 1000, b = 500, all tests.
    FullN20,
    /// n = 20 at MC = 300, b = 300.
    DeskN20,
}

#[derive(Serialize)]
struct TestReport<'a> {
    tool: &'static str,
    tool_version: &'static str,
    seed: u64,
    n: u64,
    distinct: usize,
    reports: &'a [GofReport],
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<dpgof::Error>() {
            return match err.class() {
                ErrorClass::Input => 2,
                ErrorClass::Domain => 3,
                ErrorClass::Numerical => 4,
                ErrorClass::Io => 5,
            };
        }
        if cause.is::<std::io::Error>() {
            return 5;
        }
        if cause.is::<serde_json::Error>() {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    let common = cli.common;
    match cli.command {
        Command::Test { data, stats } => cmd_test(&common, &data, &stats),
        Command::Loglog { data } => cmd_loglog(&common, &data),
        Command::PowerStudy {
            config,
            preset,
            dump_config,
            json,
            progress,
        } => cmd_power(
            &common,
            config.as_deref(),
            preset,
            dump_config,
            json.as_deref(),
            progress,
        ),
        Command::Sample {
            nu,
            n,
            sum_du,
            max_du,
        } => {
            let spec = match (sum_du, max_du) {
                (Some(k), _) => AlternativeSpec::sum_du(nu, k),
                (_, Some(k)) => AlternativeSpec::max_du(nu, k),
                _ => AlternativeSpec::null(nu),
            };
            cmd_sample(&common, &spec, n)
        }
    }
}

fn boot_config(c: &Common) -> BootstrapConfig {
    let mut cfg = BootstrapConfig {
        master_seed: c.seed.unwrap_or(0),
        ..BootstrapConfig::default()
    };
    if let Some(a) = c.alpha {
        cfg.alpha = a;
    }
    if let Some(b) = c.boot_reps {
        cfg.replicates = b;
    }
    if let Some(w) = c.workers {
        cfg.workers = w;
    }
    cfg
}

fn ingest(c: &Common, path: &Path) -> Result<FrequencyTable> {
    Ok(ingest::read(path, c.format.into())?)
}

fn emit(target: Option<&Path>, text: &str) -> Result<()> {
    match target {
        None => Ok(()),
        Some(p) if p == Path::new("-") => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| {
            dpgof::Error::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            }
            .into()
        }),
    }
}

fn to_stdout(c: &Common) -> bool {
    c.output.as_deref() == Some(Path::new("-"))
}

fn cmd_test(c: &Common, path: &Path, stats: &[StatisticId]) -> Result<()> {
    let data = ingest(c, path)?;
    let cfg = boot_config(c);
    let reports = bootstrap_tests(&data, stats, &cfg)?;
    if !to_stdout(c) {
        let fit = &reports[0].fit;
        println!(
            "{}: n = {}, {} distinct values",
            path.display(),
            data.total(),
            data.distinct()
        );
        println!(
            "fitted nu = {:.6}{}",
            fit.nu_hat,
            if fit.degenerate {
                " (degenerate: boundary of the search interval)"
            } else {
                ""
            }
        );
        println!(
            "bootstrap: {} replicates, alpha = {}, seed = {}, {} degenerate refits",
            cfg.replicates, cfg.alpha, cfg.master_seed, reports[0].degenerate_replicate_count
        );
        println!(
            "{:<8} {:>14} {:>14} {:>8}  decision",
            "stat", "value", "critical", "p"
        );
        for r in &reports {
            println!(
                "{:<8} {:>14.6e} {:>14.6e} {:>8.4}  {:?}",
                r.statistic.id.to_string(),
                r.statistic.value,
                r.critical_value,
                r.p_value,
                r.decision
            );
        }
    }
    let report = TestReport {
        tool: "dpgof",
        tool_version: VERSION,
        seed: cfg.master_seed,
        n: data.total(),
        distinct: data.distinct(),
        reports: &reports,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    emit(c.output.as_deref(), &json)
}

fn cmd_loglog(c: &Common, path: &Path) -> Result<()> {
    let data = ingest(c, path)?;
    let d = loglog(&data)?;
    if !to_stdout(c) {
        println!("{}: {} points", path.display(), d.points.len());
        println!("slope     = {:.6}", d.ols_slope);
        println!("intercept = {:.6}", d.ols_intercept);
        println!("r^2       = {:.6}", d.r_squared);
    }
    emit(c.output.as_deref(), &d.to_csv())
}

fn cmd_power(
    c: &Common,
    config: Option<&Path>,
    preset: Option<Preset>,
    dump: bool,
    json: Option<&Path>,
    progress: bool,
) -> Result<()> {
    let mut cfg = match (config, preset) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| dpgof::Error::Io {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            PowerStudyConfig::from_json(&text)
                .with_context(|| format!("reading {}", p.display()))?
        }
        (None, Some(Preset::FullN10)) => PowerStudyConfig::full_grid(10, 0),
        (None, Some(Preset::FullN20)) => PowerStudyConfig::full_grid(20, 0),
        (None, Some(Preset::DeskN20)) => PowerStudyConfig::full_grid(20, 0).desk_scale(),
        (None, None) => {
            return Err(
                dpgof::Error::Config("power-study needs a config file or --preset".into()).into(),
            )
        }
    };
    // explicit flags win over the file
    if let Some(s) = c.seed {
        cfg.boot.master_seed = s;
    }
    if let Some(a) = c.alpha {
        cfg.boot.alpha = a;
    }
    if let Some(b) = c.boot_reps {
        cfg.boot.replicates = b;
    }
    if let Some(w) = c.workers {
        cfg.boot.workers = w;
    }
    cfg.validate()?;
    if dump {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(());
    }

    let report = |done: usize, total: usize| {
        if done == total || done.is_multiple_of(10) {
            eprint!("\r{done}/{total} replications");
            if done == total {
                eprintln!();
            }
        }
    };
    let cb: Option<&(dyn Fn(usize, usize) + Sync)> = if progress { Some(&report) } else { None };
    let table = run_power_study(&cfg, cb)?;
    let csv = table.to_csv();
    if !to_stdout(c) {
        println!(
            "n = {}, MC = {}, b = {}, alpha = {}, seed = {} (rejection rates in %)",
            table.n, table.mc, table.replicates, table.alpha, table.master_seed
        );
        print!("{csv}");
        let failures: usize = table.rows.iter().map(|r| r.failures).sum();
        if failures > 0 {
            println!("{failures} replications failed and were excluded");
        }
    }
    if let Some(p) = json {
        let mut text = serde_json::to_string_pretty(&table)?;
        text.push('\n');
        emit(Some(p), &text)?;
    }
    emit(c.output.as_deref(), &csv)
}

fn cmd_sample(c: &Common, spec: &AlternativeSpec, n: usize) -> Result<()> {
    spec.validate()?;
    if n == 0 {
        return Err(dpgof::Error::Config("sample size must be positive".into()).into());
    }
    let sample = draw_alternative(spec, n, &mut stream(c.seed.unwrap_or(0), &[0]))?;
    let text = match c.format {
        Format::Raw => sample.values().iter().map(|v| format!("{v}\n")).collect(),
        Format::Freq => to_freq_pairs(&sample.compress()),
    };
    let target = c.output.clone().unwrap_or_else(|| PathBuf::from("-"));
    emit(Some(&target), &text)
}
