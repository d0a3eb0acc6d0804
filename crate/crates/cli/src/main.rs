//! `unlearn-bench`: calibration and unlearning experiments from the command
//! line. Results go to `--out` (standard output when absent); diagnostics go
//! to standard error under `UNLEARN_LOG`.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use langevin_unlearning::harness::{self, ExperimentConfig, Method, Report};
use langevin_unlearning::Error;

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_CONFIG: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "unlearn-bench",
    version,
    about = "Certified unlearning experiments with noisy gradient descent"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Least noise meeting each target within the step budget (no training).
    CalibrateSigma(Flags),
    /// Remove one point per trial and compare methods.
    UnlearnOne(Flags),
    /// Serve a stream of removal requests.
    Sequential(Flags),
    /// Privacy / step / accuracy trade-off over a noise grid.
    Sweep(Flags),
    /// D2D noise calibrations, with a reference-table comparison.
    D2d(Flags),
    /// Accuracy of trained models at a fixed noise level.
    Evaluate(Flags),
}

/// Every flag may also be given as `key = value` in the `--config` file;
/// flags win.
#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    /// mnist38, cifar10-binary, cifar10-multi or synthetic.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    /// Comma-separated targets.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long = "k-budget")]
    k_budget: Option<String>,
    #[arg(long)]
    batch: Option<String>,
    #[arg(long = "total-removals")]
    total_removals: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Comma-separated: langevin, d2d_thm9, d2d_thm28, retrain.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    regime: Option<String>,
    #[arg(long = "sigma-grid")]
    sigma_grid: Option<String>,
    /// Training features (CSV with `# d=.. c=.. normalized=..` header).
    #[arg(long)]
    data: Option<String>,
    #[arg(long = "test-data")]
    test_data: Option<String>,
    #[arg(long = "learn-iters")]
    learn_iters: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    plot: Option<String>,
    #[arg(long = "trial-log")]
    trial_log: Option<String>,
    /// Record wall-clock in the results (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    /// Where the D2D reference-table comparison goes.
    #[arg(long)]
    report: Option<PathBuf>,
}

impl Flags {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let pairs = [
            ("preset", &self.preset),
            ("sigma", &self.sigma),
            ("eps", &self.eps),
            ("delta", &self.delta),
            ("k-budget", &self.k_budget),
            ("batch", &self.batch),
            ("total-removals", &self.total_removals),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("out", &self.out),
            ("method", &self.method),
            ("regime", &self.regime),
            ("sigma-grid", &self.sigma_grid),
            ("data", &self.data),
            ("test-data", &self.test_data),
            ("learn-iters", &self.learn_iters),
            ("radius", &self.radius),
            ("plot", &self.plot),
            ("trial-log", &self.trial_log),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.timing {
            cfg.timing = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::InvalidParameter(_) | Error::Parse { .. } | Error::DimensionMismatch { .. } => {
            EXIT_CONFIG
        }
        Error::CapOverflow { .. }
        | Error::BudgetUnreachable { .. }
        | Error::NoFeasibleSigma { .. }
        | Error::InfeasibleBudget(_) => EXIT_INFEASIBLE,
    }
}

fn emit(cfg: &ExperimentConfig, report: &Report) -> Result<(), Error> {
    harness::write_report(cfg, report)?;
    if cfg.out.is_none() {
        let stdout = io::stdout();
        harness::write_results(&report.rows, stdout.lock()).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            message: e.to_string(),
        })?;
    }
    Ok(())
}

fn d2d_report(cfg: &ExperimentConfig, flags: &Flags) -> Result<(), Error> {
    let entries = harness::d2d_table_report(cfg.preset, cfg.radius)?;
    if entries.is_empty() {
        return Ok(());
    }
    let mut text =
        String::from("iters,epsilon,reference_sigma,computed_sigma,relative_difference\n");
    for e in &entries {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            e.iters,
            e.epsilon,
            e.reference,
            e.computed,
            e.relative_difference()
        ));
    }
    match &flags.report {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            log::info!(
                "D2D reference table comparison ({}):\n{text}",
                harness::Preset::name(cfg.preset)
            );
            Ok(())
        }
    }
}

type Experiment = fn(&ExperimentConfig) -> Result<Report, Error>;

fn run(command: &Command) -> Result<u8, Error> {
    let (flags, op): (&Flags, Experiment) = match command {
        Command::CalibrateSigma(f) => (f, |c| {
            Ok(Report {
                rows: harness::calibrate_sigma(c)?,
                plot: Vec::new(),
            })
        }),
        Command::UnlearnOne(f) => (f, harness::run_unlearn_one),
        Command::Sequential(f) => (f, harness::run_sequential),
        Command::Sweep(f) => (f, harness::run_tradeoff_sweep),
        Command::D2d(f) => (f, |c| {
            Ok(Report {
                rows: harness::calibrate_sigma(c)?,
                plot: Vec::new(),
            })
        }),
        Command::Evaluate(f) => (f, harness::run_evaluate),
    };
    let mut cfg = flags.config()?;
    if let Command::D2d(_) = command {
        if flags.method.is_none() {
            cfg.methods = vec![Method::D2dThm9, Method::D2dThm28];
        }
        d2d_report(&cfg, flags)?;
    }
    let report = op(&cfg)?;
    emit(&cfg, &report)?;
    let failures = report.rows.iter().filter(|r| r.error.is_some()).count();
    if failures > 0 {
        log::error!(
            "{failures} of {} rows could not be computed",
            report.rows.len()
        );
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("UNLEARN_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = writeln!(io::stderr(), "unlearn-bench: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
