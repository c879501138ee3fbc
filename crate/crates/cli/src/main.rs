//! `rumpac` command-line runner: trial batches, sweeps, Min-AR reports and
//! win-probability cross-checks.
//!
//! Exit codes: 0 on success, 2 on a config error, 3 when `--assert` checks
//! fail, 1 otherwise.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rumpac::harness::{
    minar_csv, minar_report, oracle_csv, oracle_dump, rows_csv, run_batch, summary_path, sweep, sweep_csv, Axis,
    BatchSummary, ExperimentConfig, Format, InstanceSpec, OutputSpec, SweepRow,
};

#[derive(Parser)]
#[command(name = "rumpac", version, about = "PAC best-item identification in random utility models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of seeded trials from an experiment config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        batch: BatchFlags,
        #[command(flatten)]
        out: OutFlags,
    },
    /// Run one batch per value of a single parameter.
    Sweep {
        config: PathBuf,
        /// n, k, m or epsilon.
        #[arg(long)]
        axis: Axis,
        /// Comma-separated values, e.g. 1,2,4.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[command(flatten)]
        batch: BatchFlags,
        #[command(flatten)]
        out: OutFlags,
    },
    /// Min-AR report for every ordered pair of an instance.
    Minar {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        out: OutFlags,
    },
    /// Exact, quadrature, closed-form and Monte Carlo win probabilities.
    Oracle {
        instance: PathBuf,
        /// Comma-separated items; defaults to all of them.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutFlags,
    },
}

#[derive(Args)]
struct BatchFlags {
    /// Overrides master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Run trials one after another instead of on the thread pool.
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct OutFlags {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Exit with code 3 if the command's checks fail.
    #[arg(long = "assert")]
    check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
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

fn load_config(path: &Path, batch: &BatchFlags) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = batch.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = batch.trials {
        cfg.trials = trials;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_instance(path: &Path) -> Result<rumpac::RumInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: InstanceSpec = serde_json::from_str(&text).map_err(rumpac::Error::from)?;
    Ok(spec.build()?)
}

fn emit(out: &OutFlags, csv: impl FnOnce() -> String, json: impl FnOnce() -> Result<String>) -> Result<()> {
    let text = match out.format {
        FormatArg::Csv => csv(),
        FormatArg::Json => json()? + "\n",
    };
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(s: &BatchSummary) {
    eprintln!(
        "n={} k={} m={} eps={}: {}/{} successes, mean rounds {:.1}, max {}, budget {}",
        s.n, s.k, s.m, s.epsilon, s.successes, s.trials, s.mean_rounds, s.max_rounds, s.budget_bound
    );
}

/// Failed scaling checks for a sweep, one message each.
fn sweep_failures(axis: Axis, rows: &[SweepRow]) -> Vec<String> {
    let mut bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.summary.pac_ok())
        .map(|r| format!("{axis:?}={}: success rate {} below {:.3}", r.value, r.summary.success_rate, r.summary.pac_threshold()))
        .collect();
    for w in rows.windows(2) {
        let (a, b) = (&w[0].summary, &w[1].summary);
        match axis {
            Axis::M if b.mean_rounds >= a.mean_rounds => {
                bad.push(format!("mean rounds not decreasing from m={} to m={}", w[0].value, w[1].value));
            }
            Axis::N => {
                let ratio = b.mean_rounds / a.mean_rounds;
                if !(1.5..=3.0).contains(&ratio) {
                    bad.push(format!("mean rounds ratio {ratio:.3} from n={} to n={}", w[0].value, w[1].value));
                }
            }
            _ => {}
        }
    }
    if axis == Axis::K && !rows.is_empty() {
        let budgets = rows.iter().map(|r| r.summary.budget_bound as f64);
        let hi = budgets.clone().fold(f64::MIN, f64::max);
        let lo = budgets.fold(f64::MAX, f64::min);
        if hi / lo > 2.5 {
            bad.push(format!("budget bound varies by {:.3} across k", hi / lo));
        }
    }
    bad
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, batch, out } => {
            let cfg = load_config(&config, &batch)?;
            let summary = run_batch(&cfg, !batch.serial)?;
            report(&summary);
            match &out.out {
                Some(path) => {
                    let spec = OutputSpec {
                        path: path.clone(),
                        format: out.format.into(),
                    };
                    rumpac::harness::write_batch(&summary, &spec)?;
                    if matches!(out.format, FormatArg::Csv) {
                        eprintln!("wrote {} and {}", path.display(), summary_path(path).display());
                    }
                }
                None => emit(&out, || rows_csv(&summary.rows), || Ok(serde_json::to_string_pretty(&summary)?))?,
            }
            let ok = summary.pac_ok() && summary.max_rounds <= summary.budget_bound;
            if out.check && !ok {
                eprintln!("check failed: success rate {} (need {:.3})", summary.success_rate, summary.pac_threshold());
            }
            Ok(ok || !out.check)
        }
        Command::Sweep {
            config,
            axis,
            values,
            batch,
            out,
        } => {
            let cfg = load_config(&config, &batch)?;
            let rows = sweep(&cfg, axis, &values, !batch.serial)?;
            for r in &rows {
                report(&r.summary);
            }
            emit(&out, || sweep_csv(&rows), || Ok(serde_json::to_string_pretty(&rows)?))?;
            let failures = sweep_failures(axis, &rows);
            if out.check {
                for f in &failures {
                    eprintln!("check failed: {f}");
                }
            }
            Ok(failures.is_empty() || !out.check)
        }
        Command::Minar { instance, k, c, out } => {
            let inst = load_instance(&instance)?;
            let rows = minar_report(&inst, k, c)?;
            emit(&out, || minar_csv(&rows), || Ok(serde_json::to_string_pretty(&rows)?))?;
            let ok = rows.iter().all(|r| r.c_condition_ok != Some(false));
            if out.check && !ok {
                eprintln!("check failed: some pair violates the c condition");
            }
            Ok(ok || !out.check)
        }
        Command::Oracle {
            instance,
            subset,
            rounds,
            seed,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let subset = subset.unwrap_or_else(|| (0..inst.len()).collect());
            if subset.is_empty() {
                bail!(rumpac::Error::Config("subset must not be empty".into()));
            }
            let rows = oracle_dump(&inst, &subset, rounds, seed)?;
            emit(&out, || oracle_csv(&rows), || Ok(serde_json::to_string_pretty(&rows)?))?;
            let ok = rows.iter().all(|r| r.within_3_sigma);
            if out.check && !ok {
                eprintln!("check failed: monte carlo estimate outside 3 sigma");
            }
            Ok(ok || !out.check)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            let config = e.chain().any(|c| {
                c.downcast_ref::<rumpac::Error>().is_some_and(rumpac::Error::is_config)
                    || c.downcast_ref::<serde_json::Error>().is_some()
            });
            ExitCode::from(if config { 2 } else { 1 })
        }
    }
}
