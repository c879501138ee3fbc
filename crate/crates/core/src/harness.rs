//! Seeded trial batches, parameter sweeps and diagnostic reports.
//!
//! Everything here is concrete `f64`. Trial `i` of a batch uses the seed
//! `derive_seed(master_seed, i)`, so rows do not depend on how trials are
//! scheduled across threads.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::advantage::{check_c_condition, AdvantageReport};
use crate::algorithms::{self, budget_bound, Learner, PacConfig};
use crate::noise::NoiseSpec;
use crate::rng::derive_seed;
use crate::rum::{RumInstance, Variant};
use crate::{Error, RandomStream, Result};

/// Instance generators usable in place of explicit thetas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum Generator {
    /// Lower-bound construction with Gumbel(0, 1) noise.
    Hardness { n: usize, eps: f64, variant: Variant },
    /// One best item at theta 0 in a random position; the others uniform on
    /// `[-gap - spread, -gap]`.
    Random {
        n: usize,
        gap: f64,
        spread: f64,
        noise: NoiseSpec<f64>,
        seed: u64,
    },
}

impl Generator {
    pub fn build(&self) -> Result<RumInstance<f64>> {
        match *self {
            Generator::Hardness { n, eps, variant } => RumInstance::hardness(n, eps, variant),
            Generator::Random {
                n,
                gap,
                spread,
                noise,
                seed,
            } => {
                if !(gap >= 0.0 && spread >= 0.0) {
                    return Err(Error::Config(format!("gap and spread must be >= 0, got {gap}, {spread}")));
                }
                let mut rng = RandomStream::from_seed(seed);
                let best = rng.below(n.max(1));
                let thetas = (0..n)
                    .map(|i| if i == best { 0.0 } else { -gap - spread * rng.gen::<f64>() })
                    .collect();
                RumInstance::new(thetas, noise)
            }
        }
    }

    fn with_n(&self, n: usize) -> Self {
        let mut g = self.clone();
        match &mut g {
            Generator::Hardness { n: m, .. } | Generator::Random { n: m, .. } => *m = n,
        }
        g
    }
}

/// Explicit instance or generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Generated(Generator),
    Explicit(RumInstance<f64>),
}

impl InstanceSpec {
    pub fn build(&self) -> Result<RumInstance<f64>> {
        match self {
            InstanceSpec::Explicit(inst) => Ok(inst.clone()),
            InstanceSpec::Generated(g) => g.build(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

/// One batch of learner runs on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub k: usize,
    pub pac: PacConfig<f64>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Builds the instance and checks `trials >= 1`, `2 <= k <= n`, `m <= k`.
    pub fn validate(&self) -> Result<RumInstance<f64>> {
        let inst = self.instance.build()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.k < 2 || self.k > inst.len() {
            return Err(Error::Config(format!("need 2 <= k <= n = {}, got k = {}", inst.len(), self.k)));
        }
        if self.pac.m > self.k {
            return Err(Error::Config(format!("m = {} exceeds k = {}", self.pac.m, self.k)));
        }
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub output: usize,
    pub rounds: u64,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchSummary {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub learner: Learner,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_rounds: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub stddev_rounds: f64,
    pub max_rounds: u64,
    pub budget_bound: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<TrialRow>,
}

impl BatchSummary {
    /// `1 - delta - 3 sqrt(delta (1 - delta) / trials)`.
    pub fn pac_threshold(&self) -> f64 {
        1.0 - self.delta - 3.0 * (self.delta * (1.0 - self.delta) / self.trials as f64).sqrt()
    }

    /// Success rate clears [`pac_threshold`](Self::pac_threshold) and no
    /// trial exceeded the budget.
    pub fn pac_ok(&self) -> bool {
        self.success_rate >= self.pac_threshold() && self.max_rounds <= self.budget_bound
    }

    pub fn without_rows(&self) -> Self {
        Self {
            rows: Vec::new(),
            ..self.clone()
        }
    }
}

/// Runs one trial with its own rng stream.
pub fn run_trial(inst: &RumInstance<f64>, k: usize, pac: &PacConfig<f64>, trial: usize, master_seed: u64) -> Result<TrialRow> {
    let seed = derive_seed(master_seed, trial as u64);
    let mut rng = RandomStream::from_seed(seed);
    let mut env = inst;
    let mut res = algorithms::run(&mut env, k, pac, &mut rng)?;
    res.judge(inst, pac.epsilon);
    Ok(TrialRow {
        trial,
        seed,
        output: res.output,
        rounds: res.rounds,
        success: res.success == Some(true),
    })
}

/// Runs every trial of `cfg`, on the rayon pool when `parallel`. Rows come
/// back in trial order either way.
pub fn run_batch(cfg: &ExperimentConfig, parallel: bool) -> Result<BatchSummary> {
    let inst = cfg.validate()?;
    let run = |t| run_trial(&inst, cfg.k, &cfg.pac, t, cfg.master_seed);
    let rows: Vec<TrialRow> = if parallel {
        (0..cfg.trials).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..cfg.trials).map(run).collect::<Result<_>>()?
    };
    summarize(&inst, cfg, rows)
}

fn summarize(inst: &RumInstance<f64>, cfg: &ExperimentConfig, rows: Vec<TrialRow>) -> Result<BatchSummary> {
    let trials = rows.len();
    let successes = rows.iter().filter(|r| r.success).count();
    let mean = rows.iter().map(|r| r.rounds as f64).sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        rows.iter().map(|r| (r.rounds as f64 - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(BatchSummary {
        n: inst.len(),
        k: cfg.k,
        m: cfg.pac.m,
        learner: cfg.pac.learner(),
        epsilon: cfg.pac.epsilon,
        delta: cfg.pac.delta,
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        mean_rounds: mean,
        stddev_rounds: var.sqrt(),
        max_rounds: rows.iter().map(|r| r.rounds).max().unwrap_or(0),
        budget_bound: budget_bound(inst.len(), cfg.k, &cfg.pac)?,
        rows,
    })
}

/// `trial,seed,output,rounds,success` with one line per row.
pub fn rows_csv(rows: &[TrialRow]) -> String {
    let mut out = String::from("trial,seed,output,rounds,success\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.trial, r.seed, r.output, r.rounds, r.success).expect("string write");
    }
    out
}

/// Sidecar path for a CSV: `<path>.summary.json`.
pub fn summary_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

/// Writes a batch: CSV rows plus a summary sidecar, or one JSON document.
pub fn write_batch(summary: &BatchSummary, out: &OutputSpec) -> Result<()> {
    match out.format {
        Format::Csv => {
            fs::write(&out.path, rows_csv(&summary.rows))?;
            fs::write(summary_path(&out.path), serde_json::to_string_pretty(&summary.without_rows())? + "\n")?;
        }
        Format::Json => fs::write(&out.path, serde_json::to_string_pretty(summary)? + "\n")?,
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    N,
    K,
    M,
    Epsilon,
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(Axis::N),
            "k" => Ok(Axis::K),
            "m" => Ok(Axis::M),
            "epsilon" | "eps" => Ok(Axis::Epsilon),
            other => Err(Error::Config(format!("unknown sweep axis {other:?}; use n, k, m or epsilon"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: Axis,
    pub value: f64,
    pub summary: BatchSummary,
}

fn integral(axis: Axis, value: f64) -> Result<usize> {
    if value >= 1.0 && value.fract() == 0.0 && value < 1e9 {
        Ok(value as usize)
    } else {
        Err(Error::Config(format!("{axis:?} values must be positive integers, got {value}")))
    }
}

/// `base` with one parameter replaced. Sweeping `n` needs a generated instance.
pub fn with_axis(base: &ExperimentConfig, axis: Axis, value: f64) -> Result<ExperimentConfig> {
    let mut cfg = base.clone();
    match axis {
        Axis::N => {
            let n = integral(axis, value)?;
            cfg.instance = match &base.instance {
                InstanceSpec::Generated(g) => InstanceSpec::Generated(g.with_n(n)),
                InstanceSpec::Explicit(_) => {
                    return Err(Error::Config("sweeping n needs a generator instance".into()));
                }
            };
        }
        Axis::K => cfg.k = integral(axis, value)?,
        Axis::M => {
            let m = integral(axis, value)?;
            let mut pac = PacConfig::new(base.pac.epsilon, base.pac.delta, base.pac.c, m)?;
            if let Some(l) = base.pac.learner {
                pac = pac.with_learner(if m > 1 { Learner::MseqPb } else { l })?;
            }
            cfg.pac = pac;
        }
        Axis::Epsilon => {
            let mut pac = PacConfig::new(value, base.pac.delta, base.pac.c, base.pac.m)?;
            pac.learner = base.pac.learner;
            cfg.pac = pac;
        }
    }
    Ok(cfg)
}

/// One batch per value, rows dropped from the summaries.
pub fn sweep(base: &ExperimentConfig, axis: Axis, values: &[f64], parallel: bool) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&value| {
            let cfg = with_axis(base, axis, value)?;
            let summary = run_batch(&cfg, parallel)?.without_rows();
            Ok(SweepRow { axis, value, summary })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("axis,value,n,k,m,learner,epsilon,trials,success_rate,mean_rounds,stddev_rounds,max_rounds,budget_bound\n");
    for r in rows {
        let s = &r.summary;
        let learner = match s.learner {
            Learner::SeqPb => "seq_pb",
            Learner::MseqPb => "mseq_pb",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            serde_json::to_value(r.axis).expect("axis").as_str().expect("string"),
            r.value,
            s.n,
            s.k,
            s.m,
            learner,
            s.epsilon,
            s.trials,
            s.success_rate,
            s.mean_rounds,
            s.stddev_rounds,
            s.max_rounds,
            s.budget_bound
        )
        .expect("string write");
    }
    out
}

/// Min-AR diagnostics for every ordered pair.
pub fn minar_report(inst: &RumInstance<f64>, k: usize, c: f64) -> Result<Vec<AdvantageReport<f64>>> {
    check_c_condition(inst, k, c)
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "na",
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn minar_csv(rows: &[AdvantageReport<f64>]) -> String {
    let mut out = String::from(
        "i,j,delta,min_ar,min_ar_exact,argmin_subset,variational_bound,method,threshold,c_condition_ok,threshold_linear,linear_condition_ok,pairwise_pref,pref_bound_ok\n",
    );
    for r in rows {
        let subset = r
            .argmin_subset
            .as_ref()
            .map_or_else(String::new, |s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.i,
            r.j,
            r.delta,
            r.min_ar(),
            opt(r.min_ar_exact),
            subset,
            r.variational_bound,
            serde_json::to_value(r.method).expect("method").as_str().expect("string"),
            r.threshold,
            flag(r.c_condition_ok),
            r.threshold_linear,
            flag(r.linear_condition_ok),
            opt(r.pairwise_pref),
            flag(r.pref_bound_ok)
        )
        .expect("string write");
    }
    out
}

/// Exact, quadrature, closed-form and Monte Carlo win probabilities of one item.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub item: usize,
    pub exact: f64,
    pub quadrature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    pub monte_carlo: f64,
    pub std_error: f64,
    /// `|exact - monte_carlo| <= 3 sqrt(p (1 - p) / rounds)` with `p = exact`.
    pub within_3_sigma: bool,
}

/// Cross-checks every member of `subset`. Each item gets its own Monte Carlo
/// stream derived from `seed`.
pub fn oracle_dump(inst: &RumInstance<f64>, subset: &[usize], rounds: u64, seed: u64) -> Result<Vec<OracleRow>> {
    subset
        .iter()
        .enumerate()
        .map(|(p, &item)| {
            let exact = inst.win_probability_exact(subset, item)?;
            let quadrature = inst.win_probability_quadrature(subset, item)?;
            let closed_form = match inst.noise() {
                NoiseSpec::Gumbel { .. } => Some(inst.win_probability_closed_form(subset, item)?),
                _ => None,
            };
            let mut rng = RandomStream::child(seed, p as u64);
            let mc = inst.win_probability_mc(subset, item, rounds, &mut rng)?;
            let band = 3.0 * (exact * (1.0 - exact) / rounds as f64).sqrt();
            Ok(OracleRow {
                item,
                exact,
                quadrature,
                closed_form,
                monte_carlo: mc.p,
                std_error: mc.std_error,
                within_3_sigma: (exact - mc.p).abs() <= band,
            })
        })
        .collect()
}

pub fn oracle_csv(rows: &[OracleRow]) -> String {
    let mut out = String::from("item,exact,quadrature,closed_form,monte_carlo,std_error,within_3_sigma\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.item,
            r.exact,
            r.quadrature,
            opt(r.closed_form),
            r.monte_carlo,
            r.std_error,
            r.within_3_sigma
        )
        .expect("string write");
    }
    out
}
