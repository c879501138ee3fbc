//! Sequential elimination learners.
//!
//! Both learners split the surviving items into groups of `k`, play every
//! group for a fixed number of rounds, keep one empirical winner per group
//! and recurse. Once at most `k` survivors remain they are padded with random
//! eliminated items and played one last time with a looser schedule.
//! [`seq_pb`] uses winner feedback and win counts; [`mseq_pb`] uses top-`m`
//! rankings, rank breaking and pairwise preference estimates.

mod mseq;
mod seq;

pub use mseq::mseq_pb;
pub use seq::seq_pb;

use serde::{Deserialize, Serialize};

use crate::rum::{FeedbackKind, Observation, RumInstance};
use crate::{Error, RandomStream, Real, Result};

/// Anything that answers subset plays. Trials own their source mutably so
/// stateful or scripted sources work as well as a [`RumInstance`].
pub trait FeedbackSource {
    fn num_items(&self) -> usize;
    fn observe(&mut self, subset: &[usize], kind: FeedbackKind, rng: &mut RandomStream) -> Result<Observation>;
}

impl<T: Real> FeedbackSource for RumInstance<T> {
    fn num_items(&self) -> usize {
        self.len()
    }

    fn observe(&mut self, subset: &[usize], kind: FeedbackKind, rng: &mut RandomStream) -> Result<Observation> {
        self.sample_feedback(subset, kind, rng)
    }
}

impl<T: Real> FeedbackSource for &RumInstance<T> {
    fn num_items(&self) -> usize {
        self.len()
    }

    fn observe(&mut self, subset: &[usize], kind: FeedbackKind, rng: &mut RandomStream) -> Result<Observation> {
        self.sample_feedback(subset, kind, rng)
    }
}

/// Which learner runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Learner {
    /// Winner feedback with win counts; requires `m = 1`.
    SeqPb,
    /// Top-`m` feedback with rank breaking.
    MseqPb,
}

/// Accuracy, confidence and model constants shared by both learners.
///
/// The learner defaults to [`Learner::SeqPb`] for `m = 1` and
/// [`Learner::MseqPb`] otherwise; [`with_learner`](Self::with_learner) can
/// force the top-`m` learner at `m = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig<T>", bound = "T: Real")]
pub struct PacConfig<T> {
    pub epsilon: T,
    pub delta: T,
    pub c: T,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learner: Option<Learner>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawConfig<T> {
    epsilon: T,
    delta: T,
    c: T,
    #[serde(default = "one")]
    m: usize,
    #[serde(default)]
    learner: Option<Learner>,
}

fn one() -> usize {
    1
}

impl<T: Real> TryFrom<RawConfig<T>> for PacConfig<T> {
    type Error = Error;

    fn try_from(raw: RawConfig<T>) -> Result<Self> {
        let cfg = PacConfig::new(raw.epsilon, raw.delta, raw.c, raw.m)?;
        match raw.learner {
            Some(l) => cfg.with_learner(l),
            None => Ok(cfg),
        }
    }
}

impl<T: Real> PacConfig<T> {
    /// Requires a finite `epsilon > 0`, `0 < delta <= 1`, `0 < c < 1/2` and
    /// `m >= 1`. Accuracies above 1/2 are allowed; they only shorten the schedule.
    pub fn new(epsilon: T, delta: T, c: T, m: usize) -> Result<Self> {
        let half = T::lit(0.5);
        if !(epsilon > T::zero() && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(delta > T::zero() && delta <= T::one()) {
            return Err(Error::InvalidParameter(format!("delta must be in (0, 1], got {delta}")));
        }
        if !(c > T::zero() && c < half) {
            return Err(Error::InvalidParameter(format!("c must be in (0, 1/2), got {c}")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        Ok(Self {
            epsilon,
            delta,
            c,
            m,
            learner: None,
        })
    }

    pub fn with_learner(mut self, learner: Learner) -> Result<Self> {
        if learner == Learner::SeqPb && self.m != 1 {
            return Err(Error::InvalidParameter(format!("seq_pb uses winner feedback, got m = {}", self.m)));
        }
        self.learner = Some(learner);
        Ok(self)
    }

    /// The learner that [`run`] dispatches to.
    pub fn learner(&self) -> Learner {
        self.learner.unwrap_or(if self.m == 1 { Learner::SeqPb } else { Learner::MseqPb })
    }
}

/// Interior epochs shrink accuracy geometrically; the final epoch plays the
/// padded last group at `c eps / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Interior,
    Final,
}

/// Per-epoch accuracy, confidence and rounds per group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub eps: f64,
    pub delta: f64,
    pub t: u64,
}

const MAX_ROUNDS: f64 = 1e15;

/// Schedule for epoch `level` (1-based). Interior: `eps_l = (c eps / 8)(3/4)^(l-1)`,
/// `delta_l = delta / 2^(l+1)`. Final: `c eps / 2` and `delta / 2`.
/// Rounds per group: `ceil(k / (2 eps_l^2) ln(k / delta_l))` for Seq-PB and
/// `ceil(4k / (m eps_l^2) ln(2k / delta_l))` for mSeq-PB.
///
/// Computed in `f64` regardless of `T` so round counts do not depend on the
/// scalar type.
pub fn epoch_schedule<T: Real>(level: usize, cfg: &PacConfig<T>, phase: Phase, k: usize) -> Result<Schedule> {
    if level == 0 {
        return Err(Error::InvalidParameter("epoch levels start at 1".into()));
    }
    let (eps, delta, c) = (cfg.epsilon.as_f64(), cfg.delta.as_f64(), cfg.c.as_f64());
    let (eps_l, delta_l) = match phase {
        Phase::Interior => {
            let decay = 0.75f64.powi(level as i32 - 1);
            (c * eps / 8.0 * decay, delta / 2f64.powi(level as i32 + 1))
        }
        Phase::Final => (c * eps / 2.0, delta / 2.0),
    };
    let kf = k as f64;
    let raw = match cfg.learner() {
        Learner::SeqPb => kf / (2.0 * eps_l * eps_l) * (kf / delta_l).ln(),
        Learner::MseqPb => 4.0 * kf / (cfg.m as f64 * eps_l * eps_l) * (2.0 * kf / delta_l).ln(),
    };
    if !(raw.is_finite() && raw < MAX_ROUNDS) {
        return Err(Error::InvalidParameter(format!(
            "epoch {level} would need {raw} rounds per group"
        )));
    }
    Ok(Schedule {
        eps: eps_l,
        delta: delta_l,
        t: raw.ceil() as u64,
    })
}

/// Consecutive chunks of `k`; a short last chunk is returned as the remainder.
pub fn partition(items: &[usize], k: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    assert!(k >= 2, "group size must be at least 2");
    let mut groups: Vec<Vec<usize>> = items.chunks(k).map(<[usize]>::to_vec).collect();
    let remainder = match groups.last() {
        Some(g) if g.len() < k => groups.pop().expect("non-empty"),
        _ => Vec::new(),
    };
    (groups, remainder)
}

/// Everything the driver knows about one epoch before it is played.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpochState {
    pub level: usize,
    pub phase: Phase,
    /// Items entering this epoch: the group members plus the remainder.
    pub surviving: Vec<usize>,
    pub groups: Vec<Vec<usize>>,
    /// Items held out of this epoch and carried to the next.
    pub remainder: Vec<usize>,
    /// Eliminated items drawn back in to fill the final group.
    pub padding: Vec<usize>,
}

/// Runs the elimination skeleton over `n` items. `pick` plays one group of
/// the given epoch and returns its winner, which must be a group member.
/// Returns the output item and the epochs in order.
pub fn drive_epochs<F>(n: usize, k: usize, rng: &mut RandomStream, mut pick: F) -> Result<(usize, Vec<EpochState>)>
where
    F: FnMut(&EpochState, &[usize], &mut RandomStream) -> Result<usize>,
{
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let all: Vec<usize> = (0..n).collect();
    let (groups, remainder) = partition(&all, k);
    let mut state = EpochState {
        level: 1,
        phase: Phase::Interior,
        surviving: all,
        groups,
        remainder,
        padding: Vec::new(),
    };
    let mut epochs = Vec::new();
    loop {
        let mut next = Vec::with_capacity(state.groups.len() + state.remainder.len());
        for g in 0..state.groups.len() {
            let group = &state.groups[g];
            let winner = pick(&state, group, rng)?;
            if !group.contains(&winner) {
                return Err(Error::InvalidSubset(format!("winner {winner} is not in group {group:?}")));
            }
            next.push(winner);
        }
        next.extend_from_slice(&state.remainder);
        let level = state.level;
        epochs.push(state);
        if next.len() == 1 {
            return Ok((next[0], epochs));
        }
        state = if next.len() <= k {
            let pool: Vec<usize> = (0..n).filter(|i| !next.contains(i)).collect();
            let padding = rng.sample_without_replacement(&pool, k - next.len());
            let mut group = next.clone();
            group.extend_from_slice(&padding);
            EpochState {
                level: level + 1,
                phase: Phase::Final,
                surviving: next,
                groups: vec![group],
                remainder: Vec::new(),
                padding,
            }
        } else {
            let (groups, remainder) = partition(&next, k);
            EpochState {
                level: level + 1,
                phase: Phase::Interior,
                surviving: next,
                groups,
                remainder,
                padding: Vec::new(),
            }
        };
    }
}

/// One played epoch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpochRecord {
    pub level: usize,
    pub phase: Phase,
    pub eps: f64,
    pub delta: f64,
    pub t: u64,
    pub groups: Vec<Vec<usize>>,
    pub winners: Vec<usize>,
}

/// Outcome of one learner run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub output: usize,
    pub rounds: u64,
    pub epochs: Vec<EpochRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Filled in by callers that know the ground truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success: Option<bool>,
}

impl RunResult {
    /// Labels the run with ground truth: success iff the output is
    /// `epsilon`-optimal.
    pub fn judge<T: Real>(&mut self, inst: &RumInstance<T>, epsilon: T) {
        self.success = Some(inst.is_eps_optimal(self.output, epsilon));
    }
}

/// Shared run loop: `play` answers one group for `t` rounds and returns its winner.
pub(crate) fn run_learner<T, F>(
    n: usize,
    k: usize,
    cfg: &PacConfig<T>,
    rng: &mut RandomStream,
    mut play: F,
) -> Result<RunResult>
where
    T: Real,
    F: FnMut(&[usize], &Schedule, &mut RandomStream) -> Result<usize>,
{
    if cfg.m > k {
        return Err(Error::InvalidParameter(format!("m = {} exceeds k = {k}", cfg.m)));
    }
    let mut records: Vec<EpochRecord> = Vec::new();
    let mut rounds = 0u64;
    let (output, _) = drive_epochs(n, k, rng, |state, group, rng| {
        if records.last().is_none_or(|r| r.level != state.level) {
            let s = epoch_schedule(state.level, cfg, state.phase, k)?;
            records.push(EpochRecord {
                level: state.level,
                phase: state.phase,
                eps: s.eps,
                delta: s.delta,
                t: s.t,
                groups: state.groups.clone(),
                winners: Vec::new(),
            });
        }
        let rec = records.last_mut().expect("pushed above");
        let s = Schedule {
            eps: rec.eps,
            delta: rec.delta,
            t: rec.t,
        };
        let winner = play(group, &s, rng)?;
        rec.winners.push(winner);
        rounds += s.t;
        Ok(winner)
    })?;
    Ok(RunResult {
        output,
        rounds,
        epochs: records,
        seed: None,
        success: None,
    })
}

/// Runs the learner selected by `cfg` on `env`.
pub fn run<T: Real, E: FeedbackSource>(env: &mut E, k: usize, cfg: &PacConfig<T>, rng: &mut RandomStream) -> Result<RunResult> {
    match cfg.learner() {
        Learner::SeqPb => seq_pb(env, k, cfg, rng),
        Learner::MseqPb => mseq_pb(env, k, cfg, rng),
    }
}

/// Smallest `L >= 1` with `k^L >= n`.
pub fn ceil_log(n: usize, k: usize) -> usize {
    let mut level = 1;
    let mut reach = k as u128;
    while reach < n as u128 {
        reach *= k as u128;
        level += 1;
    }
    level
}

/// Worst-case planned rounds:
/// `sum_{l=1}^{ceil(log_k n)} ceil(ceil(n / k^(l-1)) / k) t(l) + t(final)`.
pub fn budget_bound<T: Real>(n: usize, k: usize, cfg: &PacConfig<T>) -> Result<u64> {
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut total: u128 = 0;
    let mut size = n as u128;
    for level in 1..=ceil_log(n, k) {
        let groups = size.div_ceil(k as u128);
        total += groups * epoch_schedule(level, cfg, Phase::Interior, k)?.t as u128;
        size = size.div_ceil(k as u128);
    }
    total += epoch_schedule(1, cfg, Phase::Final, k)?.t as u128;
    u64::try_from(total).map_err(|_| Error::TooLarge {
        count: total,
        limit: u64::MAX as u128,
    })
}

/// Rounds an actual run uses. Group sizes never depend on feedback, so this
/// is exact for every seed.
pub fn planned_rounds<T: Real>(n: usize, k: usize, cfg: &PacConfig<T>) -> Result<u64> {
    let mut rng = RandomStream::from_seed(0);
    let (_, epochs) = drive_epochs(n, k, &mut rng, |_, g, _| Ok(g[0]))?;
    let mut total = 0u64;
    for e in &epochs {
        let t = epoch_schedule(e.level, cfg, e.phase, k)?.t;
        total = total.saturating_add(t.saturating_mul(e.groups.len() as u64));
    }
    Ok(total)
}
