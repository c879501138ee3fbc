use super::{run_learner, FeedbackSource, Learner, PacConfig, RunResult};
use crate::rank_breaking::PairwiseCounts;
use crate::rum::FeedbackKind;
use crate::{Error, RandomStream, Real, Result};

/// Top-`m` feedback elimination. Rankings are broken into pairwise wins; the
/// group winner is the lowest-indexed item `i` with
/// `p_hat_ij + eps_l / 2 >= 1/2` against every other member, or a uniformly
/// random member when no item qualifies.
///
/// Runs at any `1 <= m <= k`, so `m = 1` gives the winner-feedback baseline
/// of this learner.
pub fn mseq_pb<T: Real, E: FeedbackSource>(env: &mut E, k: usize, cfg: &PacConfig<T>, rng: &mut RandomStream) -> Result<RunResult> {
    let cfg = cfg.with_learner(Learner::MseqPb)?;
    let n = env.num_items();
    let kind = FeedbackKind::TopM(cfg.m);
    run_learner(n, k, &cfg, rng, |group, schedule, rng| {
        let mut counts = PairwiseCounts::new(group.to_vec());
        for _ in 0..schedule.t {
            let obs = env.observe(group, kind, rng)?;
            if obs.items.len() != cfg.m {
                return Err(Error::InvalidSubset(format!(
                    "asked for the top {} of {group:?}, got {:?}",
                    cfg.m, obs.items
                )));
            }
            counts.break_ranking(&obs)?;
        }
        let mut order: Vec<usize> = (0..group.len()).collect();
        order.sort_by_key(|&a| group[a]);
        let half = 0.5 - schedule.eps / 2.0;
        let qualified = order
            .iter()
            .copied()
            .find(|&a| (0..group.len()).filter(|&b| b != a).all(|b| counts.pref_at::<f64>(a, b) >= half));
        Ok(match qualified {
            Some(a) => group[a],
            None => group[rng.below(group.len())],
        })
    })
}
