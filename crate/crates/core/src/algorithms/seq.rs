use super::{run_learner, FeedbackSource, PacConfig, RunResult};
use crate::rum::FeedbackKind;
use crate::{Error, RandomStream, Real, Result};

/// Winner-feedback elimination. Each group is played `t` times and the item
/// with the most wins survives; ties go to the lowest item index.
pub fn seq_pb<T: Real, E: FeedbackSource>(env: &mut E, k: usize, cfg: &PacConfig<T>, rng: &mut RandomStream) -> Result<RunResult> {
    if cfg.m != 1 {
        return Err(Error::InvalidParameter(format!("seq_pb uses winner feedback, got m = {}", cfg.m)));
    }
    let cfg = cfg.with_learner(super::Learner::SeqPb)?;
    let n = env.num_items();
    let mut wins = vec![0u64; k];
    run_learner(n, k, &cfg, rng, |group, schedule, rng| {
        wins.iter_mut().for_each(|w| *w = 0);
        for _ in 0..schedule.t {
            let obs = env.observe(group, FeedbackKind::Winner, rng)?;
            let winner = obs.winner();
            let pos = group
                .iter()
                .position(|&g| g == winner)
                .ok_or_else(|| Error::InvalidSubset(format!("winner {winner} is not in group {group:?}")))?;
            wins[pos] += 1;
        }
        let best = (0..group.len())
            .max_by(|&a, &b| wins[a].cmp(&wins[b]).then(group[b].cmp(&group[a])))
            .expect("non-empty group");
        Ok(group[best])
    })
}
