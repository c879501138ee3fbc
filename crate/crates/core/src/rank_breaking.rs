//! Rank breaking: a top-`m` ranking of a group is turned into pairwise wins,
//! with every ranked item beating the items ranked after it and every
//! unranked member of the group.

use serde::{Deserialize, Serialize};

use crate::rum::{Observation, ObservationKind};
use crate::{Error, Real, Result};

/// Pairwise win counts for one group. `w[a][b]` counts how often the item
/// at position `a` of `group` beat the item at position `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseCounts {
    pub group: Vec<usize>,
    pub w: Vec<Vec<u64>>,
    pub rounds: u64,
}

/// Number of pairwise comparisons one top-`m` ranking of `k` items yields.
pub fn comparisons_per_round(k: usize, m: usize) -> u64 {
    let m = m.min(k) as u64;
    let k = k as u64;
    m * m.saturating_sub(1) / 2 + (k - m) * m
}

impl PairwiseCounts {
    pub fn new(group: Vec<usize>) -> Self {
        let k = group.len();
        Self {
            group,
            w: vec![vec![0; k]; k],
            rounds: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.group.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group.is_empty()
    }

    /// Position of `item` in the group.
    pub fn position(&self, item: usize) -> Option<usize> {
        self.group.iter().position(|&g| g == item)
    }

    fn same_members(&self, subset: &[usize]) -> bool {
        subset.len() == self.group.len() && subset.iter().all(|s| self.group.contains(s))
    }

    /// Adds the comparisons implied by `obs` and counts one round.
    pub fn break_ranking(&mut self, obs: &Observation) -> Result<()> {
        if !self.same_members(&obs.subset) {
            return Err(Error::InvalidSubset(format!(
                "observation on {:?} does not match group {:?}",
                obs.subset, self.group
            )));
        }
        if obs.kind == ObservationKind::Winner && obs.items.len() != 1 {
            return Err(Error::InvalidSubset("winner observation must report one item".into()));
        }
        let mut ranked = Vec::with_capacity(obs.items.len());
        for &item in &obs.items {
            match self.position(item) {
                Some(p) if !ranked.contains(&p) => ranked.push(p),
                _ => {
                    return Err(Error::InvalidSubset(format!(
                        "ranked item {item} is repeated or not in group {:?}",
                        self.group
                    )))
                }
            }
        }
        self.record_positions(&ranked);
        Ok(())
    }

    /// [`break_ranking`](Self::break_ranking) on already-validated group
    /// positions, best first.
    pub fn record_positions(&mut self, ranked: &[usize]) {
        let k = self.group.len();
        for (r, &a) in ranked.iter().enumerate() {
            for &b in &ranked[r + 1..] {
                self.w[a][b] += 1;
            }
            for b in (0..k).filter(|b| !ranked.contains(b)) {
                self.w[a][b] += 1;
            }
        }
        self.rounds += 1;
    }

    /// Times the item at position `a` beat anything.
    pub fn wins(&self, a: usize) -> u64 {
        self.w[a].iter().sum()
    }

    /// `n_ab = w_ab + w_ba` by position.
    pub fn comparisons(&self, a: usize, b: usize) -> u64 {
        self.w[a][b] + self.w[b][a]
    }

    /// Sum of all `w` entries.
    pub fn total(&self) -> u64 {
        self.w.iter().flatten().sum()
    }

    /// `w_ab / (w_ab + w_ba)` by position; 1/2 before any comparison.
    pub fn pref_at<T: Real>(&self, a: usize, b: usize) -> T {
        let n = self.comparisons(a, b);
        if n == 0 {
            return T::lit(0.5);
        }
        T::lit(self.w[a][b] as f64) / T::lit(n as f64)
    }

    /// `p_hat_ij` for items `i` and `j` of the group.
    pub fn empirical_pref<T: Real>(&self, i: usize, j: usize) -> Result<T> {
        match (self.position(i), self.position(j)) {
            (Some(a), Some(b)) if a != b => Ok(self.pref_at(a, b)),
            _ => Err(Error::InvalidSubset(format!(
                "need distinct items {i}, {j} from group {:?}",
                self.group
            ))),
        }
    }
}
