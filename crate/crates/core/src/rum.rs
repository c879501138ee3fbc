//! Ground-truth random utility model `RUM(k, theta)`.
//!
//! Item `i` draws `X_i = theta_i + zeta_i` with `zeta_i` i.i.d. from the
//! instance's noise; the subset is ranked by descending utility. Exact
//! winner probabilities come from the one-dimensional integral
//! `Pr(i|S) = \int f(x) prod_{r != i} F(theta_i - theta_r + x) dx`, with the
//! softmax closed form used for Gumbel noise.

use serde::{Deserialize, Serialize};

use crate::noise::{NoiseSampler, NoiseSpec, DEFAULT_TAIL_MASS};
use crate::quadrature::{integrate, Tolerance};
use crate::{Error, RandomStream, Real, Result};

/// Absolute error target for win-probability quadrature.
pub const WIN_PROB_ABS_TOL: f64 = 1e-8;
/// Relative error target, which governs when the probability is small.
pub const WIN_PROB_REL_TOL: f64 = 1e-10;

/// Model parameters plus noise. JSON: `{"thetas": [...], "noise": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance<T>", bound = "T: Real")]
pub struct RumInstance<T> {
    thetas: Vec<T>,
    noise: NoiseSpec<T>,
}

#[derive(Deserialize)]
#[serde(bound = "T: Real")]
struct RawInstance<T> {
    thetas: Vec<T>,
    noise: NoiseSpec<T>,
}

impl<T: Real> TryFrom<RawInstance<T>> for RumInstance<T> {
    type Error = Error;

    fn try_from(raw: RawInstance<T>) -> Result<Self> {
        RumInstance::new(raw.thetas, raw.noise)
    }
}

/// Which hardness instance to build; see [`RumInstance::hardness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Item 0 at 1, everything else at `1 - eps`.
    True,
    /// Item `a` (0-based, `1 <= a < n`) at 1, item 0 at `1 - eps`, the rest at `1 - 2 eps`.
    Modified(usize),
}

/// Requested feedback for one play of a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackKind {
    Winner,
    TopM(usize),
    FullRanking,
}

/// Tag of an [`Observation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationKind {
    Winner,
    TopM,
    FullRanking,
}

/// One round of feedback. `items` is the reported prefix of the ranking
/// (length 1 for a winner), best first.
///
/// JSON: `{"kind": "top_m", "items": [..], "subset": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub kind: ObservationKind,
    pub items: Vec<usize>,
    pub subset: Vec<usize>,
}

impl Observation {
    pub fn winner(&self) -> usize {
        self.items[0]
    }

    /// Checks the structural invariants: reported items are distinct members
    /// of the subset and the length matches the kind.
    pub fn validate(&self) -> Result<()> {
        check_subset(&self.subset, usize::MAX)?;
        let expected = match self.kind {
            ObservationKind::Winner => Some(1),
            ObservationKind::FullRanking => Some(self.subset.len()),
            ObservationKind::TopM => None,
        };
        if self.items.is_empty() || self.items.len() > self.subset.len() || expected.is_some_and(|e| e != self.items.len()) {
            return Err(Error::InvalidSubset(format!(
                "{:?} observation reports {} of {} items",
                self.kind,
                self.items.len(),
                self.subset.len()
            )));
        }
        check_subset(&self.items, usize::MAX)?;
        if let Some(x) = self.items.iter().find(|x| !self.subset.contains(x)) {
            return Err(Error::InvalidSubset(format!("reported item {x} is not in the subset")));
        }
        Ok(())
    }
}

/// Rejects duplicate indices and indices `>= n`.
pub(crate) fn check_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    for (p, &a) in subset.iter().enumerate() {
        if a >= n {
            return Err(Error::InvalidSubset(format!("index {a} out of range for {n} items")));
        }
        if subset[..p].contains(&a) {
            return Err(Error::InvalidSubset(format!("duplicate index {a}")));
        }
    }
    Ok(())
}

/// Utilities `theta_s + noise` for each `s` in `subset`, in subset order.
/// Takes any [`NoiseSampler`] so degenerate test noises can be plugged in.
pub fn draw_utilities<T: Real, N: NoiseSampler<T>>(
    thetas: &[T],
    subset: &[usize],
    noise: &N,
    rng: &mut RandomStream,
) -> Result<Vec<T>> {
    check_subset(subset, thetas.len())?;
    Ok(subset.iter().map(|&s| thetas[s] + noise.draw(rng)).collect())
}

/// Subset members ordered by descending utility; equal utilities go to the
/// lower item index first.
pub(crate) fn rank_by_utility<T: Real>(subset: &[usize], utilities: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..subset.len()).collect();
    order.sort_by(|&a, &b| {
        utilities[b]
            .partial_cmp(&utilities[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(subset[a].cmp(&subset[b]))
    });
    order.into_iter().map(|p| subset[p]).collect()
}

/// Monte Carlo estimate of a win probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate<T> {
    pub p: T,
    /// `sqrt(p (1 - p) / rounds)`.
    pub std_error: T,
    pub rounds: u64,
}

impl<T: Real> RumInstance<T> {
    pub fn new(thetas: Vec<T>, noise: NoiseSpec<T>) -> Result<Self> {
        if thetas.len() < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 items, got {}", thetas.len())));
        }
        if let Some(t) = thetas.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter(format!("theta must be finite, got {t}")));
        }
        noise.validate()?;
        Ok(Self { thetas, noise })
    }

    /// Hardness instances for the lower-bound construction, always with
    /// Gumbel(0, 1) noise. Requires `n >= 2` and `0 < eps <= 1/4`.
    pub fn hardness(n: usize, eps: T, variant: Variant) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("hardness instance needs n >= 2, got {n}")));
        }
        if !(eps > T::zero() && eps <= T::lit(0.25)) {
            return Err(Error::InvalidParameter(format!("hardness instance needs 0 < eps <= 1/4, got {eps}")));
        }
        let one = T::one();
        let thetas = match variant {
            Variant::True => {
                let mut t = vec![one - eps; n];
                t[0] = one;
                t
            }
            Variant::Modified(a) => {
                if a == 0 || a >= n {
                    return Err(Error::InvalidParameter(format!("modified instance needs 1 <= a < {n}, got {a}")));
                }
                let mut t = vec![one - eps - eps; n];
                t[0] = one - eps;
                t[a] = one;
                t
            }
        };
        Self::new(thetas, NoiseSpec::standard_gumbel())
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn noise(&self) -> &NoiseSpec<T> {
        &self.noise
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn max_theta(&self) -> T {
        self.thetas.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// All indices attaining the maximal theta.
    pub fn best_items(&self) -> Vec<usize> {
        let top = self.max_theta();
        (0..self.len()).filter(|&i| self.thetas[i] == top).collect()
    }

    /// `theta_i > max theta - eps`.
    pub fn is_eps_optimal(&self, i: usize, eps: T) -> bool {
        self.thetas[i] > self.max_theta() - eps
    }

    pub fn sample_utilities(&self, subset: &[usize], rng: &mut RandomStream) -> Result<Vec<T>> {
        draw_utilities(&self.thetas, subset, &self.noise, rng)
    }

    /// Draws utilities once and reports the winner, the top `m`, or the full
    /// ranking of `subset`.
    pub fn sample_feedback(&self, subset: &[usize], kind: FeedbackKind, rng: &mut RandomStream) -> Result<Observation> {
        let (obs_kind, m) = match kind {
            FeedbackKind::Winner => (ObservationKind::Winner, 1),
            FeedbackKind::TopM(m) => {
                if m == 0 || m > subset.len() {
                    return Err(Error::InvalidParameter(format!(
                        "top-m feedback needs 1 <= m <= {}, got {m}",
                        subset.len()
                    )));
                }
                (ObservationKind::TopM, m)
            }
            FeedbackKind::FullRanking => (ObservationKind::FullRanking, subset.len()),
        };
        let utilities = self.sample_utilities(subset, rng)?;
        let mut items = rank_by_utility(subset, &utilities);
        items.truncate(m);
        Ok(Observation {
            kind: obs_kind,
            items,
            subset: subset.to_vec(),
        })
    }

    fn check_member(&self, subset: &[usize], i: usize) -> Result<()> {
        check_subset(subset, self.len())?;
        if subset.contains(&i) {
            Ok(())
        } else {
            Err(Error::InvalidSubset(format!("item {i} is not in subset {subset:?}")))
        }
    }

    /// `Pr(i | S)`. Uses the softmax closed form for Gumbel noise and
    /// adaptive quadrature otherwise. A singleton subset wins with
    /// probability 1.
    pub fn win_probability_exact(&self, subset: &[usize], i: usize) -> Result<T> {
        match self.noise {
            NoiseSpec::Gumbel { .. } => self.win_probability_closed_form(subset, i),
            _ => self.win_probability_quadrature(subset, i),
        }
    }

    /// Plackett–Luce closed form `e^{theta_i/sigma} / sum_j e^{theta_j/sigma}`;
    /// only defined for Gumbel noise.
    pub fn win_probability_closed_form(&self, subset: &[usize], i: usize) -> Result<T> {
        self.check_member(subset, i)?;
        let NoiseSpec::Gumbel { sigma, .. } = self.noise else {
            return Err(Error::InvalidParameter(format!(
                "closed-form win probability needs gumbel noise, got {}",
                self.noise.family()
            )));
        };
        let top = subset.iter().map(|&s| self.thetas[s]).fold(T::neg_infinity(), T::max);
        let total: T = subset.iter().map(|&s| ((self.thetas[s] - top) / sigma).exp()).sum();
        Ok(((self.thetas[i] - top) / sigma).exp() / total)
    }

    /// `Pr(i | S)` by quadrature regardless of the noise family.
    pub fn win_probability_quadrature(&self, subset: &[usize], i: usize) -> Result<T> {
        self.check_member(subset, i)?;
        if subset.len() == 1 {
            return Ok(T::one());
        }
        let theta_i = self.thetas[i];
        let shifts: Vec<T> = subset
            .iter()
            .filter(|&&r| r != i)
            .map(|&r| theta_i - self.thetas[r])
            .collect();
        let noise = self.noise;
        let (lo, hi) = noise.support_bounds(T::lit(DEFAULT_TAIL_MASS));
        // kinks where a shifted CDF enters or leaves its support
        let (s_lo, s_hi) = noise.support();
        let breaks: Vec<T> = shifts
            .iter()
            .flat_map(|&d| [s_lo.map(|e| e - d), s_hi.map(|e| e - d)])
            .flatten()
            .collect();
        let integrand = |x: T| {
            let density = noise.pdf(x);
            if density == T::zero() {
                return T::zero();
            }
            shifts.iter().fold(density, |acc, &d| acc * noise.cdf(d + x))
        };
        let tol = Tolerance {
            abs: T::lit(WIN_PROB_ABS_TOL * 1e-5),
            rel: T::lit(WIN_PROB_REL_TOL),
            max_intervals: 4000,
        };
        let est = integrate(integrand, lo, hi, &breaks, tol)?;
        Ok(est.value.max(T::zero()).min(T::one()))
    }

    /// Fraction of `rounds` simulated plays of `subset` won by `i`.
    pub fn win_probability_mc(&self, subset: &[usize], i: usize, rounds: u64, rng: &mut RandomStream) -> Result<McEstimate<T>> {
        self.check_member(subset, i)?;
        if rounds == 0 {
            return Err(Error::InvalidParameter("monte carlo needs rounds >= 1".into()));
        }
        let pos = subset.iter().position(|&s| s == i).expect("checked membership");
        let mut wins = 0u64;
        let mut utilities = vec![T::zero(); subset.len()];
        for _ in 0..rounds {
            for (u, &s) in utilities.iter_mut().zip(subset) {
                *u = self.thetas[s] + self.noise.sample(rng);
            }
            let mut best = 0;
            for p in 1..subset.len() {
                let better = utilities[p] > utilities[best]
                    || (utilities[p] == utilities[best] && subset[p] < subset[best]);
                if better {
                    best = p;
                }
            }
            if best == pos {
                wins += 1;
            }
        }
        let p = T::lit(wins as f64 / rounds as f64);
        let std_error = (p * (T::one() - p) / T::lit(rounds as f64)).sqrt();
        Ok(McEstimate { p, std_error, rounds })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(thetas: &[f64], noise: NoiseSpec<f64>) -> RumInstance<f64> {
        RumInstance::new(thetas.to_vec(), noise).unwrap()
    }

    struct Zero;
    impl NoiseSampler<f64> for Zero {
        fn draw(&self, _: &mut RandomStream) -> f64 {
            0.0
        }
    }

    #[test]
    fn zero_noise_returns_thetas() {
        let mut rng = RandomStream::from_seed(1);
        let u = draw_utilities(&[0.0, 0.0], &[0, 1], &Zero, &mut rng).unwrap();
        assert_eq!(u, vec![0.0, 0.0]);
    }

    #[test]
    fn disjoint_supports_order_utilities() {
        let r = inst(&[5.0, 0.0], NoiseSpec::uniform(0.0, 1.0).unwrap());
        let mut rng = RandomStream::from_seed(2);
        for _ in 0..1000 {
            let u = r.sample_utilities(&[0, 1], &mut rng).unwrap();
            assert!((5.0..=6.0).contains(&u[0]) && (0.0..=1.0).contains(&u[1]));
            let obs = r.sample_feedback(&[0, 1], FeedbackKind::Winner, &mut rng).unwrap();
            assert_eq!(obs.winner(), 0);
        }
    }

    #[test]
    fn utilities_reproducible() {
        let r = inst(&[0.0, 0.0, 0.0], NoiseSpec::standard_gumbel());
        let a = r.sample_utilities(&[0, 1, 2], &mut RandomStream::from_seed(5)).unwrap();
        let b = r.sample_utilities(&[0, 1, 2], &mut RandomStream::from_seed(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subset_errors() {
        let r = inst(&[0.0, 1.0, 2.0], NoiseSpec::standard_gumbel());
        let mut rng = RandomStream::from_seed(1);
        assert!(matches!(r.sample_utilities(&[0, 0], &mut rng), Err(Error::InvalidSubset(_))));
        assert!(matches!(r.sample_utilities(&[0, 3], &mut rng), Err(Error::InvalidSubset(_))));
        assert!(r.sample_feedback(&[0, 1], FeedbackKind::TopM(3), &mut rng).is_err());
        assert!(r.sample_feedback(&[0, 1], FeedbackKind::TopM(0), &mut rng).is_err());
        assert!(r.win_probability_exact(&[0, 1], 2).is_err());
    }

    #[test]
    fn ties_break_to_lower_index() {
        let order = rank_by_utility(&[4, 2, 7], &[1.0, 1.0, 3.0]);
        assert_eq!(order, vec![7, 2, 4]);
    }

    #[test]
    fn feedback_shapes() {
        let r = inst(&[0.3, 0.0, -0.2, 0.1, 0.5], NoiseSpec::normal(0.0, 1.0).unwrap());
        let mut rng = RandomStream::from_seed(4);
        let s = [4, 0, 2, 1];
        let top = r.sample_feedback(&s, FeedbackKind::TopM(2), &mut rng).unwrap();
        assert_eq!(top.items.len(), 2);
        top.validate().unwrap();
        let full = r.sample_feedback(&s, FeedbackKind::FullRanking, &mut rng).unwrap();
        assert_eq!(full.items.len(), 4);
        full.validate().unwrap();
        let json = serde_json::to_string(&top).unwrap();
        assert!(json.starts_with(r#"{"kind":"top_m","items":["#));
        assert!(json.ends_with(r#""subset":[4,0,2,1]}"#));
    }

    #[test]
    fn top_k_equals_full_ranking_draw_for_draw() {
        let r = inst(&[0.3, 0.0, -0.2, 0.1], NoiseSpec::exponential(1.0).unwrap());
        let mut a = RandomStream::from_seed(9);
        let mut b = RandomStream::from_seed(9);
        for _ in 0..100 {
            let x = r.sample_feedback(&[0, 1, 2, 3], FeedbackKind::TopM(4), &mut a).unwrap();
            let y = r.sample_feedback(&[0, 1, 2, 3], FeedbackKind::FullRanking, &mut b).unwrap();
            assert_eq!(x.items, y.items);
        }
    }

    #[test]
    fn plackett_luce_winner_frequency() {
        let r = inst(&[2f64.ln(), 0.0], NoiseSpec::standard_gumbel());
        let mut rng = RandomStream::from_seed(77);
        let rounds = 200_000;
        let wins = (0..rounds)
            .filter(|_| r.sample_feedback(&[0, 1], FeedbackKind::Winner, &mut rng).unwrap().winner() == 0)
            .count();
        let freq = wins as f64 / rounds as f64;
        let band = 3.0 * ((2.0 / 9.0) / rounds as f64).sqrt();
        assert!((freq - 2.0 / 3.0).abs() <= band, "{freq}");
    }

    #[test]
    fn exact_win_probabilities() {
        for noise in [
            NoiseSpec::standard_gumbel(),
            NoiseSpec::exponential(1.0).unwrap(),
            NoiseSpec::uniform(0.0, 1.0).unwrap(),
            NoiseSpec::normal(0.0, 1.0).unwrap(),
        ] {
            let r = inst(&[0.7, 0.7, 0.7, 0.7], noise);
            for i in 0..4 {
                let p = r.win_probability_exact(&[0, 1, 2, 3], i).unwrap();
                assert!((p - 0.25).abs() < 1e-8, "{noise:?}: {p}");
            }
        }
        let pl = inst(&[3f64.ln(), 2f64.ln(), 0.0], NoiseSpec::standard_gumbel());
        assert!((pl.win_probability_exact(&[0, 1, 2], 0).unwrap() - 0.5).abs() < 1e-15);
        assert!((pl.win_probability_quadrature(&[0, 1, 2], 0).unwrap() - 0.5).abs() < 1e-9);
        let u = inst(&[0.5, 0.0], NoiseSpec::uniform(0.0, 1.0).unwrap());
        assert!((u.win_probability_exact(&[0, 1], 0).unwrap() - 0.875).abs() < 1e-12);
        assert_eq!(u.win_probability_exact(&[1], 1).unwrap(), 1.0);
    }

    #[test]
    fn exact_matches_independent_quadrature() {
        // Frozen from scipy.integrate.quad on the same integral at 1e-13.
        let cases: [(&[f64], NoiseSpec<f64>, &[f64]); 5] = [
            (&[0.5, 0.0, -0.3], NoiseSpec::Normal { mu: 0.0, sigma: 1.0 }, &[0.5249559553409888, 0.28554494046442835, 0.1894991041945829]),
            (&[0.3, 0.0, 0.1], NoiseSpec::Exponential { lambda: 1.0 }, &[0.4224023996910279, 0.2693206670554212, 0.3082769332535522]),
            (&[0.4, 0.0, -0.2, 0.1], NoiseSpec::Gamma { kappa: 2.0, xi: 1.0 }, &[0.3278639345559825, 0.22921613846153377, 0.19263071186864397, 0.25028921511384006]),
            (&[0.2, 0.0, -0.1], NoiseSpec::Weibull { lambda: 1.0, kappa: 1.5 }, &[0.45137939715869174, 0.3012577759074596, 0.24736282693384884]),
            (&[0.3, 0.0, 0.1], NoiseSpec::Uniform { a: 0.0, b: 1.0 }, &[0.5738333333333335, 0.1633333333333333, 0.26283333333333353]),
        ];
        for (thetas, noise, expected) in cases {
            let r = inst(thetas, noise);
            let subset: Vec<usize> = (0..thetas.len()).collect();
            for (i, &e) in expected.iter().enumerate() {
                let p = r.win_probability_exact(&subset, i).unwrap();
                assert!((p - e).abs() < 1e-8, "{noise:?} item {i}: {p} vs {e}");
            }
        }
    }

    #[test]
    fn monte_carlo_matches_closed_forms() {
        let u = inst(&[5.0, 0.0], NoiseSpec::uniform(0.0, 1.0).unwrap());
        let mut rng = RandomStream::from_seed(3);
        assert_eq!(u.win_probability_mc(&[0, 1], 0, 1000, &mut rng).unwrap().p, 1.0);
        let pl = inst(&[2f64.ln(), 0.0], NoiseSpec::standard_gumbel());
        let est = pl.win_probability_mc(&[0, 1], 0, 200_000, &mut rng).unwrap();
        assert!((est.p - 2.0 / 3.0).abs() <= 3.0 * (2.0f64 / 9.0 / 200_000.0).sqrt());
        let sym = inst(&[0.1, 0.1, 0.1], NoiseSpec::normal(0.0, 1.0).unwrap());
        for i in 0..3 {
            let est = sym.win_probability_mc(&[0, 1, 2], i, 300_000, &mut rng).unwrap();
            let sigma = (2.0f64 / 9.0 / 300_000.0).sqrt();
            assert!((est.p - 1.0 / 3.0).abs() <= 3.0 * sigma, "{}", est.p);
        }
    }

    #[test]
    fn hardness_patterns() {
        let t = RumInstance::<f64>::hardness(4, 0.2, Variant::True).unwrap();
        assert_eq!(t.thetas(), &[1.0, 1.0 - 0.2, 1.0 - 0.2, 1.0 - 0.2]);
        assert_eq!(t.thetas(), &[1.0, 0.8, 0.8, 0.8]);
        let m = RumInstance::<f64>::hardness(4, 0.2, Variant::Modified(1)).unwrap();
        assert_eq!(m.thetas(), &[0.8, 1.0, 1.0 - 0.2 - 0.2, 1.0 - 0.2 - 0.2]);
        let small = RumInstance::<f64>::hardness(2, 0.25, Variant::True).unwrap();
        assert_eq!(small.thetas(), &[1.0, 0.75]);
        assert_eq!(*small.noise(), NoiseSpec::standard_gumbel());
        assert!(RumInstance::<f64>::hardness(4, 0.3, Variant::True).is_err());
        assert!(RumInstance::<f64>::hardness(4, 0.0, Variant::True).is_err());
        assert!(RumInstance::<f64>::hardness(4, 0.2, Variant::Modified(0)).is_err());
        assert!(RumInstance::<f64>::hardness(4, 0.2, Variant::Modified(4)).is_err());
        assert!(RumInstance::<f64>::hardness(1, 0.2, Variant::True).is_err());
    }

    #[test]
    fn best_items_allow_ties() {
        let r = inst(&[1.0, 3.0, 3.0, 0.0], NoiseSpec::standard_gumbel());
        assert_eq!(r.best_items(), vec![1, 2]);
        assert!(r.is_eps_optimal(1, 0.1));
        assert!(!r.is_eps_optimal(0, 2.0));
        assert!(r.is_eps_optimal(0, 2.5));
    }

    #[test]
    fn instance_json() {
        let r: RumInstance<f64> =
            serde_json::from_str(r#"{"thetas":[1.0,0.0],"noise":{"family":"exponential","params":{"lambda":1.0}}}"#).unwrap();
        assert_eq!(r.thetas(), &[1.0, 0.0]);
        assert!(serde_json::from_str::<RumInstance<f64>>(r#"{"thetas":[1.0],"noise":{"family":"exponential","params":{"lambda":1.0}}}"#).is_err());
        let back: RumInstance<f64> = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn f32_instance() {
        let r = RumInstance::<f32>::new(vec![0.5, 0.0], NoiseSpec::uniform(0.0, 1.0).unwrap()).unwrap();
        let p = r.win_probability_quadrature(&[0, 1], 0).unwrap();
        assert!((p - 0.875).abs() < 1e-5);
    }
}
