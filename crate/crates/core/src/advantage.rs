//! Advantage ratios `Pr(i|S) / Pr(j|S)`, their minimum over size-`k` subsets
//! (Min-AR), a distribution-only lower bound on Min-AR, and per-pair checks of
//! the `c` condition the learners' guarantees rely on.

use std::cell::RefCell;

use itertools::Itertools;
use serde::Serialize;

use crate::minimize::grid_then_golden;
use crate::noise::{NoiseSpec, DEFAULT_TAIL_MASS};
use crate::quadrature::{integrate, Tolerance};
use crate::rum::RumInstance;
use crate::{Error, Real, Result};

/// Most subsets [`min_ar_bruteforce`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000;
/// Denominators below this are reported as underflow.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;
/// Slack used when comparing a Min-AR against a threshold.
pub const CONDITION_SLACK: f64 = 1e-6;
/// Grid size for the `z` search.
pub const GRID_POINTS: usize = 801;
/// Final bracket width of the golden-section refinement.
pub const REFINE_WIDTH: f64 = 1e-8;

fn floor<T: Real>() -> T {
    T::lit(UNDERFLOW_FLOOR).max(T::min_positive_value())
}

fn check_pair<T: Real>(inst: &RumInstance<T>, subset: &[usize], i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::InvalidSubset(format!("advantage ratio needs distinct items, got {i} twice")));
    }
    if !subset.contains(&i) || !subset.contains(&j) {
        return Err(Error::InvalidSubset(format!("items {i} and {j} must both be in {subset:?}")));
    }
    crate::rum::check_subset(subset, inst.len())
}

/// `Pr(i|S) / Pr(j|S)`.
pub fn advantage_ratio<T: Real>(inst: &RumInstance<T>, subset: &[usize], i: usize, j: usize) -> Result<T> {
    check_pair(inst, subset, i, j)?;
    let pi = inst.win_probability_exact(subset, i)?;
    let pj = inst.win_probability_exact(subset, j)?;
    if pj < floor() {
        return Err(Error::NumericUnderflow(format!(
            "Pr({j}|{subset:?}) = {pj} is too small to divide by"
        )));
    }
    Ok(pi / pj)
}

/// `p_{ij|S} = Pr(i|S) / (Pr(i|S) + Pr(j|S))`.
pub fn pairwise_pref_in_set<T: Real>(inst: &RumInstance<T>, subset: &[usize], i: usize, j: usize) -> Result<T> {
    check_pair(inst, subset, i, j)?;
    let pi = inst.win_probability_exact(subset, i)?;
    let pj = inst.win_probability_exact(subset, j)?;
    if pi + pj < floor() {
        return Err(Error::NumericUnderflow(format!(
            "items {i} and {j} never win {subset:?}"
        )));
    }
    Ok(pi / (pi + pj))
}

/// `1/2 + (r - 1)/4`, the claimed lower bound on the in-set pairwise
/// preference for an advantage ratio `r`.
pub fn pref_bound<T: Real>(ratio: T) -> T {
    T::lit(0.5) + (ratio - T::one()) * T::lit(0.25)
}

/// `p - 1/2 >= (r - 1)/4 - tol`.
pub fn pref_bound_holds<T: Real>(ratio: T, pref: T, tol: T) -> bool {
    pref - T::lit(0.5) >= (ratio - T::one()) * T::lit(0.25) - tol
}

/// Exhaustive Min-AR with a witnessing subset (sorted).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForce<T> {
    pub value: T,
    pub argmin_subset: Vec<usize>,
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, t| acc.saturating_mul((n - t) as u128) / (t as u128 + 1))
}

/// Minimum of [`advantage_ratio`] over every size-`k` subset containing `i`
/// and `j`. Subsets where `j` never wins count as `+inf`.
pub fn min_ar_bruteforce<T: Real>(inst: &RumInstance<T>, i: usize, j: usize, k: usize) -> Result<BruteForce<T>> {
    let n = inst.len();
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n = {n}, got k = {k}")));
    }
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidSubset(format!("need distinct items below {n}, got {i} and {j}")));
    }
    let count = binomial(n - 2, k - 2);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let others: Vec<usize> = (0..n).filter(|&r| r != i && r != j).collect();
    let mut best: Option<BruteForce<T>> = None;
    for rest in others.into_iter().combinations(k - 2) {
        let mut subset = rest;
        subset.push(i);
        subset.push(j);
        subset.sort_unstable();
        let value = match advantage_ratio(inst, &subset, i, j) {
            Ok(v) => v,
            Err(Error::NumericUnderflow(_)) => T::infinity(),
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(BruteForce {
                value,
                argmin_subset: subset,
            });
        }
    }
    Ok(best.expect("at least one subset"))
}

struct Variational<T: Real> {
    noise: NoiseSpec<T>,
    theta_i: T,
    theta_j: T,
    // integration range for the tail integrals, far beyond the z domain
    ext: (T, T),
    failure: RefCell<Option<Error>>,
}

impl<T: Real> Variational<T> {
    fn new(noise: NoiseSpec<T>, theta_i: T, theta_j: T) -> Self {
        Self {
            noise,
            theta_i,
            theta_j,
            ext: noise.support_bounds(T::min_positive_value()),
            failure: RefCell::new(None),
        }
    }

    /// `int_{from}^{inf} ccdf(x - shift) f(x) dx`
    fn tail(&self, from: T, shift: T) -> Result<T> {
        let noise = self.noise;
        let lo = from.max(self.ext.0);
        let (s_lo, s_hi) = noise.support();
        let breaks: Vec<T> = [s_lo, s_hi, s_lo.map(|e| e + shift), s_hi.map(|e| e + shift)]
            .into_iter()
            .flatten()
            .collect();
        let tol = Tolerance {
            abs: T::min_positive_value(),
            rel: T::lit(1e-10),
            max_intervals: 2000,
        };
        let est = integrate(|x| noise.ccdf(x - shift) * noise.pdf(x), lo, self.ext.1, &breaks, tol)?;
        Ok(est.value.max(T::zero()))
    }

    /// `Pr(X_a > max(X_b, z))` with `X_a - X_b` shifted by `delta = theta_a - theta_b`.
    fn beats(&self, z: T, theta_a: T, theta_b: T) -> Result<T> {
        let n = &self.noise;
        let head = n.cdf(z - theta_b) * n.ccdf(z - theta_a);
        Ok(head + self.tail(z - theta_b, theta_a - theta_b)?)
    }

    fn ratio(&self, z: T) -> Result<T> {
        let num = self.beats(z, self.theta_i, self.theta_j)?;
        let den = self.beats(z, self.theta_j, self.theta_i)?;
        // 0/0 and x/0 are +inf
        if den <= T::zero() {
            return Ok(T::infinity());
        }
        Ok(num / den)
    }

    fn objective(&self, z: T) -> T {
        match self.ratio(z) {
            Ok(v) => v,
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                T::infinity()
            }
        }
    }
}

/// The ratio `Pr(X_i > max(X_j, z)) / Pr(X_j > max(X_i, z))` at a single `z`.
pub fn variational_ratio<T: Real>(noise: &NoiseSpec<T>, theta_i: T, theta_j: T, z: T) -> Result<T> {
    noise.validate()?;
    Variational::new(*noise, theta_i, theta_j).ratio(z)
}

/// Lower bound on Min-AR(i, j) that depends only on the noise and the two
/// utilities: the minimum over `z` of [`variational_ratio`]. The search covers
/// the truncated supports shifted by both thetas, padded by `|theta_i - theta_j|`.
/// Returns the minimizing `z` and the bound.
pub fn min_ar_variational_at<T: Real>(noise: &NoiseSpec<T>, theta_i: T, theta_j: T) -> Result<(T, T)> {
    noise.validate()?;
    if theta_i == theta_j {
        return Ok((theta_i, T::one()));
    }
    let v = Variational::new(*noise, theta_i, theta_j);
    let (lo, hi) = noise.support_bounds(T::lit(DEFAULT_TAIL_MASS));
    let pad = (theta_i - theta_j).abs();
    let z_lo = theta_i.min(theta_j) + lo - pad;
    let z_hi = theta_i.max(theta_j) + hi + pad;
    let best = grid_then_golden(|z| v.objective(z), z_lo, z_hi, GRID_POINTS, T::lit(REFINE_WIDTH));
    if let Some(e) = v.failure.into_inner() {
        return Err(e);
    }
    Ok((best.x, best.value))
}

/// [`min_ar_variational_at`] without the minimizer.
pub fn min_ar_variational<T: Real>(noise: &NoiseSpec<T>, theta_i: T, theta_j: T) -> Result<T> {
    min_ar_variational_at(noise, theta_i, theta_j).map(|(_, v)| v)
}

/// How the Min-AR in an [`AdvantageReport`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinArMethod {
    BruteForce,
    Variational,
}

/// One ordered pair's Min-AR diagnostics for a given `c`.
///
/// Condition flags are `None` when `theta_i < theta_j`, where the condition
/// does not apply.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdvantageReport<T> {
    pub i: usize,
    pub j: usize,
    pub delta: T,
    /// Exhaustive Min-AR, absent when the subset count exceeds the guard.
    pub min_ar_exact: Option<T>,
    pub argmin_subset: Option<Vec<usize>>,
    pub variational_bound: T,
    pub method: MinArMethod,
    /// `1 + 4 c delta / (1 - 2c)`.
    pub threshold: T,
    pub c_condition_ok: Option<bool>,
    /// `1 + 4 c delta`.
    pub threshold_linear: T,
    pub linear_condition_ok: Option<bool>,
    /// `p_{ij|S}` on the argmin subset.
    pub pairwise_pref: Option<T>,
    /// Whether `p - 1/2 >= (r - 1)/4` holds at the argmin subset.
    pub pref_bound_ok: Option<bool>,
}

impl<T: Real> AdvantageReport<T> {
    /// The Min-AR used for the condition checks.
    pub fn min_ar(&self) -> T {
        self.min_ar_exact.unwrap_or(self.variational_bound)
    }
}

/// Builds an [`AdvantageReport`] for every ordered pair of distinct items.
pub fn check_c_condition<T: Real>(inst: &RumInstance<T>, k: usize, c: T) -> Result<Vec<AdvantageReport<T>>> {
    if !(c > T::zero() && c < T::lit(0.5)) {
        return Err(Error::InvalidParameter(format!("need 0 < c < 1/2, got {c}")));
    }
    let n = inst.len();
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n = {n}, got k = {k}")));
    }
    let thetas = inst.thetas();
    let slack = T::lit(CONDITION_SLACK);
    let four = T::lit(4.0);
    let mut reports = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let delta = thetas[i] - thetas[j];
            let exact = match min_ar_bruteforce(inst, i, j, k) {
                Ok(b) => Some(b),
                Err(Error::TooLarge { .. }) => None,
                Err(e) => return Err(e),
            };
            let variational_bound = min_ar_variational(inst.noise(), thetas[i], thetas[j])?;
            let min_ar = exact.as_ref().map_or(variational_bound, |b| b.value);
            let threshold = T::one() + four * c * delta / (T::one() - c - c);
            let threshold_linear = T::one() + four * c * delta;
            let applicable = delta >= T::zero();
            let pairwise_pref = match &exact {
                Some(b) if b.value.is_finite() => Some(pairwise_pref_in_set(inst, &b.argmin_subset, i, j)?),
                _ => None,
            };
            let pref_bound_ok = match (&exact, pairwise_pref) {
                (Some(b), Some(p)) if applicable => Some(pref_bound_holds(b.value, p, T::lit(1e-9))),
                _ => None,
            };
            let exact_value = exact.as_ref().map(|b| b.value);
            reports.push(AdvantageReport {
                i,
                j,
                delta,
                min_ar_exact: exact_value,
                argmin_subset: exact.map(|b| b.argmin_subset),
                variational_bound,
                method: if exact_value.is_some() {
                    MinArMethod::BruteForce
                } else {
                    MinArMethod::Variational
                },
                threshold,
                c_condition_ok: applicable.then(|| min_ar >= threshold - slack),
                threshold_linear,
                linear_condition_ok: applicable.then(|| min_ar >= threshold_linear - slack),
                pairwise_pref,
                pref_bound_ok,
            });
        }
    }
    Ok(reports)
}
