//! Perturbation distributions for the utilities `X_i = theta_i + zeta_i`.
//!
//! Every family exposes density, CDF, a directly computed complementary CDF
//! (so upper tails keep relative precision), exact sampling from a
//! [`RandomStream`], truncated support for quadrature, and the constant `c`
//! that links the utility gap to the minimum advantage ratio.

use serde::{Deserialize, Serialize};

use crate::special::{erfc, gamma_p, gamma_q, ln_gamma};
use crate::{Error, RandomStream, Real, Result};

/// Tail mass cut from each side of the support before integrating.
pub const DEFAULT_TAIL_MASS: f64 = 1e-10;

/// Largest tail mass [`NoiseSpec::support_bounds`] accepts.
pub const MAX_TAIL_MASS: f64 = 1e-6;

/// Integer Gamma shapes up to this value are sampled as sums of exponentials.
const GAMMA_SUM_MAX_SHAPE: f64 = 16.0;

/// I.i.d. noise distribution `D`.
///
/// JSON form: `{"family": "gumbel", "params": {"mu": 0.0, "sigma": 1.0}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "family",
    content = "params",
    rename_all = "lowercase",
    try_from = "RawNoise<T>",
    bound = "T: Real"
)]
pub enum NoiseSpec<T> {
    /// Exponential with rate `lambda`.
    Exponential { lambda: T },
    /// Gumbel (type-I extreme value) with location `mu` and scale `sigma`.
    Gumbel { mu: T, sigma: T },
    /// Uniform on `[a, b]`.
    Uniform { a: T, b: T },
    /// Gamma with shape `kappa` and scale `xi`.
    Gamma { kappa: T, xi: T },
    /// Weibull with scale `lambda` and shape `kappa`.
    Weibull { lambda: T, kappa: T },
    /// Normal with mean `mu` and standard deviation `sigma`.
    Normal { mu: T, sigma: T },
}

#[derive(Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase", bound = "T: Real")]
enum RawNoise<T> {
    Exponential { lambda: T },
    Gumbel { mu: T, sigma: T },
    Uniform { a: T, b: T },
    Gamma { kappa: T, xi: T },
    Weibull { lambda: T, kappa: T },
    Normal { mu: T, sigma: T },
}

impl<T: Real> TryFrom<RawNoise<T>> for NoiseSpec<T> {
    type Error = Error;

    fn try_from(raw: RawNoise<T>) -> Result<Self> {
        let spec = match raw {
            RawNoise::Exponential { lambda } => NoiseSpec::Exponential { lambda },
            RawNoise::Gumbel { mu, sigma } => NoiseSpec::Gumbel { mu, sigma },
            RawNoise::Uniform { a, b } => NoiseSpec::Uniform { a, b },
            RawNoise::Gamma { kappa, xi } => NoiseSpec::Gamma { kappa, xi },
            RawNoise::Weibull { lambda, kappa } => NoiseSpec::Weibull { lambda, kappa },
            RawNoise::Normal { mu, sigma } => NoiseSpec::Normal { mu, sigma },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Anything that can draw one noise value. Lets tests substitute
/// degenerate distributions without a density.
pub trait NoiseSampler<T> {
    fn draw(&self, rng: &mut RandomStream) -> T;
}

impl<T: Real> NoiseSampler<T> for NoiseSpec<T> {
    fn draw(&self, rng: &mut RandomStream) -> T {
        self.sample(rng)
    }
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn finite<T: Real>(name: &str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

impl<T: Real> NoiseSpec<T> {
    pub fn exponential(lambda: T) -> Result<Self> {
        Self::Exponential { lambda }.checked()
    }

    pub fn gumbel(mu: T, sigma: T) -> Result<Self> {
        Self::Gumbel { mu, sigma }.checked()
    }

    pub fn uniform(a: T, b: T) -> Result<Self> {
        Self::Uniform { a, b }.checked()
    }

    pub fn gamma(kappa: T, xi: T) -> Result<Self> {
        Self::Gamma { kappa, xi }.checked()
    }

    pub fn weibull(lambda: T, kappa: T) -> Result<Self> {
        Self::Weibull { lambda, kappa }.checked()
    }

    pub fn normal(mu: T, sigma: T) -> Result<Self> {
        Self::Normal { mu, sigma }.checked()
    }

    /// Standard Gumbel(0, 1), the noise of the Plackett–Luce model.
    pub fn standard_gumbel() -> Self {
        Self::Gumbel {
            mu: T::zero(),
            sigma: T::one(),
        }
    }

    fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Exponential { lambda } => positive("lambda", lambda),
            Self::Gumbel { mu, sigma } | Self::Normal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            Self::Uniform { a, b } => {
                finite("a", a)?;
                finite("b", b)?;
                if b > a {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("uniform needs b > a, got a={a}, b={b}")))
                }
            }
            Self::Gamma { kappa, xi } => {
                positive("kappa", kappa)?;
                positive("xi", xi)
            }
            Self::Weibull { lambda, kappa } => {
                positive("lambda", lambda)?;
                positive("kappa", kappa)
            }
        }
    }

    /// Lowercase family name as used in JSON.
    pub fn family(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Gumbel { .. } => "gumbel",
            Self::Uniform { .. } => "uniform",
            Self::Gamma { .. } => "gamma",
            Self::Weibull { .. } => "weibull",
            Self::Normal { .. } => "normal",
        }
    }

    /// Density; zero outside the support.
    pub fn pdf(&self, x: T) -> T {
        match *self {
            Self::Exponential { lambda } => {
                if x < T::zero() {
                    T::zero()
                } else {
                    lambda * (-lambda * x).exp()
                }
            }
            Self::Gumbel { mu, sigma } => {
                let e = (-(x - mu) / sigma).exp();
                e * (-e).exp() / sigma
            }
            Self::Uniform { a, b } => {
                if x < a || x > b {
                    T::zero()
                } else {
                    (b - a).recip()
                }
            }
            Self::Gamma { kappa, xi } => {
                if x < T::zero() {
                    T::zero()
                } else if x == T::zero() {
                    if kappa < T::one() {
                        T::infinity()
                    } else if kappa == T::one() {
                        xi.recip()
                    } else {
                        T::zero()
                    }
                } else {
                    let y = x / xi;
                    ((kappa - T::one()) * y.ln() - y - ln_gamma(kappa)).exp() / xi
                }
            }
            Self::Weibull { lambda, kappa } => {
                if x < T::zero() {
                    T::zero()
                } else if x == T::zero() {
                    if kappa < T::one() {
                        T::infinity()
                    } else if kappa == T::one() {
                        lambda.recip()
                    } else {
                        T::zero()
                    }
                } else {
                    let y = x / lambda;
                    kappa / lambda * y.powf(kappa - T::one()) * (-y.powf(kappa)).exp()
                }
            }
            Self::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-(z * z) * T::lit(0.5)).exp() * T::FRAC_1_SQRT_2() * T::FRAC_2_SQRT_PI() * T::lit(0.5) / sigma
            }
        }
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: T) -> T {
        match *self {
            Self::Exponential { lambda } => {
                if x <= T::zero() {
                    T::zero()
                } else {
                    -(-lambda * x).exp_m1()
                }
            }
            Self::Gumbel { mu, sigma } => (-(-(x - mu) / sigma).exp()).exp(),
            Self::Uniform { a, b } => ((x - a) / (b - a)).max(T::zero()).min(T::one()),
            Self::Gamma { kappa, xi } => gamma_p(kappa, x / xi),
            Self::Weibull { lambda, kappa } => {
                if x <= T::zero() {
                    T::zero()
                } else {
                    -(-(x / lambda).powf(kappa)).exp_m1()
                }
            }
            Self::Normal { mu, sigma } => T::lit(0.5) * erfc(-(x - mu) / sigma * T::FRAC_1_SQRT_2()),
        }
    }

    /// Complementary CDF `1 - F(x)`, computed without cancellation.
    pub fn ccdf(&self, x: T) -> T {
        match *self {
            Self::Exponential { lambda } => {
                if x <= T::zero() {
                    T::one()
                } else {
                    (-lambda * x).exp()
                }
            }
            Self::Gumbel { mu, sigma } => -(-(-(x - mu) / sigma).exp()).exp_m1(),
            Self::Uniform { a, b } => ((b - x) / (b - a)).max(T::zero()).min(T::one()),
            Self::Gamma { kappa, xi } => gamma_q(kappa, x / xi),
            Self::Weibull { lambda, kappa } => {
                if x <= T::zero() {
                    T::one()
                } else {
                    (-(x / lambda).powf(kappa)).exp()
                }
            }
            Self::Normal { mu, sigma } => T::lit(0.5) * erfc((x - mu) / sigma * T::FRAC_1_SQRT_2()),
        }
    }

    /// One draw from the distribution. Inverse-CDF for Exponential, Uniform,
    /// Weibull and Gumbel; Box–Muller for Normal; sums of exponentials for
    /// small integer Gamma shapes and Marsaglia–Tsang otherwise.
    pub fn sample(&self, rng: &mut RandomStream) -> T {
        match *self {
            Self::Exponential { lambda } => -rng.open01::<T>().ln() / lambda,
            Self::Gumbel { mu, sigma } => mu - sigma * (-rng.open01::<T>().ln()).ln(),
            Self::Uniform { a, b } => a + (b - a) * rng.open01::<T>(),
            Self::Gamma { kappa, xi } => xi * sample_standard_gamma(kappa, rng),
            Self::Weibull { lambda, kappa } => lambda * (-rng.open01::<T>().ln()).powf(kappa.recip()),
            Self::Normal { mu, sigma } => mu + sigma * standard_normal(rng),
        }
    }

    /// Endpoints of the support where finite: `(lower, upper)`.
    pub fn support(&self) -> (Option<T>, Option<T>) {
        match *self {
            Self::Exponential { .. } | Self::Gamma { .. } | Self::Weibull { .. } => (Some(T::zero()), None),
            Self::Uniform { a, b } => (Some(a), Some(b)),
            Self::Gumbel { .. } | Self::Normal { .. } => (None, None),
        }
    }

    /// Interval `[lo, hi]` outside of which each tail carries at most
    /// `tail_mass`. Finite support endpoints are returned exactly.
    /// `tail_mass` is clamped into `(0, 1e-6]`.
    pub fn support_bounds(&self, tail_mass: T) -> (T, T) {
        let tail = tail_mass.max(T::min_positive_value()).min(T::lit(MAX_TAIL_MASS));
        match *self {
            Self::Exponential { lambda } => (T::zero(), -tail.ln() / lambda),
            Self::Gumbel { mu, sigma } => {
                let lo = mu - sigma * (-tail.ln()).ln();
                // ccdf(y) = 1 - exp(-e^{-y}) = tail  <=>  e^{-y} = -ln(1 - tail)
                let hi = mu - sigma * (-(-tail).ln_1p()).ln();
                (lo, hi)
            }
            Self::Uniform { a, b } => (a, b),
            Self::Gamma { kappa, xi } => {
                let hi = upper_quantile(|y| gamma_q(kappa, y), kappa.max(T::one()), tail);
                (T::zero(), xi * hi)
            }
            Self::Weibull { lambda, kappa } => (T::zero(), lambda * (-tail.ln()).powf(kappa.recip())),
            Self::Normal { mu, sigma } => {
                let std = NoiseSpec::Normal {
                    mu: T::zero(),
                    sigma: T::one(),
                };
                let q = upper_quantile(|y| std.ccdf(y), T::one(), tail);
                (mu - sigma * q, mu + sigma * q)
            }
        }
    }

    /// Noise constant `c` for the parameterizations where it is known in
    /// closed form; `None` elsewhere.
    ///
    /// | family | c |
    /// |---|---|
    /// | Exponential(1) | 1/4 |
    /// | Gumbel(mu, sigma) | 1/(4 sigma) |
    /// | Uniform(a, b) | 1/(2 (b - a)) |
    /// | Gamma(2, 1) | 1/4 |
    /// | Weibull(lambda, 1) | lambda/4 |
    /// | Normal(0, 1) | 1/3 |
    ///
    /// The Uniform bound is derived for gaps below `a/2` and the Normal one
    /// for small gaps only; neither condition is enforced here.
    pub fn advantage_constant_c(&self) -> Option<T> {
        let quarter = T::lit(0.25);
        match *self {
            Self::Exponential { lambda } if lambda == T::one() => Some(quarter),
            Self::Gumbel { sigma, .. } => Some(quarter / sigma),
            Self::Uniform { a, b } => Some(T::lit(0.5) / (b - a)),
            Self::Gamma { kappa, xi } if kappa == T::lit(2.0) && xi == T::one() => Some(quarter),
            Self::Weibull { lambda, kappa } if kappa == T::one() => Some(lambda * quarter),
            Self::Normal { mu, sigma } if mu == T::zero() && sigma == T::one() => Some(T::lit(1.0 / 3.0)),
            _ => None,
        }
    }
}

// Smallest y (up to bisection resolution) with ccdf(y) <= tail, for a
// decreasing ccdf on [0, inf).
fn upper_quantile<T: Real, F: Fn(T) -> T>(ccdf: F, start: T, tail: T) -> T {
    let mut lo = T::zero();
    let mut hi = start;
    while ccdf(hi) > tail {
        lo = hi;
        hi = hi * T::lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if !(mid > lo && mid < hi) {
            break;
        }
        if ccdf(mid) > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn standard_normal<T: Real>(rng: &mut RandomStream) -> T {
    let u1: T = rng.open01();
    let u2: T = rng.open01();
    (T::lit(-2.0) * u1.ln()).sqrt() * (T::TAU() * u2).cos()
}

fn sample_standard_gamma<T: Real>(shape: T, rng: &mut RandomStream) -> T {
    if shape == shape.round() && shape <= T::lit(GAMMA_SUM_MAX_SHAPE) {
        let n = shape.to_usize().unwrap_or(1);
        return (0..n).map(|_| -rng.open01::<T>().ln()).sum();
    }
    if shape < T::one() {
        // Gamma(a) = Gamma(a + 1) * U^{1/a}
        let g = sample_standard_gamma(shape + T::one(), rng);
        return g * rng.open01::<T>().powf(shape.recip());
    }
    let d = shape - T::lit(1.0 / 3.0);
    let c = (T::lit(9.0) * d).sqrt().recip();
    loop {
        let z: T = standard_normal(rng);
        let v = T::one() + c * z;
        if v <= T::zero() {
            continue;
        }
        let v3 = v * v * v;
        let u: T = rng.open01();
        if u.ln() < T::lit(0.5) * z * z + d - d * v3 + d * v3.ln() {
            return d * v3;
        }
    }
}
