//! Best-item identification in random utility models (RUMs) from subset-wise
//! winner and top-m ranking feedback.
//!
//! The numerical core (noise distributions, quadrature, win probabilities,
//! advantage ratios) is generic over the scalar type through [`Real`]; the
//! aliases at the crate root fix it to `f64`, which is what the experiment
//! harness and CLI use.
//!
//! Module map:
//! - [`noise`]: perturbation distributions and their advantage constants.
//! - [`rum`]: the ground-truth environment and exact winner probabilities.
//! - [`advantage`]: advantage ratios, Min-AR and its variational lower bound.
//! - [`rank_breaking`]: pairwise win counts from partial rankings.
//! - [`algorithms`]: the sequential elimination learners and their schedules.
//! - [`harness`]: seeded trial batches, sweeps and diagnostic reports.
//!
//! ```
//! use rumpac::{algorithms, NoiseSpec, PacConfig, RandomStream, RumInstance};
//!
//! let mut inst = RumInstance::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], NoiseSpec::standard_gumbel())?;
//! let cfg = PacConfig::new(0.8, 0.1, 0.25, 1)?;
//! let mut rng = RandomStream::from_seed(7);
//! let result = algorithms::run(&mut inst, 4, &cfg, &mut rng)?;
//! assert!(result.rounds <= algorithms::budget_bound(8, 4, &cfg)?);
//! # Ok::<(), rumpac::Error>(())
//! ```

pub mod advantage;
pub mod algorithms;
pub mod error;
pub mod harness;
pub mod minimize;
pub mod noise;
pub mod quadrature;
pub mod rank_breaking;
pub mod rng;
pub mod rum;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use rng::RandomStream;
pub use scalar::Real;

pub use algorithms::{FeedbackSource, Learner, Phase, RunResult};
pub use rum::{FeedbackKind, Observation, Variant};

/// Noise distribution over `f64`.
pub type NoiseSpec = noise::NoiseSpec<f64>;
/// Noise distribution over `f32`.
pub type NoiseSpec32 = noise::NoiseSpec<f32>;
/// Ground-truth RUM instance over `f64`.
pub type RumInstance = rum::RumInstance<f64>;
/// Ground-truth RUM instance over `f32`.
pub type RumInstance32 = rum::RumInstance<f32>;
/// Learner configuration over `f64`.
pub type PacConfig = algorithms::PacConfig<f64>;
/// Per-pair Min-AR diagnostics over `f64`.
pub type AdvantageReport = advantage::AdvantageReport<f64>;
pub use rank_breaking::PairwiseCounts;
