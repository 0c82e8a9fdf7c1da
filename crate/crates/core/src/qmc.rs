//! Quantum Monte Carlo mean estimation.
//!
//! For a distribution `q` on `2^n` outcomes and a payoff `f` with values in
//! `[0, 1]`, the state preparation
//!
//! ```text
//! A|0…0⟩ = Σ_x √q(x) |x⟩ (√f(x) |1⟩ + √(1−f(x)) |0⟩)
//! ```
//!
//! puts probability `E[f(X)]` on the ancilla being 1, so amplitude
//! estimation recovers the mean. The ancilla rotation is applied as an exact
//! outcome-controlled `RotY(2·arcsin √f(x))`, not a synthesized circuit.
//!
//! Unbounded nonnegative payoffs are split into dyadic slices
//! `f/2^{l+1}·1{2^l < f ≤ 2^{l+1}}`, each of which fits the `[0, 1]` range.
//! Multi-dimensional supports are flattened into one index register.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{QampError, Result};
use crate::estimation::{estimate, AeConfig, EstimationProblem};
use crate::rng::RngSeed;
use crate::statevector::BasisPredicate;
use crate::stats::{normal_critical, normal_pdf};

const NORMALIZATION_TOL: f64 = 1e-12;

/// A probability vector over the `2^support_bits` outcomes of a register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    support_bits: usize,
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(support_bits: usize, probs: Vec<f64>) -> Result<Self> {
        if support_bits == 0 || support_bits > crate::statevector::MAX_QUBITS - 1 {
            return Err(QampError::Distribution(format!(
                "unsupported register width {support_bits}"
            )));
        }
        if probs.len() != 1 << support_bits {
            return Err(QampError::Distribution(format!(
                "{} probabilities for a {support_bits}-bit register",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(QampError::Distribution(format!(
                "invalid probability {bad}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(QampError::Distribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(DiscreteDistribution {
            support_bits,
            probs,
        })
    }

    /// Builds from sparse `(index, probability)` pairs; unlisted outcomes get 0.
    pub fn from_outcomes(support_bits: usize, outcomes: &[(usize, f64)]) -> Result<Self> {
        let mut probs = vec![0.0; 1usize << support_bits.min(30)];
        for &(i, p) in outcomes {
            let slot = probs.get_mut(i).ok_or_else(|| {
                QampError::Distribution(format!("outcome {i} outside the register"))
            })?;
            *slot += p;
        }
        Self::new(support_bits, probs)
    }

    pub fn uniform(support_bits: usize) -> Result<Self> {
        let n = 1usize << support_bits;
        Self::new(support_bits, vec![1.0 / n as f64; n])
    }

    /// One bit with `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(1, vec![1.0 - p, p])
    }

    pub fn support_bits(&self) -> usize {
        self.support_bits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Σ q(x)·f(x) by direct enumeration.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.probs.iter().zip(values).map(|(q, f)| q * f).sum()
    }
}

/// Declared range of a payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PayoffRange {
    UnitInterval,
    /// `f ≥ 0` with `E[f(X)²] ≤ l2_bound²`.
    NonNegative {
        l2_bound: f64,
    },
}

/// Payoff values on every outcome of the register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Payoff {
    values: Vec<f64>,
    range: PayoffRange,
}

impl Payoff {
    pub fn unit(values: Vec<f64>) -> Self {
        Payoff {
            values,
            range: PayoffRange::UnitInterval,
        }
    }

    pub fn nonnegative(values: Vec<f64>, l2_bound: f64) -> Self {
        Payoff {
            values,
            range: PayoffRange::NonNegative { l2_bound },
        }
    }

    pub fn from_fn(support_bits: usize, range: PayoffRange, f: impl Fn(usize) -> f64) -> Self {
        Payoff {
            values: (0..1usize << support_bits).map(f).collect(),
            range,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn range(&self) -> PayoffRange {
        self.range
    }

    fn check_len(&self, dist: &DiscreteDistribution) -> Result<()> {
        if self.values.len() != dist.probs.len() {
            return Err(QampError::DimensionMismatch {
                expected: dist.probs.len(),
                actual: self.values.len(),
            });
        }
        Ok(())
    }

    fn check_unit(&self, dist: &DiscreteDistribution) -> Result<()> {
        self.check_len(dist)?;
        if let Some((i, f)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, f)| !(0.0..=1.0).contains(*f))
        {
            return Err(QampError::PayoffRange(format!(
                "f({i}) = {f} outside [0, 1]"
            )));
        }
        Ok(())
    }

    fn check_nonnegative(&self, dist: &DiscreteDistribution) -> Result<f64> {
        self.check_len(dist)?;
        let bound = match self.range {
            PayoffRange::NonNegative { l2_bound } => l2_bound,
            PayoffRange::UnitInterval => 1.0,
        };
        if bound.is_nan() || bound <= 0.0 {
            return Err(QampError::InvalidArgument(format!(
                "second-moment bound must be positive, got {bound}"
            )));
        }
        if let Some((i, f)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, f)| !f.is_finite() || **f < 0.0)
        {
            return Err(QampError::PayoffRange(format!("f({i}) = {f} is not ≥ 0")));
        }
        let second_moment: f64 = dist
            .probs
            .iter()
            .zip(&self.values)
            .map(|(q, f)| q * f * f)
            .sum();
        if second_moment > bound * bound * (1.0 + 1e-12) {
            return Err(QampError::ModelAssumption(format!(
                "E[f²] = {second_moment} exceeds the declared bound {}",
                bound * bound
            )));
        }
        Ok(bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum McMethod {
    Classical,
    QuantumBounded,
    QuantumDyadic,
}

/// One dyadic slice of a nonnegative payoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerEstimate {
    /// `-1` for the base slice `f ≤ 1`.
    pub level: i32,
    /// Factor `2^{l+1}` that maps the slice mean back to payoff units.
    pub scale: f64,
    pub estimate: f64,
    pub queries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub mean_hat: f64,
    pub ci: (f64, f64),
    /// Classical samples, or `A`/`A†` invocations for the quantum methods.
    pub samples_or_queries: u64,
    pub method: McMethod,
    /// Active dyadic slices; empty for the other methods.
    pub layers: Vec<LayerEstimate>,
    /// Bound on the discarded tail `Σ_{f > 2^L} q·f`.
    pub truncation_bound: f64,
}

/// The ancilla-encoded problem: qubits `0..n` hold the outcome, qubit `n`
/// is the ancilla and the good set is "ancilla = 1".
pub fn build_payoff_state_prep(
    dist: &DiscreteDistribution,
    payoff: &Payoff,
) -> Result<EstimationProblem> {
    payoff.check_unit(dist)?;
    let n = dist.support_bits;
    let register: Vec<usize> = (0..n).collect();
    let mut prep = Circuit::new(n + 1)?;
    prep.load_distribution(&register, &dist.probs)?;
    let angles = payoff
        .values
        .iter()
        .map(|f| 2.0 * f.sqrt().asin())
        .collect();
    prep.multiplexed_ry(&register, n, angles)?;
    let mean = dist.expectation(&payoff.values);
    Ok(EstimationProblem::new(prep, BasisPredicate::qubit_is_one(n)).with_true_p(mean))
}

/// `E[f(X)]` for a payoff in `[0, 1]` by amplitude estimation.
pub fn estimate_mean_bounded(
    dist: &DiscreteDistribution,
    payoff: &Payoff,
    config: &AeConfig,
) -> Result<McResult> {
    let problem = build_payoff_state_prep(dist, payoff)?;
    let r = estimate(&problem, config)?;
    Ok(McResult {
        mean_hat: r.p_hat,
        ci: r.ci,
        samples_or_queries: r.queries,
        method: McMethod::QuantumBounded,
        layers: Vec::new(),
        truncation_bound: 0.0,
    })
}

/// `E[f(X)]` for a nonnegative payoff with a known second-moment bound `B`.
///
/// Uses `L = ⌈log₂(B/ε)⌉` slices above the base slice. The error budget `ε`
/// and the significance `α` are split evenly over the slices that carry any
/// probability mass; empty slices are exactly zero and cost nothing. Mass
/// with `f > 2^L` is dropped; it is at most `B²/2^L`.
pub fn estimate_mean_dyadic(
    dist: &DiscreteDistribution,
    payoff: &Payoff,
    config: &AeConfig,
) -> Result<McResult> {
    config.validate()?;
    let bound = payoff.check_nonnegative(dist)?;
    let levels = (bound / config.epsilon).log2().ceil().max(0.0) as i32;
    let truncation_bound = bound * bound / 2f64.powi(levels);

    let slices: Vec<(i32, f64, Vec<f64>)> = (-1..levels)
        .map(|l| {
            let scale = 2f64.powi(l + 1);
            let values = payoff
                .values
                .iter()
                .map(|&f| {
                    let inside = if l < 0 {
                        f <= 1.0
                    } else {
                        f > scale / 2.0 && f <= scale
                    };
                    if inside {
                        f / scale
                    } else {
                        0.0
                    }
                })
                .collect::<Vec<f64>>();
            (l, scale, values)
        })
        .filter(|(_, _, values)| {
            values
                .iter()
                .zip(&dist.probs)
                .any(|(g, q)| *g > 0.0 && *q > 0.0)
        })
        .collect();

    let tail: f64 = dist
        .probs
        .iter()
        .zip(&payoff.values)
        .filter(|(_, f)| **f > 2f64.powi(levels))
        .map(|(q, f)| q * f)
        .sum();
    if tail > truncation_bound * (1.0 + 1e-12) {
        return Err(QampError::ModelAssumption(format!(
            "tail mass {tail} above 2^{levels} exceeds B²/2^L = {truncation_bound}"
        )));
    }

    let active = slices.len().max(1) as f64;
    let mut layers = Vec::with_capacity(slices.len());
    let (mut mean, mut lo, mut hi, mut queries) = (0.0, 0.0, 0.0, 0u64);
    for (i, (level, scale, values)) in slices.into_iter().enumerate() {
        let layer_config = AeConfig {
            epsilon: config.epsilon / (active * scale),
            alpha: config.alpha / active,
            seed: if i == 0 {
                config.seed
            } else {
                config.seed.derive(i as u64)
            },
            ..*config
        };
        let r = estimate_mean_bounded(dist, &Payoff::unit(values), &layer_config)?;
        mean += scale * r.mean_hat;
        lo += scale * r.ci.0;
        hi += scale * r.ci.1;
        queries += r.samples_or_queries;
        layers.push(LayerEstimate {
            level,
            scale,
            estimate: r.mean_hat,
            queries: r.samples_or_queries,
        });
    }
    Ok(McResult {
        mean_hat: mean,
        ci: (lo, hi),
        samples_or_queries: queries,
        method: McMethod::QuantumDyadic,
        layers,
        truncation_bound,
    })
}

/// `E[f(X)]` for a signed payoff via `f = f⁺ − f⁻`, each part estimated
/// by [`estimate_mean_dyadic`] with half the error budget.
pub fn estimate_mean_signed(
    dist: &DiscreteDistribution,
    values: &[f64],
    l2_bound: f64,
    config: &AeConfig,
) -> Result<McResult> {
    let half = AeConfig {
        epsilon: config.epsilon / 2.0,
        alpha: config.alpha / 2.0,
        ..*config
    };
    let pos = Payoff::nonnegative(values.iter().map(|f| f.max(0.0)).collect(), l2_bound);
    let neg = Payoff::nonnegative(values.iter().map(|f| (-f).max(0.0)).collect(), l2_bound);
    let p = estimate_mean_dyadic(dist, &pos, &half)?;
    let n = estimate_mean_dyadic(
        dist,
        &neg,
        &AeConfig {
            seed: config.seed.derive(u64::MAX),
            ..half
        },
    )?;
    Ok(McResult {
        mean_hat: p.mean_hat - n.mean_hat,
        ci: (p.ci.0 - n.ci.1, p.ci.1 - n.ci.0),
        samples_or_queries: p.samples_or_queries + n.samples_or_queries,
        method: McMethod::QuantumDyadic,
        layers: p.layers.into_iter().chain(n.layers).collect(),
        truncation_bound: p.truncation_bound + n.truncation_bound,
    })
}

/// Sample mean of `f(X)` over `samples` i.i.d. draws, with a 95 %
/// normal-approximation interval.
pub fn classical_mc_mean(
    dist: &DiscreteDistribution,
    payoff: &Payoff,
    samples: u64,
    seed: RngSeed,
) -> Result<McResult> {
    classical_mc_mean_with_alpha(dist, payoff, samples, seed, 0.05)
}

pub fn classical_mc_mean_with_alpha(
    dist: &DiscreteDistribution,
    payoff: &Payoff,
    samples: u64,
    seed: RngSeed,
    alpha: f64,
) -> Result<McResult> {
    use rand::distr::weighted::WeightedIndex;
    use rand::distr::Distribution;

    payoff.check_len(dist)?;
    if samples < 2 {
        return Err(QampError::InvalidArgument("need at least 2 samples".into()));
    }
    let sampler =
        WeightedIndex::new(&dist.probs).map_err(|e| QampError::Distribution(e.to_string()))?;
    let mut rng = seed.rng();
    // Welford: a constant payoff gives exactly that constant and zero variance.
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for k in 1..=samples {
        let x = payoff.values[sampler.sample(&mut rng)];
        let delta = x - mean;
        mean += delta / k as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (samples - 1) as f64;
    let half = normal_critical(alpha) * (var / samples as f64).sqrt();
    Ok(McResult {
        mean_hat: mean,
        ci: (mean - half, mean + half),
        samples_or_queries: samples,
        method: McMethod::Classical,
        layers: Vec::new(),
        truncation_bound: 0.0,
    })
}

/// Equally spaced points on `[−z_max, z_max]` with renormalized standard
/// normal density weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianGrid {
    pub points: Vec<f64>,
    pub dist: DiscreteDistribution,
}

/// `2^n_bits` points from `−z_max` to `z_max` inclusive, weights ∝ pdf.
pub fn discretize_gaussian(n_bits: usize, z_max: f64) -> Result<GaussianGrid> {
    if n_bits == 0 {
        return Err(QampError::InvalidArgument(
            "need at least one grid qubit".into(),
        ));
    }
    if z_max.is_nan() || z_max <= 0.0 {
        return Err(QampError::InvalidArgument(format!(
            "z_max must be positive, got {z_max}"
        )));
    }
    let count = 1usize << n_bits;
    let step = 2.0 * z_max / (count - 1) as f64;
    let points: Vec<f64> = (0..count).map(|i| -z_max + step * i as f64).collect();
    let density: Vec<f64> = points.iter().map(|&z| normal_pdf(z)).collect();
    let total: f64 = density.iter().sum();
    let probs = density.iter().map(|d| d / total).collect();
    Ok(GaussianGrid {
        points,
        dist: DiscreteDistribution::new(n_bits, probs)?,
    })
}

/// Inputs of a European power option on a lognormal underlier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerOptionParams {
    pub spot: f64,
    pub rate: f64,
    pub sigma: f64,
    pub maturity: f64,
    pub exponent: f64,
    pub strike: f64,
    pub n_bits: usize,
    pub z_max: f64,
}

/// The power option on a Gaussian grid, payoff rescaled into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerOptionGrid {
    pub dist: DiscreteDistribution,
    /// `U / scale`, in `[0, 1]`.
    pub payoff: Payoff,
    /// Grid maximum of `U`; multiply estimates by this to get payoff units.
    /// Zero when the payoff vanishes on the grid.
    pub scale: f64,
    pub degenerate: bool,
    /// Terminal prices `S_T(z_i)`.
    pub terminal: Vec<f64>,
}

impl PowerOptionGrid {
    /// Grid expectation of the unscaled payoff.
    pub fn exact_mean(&self) -> f64 {
        self.scale * self.dist.expectation(self.payoff.values())
    }
}

/// `S_T = S0·exp(σ√T·z + (r − σ²/2)T)` on a Gaussian grid and
/// `U = max(0, S_T^p − K)`.
pub fn discretize_lognormal_power_option(params: &PowerOptionParams) -> Result<PowerOptionGrid> {
    if params.sigma.is_nan()
        || params.sigma <= 0.0
        || params.maturity.is_nan()
        || params.maturity <= 0.0
    {
        return Err(QampError::InvalidArgument(
            "sigma and maturity must be positive".into(),
        ));
    }
    if params.n_bits < 2 {
        return Err(QampError::InvalidArgument(
            "need at least 2 grid qubits".into(),
        ));
    }
    let grid = discretize_gaussian(params.n_bits, params.z_max)?;
    let drift = (params.rate - 0.5 * params.sigma * params.sigma) * params.maturity;
    let vol = params.sigma * params.maturity.sqrt();
    let terminal: Vec<f64> = grid
        .points
        .iter()
        .map(|z| params.spot * (vol * z + drift).exp())
        .collect();
    let raw: Vec<f64> = terminal
        .iter()
        .map(|s| (s.powf(params.exponent) - params.strike).max(0.0))
        .collect();
    let scale = raw.iter().cloned().fold(0.0, f64::max);
    let degenerate = scale == 0.0;
    let values = if degenerate {
        vec![0.0; raw.len()]
    } else {
        raw.iter().map(|u| u / scale).collect()
    };
    Ok(PowerOptionGrid {
        dist: grid.dist,
        payoff: Payoff::unit(values),
        scale,
        degenerate,
        terminal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_examples() {
        let cases = [
            (
                DiscreteDistribution::uniform(1).unwrap(),
                vec![1.0, 1.0],
                1.0,
            ),
            (
                DiscreteDistribution::uniform(2).unwrap(),
                vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
                0.5,
            ),
            (
                DiscreteDistribution::bernoulli(0.15).unwrap(),
                vec![0.0, 1.0],
                0.15,
            ),
        ];
        for (dist, f, expected) in cases {
            let problem = build_payoff_state_prep(&dist, &Payoff::unit(f)).unwrap();
            assert!((problem.exact_probability().unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let dist = DiscreteDistribution::uniform(1).unwrap();
        assert!(matches!(
            build_payoff_state_prep(&dist, &Payoff::unit(vec![0.5, 1.5])),
            Err(QampError::PayoffRange(_))
        ));
        assert!(matches!(
            DiscreteDistribution::new(1, vec![0.5, 0.6]),
            Err(QampError::Distribution(_))
        ));
    }

    #[test]
    fn zero_payoff_estimates_zero() {
        let dist = DiscreteDistribution::uniform(2).unwrap();
        let r = estimate_mean_bounded(&dist, &Payoff::unit(vec![0.0; 4]), &AeConfig::default())
            .unwrap();
        assert_eq!(r.mean_hat, 0.0);
        let r = estimate_mean_dyadic(
            &dist,
            &Payoff::nonnegative(vec![0.0; 4], 1.0),
            &AeConfig::default(),
        )
        .unwrap();
        assert_eq!(r.mean_hat, 0.0);
        assert!(r.layers.is_empty());
    }

    #[test]
    fn bounded_payoff_dyadic_matches_bounded_estimator() {
        let dist = DiscreteDistribution::uniform(2).unwrap();
        let values = vec![0.1, 0.4, 0.7, 1.0];
        let cfg = AeConfig::new(0.01, RngSeed(4));
        let a = estimate_mean_bounded(&dist, &Payoff::unit(values.clone()), &cfg).unwrap();
        let b = estimate_mean_dyadic(&dist, &Payoff::nonnegative(values, 1.0), &cfg).unwrap();
        assert_eq!(b.layers.len(), 1);
        assert_eq!(b.layers[0].level, -1);
        assert_eq!(a.mean_hat, b.mean_hat);
        assert_eq!(a.samples_or_queries, b.samples_or_queries);
    }

    #[test]
    fn second_moment_violation_detected() {
        let dist = DiscreteDistribution::uniform(1).unwrap();
        let err = estimate_mean_dyadic(
            &dist,
            &Payoff::nonnegative(vec![0.0, 10.0], 1.0),
            &AeConfig::default(),
        );
        assert!(matches!(err, Err(QampError::ModelAssumption(_))));
    }

    #[test]
    fn constant_payoff_has_zero_width() {
        let dist = DiscreteDistribution::uniform(3).unwrap();
        let r = classical_mc_mean(&dist, &Payoff::unit(vec![0.3; 8]), 10_000, RngSeed(1)).unwrap();
        assert_eq!(r.mean_hat, 0.3);
        assert_eq!(r.ci, (0.3, 0.3));
    }

    #[test]
    fn classical_bernoulli_concentrates() {
        let dist = DiscreteDistribution::bernoulli(0.25).unwrap();
        let r =
            classical_mc_mean(&dist, &Payoff::unit(vec![0.0, 1.0]), 1_000_000, RngSeed(2)).unwrap();
        assert!((r.mean_hat - 0.25).abs() <= 3.0 * (0.1875f64 / 1e6).sqrt());
    }

    #[test]
    fn gaussian_grid_shape() {
        let g = discretize_gaussian(1, 3.0).unwrap();
        assert_eq!(g.points, vec![-3.0, 3.0]);
        assert_eq!(g.dist.probs(), &[0.5, 0.5]);

        let g = discretize_gaussian(4, 3.0).unwrap();
        assert_eq!(g.points.len(), 16);
        assert!((g.points[1] - g.points[0] - 0.4).abs() < 1e-12);
        let w = g.dist.probs();
        for i in 0..16 {
            assert!((w[i] - w[15 - i]).abs() < 1e-14);
        }
        let max = w.iter().cloned().fold(0.0, f64::max);
        assert!((w[7] - max).abs() < 1e-15 && (w[8] - max).abs() < 1e-15);
    }

    #[test]
    fn power_option_out_of_the_money_is_degenerate() {
        let grid = discretize_lognormal_power_option(&PowerOptionParams {
            spot: 2.0,
            rate: 0.02,
            sigma: 0.2,
            maturity: 1.0,
            exponent: 1.0,
            strike: 100.0,
            n_bits: 4,
            z_max: 3.0,
        })
        .unwrap();
        assert!(grid.degenerate);
        assert!(grid.payoff.values().iter().all(|&u| u == 0.0));
    }

    #[test]
    fn power_option_linear_payoff_is_scaled_mean() {
        let grid = discretize_lognormal_power_option(&PowerOptionParams {
            spot: 2.0,
            rate: 0.02,
            sigma: 0.2,
            maturity: 1.0,
            exponent: 1.0,
            strike: 0.0,
            n_bits: 5,
            z_max: 3.0,
        })
        .unwrap();
        let mean_s = grid.dist.expectation(&grid.terminal);
        let max_s = grid.terminal.iter().cloned().fold(0.0, f64::max);
        assert_eq!(grid.scale, max_s);
        assert!((grid.dist.expectation(grid.payoff.values()) - mean_s / max_s).abs() < 1e-12);
    }
}
