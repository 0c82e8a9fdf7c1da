//! Grover-style amplitude estimation.
//!
//! A state preparation `A` writes `A|0⟩ = √p |ω⟩ + √(1−p) |ψ'⟩` where |ω⟩ is
//! the normalized projection onto the good basis states. With `sin φ = √p`,
//! the iterate `G = D_ψ·O` rotates by 2φ and `m` iterates make a good
//! outcome appear with probability `sin²((2m+1)φ)`. Repeating
//! prepare–rotate–measure `R` times and inverting the sine gives `p̂`.
//!
//! # Schedule
//!
//! `sin²` is only invertible on a quarter period `[jπ/2, (j+1)π/2]`, and the
//! quarter that `(2m+1)φ` falls in is unknown when φ is. [`estimate`] keeps a
//! confidence interval `[φ_lo, φ_hi]` and only picks depths `m` for which the
//! whole scaled interval `(2m+1)·[φ_lo, φ_hi]` sits inside one quarter, so
//! every round inverts on a known branch:
//!
//! 1. coarse round at `m = 0` with `R₀` shots brackets φ;
//! 2. each later round picks the largest branch-safe `m ≤ min(max_m, ⌈c/ε⌉)`
//!    that at least doubles `2m+1`, or stays at the current `m` and pools
//!    shots when no such depth exists;
//! 3. a Clopper–Pearson interval on the pooled hit rate is mapped through
//!    the branch inverse and intersected with the running interval;
//! 4. the loop ends once `sin²φ_hi − sin²φ_lo ≤ 2ε`.
//!
//! Cost is counted in applications of `A` or `A†`: a shot at depth `m`
//! costs `2m + 1`.

use std::f64::consts::FRAC_PI_2;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{StatePreparation, StateTransform};
use crate::error::{QampError, Result};
use crate::rng::RngSeed;
use crate::statevector::{BasisPredicate, Statevector};
use crate::stats::clopper_pearson;

/// Probability below which (or within which of 1) the good amplitude is
/// treated as exactly degenerate by [`grover_operator`].
const DEGENERATE_TOL: f64 = 1e-14;

/// Hard stop on the number of rounds in one estimation.
const MAX_ROUNDS: usize = 10_000;

/// A state preparation together with its good-state predicate.
#[derive(Debug, Clone)]
pub struct EstimationProblem {
    state_prep: StatePreparation,
    good: BasisPredicate,
    true_p: Option<f64>,
}

impl EstimationProblem {
    pub fn new(state_prep: StatePreparation, good: BasisPredicate) -> Self {
        EstimationProblem {
            state_prep,
            good,
            true_p: None,
        }
    }

    /// Attaches a reference probability; used only for reporting errors.
    pub fn with_true_p(mut self, p: f64) -> Self {
        self.true_p = Some(p);
        self
    }

    pub fn state_prep(&self) -> &StatePreparation {
        &self.state_prep
    }

    pub fn good(&self) -> &BasisPredicate {
        &self.good
    }

    pub fn true_p(&self) -> Option<f64> {
        self.true_p
    }

    pub fn num_qubits(&self) -> usize {
        self.state_prep.num_qubits()
    }

    /// `p` read directly off the simulated state `A|0⟩`.
    pub fn exact_probability(&self) -> Result<f64> {
        Ok(self.state_prep.prepare()?.probability_of(&self.good))
    }
}

/// Estimation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeConfig {
    /// Target absolute error on `p`.
    pub epsilon: f64,
    /// Confidence intervals hold with probability at least `1 − alpha`.
    pub alpha: f64,
    /// Shots per refinement round.
    pub shots_per_round: u64,
    /// Shots in the coarse `m = 0` round; `None` uses `shots_per_round`.
    pub coarse_shots: Option<u64>,
    /// Largest number of Grover iterates per shot.
    pub max_m: u64,
    /// `c` in the depth cap `m ≤ ⌈c/ε⌉`.
    pub depth_scale: f64,
    /// Stop once this many `A` invocations have been spent.
    pub query_budget: Option<u64>,
    pub seed: RngSeed,
}

impl Default for AeConfig {
    fn default() -> Self {
        AeConfig {
            epsilon: 0.01,
            alpha: 0.05,
            shots_per_round: 100,
            coarse_shots: None,
            max_m: 100_000,
            depth_scale: 1.0,
            query_budget: None,
            seed: RngSeed(0),
        }
    }
}

impl AeConfig {
    pub fn new(epsilon: f64, seed: RngSeed) -> Self {
        AeConfig {
            epsilon,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(QampError::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(QampError::InvalidArgument(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.shots_per_round == 0 || self.coarse_shots == Some(0) {
            return Err(QampError::InvalidArgument("shot counts must be ≥ 1".into()));
        }
        if self.depth_scale.is_nan() || self.depth_scale <= 0.0 {
            return Err(QampError::InvalidArgument(
                "depth_scale must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn coarse_shots(&self) -> u64 {
        self.coarse_shots.unwrap_or(self.shots_per_round)
    }

    /// Depth cap `min(max_m, ⌈c/ε⌉)`.
    pub fn depth_cap(&self) -> u64 {
        let target = (self.depth_scale / self.epsilon).ceil();
        self.max_m.min(target.min(u64::MAX as f64) as u64)
    }
}

/// One prepare–rotate–measure batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub m: u64,
    pub shots: u64,
    pub hits: u64,
}

impl Round {
    pub fn queries(&self) -> u64 {
        self.shots * (2 * self.m + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub p_hat: f64,
    pub phi_hat: f64,
    pub ci: (f64, f64),
    /// Total `A`/`A†` invocations, `Σ R·(2m+1)`.
    pub queries: u64,
    pub rounds: Vec<Round>,
    /// Every shot came back bad (or every shot good): `p` sits at 0 or 1.
    pub degenerate: bool,
    /// The interval could not be narrowed to `2ε` within the depth cap or budget.
    pub below_target: bool,
}

/// The amplification operator `G = D_ψ·O` with `D_ψ = A(2|0⟩⟨0| − I)A†`
/// and `O = I − 2|ω⟩⟨ω|` (sign flip on good basis states).
#[derive(Debug, Clone)]
pub struct GroverOperator {
    prep: StatePreparation,
    inverse: StatePreparation,
    good_mask: Vec<bool>,
    psi: Statevector,
    p: f64,
}

pub fn grover_operator(problem: &EstimationProblem) -> Result<GroverOperator> {
    let psi = problem.state_prep.prepare()?;
    let good_mask = problem.good.mask(psi.dim());
    let p = psi.probability_of_mask(&good_mask);
    Ok(GroverOperator {
        prep: problem.state_prep.clone(),
        inverse: problem.state_prep.inverse(),
        good_mask,
        psi,
        p,
    })
}

impl GroverOperator {
    /// The prepared state |ψ⟩ = A|0⟩.
    pub fn psi(&self) -> &Statevector {
        &self.psi
    }

    /// Good-state probability of |ψ⟩.
    pub fn good_probability(&self) -> f64 {
        self.p
    }

    /// True when `p ∈ {0, 1}`: `G` then fixes |ψ⟩ up to phase and the
    /// rotation law holds vacuously.
    pub fn is_degenerate(&self) -> bool {
        self.p < DEGENERATE_TOL || self.p > 1.0 - DEGENERATE_TOL
    }

    pub fn good_mask(&self) -> &[bool] {
        &self.good_mask
    }

    /// `G^m |ψ⟩`.
    pub fn amplified(&self, m: u64) -> Result<Statevector> {
        let mut state = self.psi.clone();
        for _ in 0..m {
            self.apply(&mut state)?;
        }
        Ok(state)
    }
}

impl StateTransform for GroverOperator {
    fn apply(&self, state: &mut Statevector) -> Result<()> {
        state.flip_sign_where(&self.good_mask)?;
        self.inverse.apply(state)?;
        state.reflect_about_zero();
        self.prep.apply(state)
    }
}

/// Runs prepare–`G^m`–measure repetitions against a cached `G^m|ψ⟩`.
struct AmplifiedSampler {
    op: GroverOperator,
    state: Statevector,
    depth: u64,
}

impl AmplifiedSampler {
    fn new(op: GroverOperator) -> Self {
        let state = op.psi.clone();
        AmplifiedSampler {
            op,
            state,
            depth: 0,
        }
    }

    fn advance_to(&mut self, m: u64) -> Result<()> {
        if m < self.depth {
            self.state = self.op.psi.clone();
            self.depth = 0;
        }
        while self.depth < m {
            self.op.apply(&mut self.state)?;
            self.depth += 1;
        }
        Ok(())
    }

    fn hits(&mut self, m: u64, shots: u64, rng: &mut ChaCha8Rng) -> Result<u64> {
        self.advance_to(m)?;
        let draws = self.state.sample_with_rng(shots as usize, rng)?;
        Ok(draws.into_iter().filter(|&i| self.op.good_mask[i]).count() as u64)
    }
}

/// `R` shots at depth `m`; returns `(hits / R, hits)`.
pub fn measure_good_probability(
    problem: &EstimationProblem,
    m: u64,
    shots: u64,
    seed: RngSeed,
) -> Result<(f64, u64)> {
    if shots == 0 {
        return Err(QampError::InvalidArgument("shots must be ≥ 1".into()));
    }
    let mut sampler = AmplifiedSampler::new(grover_operator(problem)?);
    let hits = sampler.hits(m, shots, &mut seed.rng())?;
    Ok((hits as f64 / shots as f64, hits))
}

/// First-branch inversion: `φ̂ = arcsin(√p_m)/(2m+1)`, `p̂ = sin²φ̂`.
///
/// Valid when `(2m+1)φ ≤ π/2`; inputs outside `[0, 1]` are clamped.
pub fn invert_amplitude(p_m: f64, m: u64) -> (f64, f64) {
    invert_on_branch(p_m, m, 0)
}

/// Inversion when `(2m+1)φ` is known to lie in `[jπ/2, (j+1)π/2]`.
pub fn invert_on_branch(p_m: f64, m: u64, quarter: u64) -> (f64, f64) {
    let theta = branch_angle(p_m, quarter);
    let phi = theta / (2 * m + 1) as f64;
    (phi, phi.sin().powi(2))
}

/// The angle θ in quarter `j` with `sin²θ = p_m`.
fn branch_angle(p_m: f64, quarter: u64) -> f64 {
    let t = p_m.clamp(0.0, 1.0).sqrt().asin();
    let base = quarter as f64 * FRAC_PI_2;
    if quarter.is_multiple_of(2) {
        base + t
    } else {
        base + FRAC_PI_2 - t
    }
}

/// Quarter period containing `(2m+1)·[lo, hi]`, if it fits in one.
fn quarter_of(lo: f64, hi: f64, m: u64) -> Option<u64> {
    let scale = (2 * m + 1) as f64 / FRAC_PI_2;
    let q_lo = (lo * scale + 1e-12).floor().max(0.0);
    let q_hi = ((hi * scale - 1e-12).ceil() - 1.0).max(0.0);
    (q_lo == q_hi).then_some(q_lo as u64)
}

/// Largest branch-safe depth that at least doubles `2m+1`, if any.
fn next_depth(lo: f64, hi: f64, current: u64, cap: u64) -> Option<u64> {
    let width = (hi - lo).max(f64::MIN_POSITIVE);
    let widest = ((FRAC_PI_2 / width - 1.0) / 2.0).floor();
    let upper = cap.min(if widest.is_finite() {
        widest as u64
    } else {
        cap
    });
    let lower = 2 * current + 1;
    (lower..=upper)
        .rev()
        .find(|&m| quarter_of(lo, hi, m).is_some())
}

/// Estimates `p = P(good)` to absolute error `ε` with confidence `1 − α`.
pub fn estimate(problem: &EstimationProblem, config: &AeConfig) -> Result<EstimationResult> {
    config.validate()?;
    let mut sampler = AmplifiedSampler::new(grover_operator(problem)?);
    let mut rng = config.seed.rng();

    let eps = config.epsilon;
    // Bonferroni split over the distinct depths a run can visit.
    let depth_levels = ((std::f64::consts::PI / (4.0 * eps)).log2().ceil()).max(0.0) + 1.0;
    let alpha_round = config.alpha / depth_levels;
    let cap = config.depth_cap();

    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    let mut rounds: Vec<Round> = Vec::new();
    let mut queries = 0u64;
    let (mut m, mut quarter) = (0u64, 0u64);
    let (mut pooled_hits, mut pooled_shots) = (0u64, 0u64);
    let (mut all_bad, mut all_good) = (true, true);
    let mut below_target = false;

    loop {
        let shots = if rounds.is_empty() {
            config.coarse_shots()
        } else {
            config.shots_per_round
        };
        let hits = sampler.hits(m, shots, &mut rng)?;
        let round = Round { m, shots, hits };
        queries += round.queries();
        rounds.push(round);
        all_bad &= hits == 0;
        all_good &= hits == shots;
        pooled_hits += hits;
        pooled_shots += shots;

        let (a_lo, a_hi) = clopper_pearson(pooled_hits, pooled_shots, alpha_round);
        let scale = (2 * m + 1) as f64;
        let (t_a, t_b) = (branch_angle(a_lo, quarter), branch_angle(a_hi, quarter));
        let (new_lo, new_hi) = (t_a.min(t_b) / scale, t_a.max(t_b) / scale);
        if new_lo.max(lo) <= new_hi.min(hi) {
            lo = lo.max(new_lo);
            hi = hi.min(new_hi);
        } else {
            // The running interval missed; trust the fresh, wider evidence.
            lo = new_lo;
            hi = new_hi;
        }

        let (p_lo, p_hi) = (lo.sin().powi(2), hi.sin().powi(2));
        let converged = if all_bad {
            p_hi <= eps
        } else if all_good {
            1.0 - p_lo <= eps
        } else {
            p_hi - p_lo <= 2.0 * eps
        };
        if converged {
            break;
        }
        let over_budget = config.query_budget.is_some_and(|b| queries >= b);
        if over_budget || rounds.len() >= MAX_ROUNDS {
            below_target = true;
            break;
        }

        if let Some(next) = next_depth(lo, hi, m, cap) {
            m = next;
            quarter = quarter_of(lo, hi, m).expect("next_depth returns branch-safe depths");
            pooled_hits = 0;
            pooled_shots = 0;
        }
    }

    let (p_lo, p_hi) = (lo.sin().powi(2), hi.sin().powi(2));
    let p_hat = if all_bad {
        0.0
    } else if all_good {
        1.0
    } else {
        0.5 * (p_lo + p_hi)
    };
    Ok(EstimationResult {
        p_hat,
        phi_hat: p_hat.sqrt().asin(),
        ci: (p_lo.min(p_hat), p_hi.max(p_hat)),
        queries,
        rounds,
        degenerate: all_bad || all_good,
        below_target,
    })
}

/// Outcome of [`estimate_count`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    /// `N·p̂`, rounded when `exact` is set.
    pub k_hat: f64,
    /// `ε < 1/(2N)`, so rounding recovers the integer count.
    pub exact: bool,
    pub result: EstimationResult,
}

/// Estimates the number of marked indices among `N = 2^n` by amplitude
/// estimation with `A = H^{⊗n}`.
pub fn estimate_count(
    num_qubits: usize,
    marked: BasisPredicate,
    config: &AeConfig,
) -> Result<CountEstimate> {
    let prep = crate::circuit::Circuit::hadamard_all(num_qubits)?;
    let problem = EstimationProblem::new(prep, marked);
    let result = estimate(&problem, config)?;
    let n = (1u64 << num_qubits) as f64;
    let exact = config.epsilon < 0.5 / n;
    let raw = n * result.p_hat;
    Ok(CountEstimate {
        k_hat: if exact { raw.round() } else { raw },
        exact,
        result,
    })
}
