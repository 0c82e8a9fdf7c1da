//! Grover search over `N = 2^n` basis states with `k` marked items.
//!
//! Angles follow the convention `sin φ = √(k/N)`: the uniform state |s⟩ makes
//! angle φ with the unmarked axis, and each iterate `G = D·O` rotates by 2φ,
//! so after `m` iterates the marked set is measured with probability
//! `sin²((2m+1)φ)`.
//!
//! The oracle is `O = 2|ω⟩⟨ω| − I`, which flips the sign of the *unmarked*
//! amplitudes. The textbook oracle flips the marked ones instead; the two
//! differ by a global factor of −1 and give identical measurement statistics.

use std::f64::consts::PI;

use crate::circuit::StateTransform;
use crate::error::{QampError, Result};
use crate::rng::RngSeed;
use crate::statevector::{BasisPredicate, Statevector};

/// A search instance: register width, marked set and its rotation angle.
#[derive(Debug, Clone)]
pub struct GroverSetup {
    num_qubits: usize,
    marked: BasisPredicate,
    k: usize,
    phi: f64,
}

impl GroverSetup {
    pub fn new(num_qubits: usize, marked: BasisPredicate) -> Result<Self> {
        if num_qubits == 0 || num_qubits > crate::statevector::MAX_QUBITS {
            return Err(QampError::InvalidArgument(format!(
                "unsupported register width {num_qubits}"
            )));
        }
        let n = 1usize << num_qubits;
        let k = marked.count(n);
        let phi = marked_angle(n as u64, k as u64)?;
        Ok(GroverSetup {
            num_qubits,
            marked,
            k,
            phi,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn search_space(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn marked(&self) -> &BasisPredicate {
        &self.marked
    }

    pub fn marked_count(&self) -> usize {
        self.k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Closed-form success probability after `m` iterates.
    pub fn success_probability(&self, m: u64) -> f64 {
        ((2 * m + 1) as f64 * self.phi).sin().powi(2)
    }

    pub fn iterate(&self) -> Result<GroverIterate> {
        Ok(GroverIterate {
            oracle: oracle_reflection(&self.marked, self.num_qubits)?,
            diffusion: diffusion(self.num_qubits),
        })
    }
}

fn marked_angle(n: u64, k: u64) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(QampError::DegenerateSearch(format!(
            "need 1 ≤ k < N, got k = {k}, N = {n}"
        )));
    }
    Ok((k as f64 / n as f64).sqrt().asin())
}

/// Reflection `2|ω⟩⟨ω| − I` about the marked subspace.
#[derive(Debug, Clone)]
pub struct OracleReflection {
    flip_unmarked: Vec<bool>,
}

/// Builds the oracle for `marked` on an `num_qubits`-qubit register.
pub fn oracle_reflection(marked: &BasisPredicate, num_qubits: usize) -> Result<OracleReflection> {
    let mask = marked.mask(1usize << num_qubits);
    let k = mask.iter().filter(|&&m| m).count();
    if k == 0 || k == mask.len() {
        return Err(QampError::DegenerateSearch(format!(
            "marked set has {k} of {} indices",
            mask.len()
        )));
    }
    Ok(OracleReflection {
        flip_unmarked: mask.into_iter().map(|m| !m).collect(),
    })
}

impl StateTransform for OracleReflection {
    fn apply(&self, state: &mut Statevector) -> Result<()> {
        state.flip_sign_where(&self.flip_unmarked)
    }
}

/// Diffusion `D = −(2|s⟩⟨s| − I)` about the uniform superposition.
#[derive(Debug, Clone, Copy)]
pub struct Diffusion {
    num_qubits: usize,
}

pub fn diffusion(num_qubits: usize) -> Diffusion {
    Diffusion { num_qubits }
}

impl StateTransform for Diffusion {
    fn apply(&self, state: &mut Statevector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(QampError::DimensionMismatch {
                expected: self.num_qubits,
                actual: state.num_qubits(),
            });
        }
        // (2|s⟩⟨s| − I) a = 2·mean(a) − a, negated.
        let dim = state.dim() as f64;
        let mean = state.amplitudes().iter().sum::<num_complex::Complex64>() / dim;
        for a in state.amplitudes_mut() {
            *a -= 2.0 * mean;
        }
        Ok(())
    }
}

/// The Grover iterate `G = D·O`.
#[derive(Debug, Clone)]
pub struct GroverIterate {
    oracle: OracleReflection,
    diffusion: Diffusion,
}

impl GroverIterate {
    /// Applies `G^m`.
    pub fn apply_power(&self, state: &mut Statevector, m: u64) -> Result<()> {
        for _ in 0..m {
            self.apply(state)?;
        }
        state.check_norm()
    }
}

impl StateTransform for GroverIterate {
    fn apply(&self, state: &mut Statevector) -> Result<()> {
        self.oracle.apply(state)?;
        self.diffusion.apply(state)
    }
}

/// Iteration count maximizing `sin²((2m+1)φ)`, found by an exact integer
/// scan over `0..=⌈π/(4φ)⌉+1`; ties go to the smaller `m`.
pub fn optimal_iterations(n: u64, k: u64) -> Result<u64> {
    let phi = marked_angle(n, k)?;
    let upper = (PI / (4.0 * phi)).ceil() as u64 + 1;
    let mut best = (0u64, phi.sin().powi(2));
    for m in 1..=upper {
        let p = ((2 * m + 1) as f64 * phi).sin().powi(2);
        if p > best.1 + 1e-12 {
            best = (m, p);
        }
    }
    Ok(best.0)
}

/// Result of a full search run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub iterations: u64,
    /// Outcome of the first shot.
    pub measured: usize,
    pub success: bool,
    pub successes: usize,
    pub shots: usize,
    pub success_frequency: f64,
    /// `sin²((2m+1)φ)` at the chosen `m`.
    pub theoretical: f64,
}

/// Prepares |s⟩, applies the optimal number of iterates and measures `shots` times.
pub fn run_search(setup: &GroverSetup, shots: usize, seed: RngSeed) -> Result<SearchOutcome> {
    if shots == 0 {
        return Err(QampError::InvalidArgument("shots must be ≥ 1".into()));
    }
    let m = optimal_iterations(setup.search_space() as u64, setup.k as u64)?;
    let mut state = Statevector::uniform(setup.num_qubits)?;
    setup.iterate()?.apply_power(&mut state, m)?;
    let draws = state.sample_measurement(shots, seed)?;
    let successes = draws.iter().filter(|&&i| setup.marked.contains(i)).count();
    Ok(SearchOutcome {
        iterations: m,
        measured: draws[0],
        success: setup.marked.contains(draws[0]),
        successes,
        shots,
        success_frequency: successes as f64 / shots as f64,
        theoretical: setup.success_probability(m),
    })
}
