//! Dense statevector simulation.
//!
//! Qubit ordering is little-endian: qubit 0 is the least-significant bit of
//! the basis index, so basis index `5 = 0b101` has qubits 0 and 2 set.
//!
//! Gates act in place on the strided pairs `(i, i | 1 << target)`; no
//! `2^n × 2^n` matrix is ever formed. Global phase is not tracked, so two
//! states that differ only by a phase are compared with [`Statevector::overlap`].

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{QampError, Result};
use crate::gate::Gate;
use crate::permutation::Permutation;
use crate::rng::RngSeed;

/// Allowed drift of the squared norm away from 1.
pub const NORM_TOL: f64 = 1e-10;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Membership test over basis indices: the "good" or marked set.
#[derive(Clone)]
pub struct BasisPredicate(Arc<dyn Fn(usize) -> bool + Send + Sync>);

impl BasisPredicate {
    pub fn from_fn(f: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        BasisPredicate(Arc::new(f))
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        let set: std::collections::BTreeSet<usize> = indices.into_iter().collect();
        Self::from_fn(move |i| set.contains(&i))
    }

    /// Indices whose `qubit` bit is 1.
    pub fn qubit_is_one(qubit: usize) -> Self {
        Self::from_fn(move |i| (i >> qubit) & 1 == 1)
    }

    pub fn all() -> Self {
        Self::from_fn(|_| true)
    }

    pub fn none() -> Self {
        Self::from_fn(|_| false)
    }

    pub fn contains(&self, index: usize) -> bool {
        (self.0)(index)
    }

    /// Evaluates the predicate on `0..dim`.
    pub fn mask(&self, dim: usize) -> Vec<bool> {
        (0..dim).map(|i| self.contains(i)).collect()
    }

    pub fn count(&self, dim: usize) -> usize {
        (0..dim).filter(|&i| self.contains(i)).count()
    }
}

impl fmt::Debug for BasisPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BasisPredicate(..)")
    }
}

/// Dense vector of `2^num_qubits` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros state |0…0⟩.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(QampError::InvalidArgument(format!(
                "register width must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(QampError::InvalidArgument(format!(
                "basis index {index} outside 0..{dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector {
            num_qubits,
            amplitudes,
        })
    }

    /// Uniform superposition |s⟩ = H^{⊗n}|0…0⟩.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        let mut state = Self::zero(num_qubits)?;
        let a = Complex64::new(1.0 / (state.dim() as f64).sqrt(), 0.0);
        state.amplitudes.fill(a);
        Ok(state)
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(QampError::InvalidArgument(format!(
                "amplitude count {dim} is not a power of two ≥ 2"
            )));
        }
        let state = Statevector {
            num_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        };
        state.check_norm()?;
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Errors if the squared norm has drifted more than [`NORM_TOL`] from 1.
    pub fn check_norm(&self) -> Result<()> {
        let norm_sq = self.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QampError::NormDrift {
                norm_sq,
                tolerance: NORM_TOL,
            });
        }
        Ok(())
    }

    /// |⟨self|other⟩|; equals 1 for states equal up to global phase.
    pub fn overlap(&self, other: &Statevector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(QampError::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn control_mask(&self, controls: &[usize], target: usize) -> Result<usize> {
        self.check_qubit(target)?;
        let mut mask = 0usize;
        for &q in controls {
            self.check_qubit(q)?;
            if q == target || mask & (1 << q) != 0 {
                return Err(QampError::OverlappingQubits(q));
            }
            mask |= 1 << q;
        }
        Ok(mask)
    }

    pub fn apply_gate(&mut self, gate: Gate, target: usize) -> Result<()> {
        self.apply_controlled_gate(gate, &[], target)
    }

    /// Applies `gate` to `target` on the amplitudes whose control bits are all 1.
    pub fn apply_controlled_gate(
        &mut self,
        gate: Gate,
        controls: &[usize],
        target: usize,
    ) -> Result<()> {
        let mask = self.control_mask(controls, target)?;
        let u = gate.matrix();
        let bit = 1usize << target;
        for i in 0..self.dim() {
            if i & bit != 0 || i & mask != mask {
                continue;
            }
            let j = i | bit;
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = u[0][0] * a0 + u[0][1] * a1;
            self.amplitudes[j] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    /// Uniformly controlled Y rotation: on each basis slice the `target` qubit
    /// is rotated by `RotY(angles[c])`, where `c` is the value read from the
    /// `controls` qubits (`controls[0]` is the low bit of `c`).
    pub fn apply_multiplexed_ry(
        &mut self,
        controls: &[usize],
        target: usize,
        angles: &[f64],
    ) -> Result<()> {
        self.control_mask(controls, target)?;
        if angles.len() != 1usize << controls.len() {
            return Err(QampError::DimensionMismatch {
                expected: 1 << controls.len(),
                actual: angles.len(),
            });
        }
        let trig: Vec<(f64, f64)> = angles.iter().map(|t| (t / 2.0).sin_cos()).collect();
        let bit = 1usize << target;
        for i in 0..self.dim() {
            if i & bit != 0 {
                continue;
            }
            let c = controls
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
            let (s, co) = trig[c];
            let j = i | bit;
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = a0 * co - a1 * s;
            self.amplitudes[j] = a0 * s + a1 * co;
        }
        Ok(())
    }

    /// Moves the amplitude at index `i` to index `perm.image(i)`.
    pub fn apply_permutation(&mut self, perm: &Permutation) -> Result<()> {
        if perm.dim() != self.dim() {
            return Err(QampError::DimensionMismatch {
                expected: self.dim(),
                actual: perm.dim(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[perm.image(i)] = *a;
        }
        self.amplitudes = out;
        Ok(())
    }

    /// Multiplies by -1 every amplitude whose index satisfies `flip`.
    pub fn flip_sign_where(&mut self, flip: &[bool]) -> Result<()> {
        if flip.len() != self.dim() {
            return Err(QampError::DimensionMismatch {
                expected: self.dim(),
                actual: flip.len(),
            });
        }
        for (a, &f) in self.amplitudes.iter_mut().zip(flip) {
            if f {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// 2|0⟩⟨0| − I.
    pub fn reflect_about_zero(&mut self) {
        for a in self.amplitudes.iter_mut().skip(1) {
            *a = -*a;
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Σ |a_i|² over the indices accepted by `pred`.
    pub fn probability_of(&self, pred: &BasisPredicate) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| pred.contains(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn probability_of_mask(&self, mask: &[bool]) -> f64 {
        self.amplitudes
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    /// `shots` i.i.d. computational-basis measurements.
    pub fn sample_measurement(&self, shots: usize, seed: RngSeed) -> Result<Vec<usize>> {
        self.sample_with_rng(shots, &mut seed.rng())
    }

    pub fn sample_with_rng<R: Rng + ?Sized>(
        &self,
        shots: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        if shots == 0 {
            return Err(QampError::InvalidArgument("shots must be ≥ 1".into()));
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|e| QampError::InvalidArgument(format!("cannot sample state: {e}")))?;
        Ok((0..shots).map(|_| dist.sample(rng)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn x_flips_zero_to_one() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(Gate::PauliX, 0).unwrap();
        assert!(close(s.amplitude(0), 0.0, 0.0));
        assert!(close(s.amplitude(1), 1.0, 0.0));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(Gate::Hadamard, 0).unwrap();
        assert!(close(s.amplitude(0), FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitude(1), FRAC_1_SQRT_2, 0.0));
        assert!((s.probability_of(&BasisPredicate::from_indices([1])) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn z_on_plus_gives_minus() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(Gate::Hadamard, 0).unwrap();
        s.apply_gate(Gate::PauliZ, 0).unwrap();
        assert!(close(s.amplitude(0), FRAC_1_SQRT_2, 0.0));
        assert!(close(s.amplitude(1), -FRAC_1_SQRT_2, 0.0));
    }

    #[test]
    fn target_out_of_range() {
        let mut s = Statevector::zero(2).unwrap();
        assert_eq!(
            s.apply_gate(Gate::PauliX, 2),
            Err(QampError::QubitOutOfRange {
                index: 2,
                num_qubits: 2
            })
        );
    }

    #[test]
    fn cnot_truth_table() {
        // control qubit 0 set: index 1 -> index 3
        let mut s = Statevector::basis(2, 1).unwrap();
        s.apply_controlled_gate(Gate::PauliX, &[0], 1).unwrap();
        assert!(close(s.amplitude(3), 1.0, 0.0));

        let mut s = Statevector::zero(2).unwrap();
        s.apply_controlled_gate(Gate::PauliX, &[0], 1).unwrap();
        assert!(close(s.amplitude(0), 1.0, 0.0));
    }

    #[test]
    fn controlled_ry_quarter_turn() {
        let mut s = Statevector::basis(2, 1).unwrap();
        s.apply_controlled_gate(Gate::RotY(std::f64::consts::FRAC_PI_2), &[0], 1)
            .unwrap();
        let c = (std::f64::consts::FRAC_PI_4).cos();
        assert!(close(s.amplitude(1), c, 0.0));
        assert!(close(s.amplitude(3), c, 0.0));
    }

    #[test]
    fn overlapping_control_rejected() {
        let mut s = Statevector::zero(2).unwrap();
        assert_eq!(
            s.apply_controlled_gate(Gate::PauliX, &[1], 1),
            Err(QampError::OverlappingQubits(1))
        );
    }

    #[test]
    fn permutation_moves_amplitudes() {
        let amps = [0.6, 0.8, 0.0, 0.0]
            .map(|x| Complex64::new(x, 0.0))
            .to_vec();
        let mut s = Statevector::from_amplitudes(amps).unwrap();
        s.apply_permutation(&Permutation::transposition(4, 0, 1).unwrap())
            .unwrap();
        assert!(close(s.amplitude(0), 0.8, 0.0));
        assert!(close(s.amplitude(1), 0.6, 0.0));

        let before = s.clone();
        s.apply_permutation(&Permutation::identity(4)).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn uniform_probability_of_single_index() {
        let s = Statevector::uniform(2).unwrap();
        assert!((s.probability_of(&BasisPredicate::from_indices([3])) - 0.25).abs() < 1e-15);
        assert!((s.probability_of(&BasisPredicate::all()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_state_measures_deterministically() {
        let s = Statevector::basis(1, 1).unwrap();
        let shots = s.sample_measurement(100, RngSeed(3)).unwrap();
        assert!(shots.iter().all(|&i| i == 1));
    }

    #[test]
    fn hadamard_sampling_concentrates() {
        let mut s = Statevector::zero(1).unwrap();
        s.apply_gate(Gate::Hadamard, 0).unwrap();
        let n = 100_000;
        let ones = s
            .sample_measurement(n, RngSeed(11))
            .unwrap()
            .into_iter()
            .filter(|&i| i == 1)
            .count();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((ones as f64 / n as f64 - 0.5).abs() <= 3.0 * sigma);
    }

    #[test]
    fn zero_shots_rejected() {
        let s = Statevector::zero(1).unwrap();
        assert!(s.sample_measurement(0, RngSeed(0)).is_err());
    }

    #[test]
    fn unnormalized_input_is_an_error() {
        let amps = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            Statevector::from_amplitudes(amps),
            Err(QampError::NormDrift { .. })
        ));
    }
}
