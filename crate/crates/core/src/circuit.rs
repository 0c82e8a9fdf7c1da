//! Composable unitaries.
//!
//! A [`Circuit`] is an ordered list of operations on a fixed register. It is
//! the representation used for state preparations `A` and their inverses.

use std::sync::Arc;

use crate::error::{QampError, Result};
use crate::gate::Gate;
use crate::permutation::Permutation;
use crate::statevector::{Statevector, MAX_QUBITS};

/// Anything that maps a statevector to a statevector in place.
pub trait StateTransform {
    fn apply(&self, state: &mut Statevector) -> Result<()>;
}

#[derive(Debug, Clone)]
pub enum Op {
    Gate {
        gate: Gate,
        target: usize,
    },
    Controlled {
        gate: Gate,
        controls: Vec<usize>,
        target: usize,
    },
    /// Uniformly controlled Y rotation, see [`Statevector::apply_multiplexed_ry`].
    MultiplexedRy {
        controls: Vec<usize>,
        target: usize,
        angles: Vec<f64>,
    },
    Permutation(Arc<Permutation>),
}

impl Op {
    fn inverse(&self) -> Op {
        match self {
            Op::Gate { gate, target } => Op::Gate {
                gate: gate.adjoint(),
                target: *target,
            },
            Op::Controlled {
                gate,
                controls,
                target,
            } => Op::Controlled {
                gate: gate.adjoint(),
                controls: controls.clone(),
                target: *target,
            },
            Op::MultiplexedRy {
                controls,
                target,
                angles,
            } => Op::MultiplexedRy {
                controls: controls.clone(),
                target: *target,
                angles: angles.iter().map(|a| -a).collect(),
            },
            Op::Permutation(p) => Op::Permutation(Arc::new(p.inverse())),
        }
    }

    pub fn apply(&self, state: &mut Statevector) -> Result<()> {
        match self {
            Op::Gate { gate, target } => state.apply_gate(*gate, *target),
            Op::Controlled {
                gate,
                controls,
                target,
            } => state.apply_controlled_gate(*gate, controls, *target),
            Op::MultiplexedRy {
                controls,
                target,
                angles,
            } => state.apply_multiplexed_ry(controls, *target, angles),
            Op::Permutation(p) => state.apply_permutation(p),
        }
    }
}

/// An ordered sequence of operations on `num_qubits` qubits.
#[derive(Debug, Clone)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<Op>,
}

/// A unitary `A` whose action on |0…0⟩ prepares the state of interest.
pub type StatePreparation = Circuit;

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(QampError::InvalidArgument(format!(
                "register width must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        Ok(Circuit {
            num_qubits,
            ops: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn check_qubits(&self, controls: &[usize], target: usize) -> Result<()> {
        let mut used = 0usize;
        for &q in controls.iter().chain(std::iter::once(&target)) {
            if q >= self.num_qubits {
                return Err(QampError::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
            if used & (1 << q) != 0 {
                return Err(QampError::OverlappingQubits(q));
            }
            used |= 1 << q;
        }
        Ok(())
    }

    pub fn gate(&mut self, gate: Gate, target: usize) -> Result<&mut Self> {
        self.check_qubits(&[], target)?;
        self.ops.push(Op::Gate { gate, target });
        Ok(self)
    }

    pub fn controlled(
        &mut self,
        gate: Gate,
        controls: &[usize],
        target: usize,
    ) -> Result<&mut Self> {
        self.check_qubits(controls, target)?;
        self.ops.push(Op::Controlled {
            gate,
            controls: controls.to_vec(),
            target,
        });
        Ok(self)
    }

    pub fn multiplexed_ry(
        &mut self,
        controls: &[usize],
        target: usize,
        angles: Vec<f64>,
    ) -> Result<&mut Self> {
        self.check_qubits(controls, target)?;
        if angles.len() != 1usize << controls.len() {
            return Err(QampError::DimensionMismatch {
                expected: 1 << controls.len(),
                actual: angles.len(),
            });
        }
        self.ops.push(Op::MultiplexedRy {
            controls: controls.to_vec(),
            target,
            angles,
        });
        Ok(self)
    }

    pub fn permutation(&mut self, perm: Permutation) -> Result<&mut Self> {
        let dim = 1usize << self.num_qubits;
        if perm.dim() != dim {
            return Err(QampError::DimensionMismatch {
                expected: dim,
                actual: perm.dim(),
            });
        }
        self.ops.push(Op::Permutation(Arc::new(perm)));
        Ok(self)
    }

    /// Hadamard on every qubit.
    pub fn hadamard_all(num_qubits: usize) -> Result<Self> {
        let mut c = Circuit::new(num_qubits)?;
        for q in 0..num_qubits {
            c.gate(Gate::Hadamard, q)?;
        }
        Ok(c)
    }

    /// Appends the operations of `other`, which must act on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_qubits != self.num_qubits {
            return Err(QampError::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }

    /// Appends a loader mapping |0⟩ on `qubits` to Σ_x √probs[x] |x⟩.
    ///
    /// `qubits[0]` is the low bit of `x`. The loader is a cascade of uniformly
    /// controlled Y rotations, most significant qubit first, each conditioned
    /// on the bits already written above it.
    pub fn load_distribution(&mut self, qubits: &[usize], probs: &[f64]) -> Result<&mut Self> {
        if probs.len() != 1usize << qubits.len() {
            return Err(QampError::DimensionMismatch {
                expected: 1 << qubits.len(),
                actual: probs.len(),
            });
        }
        for level in (0..qubits.len()).rev() {
            let controls = &qubits[level + 1..];
            let block = 1usize << (level + 1);
            let half = block / 2;
            let angles = probs
                .chunks(block)
                .map(|chunk| {
                    let total: f64 = chunk.iter().sum();
                    let upper: f64 = chunk[half..].iter().sum();
                    if total > 0.0 {
                        2.0 * (upper / total).clamp(0.0, 1.0).sqrt().asin()
                    } else {
                        0.0
                    }
                })
                .collect();
            self.multiplexed_ry(controls, qubits[level], angles)?;
        }
        Ok(self)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(Op::inverse).collect(),
        }
    }

    pub fn apply_inverse(&self, state: &mut Statevector) -> Result<()> {
        self.check_width(state)?;
        for op in self.ops.iter().rev() {
            op.inverse().apply(state)?;
        }
        state.check_norm()
    }

    fn check_width(&self, state: &Statevector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(QampError::DimensionMismatch {
                expected: self.num_qubits,
                actual: state.num_qubits(),
            });
        }
        Ok(())
    }

    /// A|0…0⟩.
    pub fn prepare(&self) -> Result<Statevector> {
        let mut state = Statevector::zero(self.num_qubits)?;
        self.apply(&mut state)?;
        Ok(state)
    }
}

impl StateTransform for Circuit {
    fn apply(&self, state: &mut Statevector) -> Result<()> {
        self.check_width(state)?;
        for op in &self.ops {
            op.apply(state)?;
        }
        state.check_norm()
    }
}
