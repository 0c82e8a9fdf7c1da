//! Statevector simulation of Grover search, Grover-style amplitude
//! estimation and quantum Monte Carlo mean estimation, with a Gaussian
//! conditional-independence credit-risk model and a query-complexity
//! benchmark harness.
//!
//! Qubit 0 is the least-significant bit of a basis index throughout.

pub mod bench;
pub mod circuit;
pub mod credit;
pub mod error;
pub mod estimation;
pub mod gate;
pub mod grover;
pub mod permutation;
pub mod qmc;
pub mod rng;
pub mod statevector;
pub mod stats;

pub use circuit::{Circuit, StatePreparation, StateTransform};
pub use error::{QampError, Result};
pub use gate::Gate;
pub use permutation::Permutation;
pub use rng::RngSeed;
pub use statevector::{BasisPredicate, Statevector};
