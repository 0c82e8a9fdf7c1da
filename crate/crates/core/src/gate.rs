//! Single-qubit gates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// 2×2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Tolerance used when a gate matrix is checked for unitarity.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A single-qubit gate. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    /// exp(-iθY/2)
    RotY(f64),
    /// exp(-iφZ/2)
    RotZ(f64),
    /// diag(1, e^{iα})
    Phase(f64),
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate {
    pub fn matrix(&self) -> Matrix2 {
        let zero = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match *self {
            Gate::PauliX => [[zero, one], [one, zero]],
            Gate::PauliY => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
            Gate::PauliZ => [[one, zero], [zero, -one]],
            Gate::Hadamard => {
                let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::RotY(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            Gate::RotZ(phi) => [
                [Complex64::from_polar(1.0, -phi / 2.0), zero],
                [zero, Complex64::from_polar(1.0, phi / 2.0)],
            ],
            Gate::Phase(alpha) => [[one, zero], [zero, Complex64::from_polar(1.0, alpha)]],
        }
    }

    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::RotY(t) => Gate::RotY(-t),
            Gate::RotZ(t) => Gate::RotZ(-t),
            Gate::Phase(t) => Gate::Phase(-t),
            g => g,
        }
    }

    /// Largest entrywise deviation of U·U† from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let u = self.matrix();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let entry = u[i][0] * u[j][0].conj() + u[i][1] * u[j][1].conj();
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((entry - c(expected, 0.0)).norm());
            }
        }
        worst
    }
}
