//! Basis-state permutations.
//!
//! Classical reversible subcircuits (adders, comparators) are simulated as
//! permutations of the computational basis. A permutation is exactly unitary,
//! so applying one never changes the norm.

use crate::error::{QampError, Result};

/// A bijection on the basis indices `0..dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image table: index `i` maps to `images[i]`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let dim = images.len();
        let mut seen = vec![false; dim];
        for (i, &img) in images.iter().enumerate() {
            if img >= dim {
                return Err(QampError::NotBijective(format!(
                    "image {img} of index {i} outside 0..{dim}"
                )));
            }
            if std::mem::replace(&mut seen[img], true) {
                return Err(QampError::NotBijective(format!(
                    "index {img} is the image of more than one input"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new((0..dim).map(f).collect())
    }

    pub fn identity(dim: usize) -> Self {
        Permutation {
            images: (0..dim).collect(),
        }
    }

    /// Swaps basis indices `a` and `b`.
    pub fn transposition(dim: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..dim).collect();
        if a >= dim || b >= dim {
            return Err(QampError::NotBijective(format!(
                "transposition ({a} {b}) outside 0..{dim}"
            )));
        }
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, index: usize) -> usize {
        self.images[index]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_images() {
        let err = Permutation::new(vec![0, 0, 2, 3]).unwrap_err();
        assert!(matches!(err, QampError::NotBijective(_)));
    }

    #[test]
    fn rejects_out_of_range_images() {
        assert!(Permutation::new(vec![0, 4, 2, 3]).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let inv = p.inverse();
        for i in 0..4 {
            assert_eq!(inv.image(p.image(i)), i);
        }
    }
}
