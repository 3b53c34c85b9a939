//! Finite-dimensional C*-algebras as multi-matrix algebras `M_{n1} ⊕ … ⊕ M_{nr}`.
//!
//! Every algebra carries its matrix-unit basis `e(k,i,j)`, indexed
//! lexicographically: block `k` first, then row `i`, then column `j`. All
//! coefficients are exact Gaussian rationals.

mod element;
mod hom;
pub mod linalg;
pub mod random;
mod tensor;

use std::fmt;
use std::sync::Arc;

pub use element::{FdElement, Functional};
pub use hom::{check_slice_identity, slice, StarHom};
pub use tensor::{direct_sum, tensor, DirectSum, TensorAlgebra};

use crate::scalar::GaussRat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FdError {
    #[error("invalid block shape {0:?}: blocks must be nonempty and positive")]
    InvalidShape(Vec<usize>),
    #[error("algebra mismatch: expected blocks {expected:?}, found {found:?}")]
    AlgebraMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("expected {expected} images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("not unital: image of the unit is {image}")]
    NotUnital { image: String },
    #[error("not multiplicative on the basis pair ({left}, {right})")]
    NotMultiplicative { left: MatrixUnit, right: MatrixUnit },
    #[error("not *-preserving on {unit}")]
    NotStarPreserving { unit: MatrixUnit },
    #[error("the square (id ⊗ Γ)Φ = Φ'Λ fails on basis element {unit}")]
    SquareNotCommuting { unit: MatrixUnit },
    #[error("map is not invertible")]
    Singular,
    #[error("no unital *-homomorphism exists from {source_blocks:?} to {target:?}")]
    NoHomomorphism { source_blocks: Vec<usize>, target: Vec<usize> },
}

/// Index of a matrix unit `e(block,row,col)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl MatrixUnit {
    pub fn new(block: usize, row: usize, col: usize) -> Self {
        Self { block, row, col }
    }

    pub fn transpose(self) -> Self {
        Self { block: self.block, row: self.col, col: self.row }
    }

    pub fn is_diagonal(self) -> bool {
        self.row == self.col
    }

    /// Suffix used in generator names: `k_i_j`.
    pub fn suffix(self) -> String {
        format!("{}_{}_{}", self.block, self.row, self.col)
    }
}

impl fmt::Display for MatrixUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{},{}]", self.block, self.row, self.col)
    }
}

/// `M_{b0} ⊕ M_{b1} ⊕ …`, cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FdAlgebra {
    blocks: Arc<[usize]>,
    offsets: Arc<[usize]>,
}

impl FdAlgebra {
    pub fn new(blocks: &[usize]) -> Result<Self, FdError> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(FdError::InvalidShape(blocks.to_vec()));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0;
        for &b in blocks {
            offsets.push(acc);
            acc += b * b;
        }
        offsets.push(acc);
        Ok(Self { blocks: blocks.into(), offsets: offsets.into() })
    }

    /// `ℂ^n`, the commutative algebra of functions on `n` points.
    pub fn commutative(n: usize) -> Result<Self, FdError> {
        Self::new(&vec![1; n])
    }

    /// The full matrix algebra `M_n`.
    pub fn full_matrix(n: usize) -> Result<Self, FdError> {
        Self::new(&[n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.blocks.len()]
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&b| b == 1)
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn index(&self, u: MatrixUnit) -> usize {
        let b = self.blocks[u.block];
        debug_assert!(u.row < b && u.col < b);
        self.offsets[u.block] + u.row * b + u.col
    }

    pub fn unit(&self, index: usize) -> MatrixUnit {
        let block = self.offsets.partition_point(|&o| o <= index) - 1;
        let b = self.blocks[block];
        let local = index - self.offsets[block];
        MatrixUnit { block, row: local / b, col: local % b }
    }

    pub fn units(&self) -> impl Iterator<Item = MatrixUnit> + '_ {
        (0..self.dim()).map(move |k| self.unit(k))
    }

    /// Index of `e_α*`, the transposed matrix unit.
    pub fn star_index(&self, index: usize) -> usize {
        self.index(self.unit(index).transpose())
    }

    /// `e_a · e_b`: `Some(c)` when the product is the matrix unit `e_c`, `None` when zero.
    pub fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        let (ua, ub) = (self.unit(a), self.unit(b));
        (ua.block == ub.block && ua.col == ub.row)
            .then(|| self.index(MatrixUnit::new(ua.block, ua.row, ub.col)))
    }

    /// Indices of the diagonal matrix units, whose sum is the unit.
    pub fn diagonal_indices(&self) -> Vec<usize> {
        self.units().filter(|u| u.is_diagonal()).map(|u| self.index(u)).collect()
    }

    pub fn zero(&self) -> FdElement {
        FdElement::zero(self)
    }

    pub fn one(&self) -> FdElement {
        let mut x = FdElement::zero(self);
        for k in self.diagonal_indices() {
            x.coords[k] = GaussRat::from_int(1);
        }
        x
    }

    pub fn basis(&self, index: usize) -> FdElement {
        let mut x = FdElement::zero(self);
        x.coords[index] = GaussRat::from_int(1);
        x
    }

    pub fn ensure_same(&self, other: &FdAlgebra) -> Result<(), FdError> {
        if self == other {
            Ok(())
        } else {
            Err(FdError::AlgebraMismatch {
                expected: self.blocks.to_vec(),
                found: other.blocks.to_vec(),
            })
        }
    }
}

impl fmt::Debug for FdAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FdAlgebra{:?}", &*self.blocks)
    }
}

impl fmt::Display for FdAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "blocks [{}]", parts.join(","))
    }
}
