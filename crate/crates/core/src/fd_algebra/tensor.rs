use super::{FdAlgebra, FdElement, MatrixUnit};

/// `A ⊗ B` together with the bijection between pairs of matrix units and
/// matrix units of the product.
///
/// Block `(k,l)` of the product is block `k·|B| + l` of size `a_k·b_l`;
/// `e(k,i,j) ⊗ f(l,i',j')` is the unit at row `i·b_l + i'`, column `j·b_l + j'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorAlgebra {
    left: FdAlgebra,
    right: FdAlgebra,
    algebra: FdAlgebra,
}

pub fn tensor(left: &FdAlgebra, right: &FdAlgebra) -> TensorAlgebra {
    let blocks: Vec<usize> =
        left.blocks().iter().flat_map(|&a| right.blocks().iter().map(move |&b| a * b)).collect();
    TensorAlgebra {
        left: left.clone(),
        right: right.clone(),
        algebra: FdAlgebra::new(&blocks).expect("tensor of valid algebras is valid"),
    }
}

impl TensorAlgebra {
    pub fn left(&self) -> &FdAlgebra {
        &self.left
    }

    pub fn right(&self) -> &FdAlgebra {
        &self.right
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        let (ua, ub) = (self.left.unit(a), self.right.unit(b));
        let nb = self.right.blocks().len();
        let bl = self.right.blocks()[ub.block];
        self.algebra.index(MatrixUnit::new(
            ua.block * nb + ub.block,
            ua.row * bl + ub.row,
            ua.col * bl + ub.col,
        ))
    }

    pub fn split_index(&self, c: usize) -> (usize, usize) {
        let u = self.algebra.unit(c);
        let nb = self.right.blocks().len();
        let (ka, kb) = (u.block / nb, u.block % nb);
        let bl = self.right.blocks()[kb];
        (
            self.left.index(MatrixUnit::new(ka, u.row / bl, u.col / bl)),
            self.right.index(MatrixUnit::new(kb, u.row % bl, u.col % bl)),
        )
    }

    /// `x ⊗ y`.
    pub fn pure(&self, x: &FdElement, y: &FdElement) -> FdElement {
        assert_eq!(x.algebra(), &self.left);
        assert_eq!(y.algebra(), &self.right);
        let mut out = FdElement::zero(&self.algebra);
        for (a, cx) in x.coords().iter().enumerate() {
            if num_traits::Zero::is_zero(cx) {
                continue;
            }
            for (b, cy) in y.coords().iter().enumerate() {
                if !num_traits::Zero::is_zero(cy) {
                    out.coords[self.pair_index(a, b)] = cx * cy;
                }
            }
        }
        out
    }
}

/// `A_1 ⊕ … ⊕ A_n` with block concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectSum {
    parts: Vec<FdAlgebra>,
    algebra: FdAlgebra,
    block_starts: Vec<usize>,
}

pub fn direct_sum(parts: &[FdAlgebra]) -> DirectSum {
    assert!(!parts.is_empty(), "direct sum of no algebras");
    let mut blocks = Vec::new();
    let mut block_starts = Vec::new();
    for p in parts {
        block_starts.push(blocks.len());
        blocks.extend_from_slice(p.blocks());
    }
    DirectSum {
        parts: parts.to_vec(),
        algebra: FdAlgebra::new(&blocks).expect("sum of valid algebras is valid"),
        block_starts,
    }
}

impl DirectSum {
    pub fn parts(&self) -> &[FdAlgebra] {
        &self.parts
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    /// Matrix unit of summand `part` as a matrix unit of the sum.
    pub fn inject_index(&self, part: usize, index: usize) -> usize {
        let u = self.parts[part].unit(index);
        self.algebra.index(MatrixUnit::new(u.block + self.block_starts[part], u.row, u.col))
    }

    /// Inverse of [`inject_index`](Self::inject_index).
    pub fn locate(&self, index: usize) -> (usize, usize) {
        let u = self.algebra.unit(index);
        let part = self.block_starts.partition_point(|&s| s <= u.block) - 1;
        let local = MatrixUnit::new(u.block - self.block_starts[part], u.row, u.col);
        (part, self.parts[part].index(local))
    }
}
