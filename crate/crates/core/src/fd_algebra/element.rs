use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{FdAlgebra, FdError, StarHom};
use crate::scalar::{push_term, GaussRat};

/// An element `Σ c_α e_α` of a finite-dimensional algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FdElement {
    pub(crate) algebra: FdAlgebra,
    pub(crate) coords: Vec<GaussRat>,
}

impl FdElement {
    pub fn zero(algebra: &FdAlgebra) -> Self {
        Self { algebra: algebra.clone(), coords: vec![GaussRat::zero(); algebra.dim()] }
    }

    pub fn from_coords(algebra: &FdAlgebra, coords: Vec<GaussRat>) -> Result<Self, FdError> {
        if coords.len() != algebra.dim() {
            return Err(FdError::ImageCount { expected: algebra.dim(), found: coords.len() });
        }
        Ok(Self { algebra: algebra.clone(), coords })
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[GaussRat] {
        &self.coords
    }

    pub fn coord(&self, index: usize) -> &GaussRat {
        &self.coords[index]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        Self { algebra: self.algebra.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Conjugate transpose, blockwise.
    pub fn adjoint(&self) -> Self {
        let mut out = FdElement::zero(&self.algebra);
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                out.coords[self.algebra.star_index(k)] = c.conj();
            }
        }
        out
    }

    pub fn add_scaled(&mut self, c: &GaussRat, other: &FdElement) {
        debug_assert_eq!(self.algebra, other.algebra);
        for (x, y) in self.coords.iter_mut().zip(&other.coords) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }

    fn mul_impl(&self, rhs: &FdElement) -> FdElement {
        assert_eq!(self.algebra, rhs.algebra, "product of elements from different algebras");
        let a = &self.algebra;
        let mut out = FdElement::zero(a);
        for (k, &b) in a.blocks().iter().enumerate() {
            let off = a.block_offset(k);
            for i in 0..b {
                for l in 0..b {
                    let x = &self.coords[off + i * b + l];
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..b {
                        let y = &rhs.coords[off + l * b + j];
                        if !y.is_zero() {
                            out.coords[off + i * b + j] += &(x * y);
                        }
                    }
                }
            }
        }
        out
    }
}

impl<'a> Mul<&'a FdElement> for &'a FdElement {
    type Output = FdElement;
    fn mul(self, rhs: &FdElement) -> FdElement {
        self.mul_impl(rhs)
    }
}

impl<'a> Add<&'a FdElement> for &'a FdElement {
    type Output = FdElement;
    fn add(self, rhs: &FdElement) -> FdElement {
        let mut out = self.clone();
        out.add_scaled(&GaussRat::one(), rhs);
        out
    }
}

impl<'a> Sub<&'a FdElement> for &'a FdElement {
    type Output = FdElement;
    fn sub(self, rhs: &FdElement) -> FdElement {
        let mut out = self.clone();
        out.add_scaled(&-GaussRat::one(), rhs);
        out
    }
}

impl Neg for &FdElement {
    type Output = FdElement;
    fn neg(self) -> FdElement {
        self.scale(&-GaussRat::one())
    }
}

/// Written in the workspace element syntax, e.g. `e[0,0,0] + 2 e[1,0,0]`.
impl fmt::Display for FdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                push_term(&mut out, c, &self.algebra.unit(k).to_string());
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for FdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A linear functional `x ↦ Σ c_α x_α` (bilinear pairing, no conjugation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional {
    algebra: FdAlgebra,
    coeffs: Vec<GaussRat>,
}

impl Functional {
    pub fn new(algebra: &FdAlgebra, coeffs: Vec<GaussRat>) -> Result<Self, FdError> {
        if coeffs.len() != algebra.dim() {
            return Err(FdError::ImageCount { expected: algebra.dim(), found: coeffs.len() });
        }
        Ok(Self { algebra: algebra.clone(), coeffs })
    }

    /// The dual basis functional `ω_α` with `ω_α(e_β) = δ_{αβ}`.
    pub fn dual(algebra: &FdAlgebra, index: usize) -> Self {
        let mut coeffs = vec![GaussRat::zero(); algebra.dim()];
        coeffs[index] = GaussRat::one();
        Self { algebra: algebra.clone(), coeffs }
    }

    /// Unnormalized trace: sum of diagonal coordinates.
    pub fn trace(algebra: &FdAlgebra) -> Self {
        let mut coeffs = vec![GaussRat::zero(); algebra.dim()];
        for k in algebra.diagonal_indices() {
            coeffs[k] = GaussRat::one();
        }
        Self { algebra: algebra.clone(), coeffs }
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn eval(&self, x: &FdElement) -> Result<GaussRat, FdError> {
        self.algebra.ensure_same(&x.algebra)?;
        Ok(self.eval_coords(&x.coords))
    }

    pub(crate) fn eval_coords(&self, coords: &[GaussRat]) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (c, x) in self.coeffs.iter().zip(coords) {
            if !c.is_zero() && !x.is_zero() {
                acc += &(c * x);
            }
        }
        acc
    }

    /// `ω ∘ g` for a hom `g` into this functional's algebra.
    pub fn pullback(&self, g: &StarHom) -> Result<Functional, FdError> {
        self.algebra.ensure_same(g.target())?;
        let coeffs = (0..g.source().dim()).map(|b| self.eval_coords(&g.image(b).coords)).collect();
        Ok(Functional { algebra: g.source().clone(), coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd_algebra::random::random_element;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adjoint_is_involutive_and_antimultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = FdAlgebra::new(&[1, 2]).unwrap();
        for _ in 0..20 {
            let x = random_element(&mut rng, &a);
            let y = random_element(&mut rng, &a);
            assert_eq!(x.adjoint().adjoint(), x);
            assert_eq!((&x * &y).adjoint(), &y.adjoint() * &x.adjoint());
        }
    }

    #[test]
    fn adjoint_of_matrix_unit_transposes() {
        let a = FdAlgebra::new(&[3]).unwrap();
        let i = GaussRat::i();
        let x = a.basis(1).scale(&i);
        assert_eq!(x.adjoint(), a.basis(a.star_index(1)).scale(&i.conj()));
    }

    #[test]
    fn associativity_and_distributivity_on_basis_triples() {
        let a = FdAlgebra::new(&[1, 2]).unwrap();
        let basis: Vec<_> = (0..a.dim()).map(|k| a.basis(k)).collect();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    assert_eq!(&(x * y) * z, x * &(y * z));
                    assert_eq!(x * &(y + z), &(x * y) + &(x * z));
                }
            }
        }
    }

    #[test]
    fn dual_basis_pairing() {
        let a = FdAlgebra::new(&[2, 1]).unwrap();
        for k in 0..a.dim() {
            let w = Functional::dual(&a, k);
            for l in 0..a.dim() {
                let v = w.eval(&a.basis(l)).unwrap();
                assert_eq!(v, if k == l { GaussRat::one() } else { GaussRat::zero() });
            }
        }
    }

    #[test]
    fn display_uses_element_syntax() {
        let a = FdAlgebra::new(&[1, 1]).unwrap();
        let x = &a.basis(0) + &a.basis(1).scale(&GaussRat::from_int(-2));
        assert_eq!(x.to_string(), "e[0,0,0] - 2 e[1,0,0]");
        assert_eq!(a.zero().to_string(), "0");
    }
}
