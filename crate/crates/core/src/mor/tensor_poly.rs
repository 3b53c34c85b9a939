use std::sync::Arc;

use num_traits::Zero;

use super::hom::{HomError, PresentedHom};
use crate::fd_algebra::{FdAlgebra, Functional, StarHom};
use crate::presentation::{EqualityVerdict, Evaluation, FreeStarPoly, Letter, Oracle, Presentation};
use crate::scalar::GaussRat;

/// An element `Σ_α u_α ⊗ p_α` of `C ⊗ A`, with `u_α` the matrix units of a
/// multi-matrix algebra `C` and `p_α` polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoly {
    algebra: FdAlgebra,
    comps: Vec<FreeStarPoly>,
}

impl TensorPoly {
    pub fn zero(algebra: &FdAlgebra) -> Self {
        Self { algebra: algebra.clone(), comps: vec![FreeStarPoly::zero(); algebra.dim()] }
    }

    pub fn one(algebra: &FdAlgebra) -> Self {
        let mut out = Self::zero(algebra);
        for d in algebra.diagonal_indices() {
            out.comps[d] = FreeStarPoly::one();
        }
        out
    }

    /// `u_α ⊗ p`.
    pub fn pure(algebra: &FdAlgebra, alpha: usize, p: FreeStarPoly) -> Self {
        let mut out = Self::zero(algebra);
        out.comps[alpha] = p;
        out
    }

    pub fn from_components(algebra: &FdAlgebra, comps: Vec<FreeStarPoly>) -> Self {
        assert_eq!(comps.len(), algebra.dim());
        Self { algebra: algebra.clone(), comps }
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn component(&self, alpha: usize) -> &FreeStarPoly {
        &self.comps[alpha]
    }

    pub fn components(&self) -> &[FreeStarPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(FreeStarPoly::is_zero)
    }

    /// `(u_α ⊗ p)* = u_{α*} ⊗ p*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (a, p) in self.comps.iter().enumerate() {
            out.comps[self.algebra.star_index(a)] = p.adjoint();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-GaussRat::from_int(1), other);
        out
    }

    /// `(ω ⊗ id)`: `Σ_α ω(u_α) p_α`.
    pub fn slice(&self, omega: &Functional) -> FreeStarPoly {
        let mut out = FreeStarPoly::zero();
        for (a, p) in self.comps.iter().enumerate() {
            out.add_scaled(&omega.coeffs()[a], p);
        }
        out
    }

    /// `(g ⊗ id)` for a *-homomorphism `g` out of `C`.
    pub fn push_forward(&self, g: &StarHom) -> Self {
        let mut out = Self::zero(g.target());
        for (a, p) in self.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (b, c) in g.image(a).coords().iter().enumerate() {
                if !c.is_zero() {
                    out.comps[b].add_scaled(c, p);
                }
            }
        }
        out
    }

    /// Applies `f` to every polynomial leg.
    pub fn map(&self, f: impl Fn(&FreeStarPoly) -> FreeStarPoly) -> Self {
        Self { algebra: self.algebra.clone(), comps: self.comps.iter().map(f).collect() }
    }
}

impl Evaluation for TensorPoly {
    fn zero_like(&self) -> Self {
        TensorPoly::zero(&self.algebra)
    }

    fn add_scaled(&mut self, c: &GaussRat, other: &Self) {
        for (x, y) in self.comps.iter_mut().zip(&other.comps) {
            x.add_scaled(c, y);
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = TensorPoly::zero(&self.algebra);
        for (a, p) in self.comps.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let u = self.algebra.unit(a);
            let blk = self.algebra.blocks()[u.block];
            // u_a u_b ≠ 0 only for b in the same block with row = u.col
            for col in 0..blk {
                let b = self.algebra.index(crate::fd_algebra::MatrixUnit::new(u.block, u.col, col));
                let q = &other.comps[b];
                if q.is_zero() {
                    continue;
                }
                let c = self.algebra.product_index(a, b).expect("matching units multiply");
                let pq = p.mul(q);
                out.comps[c].add_scaled(&GaussRat::from_int(1), &pq);
            }
        }
        out
    }
}

/// A *-homomorphism `Φ: S → C ⊗ A` of presented algebras, given on the
/// generators of `S`.
#[derive(Debug, Clone)]
pub struct QuantumFamily {
    source: Arc<Presentation>,
    coefficients: FdAlgebra,
    target: Arc<Presentation>,
    images: Vec<TensorPoly>,
}

impl QuantumFamily {
    pub fn new(
        source: Arc<Presentation>,
        coefficients: FdAlgebra,
        target: Arc<Presentation>,
        images: Vec<TensorPoly>,
    ) -> Result<Self, HomError> {
        if images.len() != source.num_generators() {
            return Err(HomError::ImageCount { expected: source.num_generators(), found: images.len() });
        }
        for img in &images {
            if img.algebra() != &coefficients {
                return Err(HomError::Mismatch("tensor leg algebra".into()));
            }
            for p in img.components() {
                target.check_poly(p)?;
            }
        }
        Ok(Self { source, coefficients, target, images })
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn coefficients(&self) -> &FdAlgebra {
        &self.coefficients
    }

    pub fn images(&self) -> &[TensorPoly] {
        &self.images
    }

    pub fn image(&self, gen: u32) -> &TensorPoly {
        &self.images[gen as usize]
    }

    pub fn apply(&self, p: &FreeStarPoly) -> TensorPoly {
        p.evaluate(&TensorPoly::one(&self.coefficients), |l: Letter| {
            let img = &self.images[l.gen as usize];
            if l.star { img.adjoint() } else { img.clone() }
        })
    }

    /// Per relation of the source (then per self-adjoint generator), the
    /// verdict that every component of its image vanishes.
    pub fn check(&self, oracle: &Oracle) -> Vec<Vec<EqualityVerdict>> {
        use rayon::prelude::*;
        let checks = defining_polys(&self.source);
        checks
            .par_iter()
            .map(|r| {
                let img = self.apply(r);
                img.components().iter().map(|q| oracle.is_zero(q, &self.target)).collect()
            })
            .collect()
    }

    pub fn is_well_defined(&self, oracle: &Oracle) -> bool {
        self.check(oracle).iter().flatten().all(EqualityVerdict::is_equal)
    }

    /// The same map as a [`PresentedHom`] into the flat tensor presentation
    /// of `C ⊗ A`, with `C` presented by its matrix units.
    pub fn to_presented_hom(&self, oracle: &Oracle) -> Result<PresentedHom, HomError> {
        let c = Presentation::from_fd(&self.coefficients);
        let cod = Presentation::tensor(&[&c, &self.target]);
        let offset = c.num_generators() as u32;
        let images = self
            .images
            .iter()
            .map(|img| {
                let mut out = FreeStarPoly::zero();
                for (a, p) in img.components().iter().enumerate() {
                    let p = p.map_letters(|l| Letter { gen: l.gen + offset, star: l.star });
                    out = out.add(&FreeStarPoly::generator(a as u32).mul(&p));
                }
                out
            })
            .collect();
        PresentedHom::new(self.source.clone(), Arc::new(cod), images, oracle)
    }
}

/// The relations of `p` followed by `x* − x` for each self-adjoint generator.
pub fn defining_polys(p: &Presentation) -> Vec<FreeStarPoly> {
    let mut out = p.relations().to_vec();
    for (g, gen) in p.generators().iter().enumerate() {
        if gen.self_adjoint {
            let g = g as u32;
            out.push(FreeStarPoly::letter(Letter::starred(g)).sub(&FreeStarPoly::generator(g)));
        }
    }
    out
}

/// Labels matching [`defining_polys`].
pub fn defining_labels(p: &Presentation) -> Vec<String> {
    let mut out: Vec<String> = p.relations().iter().map(|r| p.show_relation(r)).collect();
    for gen in p.generators() {
        if gen.self_adjoint {
            out.push(format!("{0}^* = {0}", gen.name));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_poly_multiplication_follows_matrix_units() {
        let m2 = FdAlgebra::full_matrix(2).unwrap();
        let x = FreeStarPoly::generator(0);
        let y = FreeStarPoly::generator(1);
        // (e01 ⊗ x)(e10 ⊗ y) = e00 ⊗ xy
        let a = TensorPoly::pure(&m2, 1, x.clone());
        let b = TensorPoly::pure(&m2, 2, y.clone());
        assert_eq!(a.mul(&b), TensorPoly::pure(&m2, 0, x.mul(&y)));
        assert!(b.mul(&b).is_zero());
        let one = TensorPoly::one(&m2);
        assert_eq!(one.mul(&a), a);
        assert_eq!(a.adjoint(), TensorPoly::pure(&m2, 2, x.adjoint()));
    }
}
