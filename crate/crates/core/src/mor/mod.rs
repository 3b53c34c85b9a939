//! The quantum family of all morphisms `Mor(B, C)`: its presentation, the
//! canonical morphism `Φ: B → C ⊗ Mor(B, C)`, and induced morphisms.

mod eliminate;
mod hom;
mod induced;
mod recovery;
mod tensor_poly;

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

pub use eliminate::Elimination;
pub use hom::{HomError, PresentedHom};
pub use induced::{
    check_functor_laws, fd_hom_images, induced_mor, induced_mor_from_images, surjectivity_preimages, FunctorReport,
    Preimage,
};
pub use recovery::{recovery, Recovery};
pub use tensor_poly::{defining_labels, defining_polys, QuantumFamily, TensorPoly};

use crate::fd_algebra::{FdAlgebra, FdError, Functional};
use crate::presentation::{FreeStarPoly, Generator, Letter, Presentation, PresentationError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MorError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Fd(#[from] FdError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("source relations are not closed under adjoints")]
    NotStarClosed,
    #[error("{0}")]
    Mismatch(String),
}

/// The source `B` of `Mor(B, C)`: a multi-matrix algebra (presented by its
/// matrix units) or a finitely presented algebra.
#[derive(Debug, Clone)]
pub enum MorSource {
    Fd(FdAlgebra),
    Presented(Arc<Presentation>),
}

impl From<FdAlgebra> for MorSource {
    fn from(a: FdAlgebra) -> Self {
        MorSource::Fd(a)
    }
}

impl From<&FdAlgebra> for MorSource {
    fn from(a: &FdAlgebra) -> Self {
        MorSource::Fd(a.clone())
    }
}

impl From<Arc<Presentation>> for MorSource {
    fn from(p: Arc<Presentation>) -> Self {
        MorSource::Presented(p)
    }
}

impl From<Presentation> for MorSource {
    fn from(p: Presentation) -> Self {
        MorSource::Presented(Arc::new(p))
    }
}

/// `Mor(B, C)` with its tableau: `Φ(g_t) = Σ_α u_α ⊗ x_{t,α}` where
/// `x_{t,α}` is generator `tableau[t][α]` of `base`.
#[derive(Debug, Clone)]
pub struct MorPresentation {
    base: Arc<Presentation>,
    source: Arc<Presentation>,
    source_fd: Option<FdAlgebra>,
    target: FdAlgebra,
    tableau: Vec<Vec<u32>>,
}

/// Presentation of `Mor(B, C)` on generators `x_<tname>_<k>_<i>_<j>`.
pub fn build_mor(b: impl Into<MorSource>, c: &FdAlgebra) -> Result<MorPresentation, MorError> {
    let (source, source_fd) = match b.into() {
        MorSource::Fd(a) => (Arc::new(Presentation::from_fd(&a)), Some(a)),
        MorSource::Presented(p) => (p, None),
    };
    if !source.is_star_closed() {
        return Err(MorError::NotStarClosed);
    }
    let dim = c.dim();
    let mut gens = Vec::with_capacity(source.num_generators() * dim);
    let mut tableau = Vec::with_capacity(source.num_generators());
    for g in source.generators() {
        let mut row = Vec::with_capacity(dim);
        for u in c.units() {
            row.push(gens.len() as u32);
            gens.push(Generator::new(format!("x_{}_{}", g.name, u.suffix()), g.self_adjoint && u.is_diagonal()));
        }
        tableau.push(row);
    }
    let phi: Vec<TensorPoly> = tableau
        .iter()
        .map(|row| {
            TensorPoly::from_components(c, row.iter().map(|&x| FreeStarPoly::generator(x)).collect())
        })
        .collect();
    let one = TensorPoly::one(c);
    let relations: Vec<FreeStarPoly> = defining_polys(&source)
        .par_iter()
        .map(|r| {
            r.evaluate(&one, |l: Letter| {
                let img = &phi[l.gen as usize];
                if l.star { img.adjoint() } else { img.clone() }
            })
            .components()
            .to_vec()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let base = Presentation::new(gens, relations)?;
    Ok(MorPresentation { base: Arc::new(base), source, source_fd, target: c.clone(), tableau })
}

impl MorPresentation {
    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    /// `B` when it was given as a multi-matrix algebra.
    pub fn source_fd(&self) -> Option<&FdAlgebra> {
        self.source_fd.as_ref()
    }

    pub fn target(&self) -> &FdAlgebra {
        &self.target
    }

    pub fn tableau(&self) -> &[Vec<u32>] {
        &self.tableau
    }

    /// Generator index of `x_{t,α}`.
    pub fn symbol(&self, t: usize, alpha: usize) -> u32 {
        self.tableau[t][alpha]
    }

    pub fn symbol_poly(&self, t: usize, alpha: usize) -> FreeStarPoly {
        FreeStarPoly::generator(self.symbol(t, alpha))
    }

    /// `Φ = 𝔓_{B,C}: B → C ⊗ Mor(B, C)`.
    pub fn canonical_phi(&self) -> QuantumFamily {
        let images = self
            .tableau
            .iter()
            .map(|row| {
                TensorPoly::from_components(&self.target, row.iter().map(|&x| FreeStarPoly::generator(x)).collect())
            })
            .collect();
        QuantumFamily::new(self.source.clone(), self.target.clone(), self.base.clone(), images)
            .expect("tableau is well formed")
    }

    /// Checks `x_{t,α} = (ω_α ⊗ id)Φ(g_t)` literally for every `t, α`.
    pub fn tableau_consistent(&self) -> bool {
        let phi = self.canonical_phi();
        (0..self.tableau.len()).all(|t| {
            (0..self.target.dim()).all(|a| {
                phi.image(t as u32).slice(&Functional::dual(&self.target, a)) == self.symbol_poly(t, a)
            })
        })
    }

    /// The linear elimination pass: generators solved by a relation with a
    /// coefficient `±1` are substituted away.
    pub fn eliminate(&self) -> Elimination {
        Elimination::new(&self.base)
    }

    /// Presentation text followed by the tableau.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.base).unwrap();
        writeln!(s, "tableau").unwrap();
        for (t, row) in self.tableau.iter().enumerate() {
            for (a, &x) in row.iter().enumerate() {
                writeln!(s, "  {} {} -> {}", self.source.names()[t], self.target.unit(a), self.base.names()[x as usize])
                    .unwrap();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Oracle, DEFAULT_BUDGET};

    fn c(n: usize) -> FdAlgebra {
        FdAlgebra::commutative(n).unwrap()
    }

    #[test]
    fn generator_count_and_names() {
        let m = build_mor(c(2), &FdAlgebra::full_matrix(2).unwrap()).unwrap();
        assert_eq!(m.base().num_generators(), 2 * 4);
        assert_eq!(m.base().names()[0], "x_e0_0_0_0_0_0");
        assert_eq!(m.base().names()[1], "x_e0_0_0_0_0_1");
        assert!(m.base().generators()[0].self_adjoint);
        assert!(!m.base().generators()[1].self_adjoint);
        assert!(m.tableau_consistent());
    }

    #[test]
    fn magic_rectangle_relations() {
        let m = build_mor(c(2), &c(2)).unwrap();
        let base = m.base();
        let p = |t: usize, a: usize| m.symbol_poly(t, a);
        let one = FreeStarPoly::one();
        for a in 0..2 {
            for t in 0..2 {
                assert!(base.normal_form(&p(t, a).mul(&p(t, a)).sub(&p(t, a)), DEFAULT_BUDGET).unwrap().poly.is_zero());
            }
            assert!(base.normal_form(&p(0, a).mul(&p(1, a)), DEFAULT_BUDGET).unwrap().poly.is_zero());
            assert!(base.normal_form(&p(0, a).add(&p(1, a)).sub(&one), DEFAULT_BUDGET).unwrap().poly.is_zero());
        }
        // different rows do not commute
        let comm = p(0, 0).mul(&p(0, 1)).sub(&p(0, 1).mul(&p(0, 0)));
        assert!(!base.normal_form(&comm, DEFAULT_BUDGET).unwrap().poly.is_zero());
    }

    #[test]
    fn canonical_phi_is_well_defined() {
        for (b, cc) in [(c(2), c(2)), (c(2), FdAlgebra::full_matrix(2).unwrap()), (FdAlgebra::full_matrix(2).unwrap(), c(2))] {
            let m = build_mor(&b, &cc).unwrap();
            assert!(m.canonical_phi().is_well_defined(&Oracle::default()));
        }
    }

    #[test]
    fn canonical_phi_on_c2() {
        let m = build_mor(c(2), &c(2)).unwrap();
        let phi = m.canonical_phi();
        let e0 = phi.image(0);
        assert_eq!(e0.component(0), &m.symbol_poly(0, 0));
        assert_eq!(e0.component(1), &m.symbol_poly(0, 1));
        assert_eq!(phi.apply(&FreeStarPoly::one()), TensorPoly::one(&c(2)));
        let sq = phi.apply(&FreeStarPoly::generator(0).mul(&FreeStarPoly::generator(0)));
        for a in 0..2 {
            let d = sq.component(a).sub(e0.component(a));
            assert!(m.base().normal_form(&d, DEFAULT_BUDGET).unwrap().poly.is_zero());
        }
        let hom = phi.to_presented_hom(&Oracle::default()).unwrap();
        assert!(hom.is_well_defined());
    }

    #[test]
    fn serializes_tableau() {
        let m = build_mor(c(2), &c(1)).unwrap();
        let text = m.to_text();
        assert!(text.contains("e0_0_0 e[0,0,0] -> x_e0_0_0_0_0_0"));
    }
}
