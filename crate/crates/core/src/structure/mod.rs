//! Structure morphisms between Mor presentations, defined on generators by
//! slicing their defining diagrams with dual matrix-unit functionals, and
//! then verified.

mod composition;
mod direct_sum;
mod exp_law;
mod tensor_split;

pub use composition::{coassociativity, composition_map, Coassociativity, Composition};
pub use direct_sum::{direct_sum_split, direct_sum_split_into_sum, DirectSumSplit};
pub use exp_law::{exp_law_maps, ExpLaw, ExpLawChecks};
pub use tensor_split::{tensor_split, TensorSplit};

use num_traits::{One, Zero};

use crate::fd_algebra::{FdAlgebra, StarHom};
use crate::mor::{HomError, MorError, MorPresentation};
use crate::presentation::{Character, EqualityVerdict, VerdictStatus};
use crate::scalar::GaussRat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error(transparent)]
    Mor(#[from] MorError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("precondition failed: target algebra {0} is not commutative")]
    NoncommutativeTarget(String),
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
}

/// `equal` if all are equal, `distinct` if any is, else `unknown`.
pub fn combine<'a>(verdicts: impl IntoIterator<Item = &'a EqualityVerdict>) -> VerdictStatus {
    combine_status(verdicts.into_iter().map(EqualityVerdict::status))
}

pub fn combine_status(statuses: impl IntoIterator<Item = VerdictStatus>) -> VerdictStatus {
    let mut s = VerdictStatus::Equal;
    for v in statuses {
        match v {
            VerdictStatus::Distinct => return VerdictStatus::Distinct,
            VerdictStatus::Unknown => s = VerdictStatus::Unknown,
            VerdictStatus::Equal => {}
        }
    }
    s
}

/// Gelfand duality for commutative algebras: points are indexed by blocks,
/// and maps between finite sets stand in for characters.
pub mod classical {
    use super::*;

    /// The dual `f̂: points(B₂) → points(B₁)` of `f: B₁ → B₂` between
    /// commutative algebras: `f(e_t) = Σ_{f̂(s) = t} e_s`.
    pub fn gelfand_dual(f: &StarHom) -> Option<Vec<usize>> {
        if !f.source().is_commutative() || !f.target().is_commutative() {
            return None;
        }
        let mut dual = vec![usize::MAX; f.target().dim()];
        for t in 0..f.source().dim() {
            for (s, c) in f.image(t).coords().iter().enumerate() {
                if c.is_one() {
                    dual[s] = t;
                }
            }
        }
        dual.iter().all(|&t| t != usize::MAX).then_some(dual)
    }

    /// All maps `{0..n} → {0..m}`, as vectors of images.
    pub fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| (0..m).map(move |y| [v.clone(), vec![y]].concat())).collect();
        }
        out
    }

    /// The character of `Mor(ℂ^m, ℂ^n)` for the map `h: points(C) → points(B)`:
    /// `x_{t,α} ↦ [h(α) = t]`.
    pub fn map_character(m: &MorPresentation, h: &[usize]) -> Character {
        let mut values = vec![GaussRat::zero(); m.base().num_generators()];
        for (alpha, &t) in h.iter().enumerate() {
            values[m.symbol(t, alpha) as usize] = GaussRat::one();
        }
        Character::new(values)
    }

    /// Inverse of [`map_character`], when the character has that form.
    pub fn character_map(m: &MorPresentation, c: &Character) -> Option<Vec<usize>> {
        let n_src = m.tableau().len();
        (0..m.target().dim())
            .map(|alpha| {
                let hits: Vec<usize> = (0..n_src).filter(|&t| c.value(m.symbol(t, alpha)).is_one()).collect();
                match hits.as_slice() {
                    [t] => Some(*t),
                    _ => None,
                }
            })
            .collect()
    }

    /// The map dual to `Δ` on a pair of classical points: `χ_{h₁} ⊗ χ_{h₂}`
    /// pulled back along `Δ`, read back as a map. Expected to be `h₂ ∘ h₁`.
    pub fn dual_composition(delta: &super::Composition, h_cd: &[usize], h_bc: &[usize]) -> Option<Vec<usize>> {
        let mut values = map_character(&delta.cd, h_cd).values();
        values.extend(map_character(&delta.bc, h_bc).values());
        let pulled = Character::new(values).pull_back(delta.psi.images());
        character_map(&delta.bd, &pulled)
    }

    /// `ℂ^n`.
    pub fn points(n: usize) -> FdAlgebra {
        FdAlgebra::commutative(n).expect("n ≥ 1")
    }
}
