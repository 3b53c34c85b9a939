use std::sync::Arc;

use crate::fd_algebra::FdAlgebra;
use crate::mor::{build_mor, MorPresentation, Preimage, PresentedHom};
use crate::presentation::{FreeStarPoly, Oracle, Presentation, VerdictStatus};

use super::{combine_status, StructureError};

/// `Ψ: Mor(B₁ ⊗ B₂, C) → Mor(B₁, C) ⊗ Mor(B₂, C)` for commutative `C`,
/// with `B₁ ⊗ B₂` presented as the tensor of the two matrix-unit presentations.
#[derive(Debug, Clone)]
pub struct TensorSplit {
    pub source: Arc<Presentation>,
    pub domain: MorPresentation,
    pub left: MorPresentation,
    pub right: MorPresentation,
    pub codomain: Arc<Presentation>,
    /// `x_{(k,t),α} ↦ y_{t,α}` for `k = 0` and `z_{t,α}` for `k = 1`.
    pub psi: PresentedHom,
    /// `x_{(0,t),α}` over `y_{t,α}` and `x_{(1,t),α}` over `z_{t,α}`.
    pub coverage: Vec<Preimage>,
}

impl TensorSplit {
    pub fn status(&self) -> VerdictStatus {
        let cover = self.coverage.iter().map(|p| match &p.verdict {
            Some(v) => v.status(),
            None => VerdictStatus::Unknown,
        });
        combine_status([self.psi.status()].into_iter().chain(cover))
    }
}

pub fn tensor_split(b1: &FdAlgebra, b2: &FdAlgebra, c: &FdAlgebra, oracle: &Oracle) -> Result<TensorSplit, StructureError> {
    if !c.is_commutative() {
        return Err(StructureError::NoncommutativeTarget(c.to_string()));
    }
    let source = Arc::new(Presentation::tensor(&[&Presentation::from_fd(b1), &Presentation::from_fd(b2)]));
    let domain = build_mor(source.clone(), c)?;
    let left = build_mor(b1, c)?;
    let right = build_mor(b2, c)?;
    let codomain = Arc::new(Presentation::tensor(&[left.base().as_ref(), right.base().as_ref()]));
    let factors = source.factors().expect("tensor");
    let slots = [(&left, factors[0].offset as usize, 0), (&right, factors[1].offset as usize, 1)];

    let mut psi_images = vec![FreeStarPoly::zero(); domain.base().num_generators()];
    let mut preimages = vec![FreeStarPoly::zero(); codomain.num_generators()];
    for (m, offset, k) in slots {
        for t in 0..m.tableau().len() {
            for a in 0..c.dim() {
                let slot = codomain.embed_factor(k, &m.symbol_poly(t, a));
                let x = domain.symbol(offset + t, a);
                psi_images[x as usize] = slot.clone();
                let g = slot.max_gen().expect("generator") as usize;
                preimages[g] = FreeStarPoly::generator(x);
            }
        }
    }
    let psi = PresentedHom::new(domain.base().clone(), codomain.clone(), psi_images, oracle)?.named("psi");
    let coverage = preimages
        .into_iter()
        .enumerate()
        .map(|(g, pre)| Preimage::verify(&psi, g as u32, Some(pre), oracle))
        .collect();
    Ok(TensorSplit { source, domain, left, right, codomain, psi, coverage })
}
