use std::sync::Arc;

use crate::fd_algebra::FdAlgebra;
use crate::mor::{build_mor, MorPresentation, MorSource, PresentedHom};
use crate::presentation::{EqualityVerdict, FreeStarPoly, Oracle, Presentation, VerdictStatus};

use super::{combine, StructureError};

/// `Ψ: Mor(B, D) → Mor(C, D) ⊗ Mor(B, C)`, from `Φ_{B,D} = (Φ_{C,D} ⊗ id)Φ_{B,C}`.
#[derive(Debug, Clone)]
pub struct Composition {
    /// `Mor(B, D)`, generators `w_{t,δ}`.
    pub bd: MorPresentation,
    /// `Mor(C, D)`, generators `v_{γ,δ}`.
    pub cd: MorPresentation,
    /// `Mor(B, C)`, generators `y_{t,γ}`.
    pub bc: MorPresentation,
    pub codomain: Arc<Presentation>,
    /// `w_{t,δ} ↦ Σ_γ v_{γ,δ} ⊗ y_{t,γ}`.
    pub psi: PresentedHom,
}

fn images(bd: &MorPresentation, cd: &MorPresentation, bc: &MorPresentation, codomain: &Presentation) -> Vec<FreeStarPoly> {
    let c_dim = bc.target().dim();
    let mut out = vec![FreeStarPoly::zero(); bd.base().num_generators()];
    for t in 0..bd.tableau().len() {
        for delta in 0..bd.target().dim() {
            let mut img = FreeStarPoly::zero();
            for gamma in 0..c_dim {
                let v = codomain.embed_factor(0, &cd.symbol_poly(gamma, delta));
                let y = codomain.embed_factor(1, &bc.symbol_poly(t, gamma));
                img = img.add(&v.mul(&y));
            }
            out[bd.symbol(t, delta) as usize] = img;
        }
    }
    out
}

pub fn composition_map(
    b: impl Into<MorSource>,
    c: &FdAlgebra,
    d: &FdAlgebra,
    oracle: &Oracle,
) -> Result<Composition, StructureError> {
    let b = b.into();
    let bd = build_mor(b.clone(), d)?;
    let cd = build_mor(c, d)?;
    let bc = build_mor(b, c)?;
    let codomain = Arc::new(Presentation::tensor(&[cd.base().as_ref(), bc.base().as_ref()]));
    if codomain.factors().map(<[_]>::len) != Some(2) {
        return Err(StructureError::SlotMismatch("Mor presentations must not be tensor presentations".into()));
    }
    let imgs = images(&bd, &cd, &bc, &codomain);
    let psi = PresentedHom::new(bd.base().clone(), codomain.clone(), imgs, oracle)?.named("delta");
    Ok(Composition { bd, cd, bc, codomain, psi })
}

/// `(id ⊗ Δ)Δ` and `(Δ ⊗ id)Δ` on `Mor(M, M)`, compared per generator.
#[derive(Debug, Clone)]
pub struct Coassociativity {
    pub delta: Composition,
    pub left: PresentedHom,
    pub right: PresentedHom,
    pub verdicts: Vec<EqualityVerdict>,
}

impl Coassociativity {
    pub fn status(&self) -> VerdictStatus {
        let maps = [&self.delta.psi, &self.left, &self.right];
        if maps.iter().any(|h| !h.is_well_defined()) {
            return super::combine_status(maps.iter().map(|h| h.status()).chain([VerdictStatus::Unknown]));
        }
        combine(&self.verdicts)
    }
}

pub fn coassociativity(m: &FdAlgebra, oracle: &Oracle) -> Result<Coassociativity, StructureError> {
    let delta = composition_map(m, m, m, oracle)?;
    let id = PresentedHom::identity(delta.bd.base());
    let id_delta = PresentedHom::tensor(&id, &delta.psi, oracle)?;
    let delta_id = PresentedHom::tensor(&delta.psi, &id, oracle)?;
    let left = id_delta.after(&delta.psi, false, oracle)?.named("(id⊗Δ)Δ");
    let right = delta_id.after(&delta.psi, false, oracle)?.named("(Δ⊗id)Δ");
    let verdicts = left.agrees_with(&right, oracle)?;
    Ok(Coassociativity { delta, left, right, verdicts })
}
