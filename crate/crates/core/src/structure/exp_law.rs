use crate::fd_algebra::{tensor, FdAlgebra, TensorAlgebra};
use crate::mor::{build_mor, MorPresentation, MorSource, PresentedHom, QuantumFamily, TensorPoly};
use crate::presentation::{EqualityVerdict, FreeStarPoly, Oracle, VerdictStatus};

use super::{combine, combine_status, StructureError};

/// The exponential law `Mor(B, C₁⊗C₂) ≅ Mor(Mor(B, C₁), C₂)`.
#[derive(Debug, Clone)]
pub struct ExpLaw {
    pub c1c2: TensorAlgebra,
    /// `Mor(B, C₁⊗C₂)`, generators `x_{t,(α,β)}`.
    pub joint: MorPresentation,
    /// `Mor(B, C₁)`, generators `y_{t,α}`.
    pub inner: MorPresentation,
    /// `Mor(Mor(B, C₁), C₂)`, generators `z_{(t,α),β}`.
    pub nested: MorPresentation,
    /// `x_{t,(α,β)} ↦ z_{(t,α),β}`.
    pub psi: PresentedHom,
    /// `z_{(t,α),β} ↦ x_{t,(α,β)}`.
    pub psi_prime: PresentedHom,
    /// `y_{t,α} ↦ Σ_β u_β ⊗ x_{t,(α,β)}`.
    pub gamma: QuantumFamily,
}

/// Verdicts for `Ψ'Ψ = id`, `ΨΨ' = id` and `(id⊗Ψ)Γ = Φ`, each per generator.
#[derive(Debug, Clone)]
pub struct ExpLawChecks {
    pub psi_prime_psi: Vec<EqualityVerdict>,
    pub psi_psi_prime: Vec<EqualityVerdict>,
    pub gamma_identity: Vec<EqualityVerdict>,
    pub gamma_welldef: Vec<EqualityVerdict>,
}

impl ExpLawChecks {
    pub fn status(&self) -> VerdictStatus {
        combine(
            self.psi_prime_psi
                .iter()
                .chain(&self.psi_psi_prime)
                .chain(&self.gamma_identity)
                .chain(&self.gamma_welldef),
        )
    }
}

pub fn exp_law_maps(
    b: impl Into<MorSource>,
    c1: &FdAlgebra,
    c2: &FdAlgebra,
    oracle: &Oracle,
) -> Result<ExpLaw, StructureError> {
    let b = b.into();
    let c1c2 = tensor(c1, c2);
    let joint = build_mor(b.clone(), c1c2.algebra())?;
    let inner = build_mor(b, c1)?;
    let nested = build_mor(inner.base().clone(), c2)?;
    let n_src = inner.tableau().len();
    let z = |t: usize, a: usize, beta: usize| nested.symbol(inner.symbol(t, a) as usize, beta);

    let mut psi_images = vec![FreeStarPoly::zero(); joint.base().num_generators()];
    let mut psi_prime_images = vec![FreeStarPoly::zero(); nested.base().num_generators()];
    let mut gamma_images = Vec::with_capacity(inner.base().num_generators());
    for t in 0..n_src {
        for a in 0..c1.dim() {
            for beta in 0..c2.dim() {
                let x = joint.symbol(t, c1c2.pair_index(a, beta));
                psi_images[x as usize] = FreeStarPoly::generator(z(t, a, beta));
                psi_prime_images[z(t, a, beta) as usize] = FreeStarPoly::generator(x);
            }
        }
    }
    let mut by_symbol = vec![(0, 0); inner.base().num_generators()];
    for t in 0..n_src {
        for a in 0..c1.dim() {
            by_symbol[inner.symbol(t, a) as usize] = (t, a);
        }
    }
    for &(t, a) in &by_symbol {
        let comps = (0..c2.dim()).map(|beta| joint.symbol_poly(t, c1c2.pair_index(a, beta))).collect();
        gamma_images.push(TensorPoly::from_components(c2, comps));
    }
    let psi = PresentedHom::new(joint.base().clone(), nested.base().clone(), psi_images, oracle)?.named("psi");
    let psi_prime =
        PresentedHom::new(nested.base().clone(), joint.base().clone(), psi_prime_images, oracle)?.named("psi'");
    let gamma = QuantumFamily::new(inner.base().clone(), c2.clone(), joint.base().clone(), gamma_images)?;
    Ok(ExpLaw { c1c2, joint, inner, nested, psi, psi_prime, gamma })
}

impl ExpLaw {
    pub fn check(&self, oracle: &Oracle) -> Result<ExpLawChecks, StructureError> {
        let round = self.psi_prime.after(&self.psi, false, oracle)?;
        let psi_prime_psi = round.agrees_with(&PresentedHom::identity(self.joint.base()), oracle)?;
        let round = self.psi.after(&self.psi_prime, false, oracle)?;
        let psi_psi_prime = round.agrees_with(&PresentedHom::identity(self.nested.base()), oracle)?;
        let phi = self.nested.canonical_phi();
        let mut gamma_identity = Vec::new();
        for (y, img) in self.gamma.images().iter().enumerate() {
            let pushed = img.map(|p| self.psi.apply(p));
            let expect = phi.image(y as u32);
            for (p, q) in pushed.components().iter().zip(expect.components()) {
                gamma_identity.push(oracle.is_zero(&p.sub(q), self.nested.base()));
            }
        }
        let gamma_welldef = self.gamma.check(oracle).into_iter().flatten().collect();
        Ok(ExpLawChecks { psi_prime_psi, psi_psi_prime, gamma_identity, gamma_welldef })
    }

    /// Well-definedness of `Ψ` and `Ψ'`.
    pub fn welldef_status(&self) -> VerdictStatus {
        combine_status([self.psi.status(), self.psi_prime.status()])
    }
}
