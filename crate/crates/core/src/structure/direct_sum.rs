use std::sync::Arc;

use crate::fd_algebra::{direct_sum, DirectSum, FdAlgebra};
use crate::mor::{build_mor, MorPresentation, Preimage, PresentedHom};
use crate::presentation::{FreeStarPoly, Oracle, Presentation};

use super::StructureError;

/// `Ψ: Mor(⊕B_i, ⊕C_i) → ⊗_i Mor(B_i, C_i)`.
#[derive(Debug, Clone)]
pub struct DirectSumSplit {
    pub b_sum: DirectSum,
    pub c_sum: DirectSum,
    pub domain: MorPresentation,
    pub slots: Vec<MorPresentation>,
    pub psi: PresentedHom,
    /// A preimage of every slot generator, in slot order.
    pub coverage: Vec<Preimage>,
}

impl DirectSumSplit {
    /// Domain generators from a `B_i` and a `C_j` with `i ≠ j`.
    pub fn cross_generators(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for t in 0..self.b_sum.algebra().dim() {
            for a in 0..self.c_sum.algebra().dim() {
                if self.b_sum.locate(t).0 != self.c_sum.locate(a).0 {
                    out.push(self.domain.symbol(t, a));
                }
            }
        }
        out
    }
}

fn split_images(
    b_sum: &DirectSum,
    c_sum: &DirectSum,
    domain: &MorPresentation,
    slots: &[MorPresentation],
    embed: impl Fn(usize, u32) -> FreeStarPoly,
) -> Vec<FreeStarPoly> {
    let mut images = vec![FreeStarPoly::zero(); domain.base().num_generators()];
    for t in 0..b_sum.algebra().dim() {
        let (i, t_local) = b_sum.locate(t);
        for a in 0..c_sum.algebra().dim() {
            let (j, a_local) = c_sum.locate(a);
            if i == j {
                images[domain.symbol(t, a) as usize] = embed(i, slots[i].symbol(t_local, a_local));
            }
        }
    }
    images
}

fn setup(bs: &[FdAlgebra], cs: &[FdAlgebra]) -> Result<(DirectSum, DirectSum, MorPresentation, Vec<MorPresentation>), StructureError> {
    if bs.len() != cs.len() || bs.is_empty() {
        return Err(StructureError::SlotMismatch(format!("{} source and {} target summands", bs.len(), cs.len())));
    }
    let b_sum = direct_sum(bs);
    let c_sum = direct_sum(cs);
    let domain = build_mor(b_sum.algebra(), c_sum.algebra())?;
    let slots = bs.iter().zip(cs).map(|(b, c)| build_mor(b, c)).collect::<Result<Vec<_>, _>>()?;
    Ok((b_sum, c_sum, domain, slots))
}

/// The split into the tensor product of the slot presentations: a generator
/// `x_{t,α}` with `t` from `B_i` and `α` from `C_j` goes to the slot-`i`
/// generator when `i = j` and to 0 otherwise.
pub fn direct_sum_split(bs: &[FdAlgebra], cs: &[FdAlgebra], oracle: &Oracle) -> Result<DirectSumSplit, StructureError> {
    let (b_sum, c_sum, domain, slots) = setup(bs, cs)?;
    let slot_bases: Vec<&Presentation> = slots.iter().map(|m| m.base().as_ref()).collect();
    let codomain = Arc::new(Presentation::tensor(&slot_bases));
    let images = split_images(&b_sum, &c_sum, &domain, &slots, |i, g| codomain.embed_factor(i, &FreeStarPoly::generator(g)));
    let psi = PresentedHom::new(domain.base().clone(), codomain.clone(), images, oracle)?.named("psi");
    let mut coverage = Vec::new();
    for (i, slot) in slots.iter().enumerate() {
        let offset = codomain.factors().expect("tensor")[i].offset;
        for t in 0..bs[i].dim() {
            for a in 0..cs[i].dim() {
                let pre = domain.symbol_poly(b_sum.inject_index(i, t), c_sum.inject_index(i, a));
                coverage.push(Preimage::verify(&psi, offset + slot.symbol(t, a), Some(pre), oracle));
            }
        }
    }
    Ok(DirectSumSplit { b_sum, c_sum, domain, slots, psi, coverage })
}

/// The same generator assignment into the presented direct sum of the slots,
/// with slot generators `s<i>_…` and slot units `u<i>` summing to 1. This map
/// is not unital: a row-sum relation lands on a slot unit rather than on 1,
/// and the returned verdicts record that.
pub fn direct_sum_split_into_sum(
    bs: &[FdAlgebra],
    cs: &[FdAlgebra],
    oracle: &Oracle,
) -> Result<PresentedHom, StructureError> {
    let (b_sum, c_sum, domain, slots) = setup(bs, cs)?;
    let slot_bases: Vec<&Presentation> = slots.iter().map(|m| m.base().as_ref()).collect();
    let codomain = Arc::new(Presentation::direct_sum(&slot_bases));
    let mut offsets = Vec::new();
    let mut acc = 0;
    for s in &slots {
        offsets.push(acc);
        acc += s.base().num_generators() as u32;
    }
    let images = split_images(&b_sum, &c_sum, &domain, &slots, |i, g| FreeStarPoly::generator(offsets[i] + g));
    Ok(PresentedHom::new(domain.base().clone(), codomain, images, oracle)?.named("psi"))
}
