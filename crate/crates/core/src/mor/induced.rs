use super::{HomError, MorError, MorPresentation, PresentedHom};
use crate::fd_algebra::{FdAlgebra, StarHom};
use crate::presentation::{EqualityVerdict, FreeStarPoly, Oracle, VerdictStatus};

/// `f(e_t)` as linear polynomials in the matrix-unit generators of the target.
pub fn fd_hom_images(f: &StarHom) -> Vec<FreeStarPoly> {
    f.images()
        .iter()
        .map(|img| {
            let mut p = FreeStarPoly::zero();
            for (s, c) in img.coords().iter().enumerate() {
                p.add_scaled(c, &FreeStarPoly::generator(s as u32));
            }
            p
        })
        .collect()
}

fn ensure_fd(m: &MorPresentation, a: &FdAlgebra, what: &str) -> Result<(), MorError> {
    match m.source_fd() {
        Some(b) if b == a => Ok(()),
        _ => Err(MorError::Mismatch(format!("{what} does not match the source of the Mor presentation"))),
    }
}

/// `Mor(f, g): Mor(B₁, C₁) → Mor(B₂, C₂)` for `f: B₁ → B₂` given by the
/// images of `B₁`'s generators as polynomials over `B₂`'s generators, and
/// `g: C₂ → C₁`.
///
/// `x_{t,α} ↦ Σ_γ ω_α(g(v_γ)) · [γ-component of Φ₂(f(g_t))]`.
pub fn induced_mor_from_images(
    f_images: &[FreeStarPoly],
    g: &StarHom,
    m1: &MorPresentation,
    m2: &MorPresentation,
    oracle: &Oracle,
) -> Result<PresentedHom, MorError> {
    if f_images.len() != m1.source().num_generators() {
        return Err(HomError::ImageCount { expected: m1.source().num_generators(), found: f_images.len() }.into());
    }
    for p in f_images {
        m2.source().check_poly(p)?;
    }
    if g.source() != m2.target() || g.target() != m1.target() {
        return Err(MorError::Mismatch("g must map the second target algebra to the first".into()));
    }
    let phi2 = m2.canonical_phi();
    let mut images = vec![FreeStarPoly::zero(); m1.base().num_generators()];
    for (t, ft) in f_images.iter().enumerate() {
        let pushed = phi2.apply(ft).push_forward(g);
        for alpha in 0..m1.target().dim() {
            images[m1.symbol(t, alpha) as usize] = pushed.component(alpha).clone();
        }
    }
    Ok(PresentedHom::new(m1.base().clone(), m2.base().clone(), images, oracle)?)
}

/// [`induced_mor_from_images`] for *-homomorphisms of multi-matrix algebras.
pub fn induced_mor(
    f: &StarHom,
    g: &StarHom,
    m1: &MorPresentation,
    m2: &MorPresentation,
    oracle: &Oracle,
) -> Result<PresentedHom, MorError> {
    ensure_fd(m1, f.source(), "source of f")?;
    ensure_fd(m2, f.target(), "target of f")?;
    induced_mor_from_images(&fd_hom_images(f), g, m1, m2, oracle)
}

/// Both sides of `Mor(f'f, gg') = Mor(f', g') ∘ Mor(f, g)` and the
/// per-generator verdicts comparing them.
#[derive(Debug, Clone)]
pub struct FunctorReport {
    pub lhs: PresentedHom,
    pub rhs: PresentedHom,
    pub verdicts: Vec<EqualityVerdict>,
}

impl FunctorReport {
    pub fn status(&self) -> VerdictStatus {
        let mut s = if self.lhs.is_well_defined() && self.rhs.is_well_defined() {
            VerdictStatus::Equal
        } else {
            VerdictStatus::Unknown
        };
        for v in &self.verdicts {
            match v.status() {
                VerdictStatus::Distinct => return VerdictStatus::Distinct,
                VerdictStatus::Unknown => s = VerdictStatus::Unknown,
                VerdictStatus::Equal => {}
            }
        }
        s
    }
}

/// Checks functoriality for `f: B₁ → B₂`, `f2: B₂ → B₃`, `g: C₂ → C₁`, `g2: C₃ → C₂`.
#[allow(clippy::too_many_arguments)]
pub fn check_functor_laws(
    f: &StarHom,
    f2: &StarHom,
    g: &StarHom,
    g2: &StarHom,
    m1: &MorPresentation,
    m2: &MorPresentation,
    m3: &MorPresentation,
    oracle: &Oracle,
) -> Result<FunctorReport, MorError> {
    let ff = f2.after(f)?;
    let gg = g.after(g2)?;
    let lhs = induced_mor(&ff, &gg, m1, m3, oracle)?;
    let first = induced_mor(f, g, m1, m2, oracle)?;
    let second = induced_mor(f2, g2, m2, m3, oracle)?;
    let rhs = second.after(&first, false, oracle)?;
    let verdicts = lhs.agrees_with(&rhs, oracle)?;
    Ok(FunctorReport { lhs, rhs, verdicts })
}

/// An explicit preimage of a codomain generator, with the verdict that it
/// maps onto the generator.
#[derive(Debug, Clone)]
pub struct Preimage {
    pub generator: u32,
    pub preimage: Option<FreeStarPoly>,
    pub verdict: Option<EqualityVerdict>,
}

impl Preimage {
    pub fn verify(hom: &PresentedHom, generator: u32, preimage: Option<FreeStarPoly>, oracle: &Oracle) -> Self {
        let verdict = preimage
            .as_ref()
            .map(|p| oracle.is_zero(&hom.apply(p).sub(&FreeStarPoly::generator(generator)), hom.target()));
        Preimage { generator, preimage, verdict }
    }

    pub fn is_verified(&self) -> bool {
        self.verdict.as_ref().is_some_and(EqualityVerdict::is_equal)
    }
}

/// For surjective `f: B₁ → B₂`, the map `Mor(f, id_C)` and a verified
/// preimage `Σ_s b_s x_{s,α}` of each generator `x_{t,α}`, where `f(b) = e_t`.
pub fn surjectivity_preimages(
    f: &StarHom,
    m1: &MorPresentation,
    m2: &MorPresentation,
    oracle: &Oracle,
) -> Result<(PresentedHom, Vec<Preimage>), MorError> {
    if m1.target() != m2.target() {
        return Err(MorError::Mismatch("both Mor presentations need the same target".into()));
    }
    let id = StarHom::identity(m1.target());
    let hom = induced_mor(f, &id, m1, m2, oracle)?;
    let b2 = f.target();
    let mut out = Vec::new();
    for t in 0..b2.dim() {
        let b = f.preimage(&b2.basis(t))?;
        for alpha in 0..m2.target().dim() {
            let pre = b.as_ref().map(|b| {
                let mut p = FreeStarPoly::zero();
                for (s, c) in b.coords().iter().enumerate() {
                    p.add_scaled(c, &m1.symbol_poly(s, alpha));
                }
                p
            });
            out.push(Preimage::verify(&hom, m2.symbol(t, alpha), pre, oracle));
        }
    }
    Ok((hom, out))
}
