use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::tensor_poly::{defining_labels, defining_polys};
use crate::presentation::{
    EqualityVerdict, FreeStarPoly, Letter, Oracle, Presentation, PresentationError, VerdictStatus,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HomError {
    #[error("expected {expected} generator images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("refusing to compose: `{0}` is not verified well-defined")]
    Unverified(String),
    #[error("presentations do not match: {0}")]
    Mismatch(String),
}

/// A unital *-homomorphism between presented algebras, given by generator
/// images, with a cached well-definedness verdict per defining relation.
///
/// Adjoint letters map to adjoints of images, so the map is unital and
/// *-compatible by construction; the verdicts cover the source relations
/// and the self-adjointness of self-adjoint generators.
#[derive(Debug, Clone)]
pub struct PresentedHom {
    name: String,
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<FreeStarPoly>,
    welldef: Vec<EqualityVerdict>,
}

impl PresentedHom {
    pub fn new(
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: Vec<FreeStarPoly>,
        oracle: &Oracle,
    ) -> Result<Self, HomError> {
        if images.len() != source.num_generators() {
            return Err(HomError::ImageCount { expected: source.num_generators(), found: images.len() });
        }
        for p in &images {
            target.check_poly(p)?;
        }
        let images: Vec<FreeStarPoly> = images.iter().map(|p| target.canonicalize(p)).collect();
        let welldef = defining_polys(&source)
            .par_iter()
            .map(|r| oracle.is_zero(&target.canonicalize(&r.substitute(&images)), &target))
            .collect();
        Ok(Self { name: String::new(), source, target, images, welldef })
    }

    pub fn identity(p: &Arc<Presentation>) -> Self {
        let images = (0..p.num_generators() as u32).map(FreeStarPoly::generator).collect();
        Self::new(p.clone(), p.clone(), images, &Oracle::default()).expect("identity images are valid")
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[FreeStarPoly] {
        &self.images
    }

    pub fn image(&self, gen: u32) -> &FreeStarPoly {
        &self.images[gen as usize]
    }

    /// Verdicts in the order of the source relations, then the self-adjoint generators.
    pub fn welldef(&self) -> &[EqualityVerdict] {
        &self.welldef
    }

    pub fn welldef_labels(&self) -> Vec<String> {
        defining_labels(&self.source)
    }

    /// `equal` when every relation is verified, `distinct` when some relation
    /// provably does not map to zero, `unknown` otherwise.
    pub fn status(&self) -> VerdictStatus {
        let mut s = VerdictStatus::Equal;
        for v in &self.welldef {
            match v.status() {
                VerdictStatus::Distinct => return VerdictStatus::Distinct,
                VerdictStatus::Unknown => s = VerdictStatus::Unknown,
                VerdictStatus::Equal => {}
            }
        }
        s
    }

    pub fn is_well_defined(&self) -> bool {
        self.status() == VerdictStatus::Equal
    }

    pub fn total_steps(&self) -> u64 {
        self.welldef.iter().map(EqualityVerdict::steps).sum()
    }

    pub fn apply(&self, p: &FreeStarPoly) -> FreeStarPoly {
        self.target.canonicalize(&p.substitute(&self.images))
    }

    /// `self ∘ first`. Both maps must be verified unless `force` is set.
    pub fn after(&self, first: &PresentedHom, force: bool, oracle: &Oracle) -> Result<PresentedHom, HomError> {
        if first.target != self.source {
            return Err(HomError::Mismatch("codomain of the first map is not the domain of the second".into()));
        }
        if !force {
            for h in [first, self] {
                if !h.is_well_defined() {
                    return Err(HomError::Unverified(h.name.clone()));
                }
            }
        }
        let images = first.images.iter().map(|p| self.apply(p)).collect();
        PresentedHom::new(first.source.clone(), self.target.clone(), images, oracle)
    }

    /// `f ⊗ g` between flat tensor presentations (two factors each side,
    /// possibly themselves tensors).
    pub fn tensor(f: &PresentedHom, g: &PresentedHom, oracle: &Oracle) -> Result<PresentedHom, HomError> {
        let dom = Presentation::tensor(&[&f.source, &g.source]);
        let cod = Presentation::tensor(&[&f.target, &g.target]);
        let (fs, ft) = (f.source.num_generators() as u32, f.target.num_generators() as u32);
        let mut images: Vec<FreeStarPoly> = f.images.clone();
        for p in &g.images {
            images.push(p.map_letters(|l| Letter { gen: l.gen + ft, star: l.star }));
        }
        debug_assert_eq!(images.len() as u32, fs + g.source.num_generators() as u32);
        PresentedHom::new(Arc::new(dom), Arc::new(cod), images, oracle)
    }

    /// Compares images generator by generator modulo the target relations.
    pub fn agrees_with(&self, other: &PresentedHom, oracle: &Oracle) -> Result<Vec<EqualityVerdict>, HomError> {
        if self.source != other.source || self.target != other.target {
            return Err(HomError::Mismatch("maps have different domains or codomains".into()));
        }
        Ok(self
            .images
            .par_iter()
            .zip(&other.images)
            .map(|(a, b)| oracle.is_zero(&a.sub(b), &self.target))
            .collect())
    }

    /// `generator -> image` lines in workspace syntax, then the verdict table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let names = self.source.names();
        for (g, p) in self.images.iter().enumerate() {
            writeln!(s, "{} -> {}", names[g], self.target.show(p)).unwrap();
        }
        for (label, v) in self.welldef_labels().iter().zip(&self.welldef) {
            writeln!(s, "relation {label}: {} ({} steps)", v.status(), v.steps()).unwrap();
        }
        s
    }
}
