use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::characters::Character;
use super::poly::FreeStarPoly;
use super::rewrite::{Derivation, RewriteSystem, DEFAULT_BUDGET};
use super::{Presentation, PresentationError};
use crate::repsearch::MatrixModel;

/// Evidence that two elements differ.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// A character of the presented algebra taking different values.
    Character(Character),
    /// A matrix model in which the difference has Frobenius norm `separation`,
    /// above `max(10³ · residual, 10⁻⁹)`.
    Model { model: Box<MatrixModel>, separation: f64 },
}

#[derive(Clone)]
pub enum EqualityVerdict {
    /// `p − q` rewrites to zero; `derivation` expresses it in the ideal.
    Equal { steps: u64, derivation: Derivation, system: Arc<RewriteSystem> },
    Distinct { certificate: Certificate, residue: FreeStarPoly },
    /// Neither proved nor refuted; `residue` is the partially reduced difference.
    Unknown { exhausted: bool, steps: u64, residue: FreeStarPoly },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictStatus {
    Equal,
    Distinct,
    Unknown,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::Equal => "equal",
            VerdictStatus::Distinct => "distinct",
            VerdictStatus::Unknown => "unknown",
        })
    }
}

impl fmt::Debug for EqualityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqualityVerdict::Equal { steps, derivation, .. } => {
                write!(f, "Equal {{ steps: {steps}, derivation terms: {} }}", derivation.len())
            }
            EqualityVerdict::Distinct { certificate, residue } => {
                write!(f, "Distinct {{ {certificate:?}, residue: {residue:?} }}")
            }
            EqualityVerdict::Unknown { exhausted, steps, residue } => {
                write!(f, "Unknown {{ exhausted: {exhausted}, steps: {steps}, residue: {residue:?} }}")
            }
        }
    }
}

impl EqualityVerdict {
    pub fn status(&self) -> VerdictStatus {
        match self {
            EqualityVerdict::Equal { .. } => VerdictStatus::Equal,
            EqualityVerdict::Distinct { .. } => VerdictStatus::Distinct,
            EqualityVerdict::Unknown { .. } => VerdictStatus::Unknown,
        }
    }

    pub fn is_equal(&self) -> bool {
        self.status() == VerdictStatus::Equal
    }

    pub fn steps(&self) -> u64 {
        match self {
            EqualityVerdict::Equal { steps, .. } | EqualityVerdict::Unknown { steps, .. } => *steps,
            EqualityVerdict::Distinct { .. } => 0,
        }
    }

    /// Re-checks the payload for the claim about `difference = p − q`:
    /// the derivation expands to `difference`, or the certificate separates it.
    pub fn check(&self, difference: &FreeStarPoly, pres: &Presentation) -> bool {
        match self {
            EqualityVerdict::Equal { derivation, system, .. } => {
                system.verify(pres) && derivation.expand(system.members()) == *difference
            }
            EqualityVerdict::Distinct { certificate: Certificate::Character(c), .. } => {
                c.annihilates(pres) && !c.eval(difference).is_zero()
            }
            EqualityVerdict::Distinct { certificate: Certificate::Model { model, .. }, .. } => {
                if !model.matches(pres) {
                    return false;
                }
                let residual = model.residual_for(pres);
                model.separation(difference) > (1e3 * residual).max(1e-9)
            }
            EqualityVerdict::Unknown { .. } => true,
        }
    }
}

/// What [`presentation_equal`] may use beyond rewriting.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub budget: u64,
    pub use_characters: bool,
    pub models: Vec<MatrixModel>,
    /// Rewrite with the critical-pair completed system.
    pub completion: bool,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, use_characters: true, models: Vec::new(), completion: false }
    }
}

impl Oracle {
    pub fn with_budget(budget: u64) -> Self {
        Self { budget, ..Self::default() }
    }

    /// Decides whether `difference` vanishes in the presented algebra.
    pub fn is_zero(&self, difference: &FreeStarPoly, pres: &Presentation) -> EqualityVerdict {
        let system = if self.completion { pres.completed_rewrite_system() } else { pres.rewrite_system() };
        let nf = system.normal_form(difference, self.budget);
        if nf.poly.is_zero() && !nf.exhausted {
            return EqualityVerdict::Equal { steps: nf.steps, derivation: nf.derivation, system: system.clone() };
        }
        if self.use_characters {
            if let Ok(chars) = pres.characters() {
                if let Some(c) = chars.iter().find(|c| !c.eval(difference).is_zero()) {
                    return EqualityVerdict::Distinct {
                        certificate: Certificate::Character(c.clone()),
                        residue: nf.poly,
                    };
                }
            }
        }
        for model in &self.models {
            if !model.matches(pres) {
                continue;
            }
            let residual = model.residual_for(pres);
            let separation = model.separation(difference);
            if separation > (1e3 * residual).max(1e-9) {
                return EqualityVerdict::Distinct {
                    certificate: Certificate::Model { model: Box::new(model.clone()), separation },
                    residue: nf.poly,
                };
            }
        }
        EqualityVerdict::Unknown { exhausted: nf.exhausted, steps: nf.steps, residue: nf.poly }
    }
}

/// Tri-state equality of `p` and `q` in the algebra presented by `pres`.
pub fn presentation_equal(
    p: &FreeStarPoly,
    q: &FreeStarPoly,
    pres: &Presentation,
    oracle: &Oracle,
) -> Result<EqualityVerdict, PresentationError> {
    pres.check_poly(p)?;
    pres.check_poly(q)?;
    Ok(oracle.is_zero(&p.sub(q), pres))
}
