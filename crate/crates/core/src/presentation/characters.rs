use num_traits::{One, Zero};

use super::poly::{FreeStarPoly, Letter};
use super::rewrite::DEFAULT_BUDGET;
use super::Presentation;
use crate::scalar::GaussRat;

/// A unital *-homomorphism to scalars, given by its generator values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    values: Vec<GaussRatKey>,
}

/// Total order wrapper so characters sort deterministically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct GaussRatKey(GaussRat);

impl PartialOrd for GaussRatKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussRatKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.re(), self.0.im()).cmp(&(other.0.re(), other.0.im()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharacterError {
    #[error("generator `{0}` is not self-adjoint, so no finite spectrum is known")]
    NotSelfAdjoint(String),
    #[error("generator `{0}` is not provably idempotent after abelianization")]
    UnsupportedSpectrum(String),
}

impl Character {
    pub fn new(values: Vec<GaussRat>) -> Self {
        Self { values: values.into_iter().map(GaussRatKey).collect() }
    }

    pub fn value(&self, gen: u32) -> &GaussRat {
        &self.values[gen as usize].0
    }

    pub fn values(&self) -> Vec<GaussRat> {
        self.values.iter().map(|v| v.0.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, p: &FreeStarPoly) -> GaussRat {
        p.evaluate(&GaussRat::one(), |l: Letter| {
            let v = &self.values[l.gen as usize].0;
            if l.star { v.conj() } else { v.clone() }
        })
    }

    /// Whether every relation of `pres` vanishes, re-evaluated exactly.
    pub fn annihilates(&self, pres: &Presentation) -> bool {
        self.values.len() == pres.num_generators() && pres.relations().iter().all(|r| self.eval(r).is_zero())
    }

    /// `χ ∘ f` for the map sending generator `g` to `images[g]`.
    pub fn pull_back(&self, images: &[FreeStarPoly]) -> Character {
        Character::new(images.iter().map(|p| self.eval(p)).collect())
    }
}

/// All characters of `pres`, by backtracking over `{0, 1}` for each generator.
///
/// Every generator must be self-adjoint and satisfy `x² = x` modulo the
/// abelianized relations.
pub fn enumerate_characters(pres: &Presentation) -> Result<Vec<Character>, CharacterError> {
    let n = pres.num_generators();
    for g in pres.generators() {
        if !g.self_adjoint {
            return Err(CharacterError::NotSelfAdjoint(g.name.clone()));
        }
    }
    let ab = pres.abelianize();
    let sys = ab.rewrite_system();
    for (k, g) in pres.generators().iter().enumerate() {
        let x = FreeStarPoly::generator(k as u32);
        if !sys.normal_form(&x.mul(&x).sub(&x), DEFAULT_BUDGET).poly.is_zero() {
            return Err(CharacterError::UnsupportedSpectrum(g.name.clone()));
        }
    }
    // Relations are checked as soon as their last generator is assigned.
    let mut buckets: Vec<Vec<&FreeStarPoly>> = vec![Vec::new(); n + 1];
    for r in pres.relations() {
        buckets[r.max_gen().map_or(0, |m| m as usize + 1)].push(r);
    }
    let mut out = Vec::new();
    if buckets[0].iter().all(|r| r.is_zero()) {
        let mut values = vec![GaussRat::zero(); n];
        search(0, &mut values, &buckets, &mut out);
    }
    debug_assert!(out.iter().all(|c| c.annihilates(pres)));
    out.retain(|c| c.annihilates(pres));
    Ok(out)
}

fn search(g: usize, values: &mut Vec<GaussRat>, buckets: &[Vec<&FreeStarPoly>], out: &mut Vec<Character>) {
    if g == values.len() {
        out.push(Character::new(values.clone()));
        return;
    }
    for v in [GaussRat::zero(), GaussRat::one()] {
        values[g] = v;
        let partial = Character::new(values.clone());
        if buckets[g + 1].iter().all(|r| partial.eval(r).is_zero()) {
            search(g + 1, values, buckets, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd_algebra::FdAlgebra;
    use crate::presentation::Generator;

    #[test]
    fn c2_has_two_characters() {
        let pres = Presentation::from_fd(&FdAlgebra::commutative(2).unwrap());
        assert_eq!(enumerate_characters(&pres).unwrap().len(), 2);
    }

    #[test]
    fn unit_relation_has_no_characters() {
        let pres = Presentation::new(vec![], vec![FreeStarPoly::one()]).unwrap();
        assert!(enumerate_characters(&pres).unwrap().is_empty());
        let pres = Presentation::new(vec![Generator::self_adjoint("p")], vec![FreeStarPoly::one()]).unwrap();
        assert!(enumerate_characters(&pres).unwrap().is_empty());
    }

    #[test]
    fn two_free_projections_have_four_characters() {
        let (p, q) = (FreeStarPoly::generator(0), FreeStarPoly::generator(1));
        let pres = Presentation::new(
            vec![Generator::self_adjoint("p"), Generator::self_adjoint("q")],
            vec![p.mul(&p).sub(&p), q.mul(&q).sub(&q)],
        )
        .unwrap();
        let chars = enumerate_characters(&pres.abelianize()).unwrap();
        assert_eq!(chars.len(), 4);
    }

    #[test]
    fn refuses_unconstrained_generators() {
        let pres = Presentation::new(vec![Generator::self_adjoint("h")], vec![]).unwrap();
        assert_eq!(enumerate_characters(&pres), Err(CharacterError::UnsupportedSpectrum("h".into())));
        let pres = Presentation::new(vec![Generator::plain("u")], vec![]).unwrap();
        assert_eq!(enumerate_characters(&pres), Err(CharacterError::NotSelfAdjoint("u".into())));
    }

    #[test]
    fn m2_has_no_characters() {
        // M₂ is presented with non-self-adjoint off-diagonal units
        let pres = Presentation::from_fd(&FdAlgebra::full_matrix(2).unwrap());
        assert!(matches!(enumerate_characters(&pres), Err(CharacterError::NotSelfAdjoint(_))));
    }
}
