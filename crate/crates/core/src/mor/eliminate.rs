use std::collections::HashSet;
use std::sync::Arc;

use num_traits::One;

use super::hom::{HomError, PresentedHom};
use crate::presentation::{EqualityVerdict, FreeStarPoly, Generator, Letter, Oracle, Presentation, Word};

/// A presentation with linearly solvable generators substituted away,
/// together with the maps to and from the original.
#[derive(Debug, Clone)]
pub struct Elimination {
    base: Arc<Presentation>,
    reduced: Arc<Presentation>,
    kept: Vec<u32>,
    to_reduced: Vec<FreeStarPoly>,
    solved: Vec<(u32, FreeStarPoly)>,
}

/// A generator `x` with coefficient `±1` in the linear relation `r`, where
/// `x*` does not occur; the largest such generator.
fn pivot(r: &FreeStarPoly, alive: &[bool]) -> Option<u32> {
    if r.degree() != 1 {
        return None;
    }
    let starred: HashSet<u32> = r.letters().filter(|l| l.star).map(|l| l.gen).collect();
    r.terms()
        .rev()
        .filter(|(w, c)| w.len() == 1 && !w.letters()[0].star && (c.is_one() || (-*c).is_one()))
        .map(|(w, _)| w.letters()[0].gen)
        .find(|g| alive[*g as usize] && !starred.contains(g))
}

impl Elimination {
    pub fn new(base: &Arc<Presentation>) -> Self {
        let n = base.num_generators();
        let gens = base.generators();
        let canon = |p: &FreeStarPoly| p.map_letters(|l| if gens[l.gen as usize].self_adjoint { Letter::new(l.gen) } else { l });
        let mut alive = vec![true; n];
        let mut rels: Vec<FreeStarPoly> = base.relations().to_vec();
        let mut subst: Vec<FreeStarPoly> = (0..n as u32).map(FreeStarPoly::generator).collect();
        let mut solved = Vec::new();
        while let Some((x, r)) = rels.iter().find_map(|r| pivot(r, &alive).map(|x| (x, r.clone()))) {
            let c = r.coeff(&Word::letter(Letter::new(x)));
            let mut s = FreeStarPoly::generator(x).sub(&r.scale(&c.inv().expect("unit coefficient")));
            s = canon(&s);
            let mut images: Vec<FreeStarPoly> = (0..n as u32).map(FreeStarPoly::generator).collect();
            images[x as usize] = s.clone();
            let mut seen = HashSet::new();
            rels = rels
                .iter()
                .map(|q| canon(&q.substitute(&images)).monic())
                .filter(|q| !q.is_zero() && seen.insert(q.clone()))
                .collect();
            for p in subst.iter_mut() {
                *p = canon(&p.substitute(&images));
            }
            alive[x as usize] = false;
            solved.push((x, s));
        }
        let kept: Vec<u32> = (0..n as u32).filter(|&g| alive[g as usize]).collect();
        let mut renumber = vec![u32::MAX; n];
        for (k, &g) in kept.iter().enumerate() {
            renumber[g as usize] = k as u32;
        }
        let relabel = |p: &FreeStarPoly| p.map_letters(|l| Letter { gen: renumber[l.gen as usize], star: l.star });
        let reduced_gens: Vec<Generator> = kept.iter().map(|&g| gens[g as usize].clone()).collect();
        let reduced =
            Presentation::new(reduced_gens, rels.iter().map(relabel).collect()).expect("kept names are unique");
        let to_reduced = subst.iter().map(relabel).collect();
        Self { base: base.clone(), reduced: Arc::new(reduced), kept, to_reduced, solved }
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn reduced(&self) -> &Arc<Presentation> {
        &self.reduced
    }

    /// Base generators that survive, in order.
    pub fn kept(&self) -> &[u32] {
        &self.kept
    }

    /// `(x, s)`: base generator `x` was replaced by `s`, in elimination order.
    pub fn solved(&self) -> &[(u32, FreeStarPoly)] {
        &self.solved
    }

    /// Image of each base generator in the reduced presentation.
    pub fn to_reduced_images(&self) -> &[FreeStarPoly] {
        &self.to_reduced
    }

    pub fn to_reduced(&self, oracle: &Oracle) -> Result<PresentedHom, HomError> {
        PresentedHom::new(self.base.clone(), self.reduced.clone(), self.to_reduced.clone(), oracle)
    }

    pub fn from_reduced(&self, oracle: &Oracle) -> Result<PresentedHom, HomError> {
        let images = self.kept.iter().map(|&g| FreeStarPoly::generator(g)).collect();
        PresentedHom::new(self.reduced.clone(), self.base.clone(), images, oracle)
    }

    /// Both maps well defined, `to ∘ from = id` literally and `from ∘ to = id`
    /// modulo the base relations.
    pub fn verify(&self, oracle: &Oracle) -> Result<bool, HomError> {
        let to = self.to_reduced(oracle)?;
        let from = self.from_reduced(oracle)?;
        if !to.is_well_defined() || !from.is_well_defined() {
            return Ok(false);
        }
        let there_and_back = to.after(&from, false, oracle)?;
        let literal = there_and_back
            .images()
            .iter()
            .enumerate()
            .all(|(k, p)| *p == FreeStarPoly::generator(k as u32));
        let back = from.after(&to, false, oracle)?;
        Ok(literal && back.agrees_with(&PresentedHom::identity(&self.base), oracle)?.iter().all(EqualityVerdict::is_equal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd_algebra::FdAlgebra;
    use crate::mor::build_mor;

    #[test]
    fn mor_c2_c2_reduces_to_two_free_projections() {
        let c2 = FdAlgebra::commutative(2).unwrap();
        let m = build_mor(&c2, &c2).unwrap();
        let e = m.eliminate();
        let red = e.reduced();
        assert_eq!(red.num_generators(), 2);
        assert!(red.generators().iter().all(|g| g.self_adjoint));
        // p_{j2} = 1 − p_{j1}
        for (x, s) in e.solved() {
            let t1 = m.tableau().iter().position(|row| row.contains(x)).unwrap();
            assert_eq!(t1, 1);
            assert_eq!(s.as_constant(), None);
        }
        assert_eq!(red.relations().len(), 2);
        for (g, r) in red.relations().iter().enumerate() {
            let x = FreeStarPoly::generator(g as u32);
            assert_eq!(*r, x.mul(&x).sub(&x));
        }
        assert!(e.verify(&Oracle::default()).unwrap());
    }

    #[test]
    fn elimination_verifies_for_matrix_targets() {
        let m = build_mor(FdAlgebra::commutative(2).unwrap(), &FdAlgebra::full_matrix(2).unwrap()).unwrap();
        let e = m.eliminate();
        assert!(e.reduced().num_generators() < m.base().num_generators());
        assert!(e.verify(&Oracle::default()).unwrap());
    }
}
