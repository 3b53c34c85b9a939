//! Finitely presented unital *-algebras: generators, *-closed relation sets,
//! rewriting, abelianization and characters.

mod characters;
pub mod poly;
pub mod rewrite;
mod verdict;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;

pub use characters::{enumerate_characters, Character, CharacterError};
pub use poly::{Evaluation, FreeStarPoly, Letter, Word};
pub use rewrite::{Derivation, NormalForm, RewriteOptions, RewriteSystem, DEFAULT_BUDGET};
pub use verdict::{presentation_equal, Certificate, EqualityVerdict, Oracle, VerdictStatus};

use crate::fd_algebra::{FdAlgebra, MatrixUnit};
use crate::scalar::GaussRat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {index} out of range for {count} generators")]
    LetterOutOfRange { index: u32, count: usize },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("the relations contain a nonzero constant and present the zero algebra")]
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub self_adjoint: bool,
    /// Recorded norm bound, carried along but never used in computations.
    pub norm_bound: Option<GaussRat>,
}

impl Generator {
    pub fn plain(name: impl Into<String>) -> Self {
        Self { name: name.into(), self_adjoint: false, norm_bound: None }
    }

    pub fn self_adjoint(name: impl Into<String>) -> Self {
        Self { name: name.into(), self_adjoint: true, norm_bound: None }
    }

    pub fn new(name: impl Into<String>, self_adjoint: bool) -> Self {
        Self { name: name.into(), self_adjoint, norm_bound: None }
    }
}

/// One tensor factor of a flat tensor presentation, occupying generators
/// `offset .. offset + presentation.num_generators()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub presentation: Arc<Presentation>,
    pub offset: u32,
}

/// Generators and relations (each understood as `= 0`) of a unital *-algebra.
///
/// Stored relations are canonical: adjoint letters of self-adjoint generators
/// are replaced by the generator, each relation is monic, duplicates are
/// removed, and the set is closed under adjoints.
#[derive(Clone)]
pub struct Presentation {
    gens: Vec<Generator>,
    names: Vec<String>,
    index: HashMap<String, u32>,
    relations: Vec<FreeStarPoly>,
    factors: Option<Vec<Factor>>,
    rewrite: OnceLock<Arc<RewriteSystem>>,
    completed: OnceLock<Arc<RewriteSystem>>,
    characters: OnceLock<Result<Arc<[Character]>, CharacterError>>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn canonical_letters(gens: &[Generator], p: &FreeStarPoly) -> FreeStarPoly {
    p.map_letters(|l| if gens[l.gen as usize].self_adjoint { Letter::new(l.gen) } else { l })
}

/// Canonicalizes `relations` and adds the adjoint of each relation not
/// already present. Idempotent.
pub fn star_close(gens: &[Generator], relations: &[FreeStarPoly]) -> Vec<FreeStarPoly> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |p: FreeStarPoly, out: &mut Vec<FreeStarPoly>| {
        let p = canonical_letters(gens, &p).monic();
        if !p.is_zero() && seen.insert(p.clone()) {
            out.push(p);
        }
    };
    for r in relations {
        push(r.clone(), &mut out);
    }
    let base = out.len();
    for k in 0..base {
        let adj = out[k].adjoint();
        push(adj, &mut out);
    }
    out
}

impl Presentation {
    pub fn new(gens: Vec<Generator>, relations: Vec<FreeStarPoly>) -> Result<Self, PresentationError> {
        let mut index = HashMap::new();
        for (k, g) in gens.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(PresentationError::InvalidName(g.name.clone()));
            }
            if index.insert(g.name.clone(), k as u32).is_some() {
                return Err(PresentationError::DuplicateGenerator(g.name.clone()));
            }
        }
        for r in &relations {
            if let Some(index) = r.max_gen().filter(|&m| m as usize >= gens.len()) {
                return Err(PresentationError::LetterOutOfRange { index, count: gens.len() });
            }
        }
        let relations = star_close(&gens, &relations);
        let names = gens.iter().map(|g| g.name.clone()).collect();
        Ok(Self {
            gens,
            names,
            index,
            relations,
            factors: None,
            rewrite: OnceLock::new(),
            completed: OnceLock::new(),
            characters: OnceLock::new(),
        })
    }

    /// The presentation of a multi-matrix algebra by its matrix units
    /// `e<k>_<i>_<j>`: structure constants, `Σ diagonals = 1`, and
    /// `e(k,i,j)* = e(k,j,i)`.
    pub fn from_fd(a: &FdAlgebra) -> Self {
        let gens = a.units().map(|u| Generator::new(format!("e{}", u.suffix()), u.is_diagonal())).collect();
        let e = |k: usize| FreeStarPoly::generator(k as u32);
        let mut rels = Vec::new();
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                let mut r = e(x).mul(&e(y));
                if let Some(z) = a.product_index(x, y) {
                    r = r.sub(&e(z));
                }
                rels.push(r);
            }
        }
        let mut unit = FreeStarPoly::one().neg();
        for d in a.diagonal_indices() {
            unit = unit.add(&e(d));
        }
        rels.push(unit);
        for x in 0..a.dim() {
            let u = a.unit(x);
            if !u.is_diagonal() {
                let star = FreeStarPoly::letter(Letter::starred(x as u32));
                rels.push(star.sub(&e(a.index(u.transpose()))));
            }
        }
        Self::new(gens, rels).expect("matrix-unit names are valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn relations(&self) -> &[FreeStarPoly] {
        &self.relations
    }

    pub fn generator_index(&self, name: &str) -> Result<u32, PresentationError> {
        self.index.get(name).copied().ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))
    }

    /// The generator called `name`, as a polynomial.
    pub fn gen(&self, name: &str) -> Result<FreeStarPoly, PresentationError> {
        Ok(FreeStarPoly::generator(self.generator_index(name)?))
    }

    /// Whether some relation is a nonzero constant.
    pub fn is_degenerate(&self) -> bool {
        self.relations.iter().any(|r| r.as_constant().is_some_and(|c| !c.is_zero()))
    }

    pub fn ensure_nondegenerate(&self) -> Result<(), PresentationError> {
        if self.is_degenerate() { Err(PresentationError::Degenerate) } else { Ok(()) }
    }

    pub fn is_star_closed(&self) -> bool {
        star_close(&self.gens, &self.relations) == self.relations
    }

    /// Factors when this is a flat tensor presentation.
    pub fn factors(&self) -> Option<&[Factor]> {
        self.factors.as_deref()
    }

    pub fn check_poly(&self, p: &FreeStarPoly) -> Result<(), PresentationError> {
        match p.max_gen() {
            Some(index) if index as usize >= self.gens.len() => {
                Err(PresentationError::LetterOutOfRange { index, count: self.gens.len() })
            }
            _ => Ok(()),
        }
    }

    /// Replaces adjoint letters of self-adjoint generators.
    pub fn canonicalize(&self, p: &FreeStarPoly) -> FreeStarPoly {
        canonical_letters(&self.gens, p)
    }

    pub fn show(&self, p: &FreeStarPoly) -> String {
        p.display(&self.names).to_string()
    }

    /// A relation written as `leading word = remaining terms`.
    pub fn show_relation(&self, r: &FreeStarPoly) -> String {
        let mut rest = r.clone();
        match rest.pop_leading() {
            None => "0 = 0".to_string(),
            Some((w, c)) => {
                let lhs = FreeStarPoly::monomial(c, w);
                format!("{} = {}", self.show(&lhs), self.show(&rest.neg()))
            }
        }
    }

    /// The cached interreduced rewrite system.
    pub fn rewrite_system(&self) -> &Arc<RewriteSystem> {
        self.rewrite.get_or_init(|| Arc::new(RewriteSystem::new(self, RewriteOptions::default())))
    }

    /// The cached system after bounded critical-pair completion.
    pub fn completed_rewrite_system(&self) -> &Arc<RewriteSystem> {
        self.completed.get_or_init(|| {
            Arc::new(RewriteSystem::new(self, RewriteOptions { completion: true, ..RewriteOptions::default() }))
        })
    }

    pub fn normal_form(&self, p: &FreeStarPoly, budget: u64) -> Result<NormalForm, PresentationError> {
        self.check_poly(p)?;
        Ok(self.rewrite_system().normal_form(p, budget))
    }

    /// Characters of the abelianization, cached.
    pub fn characters(&self) -> Result<&[Character], CharacterError> {
        match self.characters.get_or_init(|| enumerate_characters(self).map(Arc::from)) {
            Ok(c) => Ok(c),
            Err(e) => Err(e.clone()),
        }
    }

    /// Adds the commutators of all pairs of letters.
    pub fn abelianize(&self) -> Presentation {
        let mut letters = Vec::new();
        for (g, gen) in self.gens.iter().enumerate() {
            letters.push(Letter::new(g as u32));
            if !gen.self_adjoint {
                letters.push(Letter::starred(g as u32));
            }
        }
        let mut rels = self.relations.clone();
        for (k, &a) in letters.iter().enumerate() {
            for &b in &letters[k + 1..] {
                let (a, b) = (FreeStarPoly::letter(a), FreeStarPoly::letter(b));
                rels.push(a.mul(&b).sub(&b.mul(&a)));
            }
        }
        let mut out = Presentation::new(self.gens.clone(), rels).expect("same generators");
        out.factors = self.factors.clone();
        out
    }

    /// The flat presentation of `P₁ ⊗ … ⊗ P_n`: generators `t<k>_<name>`,
    /// each factor's relations, and commutation between letters of distinct
    /// factors. Tensor factors are flattened.
    pub fn tensor(parts: &[&Presentation]) -> Presentation {
        let mut leaves: Vec<Arc<Presentation>> = Vec::new();
        for p in parts {
            match p.factors() {
                Some(fs) => leaves.extend(fs.iter().map(|f| f.presentation.clone())),
                None => leaves.push(Arc::new((*p).clone())),
            }
        }
        let mut gens = Vec::new();
        let mut rels = Vec::new();
        let mut factors = Vec::new();
        let mut letters_of: Vec<Vec<Letter>> = Vec::new();
        for (k, leaf) in leaves.iter().enumerate() {
            let offset = gens.len() as u32;
            let mut letters = Vec::new();
            for (g, gen) in leaf.gens.iter().enumerate() {
                gens.push(Generator { name: format!("t{k}_{}", gen.name), ..gen.clone() });
                letters.push(Letter::new(offset + g as u32));
                if !gen.self_adjoint {
                    letters.push(Letter::starred(offset + g as u32));
                }
            }
            for r in &leaf.relations {
                rels.push(r.map_letters(|l| Letter { gen: l.gen + offset, star: l.star }));
            }
            factors.push(Factor { presentation: leaf.clone(), offset });
            letters_of.push(letters);
        }
        for a in 0..letters_of.len() {
            for b in a + 1..letters_of.len() {
                for &x in &letters_of[a] {
                    for &y in &letters_of[b] {
                        let (x, y) = (FreeStarPoly::letter(x), FreeStarPoly::letter(y));
                        rels.push(y.mul(&x).sub(&x.mul(&y)));
                    }
                }
            }
        }
        let mut out = Presentation::new(gens, rels).expect("prefixed names are unique");
        out.factors = Some(factors);
        out
    }

    /// Embeds a polynomial over factor `k` into the flat tensor presentation.
    pub fn embed_factor(&self, k: usize, p: &FreeStarPoly) -> FreeStarPoly {
        let offset = self.factors.as_ref().expect("tensor presentation")[k].offset;
        p.map_letters(|l| Letter { gen: l.gen + offset, star: l.star })
    }

    /// The presented direct sum `P₁ ⊕ … ⊕ P_n`: slot generators `s<k>_<name>`,
    /// slot units `u<k>` summing to 1, each slot's relations with constants
    /// replaced by the slot unit, and orthogonality between slots.
    pub fn direct_sum(parts: &[&Presentation]) -> Presentation {
        let mut gens = Vec::new();
        let mut offsets = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            offsets.push(gens.len() as u32);
            for gen in &p.gens {
                gens.push(Generator { name: format!("s{k}_{}", gen.name), ..gen.clone() });
            }
        }
        let unit_base = gens.len() as u32;
        for k in 0..parts.len() {
            gens.push(Generator::self_adjoint(format!("u{k}")));
        }
        let unit = |k: usize| FreeStarPoly::generator(unit_base + k as u32);
        let mut rels = Vec::new();
        let mut total = FreeStarPoly::one().neg();
        for k in 0..parts.len() {
            total = total.add(&unit(k));
            rels.push(unit(k).mul(&unit(k)).sub(&unit(k)));
            for j in 0..parts.len() {
                if j != k {
                    rels.push(unit(j).mul(&unit(k)));
                }
            }
        }
        rels.push(total);
        let mut slot_letters: Vec<Vec<FreeStarPoly>> = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            let off = offsets[k];
            for r in &p.relations {
                let mut h = FreeStarPoly::zero();
                for (w, c) in r.terms() {
                    let w = Word(w.letters().iter().map(|l| Letter { gen: l.gen + off, star: l.star }).collect());
                    let w = if w.is_empty() { Word::letter(Letter::new(unit_base + k as u32)) } else { w };
                    h.add_term(w, c);
                }
                rels.push(h);
            }
            let mut letters = Vec::new();
            for (g, gen) in p.gens.iter().enumerate() {
                letters.push(FreeStarPoly::letter(Letter::new(off + g as u32)));
                if !gen.self_adjoint {
                    letters.push(FreeStarPoly::letter(Letter::starred(off + g as u32)));
                }
            }
            for x in &letters {
                for j in 0..parts.len() {
                    if j == k {
                        rels.push(unit(j).mul(x).sub(x));
                        rels.push(x.mul(&unit(j)).sub(x));
                    } else {
                        rels.push(unit(j).mul(x));
                        rels.push(x.mul(&unit(j)));
                    }
                }
            }
            slot_letters.push(letters);
        }
        for a in 0..slot_letters.len() {
            for b in 0..slot_letters.len() {
                if a != b {
                    for x in &slot_letters[a] {
                        for y in &slot_letters[b] {
                            rels.push(x.mul(y));
                        }
                    }
                }
            }
        }
        Presentation::new(gens, rels).expect("prefixed names are unique")
    }

    /// Index of the matrix unit generator of a presentation built by [`from_fd`](Self::from_fd).
    pub fn matrix_unit_generator(&self, u: MatrixUnit) -> Result<u32, PresentationError> {
        self.generator_index(&format!("e{}", u.suffix()))
    }

    /// Workspace syntax for a generator declaration.
    pub fn show_generator(&self, g: u32) -> String {
        let gen = &self.gens[g as usize];
        if gen.self_adjoint { format!("{}!", gen.name) } else { gen.name.clone() }
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.relations == other.relations
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.gens.len() as u32).map(|g| self.show_generator(g)).collect();
        let rels: Vec<String> = self.relations.iter().map(|r| self.show_relation(r)).collect();
        if rels.is_empty() {
            write!(f, "present < {} >", gens.join(", "))
        } else {
            write!(f, "present < {} | {} >", gens.join(", "), rels.join(", "))
        }
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_projections() -> Presentation {
        let (p, q) = (FreeStarPoly::generator(0), FreeStarPoly::generator(1));
        Presentation::new(
            vec![Generator::self_adjoint("p"), Generator::self_adjoint("q")],
            vec![p.mul(&p).sub(&p), q.mul(&q).sub(&q)],
        )
        .unwrap()
    }

    #[test]
    fn display_uses_workspace_syntax() {
        assert_eq!(two_projections().to_string(), "present < p!, q! | p p = p, q q = q >");
    }

    #[test]
    fn star_close_examples() {
        let p = two_projections();
        assert_eq!(star_close(p.generators(), p.relations()), p.relations());
        assert!(star_close(&[], &[]).is_empty());

        let gens = vec![Generator::plain("u")];
        let u = FreeStarPoly::generator(0);
        let us = FreeStarPoly::letter(Letter::starred(0));
        // u*u − 1 is its own adjoint
        let r = us.mul(&u).sub(&FreeStarPoly::one());
        assert_eq!(star_close(&gens, std::slice::from_ref(&r)), vec![r.clone()]);
        // u u − 1 gains u* u* − 1
        let r2 = u.mul(&u).sub(&FreeStarPoly::one());
        let closed = star_close(&gens, std::slice::from_ref(&r2));
        assert_eq!(closed, vec![r2, us.mul(&us).sub(&FreeStarPoly::one())]);
        assert_eq!(star_close(&gens, &closed), closed);
    }

    #[test]
    fn relations_are_canonical() {
        let gens = vec![Generator::self_adjoint("p")];
        let ps = FreeStarPoly::letter(Letter::starred(0));
        let p = FreeStarPoly::generator(0);
        let pres = Presentation::new(gens, vec![ps.mul(&p).scale(&GaussRat::from_int(2)).sub(&p.scale(&GaussRat::from_int(2))), p.mul(&p).sub(&p)]).unwrap();
        assert_eq!(pres.relations().len(), 1);
        assert!(pres.is_star_closed());
    }

    #[test]
    fn degenerate_relation_is_flagged() {
        let pres = Presentation::new(vec![Generator::plain("a")], vec![FreeStarPoly::constant(GaussRat::from_int(3))]).unwrap();
        assert!(pres.is_degenerate());
        assert_eq!(pres.ensure_nondegenerate(), Err(PresentationError::Degenerate));
        assert!(!two_projections().is_degenerate());
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            Presentation::new(vec![Generator::plain("a"), Generator::plain("a")], vec![]),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            Presentation::new(vec![Generator::plain("1a")], vec![]),
            Err(PresentationError::InvalidName(_))
        ));
        assert!(matches!(
            Presentation::new(vec![Generator::plain("a")], vec![FreeStarPoly::generator(3)]),
            Err(PresentationError::LetterOutOfRange { .. })
        ));
        assert!(matches!(two_projections().gen("r"), Err(PresentationError::UnknownGenerator(_))));
    }

    #[test]
    fn abelianize_is_idempotent() {
        let a = two_projections().abelianize();
        assert_eq!(a.abelianize(), a);
        let one = Presentation::new(
            vec![Generator::self_adjoint("p")],
            vec![FreeStarPoly::generator(0).mul(&FreeStarPoly::generator(0)).sub(&FreeStarPoly::generator(0))],
        )
        .unwrap();
        assert_eq!(one.abelianize(), one);
        let b = Presentation::from_fd(&FdAlgebra::new(&[2]).unwrap()).abelianize();
        assert_eq!(b.abelianize(), b);
    }

    #[test]
    fn fd_presentation_reduces_products() {
        let a = FdAlgebra::new(&[1, 2]).unwrap();
        let pres = Presentation::from_fd(&a);
        assert_eq!(pres.num_generators(), 5);
        let sys = pres.rewrite_system();
        assert!(sys.verify(&pres));
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                let lhs = FreeStarPoly::generator(x as u32).mul(&FreeStarPoly::generator(y as u32));
                let expect = a.product_index(x, y).map_or(FreeStarPoly::zero(), |z| FreeStarPoly::generator(z as u32));
                assert_eq!(sys.normal_form(&lhs, DEFAULT_BUDGET).poly, sys.normal_form(&expect, DEFAULT_BUDGET).poly);
            }
        }
    }

    #[test]
    fn tensor_flattens_and_commutes() {
        let p = two_projections();
        let t = Presentation::tensor(&[&p, &p]);
        assert_eq!(t.names(), &["t0_p", "t0_q", "t1_p", "t1_q"]);
        let tt = Presentation::tensor(&[&t, &p]);
        assert_eq!(tt.factors().unwrap().len(), 3);
        let (a, b) = (FreeStarPoly::generator(0), FreeStarPoly::generator(3));
        let nf = t.normal_form(&b.mul(&a).sub(&a.mul(&b)), DEFAULT_BUDGET).unwrap();
        assert!(nf.poly.is_zero());
        assert_eq!(t.embed_factor(1, &FreeStarPoly::generator(1)), FreeStarPoly::generator(3));
    }

    #[test]
    fn direct_sum_has_orthogonal_slot_units() {
        let p = two_projections();
        let s = Presentation::direct_sum(&[&p, &p]);
        let u0 = s.gen("u0").unwrap();
        let u1 = s.gen("u1").unwrap();
        let x = s.gen("s0_p").unwrap();
        let y = s.gen("s1_q").unwrap();
        for e in [u0.mul(&u1), x.mul(&y), u1.mul(&x), u0.add(&u1).sub(&FreeStarPoly::one())] {
            assert!(s.normal_form(&e, DEFAULT_BUDGET).unwrap().poly.is_zero());
        }
    }
}
