use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::GaussRat;

/// A generator symbol or its formal adjoint. The derived order places `x*`
/// immediately after `x`, and generators in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub star: bool,
}

impl Letter {
    pub fn new(gen: u32) -> Self {
        Self { gen, star: false }
    }

    pub fn starred(gen: u32) -> Self {
        Self { gen, star: true }
    }

    pub fn adjoint(self) -> Self {
        Self { gen: self.gen, star: !self.star }
    }
}

/// A word in letters; the empty word is the unit. Ordered degree-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `u · self · v`.
    pub fn wrap(&self, u: &Word, v: &Word) -> Word {
        let mut out = Vec::with_capacity(u.len() + self.len() + v.len());
        out.extend_from_slice(&u.0);
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&v.0);
        Word(out)
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    /// First position at which `pattern` occurs as a contiguous subword.
    pub fn find(&self, pattern: &Word) -> Option<usize> {
        if pattern.len() > self.len() {
            return None;
        }
        (0..=self.len() - pattern.len()).find(|&k| self.0[k..].starts_with(&pattern.0))
    }

    pub fn max_gen(&self) -> Option<u32> {
        self.0.iter().map(|l| l.gen).max()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|l| format!("g{}{}", l.gen, if l.star { "*" } else { "" })).collect();
        f.write_str(&parts.join("·"))
    }
}

/// A noncommutative *-polynomial `Σ c_w w` with Gaussian rational coefficients,
/// kept canonical: like terms merged, zero coefficients dropped, terms sorted
/// by the word order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeStarPoly {
    terms: BTreeMap<Word, GaussRat>,
}

impl FreeStarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(c, Word::empty())
    }

    pub fn monomial(c: GaussRat, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(GaussRat::one(), Word::letter(l))
    }

    pub fn generator(gen: u32) -> Self {
        Self::letter(Letter::new(gen))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GaussRat, Word)>) -> Self {
        let mut p = Self::zero();
        for (c, w) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> GaussRat {
        self.terms.get(w).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn leading(&self) -> Option<(&Word, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> usize {
        self.leading().map_or(0, |(w, _)| w.len())
    }

    /// `Some(c)` for a constant polynomial `c·1` (including zero).
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Word, GaussRat)> {
        self.terms.pop_last()
    }

    pub fn add_scaled(&mut self, c: &GaussRat, other: &FreeStarPoly) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), &(c * d));
        }
    }

    /// `self += c · u · other · v`.
    pub fn add_wrapped(&mut self, c: &GaussRat, u: &Word, other: &FreeStarPoly, v: &Word) {
        for (w, d) in &other.terms {
            self.add_term(w.wrap(u, v), &(c * d));
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussRat::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&GaussRat::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-GaussRat::one(), other);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }

    /// Involutive conjugate-linear anti-automorphism.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), &c.conj());
        }
        out
    }

    /// Scaled so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => Self::zero(),
        }
    }

    pub fn max_gen(&self) -> Option<u32> {
        self.terms.keys().filter_map(Word::max_gen).max()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.terms.keys().flat_map(|w| w.0.iter().copied())
    }

    /// Rewrites every letter through `f`, keeping words intact.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(Word(w.0.iter().map(|&l| f(l)).collect()), c);
        }
        out
    }

    /// Homomorphic extension of `image` on letters, into any [`Evaluation`].
    pub fn evaluate<T: Evaluation>(&self, one: &T, image: impl Fn(Letter) -> T) -> T {
        let mut cache: HashMap<Letter, T> = HashMap::new();
        let mut acc = one.zero_like();
        for (w, c) in &self.terms {
            let mut prod = one.clone();
            for &l in &w.0 {
                let img = cache.entry(l).or_insert_with(|| image(l));
                prod = prod.mul(img);
            }
            acc.add_scaled(c, &prod);
        }
        acc
    }

    /// Substitutes polynomials for generators; `x*` maps to the adjoint of the image of `x`.
    pub fn substitute(&self, images: &[FreeStarPoly]) -> FreeStarPoly {
        self.evaluate(&FreeStarPoly::one(), |l| {
            let p = &images[l.gen as usize];
            if l.star { p.adjoint() } else { p.clone() }
        })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl fmt::Debug for FreeStarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(w, c)| format!("({c})·{w:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Targets into which polynomials can be evaluated homomorphically.
pub trait Evaluation: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, c: &GaussRat, other: &Self);
    fn mul(&self, other: &Self) -> Self;
}

impl Evaluation for FreeStarPoly {
    fn zero_like(&self) -> Self {
        FreeStarPoly::zero()
    }
    fn add_scaled(&mut self, c: &GaussRat, other: &Self) {
        FreeStarPoly::add_scaled(self, c, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FreeStarPoly::mul(self, other)
    }
}

impl Evaluation for GaussRat {
    fn zero_like(&self) -> Self {
        GaussRat::zero()
    }
    fn add_scaled(&mut self, c: &GaussRat, other: &Self) {
        *self += &(c * other);
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Workspace syntax: juxtaposed letters, `^*` for adjoints, `1` for the unit.
pub struct PolyDisplay<'a> {
    poly: &'a FreeStarPoly,
    names: &'a [String],
}

impl PolyDisplay<'_> {
    pub fn word(&self, w: &Word) -> String {
        let parts: Vec<String> = w
            .0
            .iter()
            .map(|l| {
                let name = &self.names[l.gen as usize];
                if l.star { format!("{name}^*") } else { name.clone() }
            })
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (w, c) in self.poly.terms.iter().rev() {
            crate::scalar::push_term(&mut out, c, &self.word(w));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(k: u32) -> FreeStarPoly {
        FreeStarPoly::generator(k)
    }

    #[test]
    fn degree_lex_order() {
        let a = Word(vec![Letter::new(1)]);
        let b = Word(vec![Letter::new(0), Letter::new(0)]);
        let c = Word(vec![Letter::new(0), Letter::starred(0)]);
        let d = Word(vec![Letter::new(1), Letter::new(0)]);
        assert!(Word::empty() < a);
        assert!(a < b);
        assert!(b < c);
        assert!(c < d);
        assert!(Letter::new(0) < Letter::starred(0));
        assert!(Letter::starred(0) < Letter::new(1));
    }

    #[test]
    fn canonical_merging() {
        let p = g(0).add(&g(1)).sub(&g(0));
        assert_eq!(p, g(1));
        assert!(g(0).sub(&g(0)).is_zero());
    }

    #[test]
    fn display_in_workspace_syntax() {
        let names = vec!["p".to_string(), "q".to_string()];
        let p = g(0).mul(&g(0)).sub(&g(0));
        assert_eq!(p.display(&names).to_string(), "p p - p");
        let q = FreeStarPoly::letter(Letter::starred(1)).scale(&GaussRat::int_parts(1, 2)).add(&FreeStarPoly::one());
        assert_eq!(q.display(&names).to_string(), "(1+2i) q^* + 1");
    }

    #[test]
    fn substitution_respects_adjoints() {
        let images = vec![g(1).scale(&GaussRat::i()), g(0)];
        let p = FreeStarPoly::letter(Letter::starred(0));
        let expect = FreeStarPoly::letter(Letter::starred(1)).scale(&(-GaussRat::i()));
        assert_eq!(p.substitute(&images), expect);
    }

    fn arb_poly() -> impl Strategy<Value = FreeStarPoly> {
        let letter = (0u32..3, any::<bool>()).prop_map(|(gen, star)| Letter { gen, star });
        let word = prop::collection::vec(letter, 0..4).prop_map(Word);
        let coeff = (-3i64..=3, -3i64..=3).prop_map(|(a, b)| GaussRat::int_parts(a, b));
        prop::collection::vec((coeff, word), 0..5).prop_map(FreeStarPoly::from_terms)
    }

    proptest! {
        #[test]
        fn adjoint_is_involutive_anti_homomorphism(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.adjoint().adjoint(), p.clone());
            prop_assert_eq!(p.mul(&q).adjoint(), q.adjoint().mul(&p.adjoint()));
            prop_assert_eq!(p.add(&q).adjoint(), p.adjoint().add(&q.adjoint()));
            let i = GaussRat::i();
            prop_assert_eq!(p.scale(&i).adjoint(), p.adjoint().scale(&i.conj()));
        }

        #[test]
        fn word_order_is_multiplicative(a in prop::collection::vec((0u32..3, any::<bool>()), 0..4),
                                        b in prop::collection::vec((0u32..3, any::<bool>()), 0..4),
                                        u in prop::collection::vec((0u32..3, any::<bool>()), 0..3)) {
            let mk = |v: &Vec<(u32, bool)>| Word(v.iter().map(|&(gen, star)| Letter { gen, star }).collect());
            let (a, b, u) = (mk(&a), mk(&b), mk(&u));
            if a < b {
                prop_assert!(u.concat(&a) < u.concat(&b));
                prop_assert!(a.concat(&u) < b.concat(&u));
            }
        }
    }
}
