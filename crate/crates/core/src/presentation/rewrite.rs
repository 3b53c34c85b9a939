//! Rewriting modulo a relation ideal, with derivation traces.
//!
//! Every rule `L → R` is backed by an ideal member `L − R` whose membership in
//! the two-sided ideal is witnessed by a [`Derivation`] over earlier members,
//! bottoming out at the presentation's relations and the implicit relations
//! `x* − x` of self-adjoint generators.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Zero};

use super::poly::{FreeStarPoly, Letter, Word};
use super::Presentation;
use crate::scalar::GaussRat;

/// Default number of rule applications per normal form.
pub const DEFAULT_BUDGET: u64 = 100_000;

const ABSORB_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Relation(usize),
    SelfAdjoint(u32),
    Derived(Derivation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealMember {
    pub poly: FreeStarPoly,
    pub origin: Origin,
}

/// `coeff · left · member · right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTerm {
    pub coeff: GaussRat,
    pub left: Word,
    pub member: usize,
    pub right: Word,
}

/// A two-sided ideal combination `Σ c · u · m · v` of ideal members.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub terms: Vec<DerivationTerm>,
}

impl Derivation {
    pub fn single(member: usize) -> Self {
        Self {
            terms: vec![DerivationTerm {
                coeff: GaussRat::one(),
                left: Word::empty(),
                member,
                right: Word::empty(),
            }],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn expand(&self, members: &[IdealMember]) -> FreeStarPoly {
        let mut out = FreeStarPoly::zero();
        for t in &self.terms {
            out.add_wrapped(&t.coeff, &t.left, &members[t.member].poly, &t.right);
        }
        out
    }

    pub fn add_scaled(&mut self, c: &GaussRat, other: &Derivation) {
        for t in &other.terms {
            self.terms.push(DerivationTerm { coeff: c * &t.coeff, ..t.clone() });
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Derivation {
        let mut out = Derivation::default();
        out.add_scaled(c, self);
        out
    }

    /// Merges terms with the same placement and drops zero coefficients.
    pub fn compact(self) -> Derivation {
        let mut index: HashMap<(Word, usize, Word), usize> = HashMap::new();
        let mut terms: Vec<DerivationTerm> = Vec::new();
        for t in self.terms {
            let key = (t.left.clone(), t.member, t.right.clone());
            match index.get(&key) {
                Some(&k) => terms[k].coeff += &t.coeff,
                None => {
                    index.insert(key, terms.len());
                    terms.push(t);
                }
            }
        }
        terms.retain(|t| !t.coeff.is_zero());
        Derivation { terms }
    }

    fn is_single(&self, member: usize) -> bool {
        matches!(self.terms.as_slice(), [t] if t.member == member && t.coeff.is_one() && t.left.is_empty() && t.right.is_empty())
    }
}

/// An oriented relation `lhs → rhs`, with `lhs` the leading word of the
/// monic ideal member `lhs − rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: FreeStarPoly,
    pub member: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteOptions {
    /// Run bounded critical-pair completion after interreduction.
    pub completion: bool,
    /// Stop completion once this many rules exist.
    pub max_rules: usize,
    /// Maximum completion rounds.
    pub max_rounds: usize,
}

impl Default for RewriteOptions {
    fn default() -> Self {
        Self { completion: false, max_rules: 2_000, max_rounds: 8 }
    }
}

/// Result of rewriting: `input − poly = derivation` expanded over the system's members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub poly: FreeStarPoly,
    pub exhausted: bool,
    pub steps: u64,
    pub derivation: Derivation,
}

impl NormalForm {
    /// Re-checks the trace against the system's members.
    pub fn verify(&self, input: &FreeStarPoly, system: &RewriteSystem) -> bool {
        input.sub(&self.poly) == self.derivation.expand(system.members())
    }
}

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    members: Vec<IdealMember>,
    rules: Vec<Rule>,
    by_first: HashMap<Letter, Vec<usize>>,
    unit_rule: Option<usize>,
    complete: bool,
}

struct Builder {
    members: Vec<IdealMember>,
    rules: Vec<Option<Rule>>,
    by_first: HashMap<Letter, Vec<usize>>,
    unit_rule: Option<usize>,
}

impl Builder {
    fn find(&self, w: &Word) -> Option<(usize, usize)> {
        if let Some(r) = self.unit_rule {
            return Some((r, 0));
        }
        find_in(&self.by_first, |r| &self.rules[r].as_ref().expect("active").lhs, w)
    }

    fn reduce(&self, p: &FreeStarPoly) -> (FreeStarPoly, Derivation) {
        let nf = reduce_with(|w| self.find(w), |r| self.rules[r].as_ref().expect("active"), p, u64::MAX);
        (nf.poly, nf.derivation)
    }

    fn deactivate(&mut self, r: usize) {
        let rule = self.rules[r].take().expect("active");
        match rule.lhs.letters().first() {
            Some(l) => {
                if let Some(v) = self.by_first.get_mut(l) {
                    v.retain(|&k| k != r);
                }
            }
            None => self.unit_rule = None,
        }
    }

    fn insert(&mut self, rule: Rule) -> usize {
        let r = self.rules.len();
        match rule.lhs.letters().first() {
            Some(&l) => {
                let list = self.by_first.entry(l).or_default();
                list.push(r);
            }
            None => self.unit_rule = Some(r),
        }
        self.rules.push(Some(rule));
        r
    }

    /// Reduces `p` (an ideal element witnessed by `d`) and installs the
    /// remainder as a new rule, requeueing rules it makes reducible.
    fn absorb(&mut self, p: FreeStarPoly, d: Derivation, pending: &mut VecDeque<(FreeStarPoly, Derivation)>) -> bool {
        let (r, dr) = self.reduce(&p);
        if r.is_zero() {
            return false;
        }
        let lc = r.leading().expect("nonzero").1.inv().expect("nonzero");
        let poly = r.scale(&lc);
        let mut deriv = d.clone();
        deriv.add_scaled(&-GaussRat::one(), &dr);
        let deriv = deriv.scale(&lc).compact();
        let member = match deriv.terms.as_slice() {
            [t] if deriv.is_single(t.member) && self.members[t.member].poly == poly => t.member,
            _ => {
                self.members.push(IdealMember { poly: poly.clone(), origin: Origin::Derived(deriv) });
                self.members.len() - 1
            }
        };
        let mut rhs = poly.clone();
        let (lhs, _) = rhs.pop_leading().expect("nonzero");
        let rhs = rhs.neg();
        let stale: Vec<usize> = self
            .rules
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.as_ref().filter(|r| r.lhs.find(&lhs).is_some()).map(|_| k))
            .collect();
        for k in stale {
            let m = self.rules[k].as_ref().expect("active").member;
            self.deactivate(k);
            pending.push_back((self.members[m].poly.clone(), Derivation::single(m)));
        }
        self.insert(Rule { lhs, rhs, member });
        true
    }

    fn drain(&mut self, pending: &mut VecDeque<(FreeStarPoly, Derivation)>) {
        let mut count = 0;
        while let Some((p, d)) = pending.pop_front() {
            self.absorb(p, d, pending);
            count += 1;
            if count > ABSORB_LIMIT {
                break;
            }
        }
    }

    /// Brings every right-hand side to normal form.
    fn reduce_rhs(&mut self) {
        for k in 0..self.rules.len() {
            let Some(rule) = self.rules[k].clone() else { continue };
            let (rhs, d) = self.reduce(&rule.rhs);
            if rhs == rule.rhs {
                continue;
            }
            // lhs − rhs' = (lhs − rhs) + (rhs − rhs')
            let mut deriv = Derivation::single(rule.member);
            deriv.add_scaled(&GaussRat::one(), &d);
            let poly = FreeStarPoly::monomial(GaussRat::one(), rule.lhs.clone()).sub(&rhs);
            self.members.push(IdealMember { poly, origin: Origin::Derived(deriv.compact()) });
            let member = self.members.len() - 1;
            self.rules[k] = Some(Rule { lhs: rule.lhs, rhs, member });
        }
    }

    /// S-polynomials of all overlaps `L_i = u·s`, `L_j = s·v` not yet seen.
    fn critical_pairs(&self, seen: &mut HashSet<(usize, usize, usize)>) -> Vec<(FreeStarPoly, Derivation)> {
        let active: Vec<&Rule> = self.rules.iter().flatten().collect();
        let mut out = Vec::new();
        for ri in &active {
            for rj in &active {
                let (li, lj) = (ri.lhs.letters(), rj.lhs.letters());
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] != lj[..k] || !seen.insert((ri.member, rj.member, k)) {
                        continue;
                    }
                    let u = Word(li[..li.len() - k].to_vec());
                    let v = Word(lj[k..].to_vec());
                    // m_i·v − u·m_j
                    let mut p = FreeStarPoly::zero();
                    p.add_wrapped(&GaussRat::one(), &Word::empty(), &self.members[ri.member].poly, &v);
                    p.add_wrapped(&-GaussRat::one(), &u, &self.members[rj.member].poly, &Word::empty());
                    let d = Derivation {
                        terms: vec![
                            DerivationTerm { coeff: GaussRat::one(), left: Word::empty(), member: ri.member, right: v },
                            DerivationTerm { coeff: -GaussRat::one(), left: u, member: rj.member, right: Word::empty() },
                        ],
                    };
                    out.push((p, d));
                }
            }
        }
        out
    }
}

fn find_in<'a>(
    by_first: &HashMap<Letter, Vec<usize>>,
    lhs: impl Fn(usize) -> &'a Word,
    w: &Word,
) -> Option<(usize, usize)> {
    let letters = w.letters();
    for pos in 0..letters.len() {
        if let Some(cands) = by_first.get(&letters[pos]) {
            for &r in cands {
                if letters[pos..].starts_with(lhs(r).letters()) {
                    return Some((r, pos));
                }
            }
        }
    }
    None
}

fn reduce_with<'a>(
    find: impl Fn(&Word) -> Option<(usize, usize)>,
    rule: impl Fn(usize) -> &'a Rule,
    p: &FreeStarPoly,
    budget: u64,
) -> NormalForm {
    let mut remaining = p.clone();
    let mut out = FreeStarPoly::zero();
    let mut steps = 0u64;
    let mut exhausted = false;
    let mut terms = Vec::new();
    while let Some((w, c)) = remaining.pop_leading() {
        let Some((r, pos)) = find(&w) else {
            out.add_term(w, &c);
            continue;
        };
        if steps >= budget {
            exhausted = true;
            remaining.add_term(w, &c);
            out.add_scaled(&GaussRat::one(), &remaining);
            break;
        }
        steps += 1;
        let rule = rule(r);
        let u = Word(w.letters()[..pos].to_vec());
        let v = Word(w.letters()[pos + rule.lhs.len()..].to_vec());
        remaining.add_wrapped(&c, &u, &rule.rhs, &v);
        terms.push(DerivationTerm { coeff: c, left: u, member: rule.member, right: v });
    }
    NormalForm { poly: out, exhausted, steps, derivation: Derivation { terms } }
}

impl RewriteSystem {
    pub fn new(pres: &Presentation, opts: RewriteOptions) -> Self {
        let mut members: Vec<IdealMember> = pres
            .relations()
            .iter()
            .enumerate()
            .map(|(i, r)| IdealMember { poly: r.clone(), origin: Origin::Relation(i) })
            .collect();
        for (g, gen) in pres.generators().iter().enumerate() {
            if gen.self_adjoint {
                let g = g as u32;
                let poly = FreeStarPoly::letter(Letter::starred(g)).sub(&FreeStarPoly::generator(g));
                members.push(IdealMember { poly, origin: Origin::SelfAdjoint(g) });
            }
        }
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| members[a].poly.leading().map(|t| t.0).cmp(&members[b].poly.leading().map(|t| t.0)));
        let mut pending: VecDeque<(FreeStarPoly, Derivation)> =
            order.into_iter().map(|m| (members[m].poly.clone(), Derivation::single(m))).collect();
        let mut b = Builder { members, rules: Vec::new(), by_first: HashMap::new(), unit_rule: None };
        b.drain(&mut pending);
        b.reduce_rhs();
        let mut complete = false;
        if opts.completion {
            let mut seen = HashSet::new();
            for _ in 0..opts.max_rounds {
                let pairs = b.critical_pairs(&mut seen);
                if pairs.is_empty() {
                    complete = true;
                    break;
                }
                let mut pending: VecDeque<_> = pairs.into_iter().collect();
                b.drain(&mut pending);
                b.reduce_rhs();
                if b.rules.iter().flatten().count() > opts.max_rules {
                    break;
                }
            }
        }
        let mut sys = RewriteSystem {
            members: b.members,
            rules: b.rules.into_iter().flatten().collect(),
            by_first: HashMap::new(),
            unit_rule: None,
            complete,
        };
        for (k, rule) in sys.rules.iter().enumerate() {
            match rule.lhs.letters().first() {
                Some(&l) => sys.by_first.entry(l).or_default().push(k),
                None => sys.unit_rule = Some(k),
            }
        }
        sys
    }

    pub fn members(&self) -> &[IdealMember] {
        &self.members
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Whether bounded completion ran and found no unresolved overlaps.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Whether the system proves `1 = 0`.
    pub fn is_trivial(&self) -> bool {
        self.unit_rule.is_some()
    }

    /// Leftmost occurrence of a rule's left-hand side in `w`: `(rule, position)`.
    pub fn find_reducer(&self, w: &Word) -> Option<(usize, usize)> {
        if let Some(r) = self.unit_rule {
            return Some((r, 0));
        }
        find_in(&self.by_first, |r| &self.rules[r].lhs, w)
    }

    /// Rewrites the largest reducible term first, at most `budget` applications.
    pub fn normal_form(&self, p: &FreeStarPoly, budget: u64) -> NormalForm {
        reduce_with(|w| self.find_reducer(w), |r| &self.rules[r], p, budget)
    }

    /// Checks every member against the presentation and its derivation,
    /// and every rule against its member.
    pub fn verify(&self, pres: &Presentation) -> bool {
        for (k, m) in self.members.iter().enumerate() {
            let ok = match &m.origin {
                Origin::Relation(i) => pres.relations().get(*i) == Some(&m.poly),
                Origin::SelfAdjoint(g) => {
                    pres.generators().get(*g as usize).is_some_and(|gen| gen.self_adjoint)
                        && m.poly == FreeStarPoly::letter(Letter::starred(*g)).sub(&FreeStarPoly::generator(*g))
                }
                Origin::Derived(d) => {
                    d.terms.iter().all(|t| t.member < k) && d.expand(&self.members[..k]) == m.poly
                }
            };
            if !ok {
                return false;
            }
        }
        self.rules.iter().all(|r| {
            self.members[r.member].poly == FreeStarPoly::monomial(GaussRat::one(), r.lhs.clone()).sub(&r.rhs)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Generator;

    fn proj_pair() -> Presentation {
        let p = FreeStarPoly::generator(0);
        let q = FreeStarPoly::generator(1);
        Presentation::new(
            vec![Generator::self_adjoint("p"), Generator::self_adjoint("q")],
            vec![p.mul(&p).sub(&p), q.mul(&q).sub(&q)],
        )
        .unwrap()
    }

    #[test]
    fn idempotent_square_reduces_to_zero() {
        let pres = proj_pair();
        let sys = pres.rewrite_system();
        let p = FreeStarPoly::generator(0);
        let nf = sys.normal_form(&p.mul(&p).sub(&p), DEFAULT_BUDGET);
        assert!(nf.poly.is_zero());
        assert!(nf.verify(&p.mul(&p).sub(&p), sys));
        assert!(sys.verify(&pres));
    }

    #[test]
    fn q_times_one_minus_q() {
        let pres = proj_pair();
        let q = FreeStarPoly::generator(1);
        let e = q.mul(&FreeStarPoly::one().sub(&q));
        assert!(pres.rewrite_system().normal_form(&e, DEFAULT_BUDGET).poly.is_zero());
    }

    #[test]
    fn pqp_is_irreducible() {
        let pres = proj_pair();
        let sys = pres.rewrite_system();
        let (p, q) = (FreeStarPoly::generator(0), FreeStarPoly::generator(1));
        let pqp = p.mul(&q).mul(&p);
        let (w, _) = pqp.leading().unwrap();
        // oracle: no left-hand side occurs as a subword
        for r in sys.rules() {
            assert!(w.find(&r.lhs).is_none());
        }
        let nf = sys.normal_form(&pqp, DEFAULT_BUDGET);
        assert_eq!(nf.poly, pqp);
        assert_eq!(nf.steps, 0);
    }

    #[test]
    fn adjoint_letters_of_self_adjoint_generators_rewrite() {
        let pres = proj_pair();
        let sys = pres.rewrite_system();
        let e = FreeStarPoly::letter(Letter::starred(0)).mul(&FreeStarPoly::generator(0));
        let nf = sys.normal_form(&e, DEFAULT_BUDGET);
        assert_eq!(nf.poly, FreeStarPoly::generator(0));
        assert!(nf.verify(&e, sys));
    }

    #[test]
    fn budget_exhaustion() {
        let pres = proj_pair();
        let sys = pres.rewrite_system();
        let p = FreeStarPoly::generator(0);
        let p4 = p.mul(&p).mul(&p).mul(&p);
        let nf = sys.normal_form(&p4, 1);
        assert!(nf.exhausted);
        assert_eq!(nf.steps, 1);
        assert!(nf.verify(&p4, sys));
        let full = sys.normal_form(&p4, DEFAULT_BUDGET);
        assert!(!full.exhausted);
        assert_eq!(full.poly, p);
    }

    #[test]
    fn unit_relation_collapses_everything() {
        let pres = Presentation::new(vec![Generator::plain("u")], vec![FreeStarPoly::one()]).unwrap();
        let sys = pres.rewrite_system();
        assert!(sys.is_trivial());
        let e = FreeStarPoly::generator(0).add(&FreeStarPoly::one());
        let nf = sys.normal_form(&e, DEFAULT_BUDGET);
        assert!(nf.poly.is_zero());
        assert!(nf.verify(&e, sys));
    }

    #[test]
    fn interreduction_derives_consequences() {
        // a = b, b b = 1 gives a a → 1 through the derived rule set
        let a = FreeStarPoly::generator(0);
        let b = FreeStarPoly::generator(1);
        let pres = Presentation::new(
            vec![Generator::self_adjoint("a"), Generator::self_adjoint("b")],
            vec![b.sub(&a), b.mul(&b).sub(&FreeStarPoly::one())],
        )
        .unwrap();
        let sys = pres.rewrite_system();
        assert!(sys.verify(&pres));
        let e = a.mul(&a).sub(&FreeStarPoly::one());
        let nf = sys.normal_form(&e, DEFAULT_BUDGET);
        assert!(nf.poly.is_zero());
        assert!(nf.verify(&e, sys));
    }

    #[test]
    fn completion_resolves_overlaps() {
        // y x = x and x y = y overlap on y x y.
        let x = FreeStarPoly::generator(0);
        let y = FreeStarPoly::generator(1);
        let pres = Presentation::new(
            vec![Generator::self_adjoint("x"), Generator::self_adjoint("y")],
            vec![y.mul(&x).sub(&x), x.mul(&y).sub(&y)],
        )
        .unwrap();
        let plain = pres.rewrite_system();
        let complete = RewriteSystem::new(&pres, RewriteOptions { completion: true, ..Default::default() });
        assert!(complete.verify(&pres));
        assert!(complete.is_complete());
        let e = y.mul(&x).mul(&y).sub(&y);
        assert!(complete.normal_form(&e, DEFAULT_BUDGET).poly.is_zero());
        assert!(complete.rules().len() >= plain.rules().len());
    }
}
