use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ast::*;
use super::eval::{to_element, to_poly, unit_index};
use super::lexer::Span;
use super::report::{Entry, Report, Status};
use super::{build_presentation, standard_algebra, Diagnostic};
use crate::fd_algebra::random::{commuting_square, random_scalar};
use crate::fd_algebra::{check_slice_identity, direct_sum, tensor, FdAlgebra, FdElement, Functional, MatrixUnit, StarHom};
use crate::mor::{
    build_mor, check_functor_laws, recovery, surjectivity_preimages, HomError, MorPresentation, MorSource, PresentedHom,
};
use crate::presentation::{FreeStarPoly, Oracle, Presentation, VerdictStatus, DEFAULT_BUDGET};
use crate::repsearch::{find_noncommutative, find_representation, SearchError, SearchOptions};
use crate::structure::classical::{all_maps, character_map, points};
use crate::structure::{
    coassociativity, combine, direct_sum_split, exp_law_maps, tensor_split, StructureError,
};

/// Minimal generator commutator norm for `repsearch … noncommutative`.
pub const MIN_COMMUTATOR: f64 = 0.3;

/// Slice-lemma squares are drawn over algebras of at most this dimension by default.
pub const SLICE_LEMMA_MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub budget: u64,
    pub seed: u64,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { budget: DEFAULT_BUDGET, seed: 0, timings: false }
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Algebra(FdAlgebra),
    Presented(Arc<Presentation>),
    FdHom(StarHom),
    Hom(PresentedHom),
    Mor(MorPresentation),
}

type Job = Box<dyn FnOnce() -> Entry + Send>;

struct Env {
    values: HashMap<String, Value>,
    oracle: Oracle,
    seed: u64,
}

fn mismatch(id: &Ident, wanted: &str) -> Diagnostic {
    Diagnostic::new(id.span, format!("kind mismatch: `{}` is not {wanted}", id.name))
}

impl Env {
    fn get(&self, id: &Ident) -> Result<Value, Diagnostic> {
        if let Some(v) = self.values.get(&id.name) {
            return Ok(v.clone());
        }
        standard_algebra(&id.name)
            .map(Value::Algebra)
            .ok_or_else(|| Diagnostic::new(id.span, format!("unknown name `{}`", id.name)))
    }

    fn fd(&self, id: &Ident) -> Result<FdAlgebra, Diagnostic> {
        match self.get(id)? {
            Value::Algebra(a) => Ok(a),
            _ => Err(mismatch(id, "a multi-matrix algebra")),
        }
    }

    fn presentation(&self, id: &Ident) -> Result<Arc<Presentation>, Diagnostic> {
        match self.get(id)? {
            Value::Algebra(a) => Ok(Arc::new(Presentation::from_fd(&a))),
            Value::Presented(p) => Ok(p),
            Value::Mor(m) => Ok(m.base().clone()),
            _ => Err(mismatch(id, "an algebra")),
        }
    }

    fn mor_source(&self, id: &Ident) -> Result<MorSource, Diagnostic> {
        match self.get(id)? {
            Value::Algebra(a) => Ok(MorSource::Fd(a)),
            _ => Ok(MorSource::Presented(self.presentation(id)?)),
        }
    }

    fn fd_hom(&self, id: &Ident) -> Result<StarHom, Diagnostic> {
        match self.get(id)? {
            Value::FdHom(h) => Ok(h),
            _ => Err(mismatch(id, "a homomorphism of multi-matrix algebras")),
        }
    }

    fn algebra(&self, name: &Ident, def: &AlgebraDef, span: Span) -> Result<Value, Diagnostic> {
        let err = |e: &dyn std::fmt::Display| Diagnostic::new(name.span, e.to_string());
        Ok(match def {
            AlgebraDef::Blocks(b) => Value::Algebra(FdAlgebra::new(b).map_err(|e| err(&e))?),
            AlgebraDef::Present { generators, relations } => {
                Value::Presented(Arc::new(build_presentation(generators, relations, span)?))
            }
            AlgebraDef::Tensor(parts) | AlgebraDef::Sum(parts) => {
                let is_tensor = matches!(def, AlgebraDef::Tensor(_));
                let fds: Option<Vec<FdAlgebra>> = parts.iter().map(|p| self.fd(p).ok()).collect();
                match fds {
                    Some(fds) if is_tensor => {
                        let mut acc = fds[0].clone();
                        for b in &fds[1..] {
                            acc = tensor(&acc, b).algebra().clone();
                        }
                        Value::Algebra(acc)
                    }
                    Some(fds) => Value::Algebra(direct_sum(&fds).algebra().clone()),
                    None => {
                        let ps = parts.iter().map(|p| self.presentation(p)).collect::<Result<Vec<_>, _>>()?;
                        let refs: Vec<&Presentation> = ps.iter().map(|p| p.as_ref()).collect();
                        let p = if is_tensor { Presentation::tensor(&refs) } else { Presentation::direct_sum(&refs) };
                        Value::Presented(Arc::new(p))
                    }
                }
            }
        })
    }

    fn hom(&self, name: &Ident, source: &Ident, target: &Ident, def: &HomDef, span: Span) -> Result<Value, Diagnostic> {
        if let (Value::Algebra(a), Value::Algebra(b)) = (self.get(source)?, self.get(target)?) {
            return fd_hom(name, &a, &b, def, span).map(Value::FdHom);
        }
        let (src, tgt) = (self.presentation(source)?, self.presentation(target)?);
        let images = match def {
            HomDef::Identity if src == tgt => (0..src.num_generators() as u32).map(FreeStarPoly::generator).collect(),
            HomDef::Identity => {
                return Err(Diagnostic::new(name.span, "identity needs equal source and target"));
            }
            HomDef::Images(pairs) => {
                let mut images: Vec<Option<FreeStarPoly>> = vec![None; src.num_generators()];
                for (key, e) in pairs {
                    let g = match key {
                        ImageKey::Name(n) => src
                            .generator_index(&n.name)
                            .map_err(|_| Diagnostic::new(n.span, format!("`{}` is not a generator of {source}", n.name)))?,
                        ImageKey::Unit(u) => src
                            .matrix_unit_generator(*u)
                            .map_err(|_| Diagnostic::new(span, format!("{u} is not a generator of {source}")))?,
                    };
                    if images[g as usize].is_some() {
                        return Err(Diagnostic::new(span, format!("two images for `{}`", src.names()[g as usize])));
                    }
                    images[g as usize] = Some(to_poly(e, &tgt, span)?);
                }
                images
                    .into_iter()
                    .enumerate()
                    .map(|(g, p)| {
                        p.ok_or_else(|| Diagnostic::new(span, format!("no image for generator `{}`", src.names()[g])))
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        let h = PresentedHom::new(src, tgt, images, &self.oracle).map_err(|e| Diagnostic::new(span, e.to_string()))?;
        Ok(Value::Hom(h.named(&name.name)))
    }
}

/// Images of all matrix units; a missing `e[k,i,j]` is filled in as
/// `f(e[k,0,i])^* f(e[k,0,j])` when both are given.
fn fd_hom(name: &Ident, a: &FdAlgebra, b: &FdAlgebra, def: &HomDef, span: Span) -> Result<StarHom, Diagnostic> {
    let pairs = match def {
        HomDef::Identity if a == b => return Ok(StarHom::identity(a)),
        HomDef::Identity => return Err(Diagnostic::new(name.span, "identity needs equal source and target")),
        HomDef::Images(pairs) => pairs,
    };
    let mut given: Vec<Option<FdElement>> = vec![None; a.dim()];
    for (key, e) in pairs {
        let u = match key {
            ImageKey::Unit(u) => *u,
            ImageKey::Name(n) => return Err(Diagnostic::new(n.span, "expected a matrix unit `e[k,i,j]`")),
        };
        let k = unit_index(a, u).ok_or_else(|| Diagnostic::new(span, format!("{u} is not a matrix unit of {a}")))?;
        if given[k].is_some() {
            return Err(Diagnostic::new(span, format!("two images for {u}")));
        }
        given[k] = Some(to_element(e, b, span)?);
    }
    let mut images = Vec::with_capacity(a.dim());
    for k in 0..a.dim() {
        let u = a.unit(k);
        let img = match &given[k] {
            Some(x) => x.clone(),
            None => {
                let first = |c| given[a.index(MatrixUnit::new(u.block, 0, c))].clone();
                match (first(u.row), first(u.col)) {
                    (Some(x), Some(y)) if u.row != 0 || u.col != 0 => &x.adjoint() * &y,
                    _ => return Err(Diagnostic::new(span, format!("no image for {u}"))),
                }
            }
        };
        images.push(img);
    }
    StarHom::new(a, b, images).map_err(|e| Diagnostic::new(span, format!("`{}` is not a *-homomorphism: {e}", name.name)))
}

fn error_entry(status: Status, e: impl std::fmt::Display) -> Entry {
    let mut entry = Entry::new(String::new(), status);
    entry.field("error", e);
    entry
}

fn structure_error(e: StructureError) -> Entry {
    let unverified = matches!(
        &e,
        StructureError::Hom(HomError::Unverified(_)) | StructureError::Mor(crate::mor::MorError::Hom(HomError::Unverified(_)))
    );
    error_entry(if unverified { Status::Unknown } else { Status::Fail }, e)
}

fn with_status(mut e: Entry, s: VerdictStatus) -> Entry {
    e.status = s.into();
    e
}

fn welldef(entry: &mut Entry, prefix: &str, h: &PresentedHom) {
    let labels = h.welldef_labels().into_iter().map(|l| format!("{prefix} {l}"));
    entry.verdicts(labels, h.welldef());
}

fn named<'a>(prefix: &'a str, pres: &'a Presentation) -> impl Iterator<Item = String> + 'a {
    pres.names().iter().map(move |n| format!("{prefix} {n}"))
}

fn run_check(spec: CheckSpec, env: &Env) -> Result<Job, Diagnostic> {
    let oracle = env.oracle.clone();
    Ok(match spec {
        CheckSpec::ExpLaw { b, c1, c2 } => {
            let (b, c1, c2) = (env.mor_source(&b)?, env.fd(&c1)?, env.fd(&c2)?);
            Box::new(move || {
                let law = match exp_law_maps(b, &c1, &c2, &oracle) {
                    Ok(l) => l,
                    Err(e) => return structure_error(e),
                };
                let checks = match law.check(&oracle) {
                    Ok(c) => c,
                    Err(e) => return structure_error(e),
                };
                let mut e = Entry::new(String::new(), Status::Pass);
                e.field("generators", law.joint.base().num_generators());
                welldef(&mut e, "psi welldef", &law.psi);
                welldef(&mut e, "psi' welldef", &law.psi_prime);
                e.verdicts(named("psi'psi = id on", law.joint.base()), &checks.psi_prime_psi);
                e.verdicts(named("psi psi' = id on", law.nested.base()), &checks.psi_psi_prime);
                let c2_dim = c2.dim();
                let gamma_labels = law.inner.base().names().iter().flat_map(move |n| {
                    (0..c2_dim).map(move |beta| format!("(id⊗psi)gamma = phi on {n} [{beta}]"))
                });
                e.verdicts(gamma_labels, &checks.gamma_identity);
                e.verdicts((0..).map(|k| format!("gamma welldef #{k}")), &checks.gamma_welldef);
                let s = crate::structure::combine_status([law.welldef_status(), checks.status()]);
                with_status(e, s)
            })
        }
        CheckSpec::Coassoc { m } => {
            let a = match env.get(&m)? {
                Value::Algebra(a) => a,
                Value::Mor(mor) => match mor.source_fd() {
                    Some(b) if b == mor.target() => b.clone(),
                    _ => return Err(Diagnostic::new(m.span, "coassoc needs Mor(B, B) of a multi-matrix algebra")),
                },
                _ => return Err(mismatch(&m, "a multi-matrix algebra or Mor presentation")),
            };
            Box::new(move || {
                let co = match coassociativity(&a, &oracle) {
                    Ok(c) => c,
                    Err(e) => return structure_error(e),
                };
                let mut e = Entry::new(String::new(), Status::Pass);
                e.field("generators", co.delta.bd.base().num_generators());
                welldef(&mut e, "delta welldef", &co.delta.psi);
                e.verdicts(named("coassociative on", co.delta.bd.base()), &co.verdicts);
                with_status(e, co.status())
            })
        }
        CheckSpec::Functor { f, f2, g, g2 } => {
            let (f, f2, g, g2) = (env.fd_hom(&f)?, env.fd_hom(&f2)?, env.fd_hom(&g)?, env.fd_hom(&g2)?);
            Box::new(move || {
                if f2.source() != f.target() || g2.target() != g.source() {
                    return error_entry(Status::Fail, "homomorphisms do not chain: need f: B1→B2, f2: B2→B3, g: C2→C1, g2: C3→C2");
                }
                let mors = [(f.source(), g.target()), (f.target(), g.source()), (f2.target(), g2.source())]
                    .map(|(b, c)| build_mor(b, c));
                let [m1, m2, m3] = match mors {
                    [Ok(a), Ok(b), Ok(c)] => [a, b, c],
                    [Err(e), ..] | [_, Err(e), _] | [.., Err(e)] => return error_entry(Status::Fail, e),
                };
                match check_functor_laws(&f, &f2, &g, &g2, &m1, &m2, &m3, &oracle) {
                    Ok(r) => {
                        let mut e = Entry::new(String::new(), Status::Pass);
                        welldef(&mut e, "lhs welldef", &r.lhs);
                        e.verdicts(named("Mor(f2 f, g g2) = Mor(f2, g2) Mor(f, g) on", m1.base()), &r.verdicts);
                        with_status(e, r.status())
                    }
                    Err(err) => {
                        let unverified = matches!(err, crate::mor::MorError::Hom(HomError::Unverified(_)));
                        error_entry(if unverified { Status::Unknown } else { Status::Fail }, err)
                    }
                }
            })
        }
        CheckSpec::Surjective { f, c } => {
            let (f, c) = (env.fd_hom(&f)?, env.fd(&c)?);
            Box::new(move || {
                if !f.is_surjective() {
                    let mut e = error_entry(Status::Fail, "the homomorphism is not surjective");
                    e.field("surjective", "no");
                    return e;
                }
                let (m1, m2) = match (build_mor(f.source(), &c), build_mor(f.target(), &c)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return error_entry(Status::Fail, e),
                };
                let (hom, pre) = match surjectivity_preimages(&f, &m1, &m2, &oracle) {
                    Ok(x) => x,
                    Err(e) => return error_entry(Status::Fail, e),
                };
                let mut e = Entry::new(String::new(), Status::Pass);
                welldef(&mut e, "Mor(f, id) welldef", &hom);
                let mut status = hom.status();
                let names = m2.base().names();
                for p in &pre {
                    let name = &names[p.generator as usize];
                    match (&p.preimage, &p.verdict) {
                        (Some(poly), Some(v)) => {
                            e.field("preimage", format!("{name} <- {}", m1.base().show(poly)));
                            e.verdict(format!("preimage of {name}"), v);
                            status = crate::structure::combine_status([status, v.status()]);
                        }
                        _ => {
                            e.field("preimage", format!("{name} <- none"));
                            status = VerdictStatus::Distinct;
                        }
                    }
                }
                with_status(e, status)
            })
        }
        CheckSpec::SliceLemma { count, max_dim } => {
            let seed = env.seed;
            let max_dim = max_dim.unwrap_or(SLICE_LEMMA_MAX_DIM);
            Box::new(move || slice_lemma(count, max_dim, seed))
        }
        CheckSpec::DirSum { bs, cs } => {
            let bs = bs.iter().map(|b| env.fd(b)).collect::<Result<Vec<_>, _>>()?;
            let cs = cs.iter().map(|c| env.fd(c)).collect::<Result<Vec<_>, _>>()?;
            Box::new(move || {
                let split = match direct_sum_split(&bs, &cs, &oracle) {
                    Ok(s) => s,
                    Err(e) => return structure_error(e),
                };
                let mut e = Entry::new(String::new(), Status::Pass);
                welldef(&mut e, "psi welldef", &split.psi);
                let target_names = split.psi.target().names();
                let mut status = split.psi.status();
                for p in &split.coverage {
                    let v = p.verdict.as_ref().expect("slot preimages are explicit");
                    e.verdict(format!("covers {}", target_names[p.generator as usize]), v);
                    status = crate::structure::combine_status([status, v.status()]);
                }
                let cross = split.cross_generators();
                let zero = cross.iter().all(|&g| split.psi.image(g).is_zero());
                e.field("cross generators", cross.len());
                e.field("cross generators map to 0", if zero { "yes" } else { "no" });
                if !zero {
                    status = VerdictStatus::Distinct;
                }
                with_status(e, status)
            })
        }
        CheckSpec::TensorSplit { b1, b2, c } => {
            let (b1, b2, c) = (env.fd(&b1)?, env.fd(&b2)?, env.fd(&c)?);
            Box::new(move || {
                let split = match tensor_split(&b1, &b2, &c, &oracle) {
                    Ok(s) => s,
                    Err(e) => {
                        let mut entry = structure_error(e);
                        entry.field("rejected", "yes");
                        return entry;
                    }
                };
                let mut e = Entry::new(String::new(), Status::Pass);
                welldef(&mut e, "psi welldef", &split.psi);
                let names = split.codomain.names();
                for p in &split.coverage {
                    if let Some(v) = &p.verdict {
                        e.verdict(format!("covers {}", names[p.generator as usize]), v);
                    }
                }
                with_status(e, split.status())
            })
        }
        CheckSpec::Recovery { b } => {
            let b = env.fd(&b)?;
            Box::new(move || {
                let r = match recovery(&b, &oracle) {
                    Ok(r) => r,
                    Err(e) => return error_entry(Status::Fail, e),
                };
                let mut e = Entry::new(String::new(), Status::Pass);
                let names = r.mor.base().names();
                let x = |t: usize| &names[r.mor.symbol(t, 0) as usize];
                for ((s, t), v) in &r.products {
                    let rhs = b.product_index(*s, *t).map_or("0".to_string(), |u| x(u).clone());
                    e.verdict(format!("{} {} = {rhs}", x(*s), x(*t)), v);
                }
                for (t, v) in &r.adjoints {
                    e.verdict(format!("{}^* = {}", x(*t), x(b.star_index(*t))), v);
                }
                with_status(e, combine(r.verdicts()))
            })
        }
        CheckSpec::Classical { m, n } => {
            if m == 0 || n == 0 {
                return Err(Diagnostic::new(Span::default(), "classical needs m, n ≥ 1"));
            }
            Box::new(move || classical(m, n))
        }
        CheckSpec::WellDefined { h } => match env.get(&h)? {
            Value::FdHom(_) => Box::new(|| {
                let mut e = Entry::new(String::new(), Status::Pass);
                e.field("verified", "unital, *-preserving and multiplicative on matrix units");
                e
            }),
            Value::Hom(hom) => Box::new(move || {
                let mut e = Entry::new(String::new(), Status::Pass);
                welldef(&mut e, "relation", &hom);
                with_status(e, hom.status())
            }),
            _ => return Err(mismatch(&h, "a homomorphism")),
        },
    })
}

fn slice_lemma(count: usize, max_dim: usize, seed: u64) -> Entry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holds = 0;
    let mut failures = Vec::new();
    for k in 0..count {
        let sq = commuting_square(&mut rng, max_dim);
        let c = sq.ca.left();
        let coeffs = (0..c.dim()).map(|_| random_scalar(&mut rng)).collect();
        let omega = Functional::new(c, coeffs).expect("dimension matches");
        match check_slice_identity(&sq.lambda, &sq.gamma, &sq.phi, &sq.phi_prime, &sq.ca, &sq.ca_prime, &omega) {
            Ok(true) => holds += 1,
            Ok(false) => failures.push(format!("square {k}: identity fails")),
            Err(e) => failures.push(format!("square {k}: {e}")),
        }
    }
    let mut e = Entry::new(String::new(), if failures.is_empty() { Status::Pass } else { Status::Fail });
    e.field("squares", count);
    e.field("max dimension", max_dim);
    e.field("holds", holds);
    for f in failures {
        e.field("failure", f);
    }
    e
}

fn classical(m: usize, n: usize) -> Entry {
    let mor = match build_mor(points(m), &points(n)) {
        Ok(x) => x,
        Err(e) => return error_entry(Status::Fail, e),
    };
    let ab = mor.base().abelianize();
    let chars = match ab.characters() {
        Ok(c) => c,
        Err(e) => return error_entry(Status::Fail, e),
    };
    let expected = m.pow(n as u32);
    let maps: BTreeSet<Vec<usize>> = chars.iter().filter_map(|c| character_map(&mor, c)).collect();
    let all: BTreeSet<Vec<usize>> = all_maps(n, m).into_iter().collect();
    let ok = chars.len() == expected && maps == all;
    let mut e = Entry::new(String::new(), if ok { Status::Pass } else { Status::Fail });
    e.field("characters", chars.len());
    e.field("expected", expected);
    e.field("characters are maps", if maps.len() == chars.len() { "yes" } else { "no" });
    e
}

fn show(value: &Value) -> String {
    match value {
        Value::Algebra(a) => format!("{a}\ndimension {}", a.dim()),
        Value::Presented(p) => p.to_string(),
        Value::Mor(m) => m.to_text(),
        Value::Hom(h) => h.to_text(),
        Value::FdHom(h) => {
            let mut s = String::new();
            for (k, img) in h.images().iter().enumerate() {
                writeln!(s, "{} -> {img}", h.source().unit(k)).unwrap();
            }
            s
        }
    }
}

fn characters_entry(p: &Presentation) -> Entry {
    match p.characters() {
        Ok(cs) => {
            let mut e = Entry::new(String::new(), Status::Pass);
            e.field("count", cs.len());
            for c in cs {
                let parts: Vec<String> =
                    p.names().iter().enumerate().map(|(g, n)| format!("{n}={}", c.value(g as u32))).collect();
                e.field("character", parts.join(", "));
            }
            e
        }
        Err(err) => error_entry(Status::Fail, err),
    }
}

fn repsearch_entry(p: &Presentation, args: &RepSearchArgs, seed: u64) -> Entry {
    let defaults = SearchOptions::default();
    let opts = SearchOptions {
        restarts: args.restarts.map_or(defaults.restarts, |r| r as u32),
        iterations: args.iterations.map_or(defaults.iterations, |i| i as u32),
        seed,
        ..defaults
    };
    let found = if args.noncommutative {
        find_noncommutative(p, args.dim, &opts, MIN_COMMUTATOR)
    } else {
        find_representation(p, args.dim, &opts)
    };
    match found {
        Ok(model) => {
            let mut e = Entry::new(String::new(), Status::Pass);
            e.field("dimension", model.dim);
            e.field("residual", format!("{:.3e}", model.residual));
            e.field("restart", model.restart);
            let (norm, (a, b)) = model.max_generator_commutator();
            e.field("max commutator", format!("{norm:.6} ({}, {})", p.names()[a as usize], p.names()[b as usize]));
            if args.noncommutative {
                e.field("min commutator", MIN_COMMUTATOR);
            }
            e.field("model", model.to_text());
            e
        }
        Err(SearchError::NotFound { best_residual, .. }) => {
            let mut e = Entry::new(String::new(), Status::Unknown);
            e.field("best residual", format!("{best_residual:.3e}"));
            e
        }
        Err(err) => error_entry(Status::Fail, err),
    }
}

pub(super) fn run(program: &Program, opts: &RunOptions) -> Result<Report, Diagnostic> {
    let mut env = Env { values: HashMap::new(), oracle: Oracle::with_budget(opts.budget), seed: opts.seed };
    let mut jobs: Vec<(usize, String, Job)> = Vec::new();
    for located in &program.statements {
        let span = located.span;
        let text = located.statement.to_string();
        let job: Option<Job> = match &located.statement {
            Statement::Algebra { name, def } => {
                let v = env.algebra(name, def, span)?;
                env.values.insert(name.name.clone(), v);
                None
            }
            Statement::Hom { name, source, target, def } => {
                let v = env.hom(name, source, target, def, span)?;
                env.values.insert(name.name.clone(), v);
                None
            }
            Statement::Mor { name, source, target } => {
                let m = build_mor(env.mor_source(source)?, &env.fd(target)?)
                    .map_err(|e| Diagnostic::new(span, e.to_string()))?;
                env.values.insert(name.name.clone(), Value::Mor(m));
                None
            }
            Statement::Check(spec) => Some(run_check(spec.clone(), &env).map_err(|d| {
                if d.span == Span::default() { Diagnostic { span, ..d } } else { d }
            })?),
            Statement::Abelianize(n) => {
                let p = Arc::new(env.presentation(n)?.abelianize());
                env.values.insert(n.name.clone(), Value::Presented(p.clone()));
                Some(Box::new(move || {
                    let mut e = Entry::new(String::new(), Status::Pass);
                    e.field("generators", p.num_generators());
                    e.field("relations", p.relations().len());
                    e
                }))
            }
            Statement::Characters(n) => {
                let p = env.presentation(n)?;
                Some(Box::new(move || characters_entry(&p)))
            }
            Statement::RepSearch { name, args } => {
                let p = env.presentation(name)?;
                let (args, seed) = (args.clone(), opts.seed);
                Some(Box::new(move || repsearch_entry(&p, &args, seed)))
            }
            Statement::Show(n) => {
                let v = env.get(n)?;
                Some(Box::new(move || {
                    let mut e = Entry::new(String::new(), Status::Pass);
                    e.field("text", show(&v));
                    e
                }))
            }
        };
        if let Some(job) = job {
            jobs.push((span.line, text, job));
        }
    }
    let timings = opts.timings;
    let entries = jobs
        .into_par_iter()
        .enumerate()
        .map(|(k, (line, statement, job))| {
            let start = Instant::now();
            let mut e = job();
            e.index = k + 1;
            e.line = line;
            e.statement = statement;
            if timings {
                e.wall_ms = Some(start.elapsed().as_millis());
            }
            e
        })
        .collect();
    Ok(Report::new(opts.budget, opts.seed, entries))
}

#[cfg(test)]
mod tests {
    use super::super::parse_workspace;
    use super::*;

    fn run_text(text: &str) -> Report {
        parse_workspace(text).unwrap().run(&RunOptions::default()).unwrap()
    }

    #[test]
    fn characters_after_abelianize() {
        let r = run_text("algebra A = present < p!, q! | p p = p, q q = q >\nabelianize A\ncharacters A");
        assert_eq!(r.entries[1].get("count"), Some("4"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn coassoc_on_two_points() {
        let r = run_text("mor M = build C2 C2; check coassoc M");
        assert_eq!(r.entries[0].status, Status::Pass);
        assert!(r.entries[0].verdicts.iter().all(|v| v.verdict == "equal"));
    }

    #[test]
    fn fd_hom_fills_in_matrix_units() {
        let r = run_text("hom f : M2 -> M2 = images { e[0,0,0] -> e[0,1,1], e[0,0,1] -> e[0,1,0] }\nshow f");
        let text = r.entries[0].get("text").unwrap();
        assert!(text.contains("e[0,1,1] -> "), "{text}");
        let err = parse_workspace("hom f : M2 -> M2 = images { e[0,0,0] -> e[0,0,0] }").unwrap().run(&RunOptions::default());
        assert!(err.unwrap_err().message.contains("no image for e[0,0,1]"));
        let err = parse_workspace("hom f : C2 -> C2 = images { e[0,0,0] -> e[0,0,0], e[1,0,0] -> e[0,0,0] }")
            .unwrap()
            .run(&RunOptions::default());
        assert!(err.unwrap_err().message.contains("not a *-homomorphism"));
    }

    #[test]
    fn tensor_split_rejects_matrix_target() {
        let r = run_text("check tensorsplit C2 C2 M2");
        assert_eq!(r.entries[0].status, Status::Fail);
        assert_eq!(r.entries[0].get("rejected"), Some("yes"));
    }

    #[test]
    fn presented_hom_welldef() {
        let r = run_text(
            "algebra A = present < p!, q! | p p = p, q q = q >\nhom s : A -> A = images { p -> q, q -> p }\nhom z : A -> A = images { p -> 1 - p, q -> 2 q }\ncheck welldef s\ncheck welldef z",
        );
        assert_eq!(r.entries[0].status, Status::Pass);
        assert_eq!(r.entries[1].status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn reports_are_reproducible() {
        let text = "check slice-lemma 5\ncheck classical 2 2\nrepsearch C2 dim 1 restarts 2";
        let a = run_text(text).to_text();
        let b = run_text(text).to_text();
        assert_eq!(a, b);
        assert!(a.contains("statement: check classical 2 2\nstatus: pass"));
    }
}
