//! Numerical search for finite-dimensional matrix representations.
//!
//! Floating point lives only here. Symbolic code consumes a [`MatrixModel`]
//! solely as a distinctness certificate or a noncommutativity witness.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::presentation::{Evaluation, FreeStarPoly, Letter, Presentation};
use crate::scalar::GaussRat;

pub type CMatrix = DMatrix<Complex64>;

/// First line of the model file format.
pub const MODEL_HEADER: &str = "qmor-model v1";

impl Evaluation for CMatrix {
    fn zero_like(&self) -> Self {
        CMatrix::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, c: &GaussRat, other: &Self) {
        let c = c.to_complex();
        if !c.is_zero() {
            *self += other * c;
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Matrices for each generator of a presentation, with the residual
/// `max_r ‖r(X)‖_F` over its relations.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixModel {
    pub dim: usize,
    pub names: Vec<String>,
    pub matrices: Vec<CMatrix>,
    pub residual: f64,
    pub seed: u64,
    pub restart: u32,
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("no representation found; best residual {best_residual:e}")]
    NotFound { best_residual: f64, best: Option<Box<MatrixModel>> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("model file line {line}: {message}")]
pub struct ModelParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub restarts: u32,
    pub iterations: u32,
    pub tol: f64,
    pub seed: u64,
    pub step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { restarts: 20, iterations: 3000, tol: 1e-8, seed: 0, step: 0.2 }
    }
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn letter_matrix(mats: &[CMatrix], l: Letter) -> CMatrix {
    let m = &mats[l.gen as usize];
    if l.star { m.adjoint() } else { m.clone() }
}

fn eval_with(mats: &[CMatrix], d: usize, p: &FreeStarPoly) -> CMatrix {
    p.evaluate(&CMatrix::identity(d, d), |l| letter_matrix(mats, l))
}

fn residual_of(mats: &[CMatrix], d: usize, pres: &Presentation) -> f64 {
    pres.relations().iter().map(|r| frobenius(&eval_with(mats, d, r))).fold(0.0, f64::max)
}

impl MatrixModel {
    /// A model for `pres` from explicit matrices; the residual is computed.
    pub fn new(pres: &Presentation, matrices: Vec<CMatrix>) -> Self {
        let dim = matrices.first().map_or(1, |m| m.nrows());
        let residual = residual_of(&matrices, dim, pres);
        Self { dim, names: pres.names().to_vec(), matrices, residual, seed: 0, restart: 0, iterations: 0 }
    }

    pub fn matches(&self, pres: &Presentation) -> bool {
        self.names == pres.names()
            && self.matrices.len() == self.names.len()
            && self.matrices.iter().all(|m| m.nrows() == self.dim && m.ncols() == self.dim)
    }

    pub fn evaluate(&self, p: &FreeStarPoly) -> CMatrix {
        eval_with(&self.matrices, self.dim, p)
    }

    pub fn residual_for(&self, pres: &Presentation) -> f64 {
        residual_of(&self.matrices, self.dim, pres)
    }

    /// Recomputes the residual and compares it with the stored value.
    pub fn verify(&self, pres: &Presentation, tol: f64) -> bool {
        if !self.matches(pres) {
            return false;
        }
        let r = self.residual_for(pres);
        (r - self.residual).abs() <= 1e-12 && r <= tol
    }

    /// `‖p(X)‖_F`.
    pub fn separation(&self, p: &FreeStarPoly) -> f64 {
        frobenius(&self.evaluate(p))
    }

    /// Operator norm of `[a, b]` evaluated in the model.
    pub fn commutator_norm(&self, a: &FreeStarPoly, b: &FreeStarPoly) -> f64 {
        let (x, y) = (self.evaluate(a), self.evaluate(b));
        operator_norm(&(&x * &y - &y * &x))
    }

    /// Largest commutator norm over pairs of generators, with the pair.
    pub fn max_generator_commutator(&self) -> (f64, (u32, u32)) {
        let mut best = (0.0, (0, 0));
        let n = self.matrices.len() as u32;
        for a in 0..n {
            for b in a + 1..n {
                let c = self.commutator_norm(&FreeStarPoly::generator(a), &FreeStarPoly::generator(b));
                if c > best.0 {
                    best = (c, (a, b));
                }
            }
        }
        best
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{MODEL_HEADER}").unwrap();
        writeln!(s, "dim {}", self.dim).unwrap();
        writeln!(s, "seed {}", self.seed).unwrap();
        writeln!(s, "restart {}", self.restart).unwrap();
        writeln!(s, "iterations {}", self.iterations).unwrap();
        writeln!(s, "residual {:e}", self.residual).unwrap();
        for (name, m) in self.names.iter().zip(&self.matrices) {
            writeln!(s, "generator {name}").unwrap();
            for i in 0..self.dim {
                let row: Vec<String> = (0..self.dim).map(|j| format!("{:e} {:e}", m[(i, j)].re, m[(i, j)].im)).collect();
                writeln!(s, "  {}", row.join("  ")).unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, ModelParseError> {
        let err = |line: usize, message: &str| ModelParseError { line, message: message.to_string() };
        let lines: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
        let last = text.lines().count().max(1);
        match lines.first() {
            Some((_, l)) if *l == MODEL_HEADER => {}
            Some((k, _)) => return Err(err(*k, "expected header `qmor-model v1`")),
            None => return Err(err(1, "empty model file")),
        }
        let mut pos = 1;
        let field = |pos: &mut usize, key: &str| -> Result<(usize, String), ModelParseError> {
            let &(k, l) = lines.get(*pos).ok_or_else(|| err(last, &format!("missing `{key}`")))?;
            let rest = l
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| err(k, &format!("expected `{key}`")))?;
            *pos += 1;
            Ok((k, rest.trim().to_string()))
        };
        let num = |(k, s): (usize, String)| s.parse::<u64>().map_err(|_| err(k, "expected an integer"));
        let dim = num(field(&mut pos, "dim")?)? as usize;
        let seed = num(field(&mut pos, "seed")?)?;
        let restart = num(field(&mut pos, "restart")?)? as u32;
        let iterations = num(field(&mut pos, "iterations")?)? as u32;
        let (k, r) = field(&mut pos, "residual")?;
        let residual = r.parse::<f64>().map_err(|_| err(k, "expected a number"))?;
        let mut names = Vec::new();
        let mut matrices = Vec::new();
        while pos < lines.len() {
            let (_, name) = field(&mut pos, "generator")?;
            let mut m = CMatrix::zeros(dim, dim);
            for i in 0..dim {
                let &(k, row) = lines.get(pos).ok_or_else(|| err(last, "missing matrix row"))?;
                pos += 1;
                let xs: Vec<f64> = row
                    .split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| err(k, "expected a number")))
                    .collect::<Result<_, _>>()?;
                if xs.len() != 2 * dim {
                    return Err(err(k, "wrong number of entries in row"));
                }
                for j in 0..dim {
                    m[(i, j)] = Complex64::new(xs[2 * j], xs[2 * j + 1]);
                }
            }
            names.push(name);
            matrices.push(m);
        }
        Ok(Self { dim, names, matrices, residual, seed, restart, iterations })
    }
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Operator norm of the commutator of two elements in a model.
pub fn commutator_witness(model: &MatrixModel, a: &FreeStarPoly, b: &FreeStarPoly) -> f64 {
    model.commutator_norm(a, b)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Nearest orthogonal projection: eigenvalues thresholded at 1/2.
fn nearest_projection(m: &CMatrix) -> CMatrix {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let d = m.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 0.5 {
            let v = eig.eigenvectors.column(k);
            out += v * v.adjoint();
        }
    }
    out
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

fn random_projection(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> CMatrix {
    if rank == 0 {
        return CMatrix::zeros(d, d);
    }
    let q = gaussian(rng, d, rank).qr().q();
    &q * q.adjoint()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Free,
    Hermitian,
    Projection,
}

fn kinds(pres: &Presentation) -> Vec<Kind> {
    let sys = pres.rewrite_system();
    pres.generators()
        .iter()
        .enumerate()
        .map(|(g, gen)| {
            if !gen.self_adjoint {
                return Kind::Free;
            }
            let x = FreeStarPoly::generator(g as u32);
            if sys.normal_form(&x.mul(&x).sub(&x), 10_000).poly.is_zero() { Kind::Projection } else { Kind::Hermitian }
        })
        .collect()
}

/// Objective `Σ_r ‖r(X)‖²_F` and its gradient with respect to each generator.
fn objective(pres: &Presentation, mats: &[CMatrix], d: usize) -> (f64, Vec<CMatrix>) {
    let mut grads = vec![CMatrix::zeros(d, d); mats.len()];
    let mut total = 0.0;
    for r in pres.relations() {
        let rv = eval_with(mats, d, r);
        let n = frobenius(&rv);
        total += n * n;
        if n == 0.0 {
            continue;
        }
        let rstar = rv.adjoint();
        for (w, c) in r.terms() {
            let c = c.to_complex();
            let letters: Vec<CMatrix> = w.letters().iter().map(|&l| letter_matrix(mats, l)).collect();
            let k = letters.len();
            let mut pre = vec![CMatrix::identity(d, d)];
            for m in &letters {
                let next = pre.last().expect("nonempty") * m;
                pre.push(next);
            }
            let mut suf = vec![CMatrix::identity(d, d); k + 1];
            for i in (0..k).rev() {
                suf[i] = &letters[i] * &suf[i + 1];
            }
            for (i, l) in w.letters().iter().enumerate() {
                let (p, s) = (&pre[i], &suf[i + 1]);
                let g = &mut grads[l.gen as usize];
                if l.star {
                    *g += s * &rstar * p * c;
                } else {
                    *g += p.adjoint() * &rv * s.adjoint() * c.conj();
                }
            }
        }
    }
    (total, grads)
}

fn run_restart(pres: &Presentation, kinds: &[Kind], d: usize, opts: &SearchOptions, restart: u32) -> MatrixModel {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let mut mats: Vec<CMatrix> = kinds
        .iter()
        .map(|k| match k {
            Kind::Projection => {
                let rank = if d == 1 { rng.random_range(0..=1) } else { rng.random_range(1..d) };
                random_projection(&mut rng, d, rank)
            }
            Kind::Hermitian => hermitian_part(&gaussian(&mut rng, d, d)) * Complex64::new(1.0 / (d as f64).sqrt(), 0.0),
            Kind::Free => gaussian(&mut rng, d, d) * Complex64::new(1.0 / (2.0 * d as f64).sqrt(), 0.0),
        })
        .collect();
    let mut iterations = 0;
    for t in 0..opts.iterations {
        if residual_of(&mats, d, pres) <= opts.tol * 1e-3 {
            break;
        }
        let (_, mut grads) = objective(pres, &mats, d);
        let norm = grads.iter().map(|g| frobenius(g).powi(2)).sum::<f64>().sqrt();
        if norm > 1.0 {
            for g in &mut grads {
                *g /= Complex64::new(norm, 0.0);
            }
        }
        let lr = opts.step * 0.5 * (1.0 + (std::f64::consts::PI * t as f64 / opts.iterations as f64).cos()) + 1e-3;
        for ((m, g), kind) in mats.iter_mut().zip(&grads).zip(kinds) {
            *m -= g * Complex64::new(lr, 0.0);
            match kind {
                Kind::Free => {}
                Kind::Hermitian => *m = hermitian_part(m),
                Kind::Projection => *m = nearest_projection(m),
            }
        }
        iterations = t + 1;
    }
    let residual = residual_of(&mats, d, pres);
    MatrixModel {
        dim: d,
        names: pres.names().to_vec(),
        matrices: mats,
        residual,
        seed: opts.seed,
        restart,
        iterations,
    }
}

fn all_restarts(pres: &Presentation, d: usize, opts: &SearchOptions) -> Result<Vec<MatrixModel>, SearchError> {
    if d == 0 {
        return Err(SearchError::ZeroDimension);
    }
    let kinds = kinds(pres);
    Ok((0..opts.restarts).into_par_iter().map(|r| run_restart(pres, &kinds, d, opts, r)).collect())
}

fn best_of(models: Vec<MatrixModel>) -> Option<MatrixModel> {
    // ordered by restart index, so the first minimum has the lowest stream
    models.into_iter().reduce(|a, b| if b.residual < a.residual { b } else { a })
}

/// Gradient descent with restarts; returns the best model if it meets `opts.tol`.
pub fn find_representation(pres: &Presentation, d: usize, opts: &SearchOptions) -> Result<MatrixModel, SearchError> {
    let best = best_of(all_restarts(pres, d, opts)?);
    match best {
        Some(m) if m.residual <= opts.tol => Ok(m),
        other => Err(SearchError::NotFound {
            best_residual: other.as_ref().map_or(f64::INFINITY, |m| m.residual),
            best: other.map(Box::new),
        }),
    }
}

/// The lowest-indexed restart whose model meets `opts.tol` and has some
/// generator pair with commutator norm at least `min_commutator`.
pub fn find_noncommutative(
    pres: &Presentation,
    d: usize,
    opts: &SearchOptions,
    min_commutator: f64,
) -> Result<MatrixModel, SearchError> {
    let models = all_restarts(pres, d, opts)?;
    if let Some(m) = models
        .iter()
        .find(|m| m.residual <= opts.tol && m.max_generator_commutator().0 >= min_commutator)
    {
        return Ok(m.clone());
    }
    let best = best_of(models);
    Err(SearchError::NotFound {
        best_residual: best.as_ref().map_or(f64::INFINITY, |m| m.residual),
        best: best.map(Box::new),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Generator;

    fn two_projections() -> Presentation {
        let (p, q) = (FreeStarPoly::generator(0), FreeStarPoly::generator(1));
        Presentation::new(
            vec![Generator::self_adjoint("p"), Generator::self_adjoint("q")],
            vec![p.mul(&p).sub(&p), q.mul(&q).sub(&q)],
        )
        .unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn explicit_model_and_commutator() {
        let pres = two_projections();
        let p = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let q = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
        let model = MatrixModel::new(&pres, vec![p, q]);
        assert!(model.residual < 1e-15);
        let (gp, gq) = (FreeStarPoly::generator(0), FreeStarPoly::generator(1));
        let comm = model.evaluate(&gp.mul(&gq).sub(&gq.mul(&gp)));
        let expect = CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.5), c(-0.5), c(0.0)]);
        assert!((comm - expect).norm() < 1e-15);
        assert!((commutator_witness(&model, &gp, &gq) - 0.5).abs() < 1e-12);
        assert_eq!(commutator_witness(&model, &gp, &gp), 0.0);
    }

    #[test]
    fn dimension_one_is_commutative() {
        let pres = two_projections();
        let opts = SearchOptions { restarts: 4, ..Default::default() };
        let m = find_representation(&pres, 1, &opts).unwrap();
        assert!(m.residual <= 1e-12);
        assert_eq!(m.max_generator_commutator().0, 0.0);
        assert_eq!(find_representation(&pres, 0, &opts), Err(SearchError::ZeroDimension));
    }

    #[test]
    fn unit_relation_fails_with_large_residual() {
        let pres = Presentation::new(vec![Generator::plain("a")], vec![FreeStarPoly::one()]).unwrap();
        let opts = SearchOptions { restarts: 2, iterations: 50, ..Default::default() };
        match find_representation(&pres, 2, &opts) {
            Err(SearchError::NotFound { best_residual, .. }) => assert!(best_residual >= 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gradient_descent_finds_a_unitary() {
        let u = FreeStarPoly::generator(0);
        let us = FreeStarPoly::letter(Letter::starred(0));
        let one = FreeStarPoly::one();
        let pres = Presentation::new(
            vec![Generator::plain("u")],
            vec![us.mul(&u).sub(&one), u.mul(&us).sub(&one)],
        )
        .unwrap();
        let opts = SearchOptions { restarts: 4, iterations: 4000, tol: 1e-8, ..Default::default() };
        let m = find_representation(&pres, 2, &opts).unwrap();
        assert!(m.verify(&pres, 1e-8));
    }

    #[test]
    fn deterministic_and_round_trips() {
        let pres = two_projections();
        let opts = SearchOptions { restarts: 6, seed: 11, ..Default::default() };
        let a = find_noncommutative(&pres, 2, &opts, 0.3).unwrap();
        let b = find_noncommutative(&pres, 2, &opts, 0.3).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        let parsed = MatrixModel::from_text(&a.to_text()).unwrap();
        assert_eq!(parsed, a);
        assert!(parsed.verify(&pres, 1e-8));
        assert!(MatrixModel::from_text("qmor-model v2").is_err());
    }
}
