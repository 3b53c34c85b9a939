//! Seeded generators for exact random elements, unitaries, *-homomorphisms
//! and commuting squares. Unitaries are products of phased permutations and
//! Pythagorean rotations, so everything stays in `ℚ(i)`.

use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;

use super::linalg::{self, Matrix};
use super::{tensor, FdAlgebra, FdElement, MatrixUnit, StarHom, TensorAlgebra};
use crate::scalar::GaussRat;

const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// Small Gaussian rational with numerator and denominator up to 4.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> GaussRat {
    let re = GaussRat::ratio(rng.random_range(-4..=4), rng.random_range(1..=4));
    let im = GaussRat::ratio(rng.random_range(-4..=4), rng.random_range(1..=4));
    &re + &(&im * &GaussRat::i())
}

pub fn random_element<R: Rng + ?Sized>(rng: &mut R, a: &FdAlgebra) -> FdElement {
    let coords = (0..a.dim())
        .map(|_| if rng.random_bool(0.3) { GaussRat::zero() } else { random_scalar(rng) })
        .collect();
    FdElement::from_coords(a, coords).expect("dimension matches")
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let phases = [GaussRat::one(), -GaussRat::one(), GaussRat::i(), -GaussRat::i()];
    let mut perm: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        perm.swap(k, rng.random_range(0..=k));
    }
    let mut u = vec![vec![GaussRat::zero(); n]; n];
    for (i, &p) in perm.iter().enumerate() {
        u[i][p] = phases.choose(rng).expect("nonempty").clone();
    }
    if n < 2 {
        return u;
    }
    for _ in 0..rng.random_range(1..=3) {
        let p = rng.random_range(0..n);
        let mut q = rng.random_range(0..n - 1);
        if q >= p {
            q += 1;
        }
        let &(a, b, h) = TRIPLES.choose(rng).expect("nonempty");
        let (c, s) = (GaussRat::ratio(a, h), GaussRat::ratio(b, h));
        let mut r = linalg::identity(n);
        if rng.random_bool(0.5) {
            r[p][p] = c.clone();
            r[p][q] = -&s;
            r[q][p] = s;
            r[q][q] = c;
        } else {
            let is = &s * &GaussRat::i();
            r[p][p] = c.clone();
            r[p][q] = is.clone();
            r[q][p] = is;
            r[q][q] = c;
        }
        u = linalg::matmul(&u, &r);
    }
    u
}

/// The hom that places, in target block `l`, copies of the source blocks
/// `assignment[l]` down the diagonal and then conjugates by `unitaries[l]`.
pub fn block_embedding(
    source: &FdAlgebra,
    target: &FdAlgebra,
    assignment: &[Vec<usize>],
    unitaries: &[Matrix],
) -> Result<StarHom, super::FdError> {
    let mut images = vec![target.zero(); source.dim()];
    for (l, blocks) in assignment.iter().enumerate() {
        let d = target.blocks()[l];
        let u = &unitaries[l];
        let ustar = linalg::adjoint(u);
        let mut offset = 0;
        for &k in blocks {
            let b = source.blocks()[k];
            for i in 0..b {
                for j in 0..b {
                    // U E_{o+i,o+j} U* = (column o+i of U)(row o+j of U*)
                    let img = &mut images[source.index(MatrixUnit::new(k, i, j))];
                    for r in 0..d {
                        let x = &u[r][offset + i];
                        if x.is_zero() {
                            continue;
                        }
                        for c in 0..d {
                            let y = &ustar[offset + j][c];
                            if !y.is_zero() {
                                img.coords[target.index(MatrixUnit::new(l, r, c))] += &(x * y);
                            }
                        }
                    }
                }
            }
            offset += b;
        }
    }
    StarHom::new(source, target, images)
}

/// All multisets of source blocks (as sorted index lists) whose sizes sum to `d`.
fn fillings(sizes: &[usize], d: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..sizes.len() {
            if sizes[k] <= left {
                cur.push(k);
                go(sizes, k, left - sizes[k], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(sizes, 0, d, &mut Vec::new(), &mut out);
    out
}

/// A random unital *-homomorphism, or `None` when none exists.
pub fn random_hom<R: Rng + ?Sized>(rng: &mut R, source: &FdAlgebra, target: &FdAlgebra) -> Option<StarHom> {
    let mut assignment = Vec::new();
    for &d in target.blocks() {
        let options = fillings(source.blocks(), d);
        let mut pick = options.choose(rng)?.clone();
        // random order of the copies within the block
        for k in (1..pick.len()).rev() {
            pick.swap(k, rng.random_range(0..=k));
        }
        assignment.push(pick);
    }
    let unitaries: Vec<Matrix> = target.blocks().iter().map(|&d| random_unitary(rng, d)).collect();
    Some(block_embedding(source, target, &assignment, &unitaries).expect("block embeddings are homs"))
}

/// A random *-automorphism: a permutation of equal-sized blocks followed by
/// a unitary conjugation in each block.
pub fn random_automorphism<R: Rng + ?Sized>(rng: &mut R, a: &FdAlgebra) -> StarHom {
    let n = a.blocks().len();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        let j = rng.random_range(0..=k);
        if a.blocks()[j] == a.blocks()[k] {
            perm.swap(k, j);
        }
    }
    let assignment: Vec<Vec<usize>> = perm.iter().map(|&k| vec![k]).collect();
    let unitaries: Vec<Matrix> = a.blocks().iter().map(|&d| random_unitary(rng, d)).collect();
    block_embedding(a, a, &assignment, &unitaries).expect("automorphisms are homs")
}

/// Every algebra of dimension at most `max_dim`, up to block order.
pub fn small_algebras(max_dim: usize) -> Vec<FdAlgebra> {
    fn go(max_block: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for b in (1..=max_block).rev() {
            if b * b <= left {
                cur.push(b);
                go(b, left - b * b, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(max_dim, max_dim, &mut Vec::new(), &mut out);
    out.iter().map(|b| FdAlgebra::new(b).expect("valid")).collect()
}

/// A commuting square `(id_C ⊗ Γ)Φ = Φ'Λ`.
#[derive(Debug, Clone)]
pub struct CommutingSquare {
    pub lambda: StarHom,
    pub gamma: StarHom,
    pub phi: StarHom,
    pub phi_prime: StarHom,
    pub ca: TensorAlgebra,
    pub ca_prime: TensorAlgebra,
}

/// Builds a random commuting square over algebras of dimension at most
/// `max_dim`, by one of two constructions:
/// `Λ` an automorphism and `Φ' = (id⊗Γ)ΦΛ⁻¹`, or
/// `Γ` an automorphism and `Φ = (id⊗Γ⁻¹)Φ'Λ`.
pub fn commuting_square<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> CommutingSquare {
    let pool = small_algebras(max_dim);
    loop {
        let b = pool.choose(rng).expect("nonempty").clone();
        let c = pool.choose(rng).expect("nonempty").clone();
        let a = pool.choose(rng).expect("nonempty").clone();
        if rng.random_bool(0.5) {
            let a2 = pool.choose(rng).expect("nonempty").clone();
            let ca = tensor(&c, &a);
            let ca_prime = tensor(&c, &a2);
            let Some(gamma) = random_hom(rng, &a, &a2) else { continue };
            let Some(phi) = random_hom(rng, &b, ca.algebra()) else { continue };
            let lambda = random_automorphism(rng, &b);
            let id_gamma = StarHom::tensor(&StarHom::identity(&c), &gamma, &ca, &ca_prime).expect("shapes agree");
            let phi_prime = id_gamma
                .after(&phi)
                .and_then(|h| h.after(&lambda.inverse()?))
                .expect("composition of homs");
            return CommutingSquare { lambda, gamma, phi, phi_prime, ca, ca_prime };
        } else {
            let b2 = pool.choose(rng).expect("nonempty").clone();
            let ca = tensor(&c, &a);
            let Some(lambda) = random_hom(rng, &b, &b2) else { continue };
            let Some(phi_prime) = random_hom(rng, &b2, ca.algebra()) else { continue };
            let gamma = random_automorphism(rng, &a);
            let id_gamma_inv =
                StarHom::tensor(&StarHom::identity(&c), &gamma.inverse().expect("automorphism"), &ca, &ca)
                    .expect("shapes agree");
            let phi = id_gamma_inv
                .after(&phi_prime)
                .and_then(|h| h.after(&lambda))
                .expect("composition of homs");
            return CommutingSquare { lambda, gamma, phi, phi_prime, ca: ca.clone(), ca_prime: ca };
        }
    }
}
