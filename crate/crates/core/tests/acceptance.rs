//! The ten acceptance criteria, one pass/fail line each. Expected values
//! come from oracles computed here, independently of the library code under
//! test.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use qmor::fd_algebra::random::{commuting_square, random_scalar};
use qmor::fd_algebra::{FdAlgebra, FdElement, Functional, MatrixUnit, StarHom, TensorAlgebra};
use qmor::mor::{build_mor, check_functor_laws, induced_mor, surjectivity_preimages};
use qmor::presentation::{EqualityVerdict, FreeStarPoly, Oracle, Presentation};
use qmor::repsearch::{find_noncommutative, SearchOptions};
use qmor::scalar::GaussRat;
use qmor::structure::classical::{character_map, map_character};
use qmor::structure::{coassociativity, composition_map, direct_sum_split, exp_law_maps, tensor_split, StructureError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

/// Equal, and the derivation in the verdict re-expands to `difference`.
fn certified(v: &EqualityVerdict, difference: &FreeStarPoly, pres: &Presentation) -> bool {
    v.is_equal() && v.check(difference, pres)
}

fn points(n: usize) -> FdAlgebra {
    FdAlgebra::commutative(n).unwrap()
}

/// All maps `{0..n} → {0..m}` by counting in base `m`.
fn maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = code % m;
                    code /= m;
                    d
                })
                .collect()
        })
        .collect()
}

fn hom(a: &FdAlgebra, b: &FdAlgebra, images: &[&[usize]]) -> StarHom {
    let imgs = images
        .iter()
        .map(|idx| {
            let mut x = b.zero();
            for &k in *idx {
                x = &x + &b.basis(k);
            }
            x
        })
        .collect();
    StarHom::new(a, b, imgs).unwrap()
}

fn criterion_1() -> Outcome {
    let mut total = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            let mor = build_mor(points(m), &points(n)).map_err(|e| e.to_string())?;
            let ab = mor.base().abelianize();
            let chars = ab.characters().map_err(|e| e.to_string())?;
            let expected = m.pow(n as u32);
            ensure(chars.len() == expected, || format!("m={m}, n={n}: {} characters, expected {expected}", chars.len()))?;
            let got: BTreeSet<Vec<usize>> = chars.iter().filter_map(|c| character_map(&mor, c)).collect();
            let want: BTreeSet<Vec<usize>> = maps(n, m).into_iter().collect();
            ensure(got == want, || format!("m={m}, n={n}: characters are not the maps points(C) → points(B)"))?;
            total += chars.len();
        }
    }
    Ok(format!("{total} characters over 9 pairs, each equal to m^n"))
}

/// `e(k,i,j)` as an explicit block-diagonal matrix.
fn block_matrix(blocks: &[usize], k: usize, i: usize, j: usize) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().sum();
    let off: usize = blocks[..k].iter().sum();
    let mut m = vec![vec![0; n]; n];
    m[off + i][off + j] = 1;
    m
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| (0..n).map(|t| a[r][t] * b[t][c]).sum()).collect()).collect()
}

fn criterion_2() -> Outcome {
    let oracle = Oracle::default();
    let mut pairs = 0;
    for blocks in [vec![1, 1], vec![1, 1, 1], vec![2]] {
        let b = FdAlgebra::new(&blocks).unwrap();
        let units: Vec<(usize, usize, usize)> = blocks
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| (0..n).flat_map(move |i| (0..n).map(move |j| (k, i, j))))
            .collect();
        let mats: Vec<Vec<Vec<i64>>> = units.iter().map(|&(k, i, j)| block_matrix(&blocks, k, i, j)).collect();
        let mor = build_mor(&b, &points(1)).map_err(|e| e.to_string())?;
        let x = |u: (usize, usize, usize)| mor.symbol_poly(b.index(MatrixUnit::new(u.0, u.1, u.2)), 0);
        for (s, &us) in units.iter().enumerate() {
            for (t, &ut) in units.iter().enumerate() {
                let prod = matmul(&mats[s], &mats[t]);
                let expect = match mats.iter().position(|m| *m == prod) {
                    Some(u) => x(units[u]),
                    None if prod.iter().flatten().all(|&v| v == 0) => FreeStarPoly::zero(),
                    None => return Err("matrix unit product outside the basis".into()),
                };
                let diff = x(us).mul(&x(ut)).sub(&expect);
                let v = oracle.is_zero(&diff, mor.base());
                ensure(certified(&v, &diff, mor.base()), || format!("{blocks:?}: x{us:?} x{ut:?} not verified"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} products of generators match the block-matrix multiplication tables"))
}

/// `f̂ ∘ h ∘ ĝ`: how `Mor(f, g)` acts on classical points.
fn classical_pullback(f: &StarHom, g: &StarHom, h: &[usize]) -> Vec<usize> {
    let dual = |f: &StarHom| -> Vec<usize> {
        (0..f.target().dim())
            .map(|s| (0..f.source().dim()).find(|&t| f.image(t).coords()[s].is_one()).unwrap())
            .collect()
    };
    let (fh, gh) = (dual(f), dual(g));
    gh.iter().map(|&a| fh[h[a]]).collect()
}

fn criterion_3() -> Outcome {
    let oracle = Oracle::default();
    let (c2, c3) = (points(2), points(3));
    let swap = hom(&c2, &c2, &[&[1], &[0]]);
    let surj = hom(&c3, &c2, &[&[0], &[1], &[]]);
    let embed = hom(&c2, &c3, &[&[0, 2], &[1]]);
    let id2 = StarHom::identity(&c2);
    let id3 = StarHom::identity(&c3);
    let chains: [(&str, [&StarHom; 4]); 3] = [
        ("identity on C3", [&id3, &id3, &id3, &id3]),
        ("identity on C2", [&id2, &id2, &id2, &id2]),
        ("swap and coordinate surjection", [&surj, &swap, &embed, &swap]),
    ];
    let mut verdicts = 0;
    for (label, [f, f2, g, g2]) in chains {
        let m1 = build_mor(f.source(), g.target()).map_err(|e| e.to_string())?;
        let m2 = build_mor(f.target(), g.source()).map_err(|e| e.to_string())?;
        let m3 = build_mor(f2.target(), g2.source()).map_err(|e| e.to_string())?;
        let r = check_functor_laws(f, f2, g, g2, &m1, &m2, &m3, &oracle).map_err(|e| e.to_string())?;
        ensure(r.lhs.is_well_defined() && r.rhs.is_well_defined(), || format!("{label}: maps not verified"))?;
        for (k, v) in r.verdicts.iter().enumerate() {
            let diff = r.lhs.image(k as u32).sub(r.rhs.image(k as u32));
            ensure(certified(v, &diff, m3.base()), || format!("{label}: generator {k} not verified"))?;
        }
        verdicts += r.verdicts.len();
        let first = induced_mor(f, g, &m1, &m2, &oracle).map_err(|e| e.to_string())?;
        for h in maps(m2.target().dim(), m2.tableau().len()) {
            let chi = map_character(&m2, &h);
            let pulled = chi.pull_back(first.images());
            let expect = classical_pullback(f, g, &h);
            ensure(character_map(&m1, &pulled) == Some(expect), || format!("{label}: classical pullback of {h:?}"))?;
        }
    }
    Ok(format!("{verdicts} generator identities verified over 3 chains; classical pullbacks agree"))
}

fn criterion_4() -> Outcome {
    let oracle = Oracle::default();
    let c2 = points(2);
    let law = exp_law_maps(&c2, &c2, &c2, &oracle).map_err(|e| e.to_string())?;
    ensure(law.psi.is_well_defined() && law.psi_prime.is_well_defined(), || "Ψ or Ψ' not verified".into())?;
    let checks = law.check(&oracle).map_err(|e| e.to_string())?;
    let round = law.psi_prime.after(&law.psi, false, &oracle).map_err(|e| e.to_string())?;
    for (g, v) in checks.psi_prime_psi.iter().enumerate() {
        let diff = round.image(g as u32).sub(&FreeStarPoly::generator(g as u32));
        ensure(certified(v, &diff, law.joint.base()), || format!("Ψ'Ψ on generator {g}"))?;
    }
    let round = law.psi.after(&law.psi_prime, false, &oracle).map_err(|e| e.to_string())?;
    for (g, v) in checks.psi_psi_prime.iter().enumerate() {
        let diff = round.image(g as u32).sub(&FreeStarPoly::generator(g as u32));
        ensure(certified(v, &diff, law.nested.base()), || format!("ΨΨ' on generator {g}"))?;
    }
    // (id⊗Ψ)Γ(y_{t,α}) has β-component Ψ(x_{t,(α,β)}), which must be z_{(t,α),β}.
    let mut identities = 0;
    for t in 0..law.inner.tableau().len() {
        for a in 0..c2.dim() {
            let y = law.inner.symbol(t, a);
            for beta in 0..c2.dim() {
                let x = law.joint.symbol(t, law.c1c2.pair_index(a, beta));
                let pushed = law.psi.image(x);
                let z = law.nested.symbol_poly(y as usize, beta);
                ensure(*pushed == z, || format!("(id⊗Ψ)Γ ≠ 𝔓 at y{t}{a}, β={beta}"))?;
                identities += 1;
            }
        }
    }
    ensure(checks.gamma_identity.iter().all(EqualityVerdict::is_equal), || "Γ identity verdicts".into())?;
    ensure(checks.gamma_welldef.iter().all(EqualityVerdict::is_equal), || "Γ well-definedness".into())?;
    Ok(format!(
        "Ψ'Ψ = id on {}, ΨΨ' = id on {}, (id⊗Ψ)Γ = 𝔓 on {identities} components",
        checks.psi_prime_psi.len(),
        checks.psi_psi_prime.len()
    ))
}

fn criterion_5() -> Outcome {
    let oracle = Oracle::default();
    let (c2, c3) = (points(2), points(3));
    let f = hom(&c3, &c2, &[&[0], &[1], &[]]);
    let m1 = build_mor(&c3, &c2).map_err(|e| e.to_string())?;
    let m2 = build_mor(&c2, &c2).map_err(|e| e.to_string())?;
    let (h, pre) = surjectivity_preimages(&f, &m1, &m2, &oracle).map_err(|e| e.to_string())?;
    ensure(h.is_well_defined(), || "Mor(f, id) not verified".into())?;
    let covered: BTreeSet<u32> = pre.iter().map(|p| p.generator).collect();
    ensure(covered.len() == m2.base().num_generators(), || "some generator has no preimage".into())?;
    for p in &pre {
        let poly = p.preimage.as_ref().ok_or("missing preimage")?;
        let diff = h.apply(poly).sub(&FreeStarPoly::generator(p.generator));
        let v = p.verdict.as_ref().ok_or("missing verdict")?;
        ensure(certified(v, &diff, m2.base()), || format!("preimage of generator {}", p.generator))?;
    }
    Ok(format!("{} generators of Mor(C2, C2) have verified preimages", pre.len()))
}

fn criterion_6() -> Outcome {
    let oracle = Oracle::default();
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let slots = vec![points(2); n];
        let split = direct_sum_split(&slots, &slots, &oracle).map_err(|e| e.to_string())?;
        ensure(split.psi.is_well_defined(), || format!("n={n}: Ψ not verified"))?;
        ensure(split.coverage.len() == 4 * n, || format!("n={n}: coverage size {}", split.coverage.len()))?;
        for p in &split.coverage {
            let diff = split.psi.apply(p.preimage.as_ref().unwrap()).sub(&FreeStarPoly::generator(p.generator));
            ensure(certified(p.verdict.as_ref().unwrap(), &diff, split.psi.target()), || {
                format!("n={n}: slot generator {} not covered", p.generator)
            })?;
        }
        let cross = split.cross_generators();
        let want = 4 * n * n - 4 * n;
        ensure(cross.len() == want, || format!("n={n}: {} cross generators, expected {want}", cross.len()))?;
        ensure(cross.iter().all(|&g| split.psi.image(g).is_zero()), || format!("n={n}: a cross generator survives"))?;
        out.push(format!("n={n}: {} slot generators covered, {want} cross generators to 0", 4 * n));
    }
    Ok(out.join("; "))
}

fn criterion_7() -> Outcome {
    let oracle = Oracle::default();
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let co = coassociativity(&points(n), &oracle).map_err(|e| e.to_string())?;
        let d = &co.delta;
        ensure(d.psi.is_well_defined(), || format!("n={n}: Δ not verified"))?;
        for t in 0..n {
            for delta in 0..n {
                let mut expect = FreeStarPoly::zero();
                for gamma in 0..n {
                    let v = d.codomain.embed_factor(0, &d.cd.symbol_poly(gamma, delta));
                    let y = d.codomain.embed_factor(1, &d.bc.symbol_poly(t, gamma));
                    expect = expect.add(&v.mul(&y));
                }
                let img = d.psi.image(d.bd.symbol(t, delta));
                ensure(*img == d.codomain.canonicalize(&expect), || format!("n={n}: Δ(p[{delta}{t}])"))?;
            }
        }
        for (g, v) in co.verdicts.iter().enumerate() {
            let diff = co.left.image(g as u32).sub(co.right.image(g as u32));
            ensure(certified(v, &diff, co.left.target()), || format!("n={n}: coassociativity at generator {g}"))?;
        }
        out.push(format!("n={n}: {} generators coassociative", co.verdicts.len()));
    }
    let c2 = points(2);
    let delta = composition_map(&c2, &c2, &c2, &oracle).map_err(|e| e.to_string())?;
    let monoid = maps(2, 2);
    let mut pairs = 0;
    for h1 in &monoid {
        for h2 in &monoid {
            let mut values = map_character(&delta.cd, h1).values();
            values.extend(map_character(&delta.bc, h2).values());
            let pulled = qmor::presentation::Character::new(values).pull_back(delta.psi.images());
            let composite: Vec<usize> = (0..2).map(|a| h2[h1[a]]).collect();
            ensure(character_map(&delta.bd, &pulled) == Some(composite), || format!("dual of Δ at ({h1:?}, {h2:?})"))?;
            pairs += 1;
        }
    }
    out.push(format!("dual of Δ is composition on {} maps, {pairs} pairs", monoid.len()));
    Ok(out.join("; "))
}

fn criterion_8() -> Outcome {
    let oracle = Oracle::default();
    let c2 = points(2);
    let split = tensor_split(&c2, &c2, &c2, &oracle).map_err(|e| e.to_string())?;
    ensure(split.psi.is_well_defined(), || "Ψ not verified".into())?;
    let legs = [split.left.base().num_generators(), split.right.base().num_generators()];
    ensure(split.coverage.len() == legs[0] + legs[1], || "coverage size".into())?;
    for p in &split.coverage {
        let diff = split.psi.apply(p.preimage.as_ref().unwrap()).sub(&FreeStarPoly::generator(p.generator));
        ensure(certified(p.verdict.as_ref().unwrap(), &diff, &split.codomain), || format!("generator {}", p.generator))?;
    }
    let m2 = FdAlgebra::full_matrix(2).unwrap();
    match tensor_split(&c2, &c2, &m2, &oracle) {
        Err(StructureError::NoncommutativeTarget(_)) => {}
        other => return Err(format!("M2 target not rejected: {:?}", other.map(|s| s.psi.status()))),
    }
    Ok(format!("legs of {} and {} generators covered; M2 rejected", legs[0], legs[1]))
}

fn to_matrix(m: &qmor::repsearch::CMatrix) -> DMatrix<Complex64> {
    m.clone()
}

fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

fn eval_matrix(p: &FreeStarPoly, mats: &[DMatrix<Complex64>], d: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(d, d);
    for (w, c) in p.terms() {
        let mut prod = DMatrix::identity(d, d);
        for l in &w.0 {
            let m = &mats[l.gen as usize];
            prod = if l.star { prod * m.adjoint() } else { prod * m };
        }
        out += prod * c.to_complex();
    }
    out
}

fn criterion_9() -> Outcome {
    let mor = build_mor(points(2), &points(2)).map_err(|e| e.to_string())?;
    let opts = SearchOptions { restarts: 20, ..SearchOptions::default() };
    let model = find_noncommutative(mor.base(), 2, &opts, 0.3).map_err(|e| e.to_string())?;
    let mats: Vec<DMatrix<Complex64>> = model.matrices.iter().map(to_matrix).collect();
    let residual = mor
        .base()
        .relations()
        .iter()
        .map(|r| eval_matrix(r, &mats, 2).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    ensure(residual <= 1e-8, || format!("recomputed residual {residual:e}"))?;
    let mut best = 0.0f64;
    for a in &mats {
        for b in &mats {
            best = best.max(spectral_norm(&(a * b - b * a)));
        }
    }
    ensure(best >= 0.3, || format!("largest commutator {best}"))?;
    Ok(format!("restart {}: residual {residual:.2e}, commutator norm {best:.4}", model.restart))
}

/// `(ω⊗id)(x)` computed from coordinates: `Σ_{c,a} ω(e_c) x_{(c,a)} e_a`.
fn slice(omega: &[GaussRat], x: &FdElement, ca: &TensorAlgebra) -> FdElement {
    let a = ca.right();
    let mut out = a.zero();
    for (k, coef) in x.coords().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let (c, b) = ca.split_index(k);
        out = &out + &a.basis(b).scale(&(&omega[c] * coef));
    }
    out
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..100 {
        let sq = commuting_square(&mut rng, 4);
        let c = sq.ca.left();
        let omega: Vec<GaussRat> = (0..c.dim()).map(|_| random_scalar(&mut rng)).collect();
        let b = sq.lambda.source();
        for t in 0..b.dim() {
            let e = b.basis(t);
            let lhs = sq.gamma.apply(&slice(&omega, &sq.phi.apply(&e).unwrap(), &sq.ca)).unwrap();
            let rhs = slice(&omega, &sq.phi_prime.apply(&sq.lambda.apply(&e).unwrap()).unwrap(), &sq.ca_prime);
            ensure(lhs == rhs, || format!("square {k}, basis element {t}"))?;
        }
        let functional = Functional::new(c, omega).unwrap();
        let lib = qmor::fd_algebra::check_slice_identity(
            &sq.lambda,
            &sq.gamma,
            &sq.phi,
            &sq.phi_prime,
            &sq.ca,
            &sq.ca_prime,
            &functional,
        );
        ensure(lib == Ok(true), || format!("square {k}: library check {lib:?}"))?;
    }
    Ok("100 random commuting squares satisfy the slice identity exactly".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical limit: m^n characters", criterion_1),
        ("recovery Mor(B, C) = B", criterion_2),
        ("functor laws", criterion_3),
        ("exponential law", criterion_4),
        ("surjectivity of Mor(f, id)", criterion_5),
        ("direct-sum split", criterion_6),
        ("comultiplication and coassociativity", criterion_7),
        ("tensor split", criterion_8),
        ("noncommutativity witness", criterion_9),
        ("slice identity on commuting squares", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.2}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
