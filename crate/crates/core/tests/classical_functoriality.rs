//! On classical points, `Mor(f, g)` acts by `h ↦ f̂ ∘ h ∘ ĝ` where `f̂` and
//! `ĝ` are the maps of points dual to `f` and `g`.

use qmor::fd_algebra::{FdAlgebra, StarHom};
use qmor::mor::{build_mor, induced_mor};
use qmor::presentation::Oracle;
use qmor::structure::classical::{character_map, map_character};

fn points(n: usize) -> FdAlgebra {
    FdAlgebra::commutative(n).unwrap()
}

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

/// The *-homomorphism `C^m → C^k` dual to `p: {0..k} → {0..m}`.
fn dual_hom(p: &[usize], m: usize) -> StarHom {
    let (src, tgt) = (points(m), points(p.len()));
    let images = (0..m)
        .map(|a| {
            let mut x = tgt.zero();
            for (b, &pb) in p.iter().enumerate() {
                if pb == a {
                    x = &x + &tgt.basis(b);
                }
            }
            x
        })
        .collect();
    StarHom::new(&src, &tgt, images).unwrap()
}

fn check(m: usize, m2: usize, n: usize, n2: usize) {
    let oracle = Oracle::default();
    let inner = build_mor(points(m2), &points(n2)).unwrap();
    let outer = build_mor(points(m), &points(n)).unwrap();
    for p in maps(m2, m) {
        let f = dual_hom(&p, m);
        for q in maps(n, n2) {
            let g = dual_hom(&q, n2);
            let hom = induced_mor(&f, &g, &outer, &inner, &oracle).unwrap();
            assert!(hom.is_well_defined());
            for h in maps(n2, m2) {
                let pulled = map_character(&inner, &h).pull_back(hom.images());
                let expect: Vec<usize> = q.iter().map(|&c| p[h[c]]).collect();
                assert_eq!(character_map(&outer, &pulled), Some(expect), "p={p:?} q={q:?} h={h:?}");
            }
        }
    }
}

#[test]
fn small_point_sets() {
    for m in 1..=2 {
        for m2 in 1..=2 {
            for n in 1..=2 {
                for n2 in 1..=2 {
                    check(m, m2, n, n2);
                }
            }
        }
    }
}

#[test]
fn three_points() {
    check(3, 2, 2, 3);
    check(2, 3, 3, 2);
    check(3, 3, 1, 1);
}
