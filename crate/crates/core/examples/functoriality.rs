use qmor::fd_algebra::{FdAlgebra, StarHom};
use qmor::mor::{build_mor, check_functor_laws};
use qmor::presentation::Oracle;

fn main() {
    let c2 = FdAlgebra::commutative(2).unwrap();
    let c3 = FdAlgebra::commutative(3).unwrap();
    let swap = StarHom::new(&c2, &c2, vec![c2.basis(1), c2.basis(0)]).unwrap();
    let surj = StarHom::new(&c3, &c2, vec![c2.basis(0), c2.basis(1), c2.zero()]).unwrap();
    let embed = StarHom::new(&c2, &c3, vec![&c3.basis(0) + &c3.basis(2), c3.basis(1)]).unwrap();

    let oracle = Oracle::default();
    let m1 = build_mor(&c3, &c3).unwrap();
    let m2 = build_mor(&c2, &c2).unwrap();
    let m3 = build_mor(&c2, &c2).unwrap();
    let report = check_functor_laws(&surj, &swap, &embed, &swap, &m1, &m2, &m3, &oracle).unwrap();
    println!("Mor(f2∘f, g∘g2) against Mor(f, g)∘Mor(f2, g2):");
    println!("{}", report.lhs.to_text());
    println!("status: {}", report.status());
}
