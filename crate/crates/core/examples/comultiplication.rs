use qmor::fd_algebra::FdAlgebra;
use qmor::presentation::Oracle;
use qmor::structure::classical::{all_maps, dual_composition};
use qmor::structure::coassociativity;

fn main() {
    let c2 = FdAlgebra::commutative(2).unwrap();
    let co = coassociativity(&c2, &Oracle::default()).unwrap();
    println!("{}", co.delta.psi.to_text());
    println!("coassociativity: {}", co.status());
    for h1 in all_maps(2, 2) {
        for h2 in all_maps(2, 2) {
            println!("{h1:?} then {h2:?} = {:?}", dual_composition(&co.delta, &h1, &h2).unwrap());
        }
    }
}
