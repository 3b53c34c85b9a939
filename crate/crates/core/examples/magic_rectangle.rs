//! Mor(C^3, C^2): a 3×2 rectangle of projections whose columns sum to 1.

use qmor::fd_algebra::FdAlgebra;
use qmor::mor::build_mor;

fn main() {
    let mor = build_mor(FdAlgebra::commutative(3).unwrap(), &FdAlgebra::commutative(2).unwrap()).unwrap();
    println!("{}", mor.to_text());
    let ab = mor.base().abelianize();
    let chars = ab.characters().unwrap();
    println!("abelianization has {} characters, one per map of 2 points into 3", chars.len());
}
