//! Mor(C^2, C^2) has a noncommuting 2-dimensional representation.

use qmor::fd_algebra::FdAlgebra;
use qmor::mor::build_mor;
use qmor::repsearch::{find_noncommutative, SearchOptions};

fn main() {
    let c2 = FdAlgebra::commutative(2).unwrap();
    let mor = build_mor(&c2, &c2).unwrap();
    let model = find_noncommutative(mor.base(), 2, &SearchOptions::default(), 0.3).unwrap();
    let (norm, (a, b)) = model.max_generator_commutator();
    println!("residual {:.3e}", model.residual_for(mor.base()));
    println!("‖[{}, {}]‖ = {norm:.4}", mor.base().show_generator(a), mor.base().show_generator(b));
    print!("{}", model.to_text());
}
