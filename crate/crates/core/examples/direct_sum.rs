use qmor::fd_algebra::FdAlgebra;
use qmor::presentation::Oracle;
use qmor::structure::direct_sum_split;

fn main() {
    let slots = vec![FdAlgebra::commutative(2).unwrap(), FdAlgebra::full_matrix(1).unwrap()];
    let split = direct_sum_split(&slots, &slots, &Oracle::default()).unwrap();
    println!("{}", split.psi.to_text());
    println!("cross generators sent to 0: {}", split.cross_generators().len());
    let covered = split.coverage.iter().filter(|p| p.is_verified()).count();
    println!("slot generators with verified preimages: {covered} of {}", split.coverage.len());
}
