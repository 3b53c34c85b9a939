use qmor::fd_algebra::FdAlgebra;
use qmor::presentation::Oracle;
use qmor::structure::tensor_split;

fn main() {
    let c2 = FdAlgebra::commutative(2).unwrap();
    let oracle = Oracle::default();
    let split = tensor_split(&c2, &c2, &c2, &oracle).unwrap();
    println!("{}", split.psi.to_text());
    println!("status: {}", split.status());
    match tensor_split(&c2, &c2, &FdAlgebra::full_matrix(2).unwrap(), &oracle) {
        Ok(_) => println!("M2 target accepted"),
        Err(e) => println!("M2 target: {e}"),
    }
}
