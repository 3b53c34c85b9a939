//! Mor(B, C) is B again: generators multiply like matrix units.

use qmor::fd_algebra::FdAlgebra;
use qmor::mor::recovery;
use qmor::presentation::Oracle;

fn main() {
    let b = FdAlgebra::new(&[1, 2]).unwrap();
    let r = recovery(&b, &Oracle::default()).unwrap();
    println!("{}", r.mor.to_text());
    let total = r.verdicts().count();
    let equal = r.verdicts().filter(|v| v.is_equal()).count();
    println!("{equal} of {total} product and adjoint identities verified");
}
