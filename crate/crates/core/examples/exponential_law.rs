use qmor::fd_algebra::FdAlgebra;
use qmor::presentation::Oracle;
use qmor::structure::{combine, exp_law_maps};

fn main() {
    let c2 = FdAlgebra::commutative(2).unwrap();
    let oracle = Oracle::default();
    let law = exp_law_maps(&c2, &c2, &c2, &oracle).unwrap();
    println!("Ψ: Mor(B, C1⊗C2) → Mor(Mor(B, C1), C2)");
    println!("{}", law.psi.to_text());
    let checks = law.check(&oracle).unwrap();
    println!("Ψ'∘Ψ = id: {}", combine(&checks.psi_prime_psi));
    println!("Ψ∘Ψ' = id: {}", combine(&checks.psi_psi_prime));
    println!("(id⊗Ψ)∘Γ: {}", combine(&checks.gamma_identity));
}
