use qmor::fd_algebra::check_slice_identity;
use qmor::fd_algebra::random::{commuting_square, random_scalar};
use qmor::fd_algebra::Functional;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut holds = 0;
    for _ in 0..20 {
        let sq = commuting_square(&mut rng, 3);
        let c = sq.ca.left();
        let omega = Functional::new(c, (0..c.dim()).map(|_| random_scalar(&mut rng)).collect()).unwrap();
        let ok = check_slice_identity(&sq.lambda, &sq.gamma, &sq.phi, &sq.phi_prime, &sq.ca, &sq.ca_prime, &omega).unwrap();
        holds += ok as usize;
    }
    println!("slice identity held on {holds} of 20 random squares");
}
