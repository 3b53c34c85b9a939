use super::{build_mor, MorError, MorPresentation};
use crate::fd_algebra::FdAlgebra;
use crate::presentation::{EqualityVerdict, FreeStarPoly, Oracle};

/// `Mor(B, ℂ)` against the multiplication table of `B`: one verdict per
/// ordered pair for `x_s x_t = x_{st}` (or 0), and one per generator for
/// `x_t^* = x_{t^*}`.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub mor: MorPresentation,
    pub products: Vec<((usize, usize), EqualityVerdict)>,
    pub adjoints: Vec<(usize, EqualityVerdict)>,
}

impl Recovery {
    pub fn verdicts(&self) -> impl Iterator<Item = &EqualityVerdict> {
        self.products.iter().map(|(_, v)| v).chain(self.adjoints.iter().map(|(_, v)| v))
    }
}

pub fn recovery(b: &FdAlgebra, oracle: &Oracle) -> Result<Recovery, MorError> {
    let c = FdAlgebra::commutative(1)?;
    let mor = build_mor(b, &c)?;
    let x = |t: usize| mor.symbol_poly(t, 0);
    let pres = mor.base();
    let mut products = Vec::new();
    for s in 0..b.dim() {
        for t in 0..b.dim() {
            let expect = b.product_index(s, t).map_or_else(FreeStarPoly::zero, x);
            products.push(((s, t), oracle.is_zero(&x(s).mul(&x(t)).sub(&expect), pres)));
        }
    }
    let adjoints = (0..b.dim())
        .map(|t| (t, oracle.is_zero(&x(t).adjoint().sub(&x(b.star_index(t))), pres)))
        .collect();
    Ok(Recovery { mor, products, adjoints })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_algebra_multiplication_table() {
        let m2 = FdAlgebra::full_matrix(2).unwrap();
        let r = recovery(&m2, &Oracle::default()).unwrap();
        assert_eq!(r.products.len(), 16);
        assert!(r.verdicts().all(EqualityVerdict::is_equal));
    }
}
