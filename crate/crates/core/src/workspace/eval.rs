use num_traits::One;

use super::ast::Expr;
use super::lexer::Span;
use super::Diagnostic;
use crate::fd_algebra::{FdAlgebra, FdElement};
use crate::presentation::{FreeStarPoly, Presentation};
use crate::scalar::GaussRat;

trait Ring: Sized {
    fn constant(&self, c: GaussRat) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn star(&self) -> Self;
}

impl Ring for FreeStarPoly {
    fn constant(&self, c: GaussRat) -> Self {
        FreeStarPoly::constant(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn star(&self) -> Self {
        self.adjoint()
    }
}

impl Ring for FdElement {
    fn constant(&self, c: GaussRat) -> Self {
        self.algebra().one().scale(&c)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn star(&self) -> Self {
        self.adjoint()
    }
}

fn eval<R: Ring>(e: &Expr, zero: &R, leaf: &dyn Fn(&Expr) -> Result<R, Diagnostic>) -> Result<R, Diagnostic> {
    let rec = |x: &Expr| eval(x, zero, leaf);
    Ok(match e {
        Expr::Num(c) => zero.constant(c.clone()),
        Expr::Name(_) | Expr::Unit(_) => leaf(e)?,
        Expr::Neg(a) => zero.minus(&rec(a)?),
        Expr::Add(a, b) => rec(a)?.plus(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.minus(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.times(&rec(b)?),
        Expr::Star(a) => rec(a)?.star(),
        Expr::Pow(a, n) => {
            let base = rec(a)?;
            let mut out = zero.constant(GaussRat::one());
            for _ in 0..*n {
                out = out.times(&base);
            }
            out
        }
    })
}

fn imaginary_unit(name: &str) -> Option<GaussRat> {
    (name == "i").then(GaussRat::i)
}

/// Names resolve to generators (`i` is the imaginary unit unless it names a
/// generator), `e[k,i,j]` to the matrix-unit generator when there is one.
pub fn to_poly(e: &Expr, pres: &Presentation, fallback: Span) -> Result<FreeStarPoly, Diagnostic> {
    let leaf = |x: &Expr| match x {
        Expr::Name(n) => match (pres.generator_index(&n.name), imaginary_unit(&n.name)) {
            (Ok(g), _) => Ok(FreeStarPoly::generator(g)),
            (Err(_), Some(c)) => Ok(FreeStarPoly::constant(c)),
            (Err(_), None) => Err(Diagnostic::new(n.span, format!("unknown generator `{}`", n.name))),
        },
        Expr::Unit(u) => pres
            .matrix_unit_generator(*u)
            .map(FreeStarPoly::generator)
            .map_err(|_| Diagnostic::new(fallback, format!("no generator for the matrix unit {u}"))),
        _ => unreachable!("leaves only"),
    };
    let p = eval(e, &FreeStarPoly::zero(), &leaf)?;
    Ok(pres.canonicalize(&p))
}

/// Elements written in matrix units; `i` is the imaginary unit.
pub fn to_element(e: &Expr, a: &FdAlgebra, fallback: Span) -> Result<FdElement, Diagnostic> {
    let leaf = |x: &Expr| match x {
        Expr::Name(n) => imaginary_unit(&n.name)
            .map(|c| a.one().scale(&c))
            .ok_or_else(|| Diagnostic::new(n.span, format!("`{}` is not an element of {a}", n.name))),
        Expr::Unit(u) => unit_index(a, *u)
            .map(|k| a.basis(k))
            .ok_or_else(|| Diagnostic::new(fallback, format!("{u} is not a matrix unit of {a}"))),
        _ => unreachable!("leaves only"),
    };
    eval(e, &a.zero(), &leaf)
}

pub fn unit_index(a: &FdAlgebra, u: crate::fd_algebra::MatrixUnit) -> Option<usize> {
    let n = *a.blocks().get(u.block)?;
    (u.row < n && u.col < n).then(|| a.index(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workspace::parser::parse_expr;

    #[test]
    fn element_arithmetic() {
        let m2 = FdAlgebra::full_matrix(2).unwrap();
        let x = to_element(&parse_expr("e[0,0,1]^* e[0,0,1] + 2i").unwrap(), &m2, Span::default()).unwrap();
        let expect = &m2.basis(m2.index(crate::fd_algebra::MatrixUnit::new(0, 1, 1))) + &m2.one().scale(&(&GaussRat::from(2) * &GaussRat::i()));
        assert_eq!(x, expect);
        assert!(to_element(&parse_expr("e[1,0,0]").unwrap(), &m2, Span::default()).is_err());
    }

    #[test]
    fn unknown_generator_position() {
        let pres = Presentation::from_fd(&FdAlgebra::commutative(2).unwrap());
        let err = to_poly(&parse_expr("e[0,0,0] + zz").unwrap(), &pres, Span::default()).unwrap_err();
        assert_eq!(err.span, Span { line: 1, col: 12 });
    }
}
