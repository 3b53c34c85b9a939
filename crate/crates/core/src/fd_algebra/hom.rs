use num_traits::Zero;

use super::linalg::{self, Matrix};
use super::{FdAlgebra, FdElement, FdError, Functional, TensorAlgebra};

/// A unital *-homomorphism between finite-dimensional algebras, stored as the
/// images of the source matrix units. Only constructed through verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarHom {
    source: FdAlgebra,
    target: FdAlgebra,
    images: Vec<FdElement>,
}

impl StarHom {
    /// Checks unitality, *-preservation and multiplicativity on every basis
    /// pair, in that order, and reports the first violation found.
    pub fn new(source: &FdAlgebra, target: &FdAlgebra, images: Vec<FdElement>) -> Result<Self, FdError> {
        if images.len() != source.dim() {
            return Err(FdError::ImageCount { expected: source.dim(), found: images.len() });
        }
        for img in &images {
            target.ensure_same(img.algebra())?;
        }
        let mut one = target.zero();
        for k in source.diagonal_indices() {
            one = &one + &images[k];
        }
        if one != target.one() {
            return Err(FdError::NotUnital { image: one.to_string() });
        }
        for a in 0..source.dim() {
            if images[source.star_index(a)] != images[a].adjoint() {
                return Err(FdError::NotStarPreserving { unit: source.unit(a) });
            }
        }
        for a in 0..source.dim() {
            for b in 0..source.dim() {
                let lhs = &images[a] * &images[b];
                let ok = match source.product_index(a, b) {
                    Some(c) => lhs == images[c],
                    None => lhs.is_zero(),
                };
                if !ok {
                    return Err(FdError::NotMultiplicative { left: source.unit(a), right: source.unit(b) });
                }
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(a: &FdAlgebra) -> Self {
        Self { source: a.clone(), target: a.clone(), images: (0..a.dim()).map(|k| a.basis(k)).collect() }
    }

    pub fn source(&self) -> &FdAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FdAlgebra {
        &self.target
    }

    pub fn image(&self, index: usize) -> &FdElement {
        &self.images[index]
    }

    pub fn images(&self) -> &[FdElement] {
        &self.images
    }

    pub fn apply(&self, x: &FdElement) -> Result<FdElement, FdError> {
        self.source.ensure_same(x.algebra())?;
        let mut out = self.target.zero();
        for (k, c) in x.coords().iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(c, &self.images[k]);
            }
        }
        Ok(out)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &StarHom) -> Result<StarHom, FdError> {
        self.source.ensure_same(&first.target)?;
        let images = first.images.iter().map(|x| self.apply(x)).collect::<Result<_, _>>()?;
        Ok(StarHom { source: first.source.clone(), target: self.target.clone(), images })
    }

    /// `f ⊗ g : A ⊗ B → A' ⊗ B'`.
    pub fn tensor(f: &StarHom, g: &StarHom, dom: &TensorAlgebra, cod: &TensorAlgebra) -> Result<StarHom, FdError> {
        dom.left().ensure_same(&f.source)?;
        dom.right().ensure_same(&g.source)?;
        cod.left().ensure_same(&f.target)?;
        cod.right().ensure_same(&g.target)?;
        let images = (0..dom.algebra().dim())
            .map(|c| {
                let (a, b) = dom.split_index(c);
                cod.pure(&f.images[a], &g.images[b])
            })
            .collect();
        Ok(StarHom { source: dom.algebra().clone(), target: cod.algebra().clone(), images })
    }

    /// Matrix of the underlying linear map, `target.dim() × source.dim()`.
    pub fn matrix(&self) -> Matrix {
        (0..self.target.dim())
            .map(|r| self.images.iter().map(|img| img.coord(r).clone()).collect())
            .collect()
    }

    /// Some `x` with `self(x) = y`, if `y` lies in the image.
    pub fn preimage(&self, y: &FdElement) -> Result<Option<FdElement>, FdError> {
        self.target.ensure_same(y.algebra())?;
        Ok(linalg::solve(&self.matrix(), y.coords())
            .map(|coords| FdElement { algebra: self.source.clone(), coords }))
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target.dim()).all(|k| matches!(self.preimage(&self.target.basis(k)), Ok(Some(_))))
    }

    /// Inverse of a *-isomorphism.
    pub fn inverse(&self) -> Result<StarHom, FdError> {
        if self.source.dim() != self.target.dim() {
            return Err(FdError::Singular);
        }
        let inv = linalg::inverse(&self.matrix()).ok_or(FdError::Singular)?;
        let images = (0..self.target.dim())
            .map(|c| FdElement {
                algebra: self.source.clone(),
                coords: (0..self.source.dim()).map(|r| inv[r][c].clone()).collect(),
            })
            .collect();
        StarHom::new(&self.target, &self.source, images)
    }
}

/// The slice map `(ω ⊗ id)(x)` for `x ∈ C ⊗ A`, with `ω` a functional on `C`.
pub fn slice(omega: &Functional, x: &FdElement, ca: &TensorAlgebra) -> Result<FdElement, FdError> {
    ca.left().ensure_same(omega.algebra())?;
    ca.algebra().ensure_same(x.algebra())?;
    let mut out = ca.right().zero();
    for (c, coef) in x.coords().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let (a, b) = ca.split_index(c);
        let w = &omega.coeffs()[a];
        if !w.is_zero() {
            out.coords[b] += &(w * coef);
        }
    }
    Ok(out)
}

/// For a commuting square `(id_C ⊗ Γ)Φ = Φ'Λ`, checks
/// `Γ((ω⊗id)Φ(b)) = (ω⊗id)Φ'Λ(b)` on every basis element `b`.
///
/// `phi : B → C⊗A` has target `ca.algebra()`, `phi_prime : B' → C⊗A'` has
/// target `ca_prime.algebra()`. Fails with [`FdError::SquareNotCommuting`]
/// when the square does not commute.
#[allow(clippy::too_many_arguments)]
pub fn check_slice_identity(
    lambda: &StarHom,
    gamma: &StarHom,
    phi: &StarHom,
    phi_prime: &StarHom,
    ca: &TensorAlgebra,
    ca_prime: &TensorAlgebra,
    omega: &Functional,
) -> Result<bool, FdError> {
    phi.source.ensure_same(&lambda.source)?;
    phi_prime.source.ensure_same(&lambda.target)?;
    ca.left().ensure_same(ca_prime.left())?;
    let id_gamma = StarHom::tensor(&StarHom::identity(ca.left()), gamma, ca, ca_prime)?;
    let b = &lambda.source;
    for k in 0..b.dim() {
        let e = b.basis(k);
        let down_right = id_gamma.apply(&phi.apply(&e)?)?;
        let right_down = phi_prime.apply(&lambda.apply(&e)?)?;
        if down_right != right_down {
            return Err(FdError::SquareNotCommuting { unit: b.unit(k) });
        }
    }
    for k in 0..b.dim() {
        let e = b.basis(k);
        let lhs = gamma.apply(&slice(omega, &phi.apply(&e)?, ca)?)?;
        let rhs = slice(omega, &phi_prime.apply(&lambda.apply(&e)?)?, ca_prime)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
