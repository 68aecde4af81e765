//! Exact integer and rational linear algebra.

mod lattice;
mod matrix;
mod normal_form;
mod symplectic;

pub use lattice::Sublattice;
pub use matrix::{IntegerMatrix, Matrix, RationalMatrix, Ring, ShapeError};
pub use normal_form::{hermite_normal_form, smith_normal_form};
pub use symplectic::{
    polarization_type, symplectic_normal_form, PolarizationType, SymplecticDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("alternating form is degenerate")]
    Degenerate,
    #[error("matrix is not injective")]
    NotInjective,
    #[error("u does not preserve the sublattice")]
    NotInGLXY,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid polarization type: {0}")]
    BadType(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl LinalgError {
    pub fn code(&self) -> &'static str {
        match self {
            LinalgError::NotSkew => "NotSkew",
            LinalgError::Degenerate => "Degenerate",
            LinalgError::NotInjective => "NotInjective",
            LinalgError::NotInGLXY => "NotInGLXY",
            LinalgError::NotUnimodular => "NotUnimodular",
            LinalgError::BadType(_) => "BadType",
            LinalgError::Shape(_) => "ShapeMismatch",
        }
    }
}

/// `(uᵀ)⁻¹ · q · u⁻¹` for `u ∈ GL(r, ℤ)` preserving the lattice spanned by
/// the columns of `y_basis`.
pub fn glxy_act(
    u: &IntegerMatrix,
    q: &RationalMatrix,
    y_basis: &IntegerMatrix,
) -> Result<RationalMatrix, LinalgError> {
    let r = q.rows();
    if !u.is_square() || u.rows() != r || !q.is_square() || y_basis.rows() != r {
        return Err(LinalgError::Shape("u, q and y_basis must act on the same rank".into()));
    }
    let uinv = u.inverse_unimodular().ok_or(LinalgError::NotUnimodular)?;
    let ylat = Sublattice::from_columns(y_basis)?;
    for j in 0..ylat.rank() {
        let img = u.mul_vec(ylat.hnf().row(j));
        if !ylat.contains(&img) {
            return Err(LinalgError::NotInGLXY);
        }
    }
    let ui = uinv.to_rational();
    Ok(ui.transpose().mul(q).mul(&ui))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glxy_examples() {
        let y = IntegerMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        let q = RationalMatrix::identity(2);
        assert_eq!(glxy_act(&IntegerMatrix::identity(2), &q, &y).unwrap(), q);
        let u = IntegerMatrix::from_i64(&[&[1, 0], &[2, 1]]);
        assert_eq!(
            glxy_act(&u, &q, &y).unwrap(),
            RationalMatrix::from_i64(&[&[5, -2], &[-2, 1]])
        );
        let swap = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(glxy_act(&swap, &q, &y), Err(LinalgError::NotInGLXY));
        let two = IntegerMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        assert_eq!(glxy_act(&two, &q, &y), Err(LinalgError::NotUnimodular));
    }
}
