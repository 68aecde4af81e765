//! Siegel upper half space in binary64: the action of `Γ(δ)`, the Cayley
//! transform and tropicalization toward the standard cusps.
//!
//! Conventions: `E = [[0, δ], [−δ, 0]]`, an integral `r = [[a, b], [c, d]]`
//! is symplectic when `r·E·rᵀ = E`, and acts by
//! `τ ↦ (aτ + bδ)(cτ + dδ)⁻¹δ`. The cusp `F^(g′)` splits `τ` into blocks
//! `τ₁` (first `g′` coordinates), `τ₃` (off-diagonal) and `τ₂`.

use nalgebra::DMatrix;
use num::ToPrimitive;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{IntegerMatrix, PolarizationType};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SiegelError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("imaginary part is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not symplectic for the given type")]
    NotSymplectic,
    #[error("denominator is numerically singular")]
    NearSingularDenominator,
    #[error("block Im τ₁ is ill conditioned")]
    IllConditionedBlock,
    #[error("cusp index {0} out of range")]
    BadCusp(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl SiegelError {
    pub fn code(&self) -> &'static str {
        match self {
            SiegelError::NotSymmetric => "NotSymmetric",
            SiegelError::NotPositiveDefinite => "NotPositiveDefinite",
            SiegelError::NotSymplectic => "NotSymplectic",
            SiegelError::NearSingularDenominator => "NearSingularDenominator",
            SiegelError::IllConditionedBlock => "IllConditionedBlock",
            SiegelError::BadCusp(_) => "BadCusp",
            SiegelError::Shape(_) => "ShapeMismatch",
        }
    }
}

/// A complex matrix as rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrixJson(pub Vec<Vec<[f64; 2]>>);

impl ComplexMatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        ComplexMatrixJson((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }

    pub fn to_matrix(&self) -> Result<CMatrix, SiegelError> {
        let n = self.0.len();
        let c = self.0.first().map_or(0, |r| r.len());
        if self.0.iter().any(|r| r.len() != c) {
            return Err(SiegelError::Shape("rows must have equal length".into()));
        }
        Ok(CMatrix::from_fn(n, c, |i, j| Complex64::new(self.0[i][j][0], self.0[i][j][1])))
    }
}

/// A point of the Siegel upper half space of degree `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrixJson", into = "ComplexMatrixJson")]
pub struct SiegelPoint {
    tau: CMatrix,
}

impl TryFrom<ComplexMatrixJson> for SiegelPoint {
    type Error = SiegelError;
    fn try_from(j: ComplexMatrixJson) -> Result<Self, SiegelError> {
        SiegelPoint::new(j.to_matrix()?, DEFAULT_TOL)
    }
}

impl From<SiegelPoint> for ComplexMatrixJson {
    fn from(p: SiegelPoint) -> Self {
        ComplexMatrixJson::from_matrix(&p.tau)
    }
}

impl SiegelPoint {
    pub fn new(tau: CMatrix, tol: f64) -> Result<Self, SiegelError> {
        if !tau.is_square() {
            return Err(SiegelError::Shape("τ must be square".into()));
        }
        if (&tau - tau.transpose()).iter().any(|z| z.norm() > tol) {
            return Err(SiegelError::NotSymmetric);
        }
        let tau = symmetrize(&tau);
        if min_pivot(&imag(&tau)).is_none_or(|p| p <= tol) {
            return Err(SiegelError::NotPositiveDefinite);
        }
        Ok(SiegelPoint { tau })
    }

    /// `τ = X + iY`.
    pub fn from_parts(re: &RMatrix, im: &RMatrix, tol: f64) -> Result<Self, SiegelError> {
        if re.shape() != im.shape() {
            return Err(SiegelError::Shape("real and imaginary parts differ in shape".into()));
        }
        SiegelPoint::new(CMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)])), tol)
    }

    pub fn g(&self) -> usize {
        self.tau.nrows()
    }

    pub fn tau(&self) -> &CMatrix {
        &self.tau
    }

    pub fn imag(&self) -> RMatrix {
        imag(&self.tau)
    }
}

/// Standard cusp `F^(g′)` for a polarization type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspSpec {
    pub g_prime: usize,
    pub delta: PolarizationType,
}

fn imag(m: &CMatrix) -> RMatrix {
    m.map(|z| z.im)
}

fn symmetrize<T: nalgebra::Scalar + nalgebra::ClosedAddAssign + nalgebra::ClosedMulAssign + Copy>(
    m: &DMatrix<T>,
) -> DMatrix<T>
where
    T: std::ops::Mul<f64, Output = T>,
{
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)]) * 0.5)
}

/// Smallest squared Cholesky pivot, `None` when the factorization fails.
fn min_pivot(m: &RMatrix) -> Option<f64> {
    if m.nrows() == 0 {
        return Some(f64::INFINITY);
    }
    let c = nalgebra::Cholesky::new(m.clone())?;
    Some(c.l_dirty().diagonal().iter().map(|x| x * x).fold(f64::INFINITY, f64::min))
}

fn to_f64(m: &IntegerMatrix) -> RMatrix {
    RMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64().expect("entry fits in f64"))
}

fn complexify(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Inverse with a conditioning guard: the ratio of extreme singular values
/// must exceed `tol`.
fn guarded_inverse(m: &CMatrix, tol: f64) -> Result<CMatrix, SiegelError> {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min / max < tol {
        return Err(SiegelError::NearSingularDenominator);
    }
    m.clone().try_inverse().ok_or(SiegelError::NearSingularDenominator)
}

/// `[[0, δ], [−δ, 0]]`.
pub fn standard_form(delta: &PolarizationType) -> IntegerMatrix {
    delta.standard_form()
}

pub fn is_symplectic(r: &IntegerMatrix, delta: &PolarizationType) -> bool {
    let e = standard_form(delta);
    r.rows() == e.rows() && r.cols() == e.cols() && r.mul(&e).mul(&r.transpose()) == e
}

pub fn gamma_action(
    r: &IntegerMatrix,
    tau: &SiegelPoint,
    delta: &PolarizationType,
    tol: f64,
) -> Result<SiegelPoint, SiegelError> {
    let g = tau.g();
    if delta.len() != g {
        return Err(SiegelError::Shape(format!("type has length {}, τ has size {g}", delta.len())));
    }
    if !is_symplectic(r, delta) {
        return Err(SiegelError::NotSymplectic);
    }
    let rf = complexify(&to_f64(r));
    let a = rf.view((0, 0), (g, g));
    let b = rf.view((0, g), (g, g));
    let c = rf.view((g, 0), (g, g));
    let d = rf.view((g, g), (g, g));
    let dl = complexify(&RMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        g,
        delta.diag().iter().map(|&x| x as f64),
    )));
    let num = a * &tau.tau + b * &dl;
    let den = c * &tau.tau + d * &dl;
    let out = num * guarded_inverse(&den, tol)? * &dl;
    SiegelPoint::new(out, tol.max(1e-8 * scale(&tau.tau)))
}

fn scale(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// `Z = (τ − i)(τ + i)⁻¹`.
pub fn cayley_transform(tau: &SiegelPoint, tol: f64) -> Result<CMatrix, SiegelError> {
    let g = tau.g();
    let i = CMatrix::identity(g, g) * Complex64::new(0.0, 1.0);
    let z = (&tau.tau - &i) * guarded_inverse(&(&tau.tau + &i), tol)?;
    Ok(symmetrize(&z))
}

/// `Im τ₂ − (Im τ₃)ᵀ (Im τ₁)⁻¹ Im τ₃` for the cusp `F^(g′)`.
pub fn tropicalize(tau: &SiegelPoint, cusp: &CuspSpec, tol: f64) -> Result<RMatrix, SiegelError> {
    let g = tau.g();
    let k = cusp.g_prime;
    if k >= g {
        return Err(SiegelError::BadCusp(k));
    }
    let y = tau.imag();
    let y1 = y.view((0, 0), (k, k)).into_owned();
    let y3 = y.view((0, k), (k, g - k)).into_owned();
    let y2 = y.view((k, k), (g - k, g - k)).into_owned();
    if k == 0 {
        return Ok(symmetrize(&y2));
    }
    if min_pivot(&y1).is_none_or(|p| p < tol) {
        return Err(SiegelError::IllConditionedBlock);
    }
    let chol = nalgebra::Cholesky::new(y1).ok_or(SiegelError::IllConditionedBlock)?;
    let t = y2 - y3.transpose() * chol.solve(&y3);
    Ok(symmetrize(&t))
}

/// Independent route: invert `Im τ`, take the lower-right block, invert back.
pub fn tropicalize_oracle(tau: &SiegelPoint, g_prime: usize) -> Option<RMatrix> {
    let g = tau.g();
    let inv = tau.imag().try_inverse()?;
    inv.view((g_prime, g_prime), (g - g_prime, g - g_prime)).into_owned().try_inverse()
}

/// `diag(U⁻ᵀ, U)`, the stabilizer element acting on `Im τ` by `U⁻ᵀ·Y·U⁻¹`.
pub fn levi_element(u: &IntegerMatrix) -> Option<IntegerMatrix> {
    let inv_t = u.inverse_unimodular()?.transpose();
    let g = u.rows();
    let z = IntegerMatrix::zeros(g, g);
    Some(IntegerMatrix::blocks(&inv_t, &z, &z, u))
}

/// Relative Frobenius distance `‖a − b‖ / max(‖b‖, 1)`.
pub fn relative_error(a: &RMatrix, b: &RMatrix) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
