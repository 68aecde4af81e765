//! Elementary-divisor reduction of alternating forms and polarization types.

use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntegerMatrix;
use super::normal_form::smith_normal_form;
use super::LinalgError;
use crate::arith::Int;

/// Divisor chain `d₁ | d₂ | … | d_r` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PolarizationType {
    diag: Vec<u64>,
}

impl PolarizationType {
    pub fn new(diag: Vec<u64>) -> Result<Self, LinalgError> {
        if diag.iter().any(|&d| d == 0) {
            return Err(LinalgError::BadType("entries must be positive".into()));
        }
        if diag.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(LinalgError::BadType("entries must form a divisor chain".into()));
        }
        Ok(PolarizationType { diag })
    }

    pub fn principal(g: usize) -> Self {
        PolarizationType { diag: vec![1; g] }
    }

    pub fn diag(&self) -> &[u64] {
        &self.diag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Degree `∏ dᵢ`.
    pub fn degree(&self) -> u64 {
        self.diag.iter().product()
    }

    pub fn last(&self) -> u64 {
        self.diag.last().copied().unwrap_or(1)
    }

    pub fn matrix(&self) -> IntegerMatrix {
        let d: Vec<Int> = self.diag.iter().map(|&x| Int::from(x)).collect();
        IntegerMatrix::diag(&d)
    }

    /// Standard alternating form `[[0, δ], [−δ, 0]]`.
    pub fn standard_form(&self) -> IntegerMatrix {
        let g = self.len();
        let z = IntegerMatrix::zeros(g, g);
        let d = self.matrix();
        IntegerMatrix::blocks(&z, &d, &d.neg(), &z)
    }
}

impl TryFrom<Vec<u64>> for PolarizationType {
    type Error = LinalgError;
    fn try_from(v: Vec<u64>) -> Result<Self, LinalgError> {
        PolarizationType::new(v)
    }
}

impl From<PolarizationType> for Vec<u64> {
    fn from(t: PolarizationType) -> Vec<u64> {
        t.diag
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticDecomposition {
    #[serde(rename = "type")]
    pub ptype: PolarizationType,
    pub basis_change: IntegerMatrix,
}

/// Returns `B` unimodular and `δ` with `B·e·Bᵀ = [[0, δ], [−δ, 0]]`.
pub fn symplectic_normal_form(e: &IntegerMatrix) -> Result<SymplecticDecomposition, LinalgError> {
    if !e.is_skew() {
        return Err(LinalgError::NotSkew);
    }
    let n = e.rows();
    if n % 2 == 1 || e.det().is_zero() {
        return Err(LinalgError::Degenerate);
    }
    // rows of `w` are the working basis; `f = w·e·wᵀ` is kept in sync
    let mut w = IntegerMatrix::identity(n);
    let mut f = e.clone();
    let mut k = 0;
    while k < n {
        let mut best: Option<(usize, usize)> = None;
        for i in k..n {
            for j in i + 1..n {
                if !f[(i, j)].is_zero()
                    && best.is_none_or(|(a, b)| f[(i, j)].abs() < f[(a, b)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let (i, j) = best.expect("nondegenerate form has a nonzero pairing");
        basis_swap(&mut w, &mut f, k, i);
        basis_swap(&mut w, &mut f, k + 1, j);
        if f[(k, k + 1)].is_negative() {
            basis_negate(&mut w, &mut f, k + 1);
        }
        let d = f[(k, k + 1)].clone();

        let mut restart = false;
        for l in k + 2..n {
            let q = f[(k, l)].div_floor(&d);
            basis_axpy(&mut w, &mut f, l, k + 1, &q);
            let p = f[(k + 1, l)].div_floor(&d);
            basis_axpy(&mut w, &mut f, l, k, &(-p));
            restart |= !f[(k, l)].is_zero() || !f[(k + 1, l)].is_zero();
        }
        if restart {
            continue;
        }
        let bad = (k + 2..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| !f[(a, b)].is_multiple_of(&d));
        if let Some((a, _)) = bad {
            basis_axpy(&mut w, &mut f, k, a, &(-Int::one()));
            continue;
        }
        k += 2;
    }
    let g = n / 2;
    let order: Vec<usize> = (0..g).map(|i| 2 * i).chain((0..g).map(|i| 2 * i + 1)).collect();
    let b = IntegerMatrix::from_fn(n, n, |i, j| w[(order[i], j)].clone());
    let diag = (0..g)
        .map(|i| {
            use num::ToPrimitive;
            f[(2 * i, 2 * i + 1)].to_u64().expect("elementary divisor fits in u64")
        })
        .collect();
    Ok(SymplecticDecomposition { ptype: PolarizationType::new(diag)?, basis_change: b })
}

fn basis_swap(w: &mut IntegerMatrix, f: &mut IntegerMatrix, a: usize, b: usize) {
    w.swap_rows(a, b);
    f.swap_rows(a, b);
    f.swap_cols(a, b);
}

fn basis_negate(w: &mut IntegerMatrix, f: &mut IntegerMatrix, a: usize) {
    for j in 0..w.cols() {
        w[(a, j)] = -w[(a, j)].clone();
    }
    for j in 0..f.cols() {
        f[(a, j)] = -f[(a, j)].clone();
        f[(j, a)] = -f[(j, a)].clone();
    }
}

/// basis vector `dst -= q · src`, updating the Gram matrix
fn basis_axpy(w: &mut IntegerMatrix, f: &mut IntegerMatrix, dst: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    for j in 0..w.cols() {
        w[(dst, j)] = &w[(dst, j)] - q * &w[(src, j)];
    }
    let n = f.rows();
    for j in 0..n {
        f[(dst, j)] = &f[(dst, j)] - q * &f[(src, j)];
    }
    for i in 0..n {
        f[(i, dst)] = &f[(i, dst)] - q * &f[(i, src)];
    }
}

/// Elementary divisors of an injective square integer matrix.
pub fn polarization_type(phi: &IntegerMatrix) -> Result<PolarizationType, LinalgError> {
    if !phi.is_square() || phi.det().is_zero() {
        return Err(LinalgError::NotInjective);
    }
    let (d, _, _) = smith_normal_form(phi);
    use num::ToPrimitive;
    let diag = d
        .iter()
        .map(|x| x.to_u64().ok_or_else(|| LinalgError::BadType("divisor too large".into())))
        .collect::<Result<Vec<_>, _>>()?;
    PolarizationType::new(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(e: &IntegerMatrix) -> SymplecticDecomposition {
        let s = symplectic_normal_form(e).unwrap();
        let b = &s.basis_change;
        assert!(b.is_unimodular());
        assert_eq!(b.mul(e).mul(&b.transpose()), s.ptype.standard_form());
        s
    }

    #[test]
    fn rank_two() {
        let e = IntegerMatrix::from_i64(&[&[0, 2], &[-2, 0]]);
        let s = check(&e);
        assert_eq!(s.ptype.diag(), &[2]);
        assert_eq!(s.basis_change, IntegerMatrix::identity(2));
    }

    #[test]
    fn permuted_standard() {
        let mut e = IntegerMatrix::zeros(4, 4);
        e[(0, 2)] = Int::from(1);
        e[(2, 0)] = Int::from(-1);
        e[(1, 3)] = Int::from(2);
        e[(3, 1)] = Int::from(-2);
        assert_eq!(check(&e).ptype.diag(), &[1, 2]);
    }

    #[test]
    fn coprime_blocks_merge() {
        // δ = (2, 3) is not a chain; the reduction must give (1, 6)
        let e = PolarizationType { diag: vec![2, 3] }.standard_form();
        assert_eq!(check(&e).ptype.diag(), &[1, 6]);
    }

    #[test]
    fn errors() {
        let s = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(symplectic_normal_form(&s), Err(LinalgError::NotSkew));
        let z = IntegerMatrix::zeros(2, 2);
        assert_eq!(symplectic_normal_form(&z), Err(LinalgError::Degenerate));
    }

    #[test]
    fn types() {
        let three = IntegerMatrix::from_i64(&[&[3]]);
        assert_eq!(polarization_type(&three).unwrap().diag(), &[3]);
        let d = IntegerMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert_eq!(polarization_type(&d).unwrap().diag(), &[1, 2]);
        let m = IntegerMatrix::from_i64(&[&[2, 1], &[0, 2]]);
        assert_eq!(polarization_type(&m).unwrap().diag(), &[1, 4]);
        let sing = IntegerMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(polarization_type(&sing), Err(LinalgError::NotInjective));
    }
}
