//! Dense row-major matrices over exact rings.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{One, Signed, Zero};
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntegerMatrix = Matrix<Int>;
pub type RationalMatrix = Matrix<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("expected {expected} entries, got {got}")]
    Count { expected: usize, got: usize },
    #[error("ragged rows")]
    Ragged,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, ShapeError> {
        if data.len() != rows * cols {
            return Err(ShapeError::Count { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ShapeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(ShapeError::Ragged);
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Ring operations shared by the integer and rational instances.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + for<'a> std::ops::Add<&'a Self, Output = Self>
    + for<'a> std::ops::Sub<&'a Self, Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn mul_ref(&self, o: &Self) -> Self;
}

impl Ring for Int {
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
}

impl Ring for Rat {
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out[(i, j)].clone() + &a.mul_ref(&o[(k, j)]);
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + &a.mul_ref(b))
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape mismatch");
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |acc, i| acc + &v[i].mul_ref(&self[(i, j)])))
            .collect()
    }

    /// `vᵀ M w`.
    pub fn bilinear(&self, v: &[T], w: &[T]) -> T {
        let mw = self.mul_vec(w);
        v.iter().zip(&mw).fold(T::zero(), |acc, (a, b)| acc + &a.mul_ref(b))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.mul_ref(s))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_zero()
                    && (0..i).all(|j| self[(i, j)].clone() + &self[(j, i)] == T::zero())
            })
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (r1, c1) = (a.rows, a.cols);
        Matrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < r1, j < c1) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - c1)].clone(),
            (false, true) => c[(i - r1, j)].clone(),
            (false, false) => d[(i - r1, j - c1)].clone(),
        })
    }
}

impl IntegerMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| arith::ivec(r)).collect())
            .expect("ragged literal")
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(arith::rat_int)
    }

    /// Bareiss fraction-free determinant.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<IntegerMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        let inv = self.to_rational().inverse()?;
        Some(inv.map(|x| x.to_integer()))
    }
}

impl RationalMatrix {
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&(n, d)| arith::rat(n, d)).collect()).collect(),
        )
        .expect("ragged literal")
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntegerMatrix::from_i64(rows).to_rational()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        if self.is_integral() {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                m.swap_rows(k, p);
                det = -det;
            }
            let piv = m[(k, k)].clone();
            det *= &piv;
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &piv;
                for j in k..n {
                    let v = &m[(i, j)] - &f * &m[(k, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RationalMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !m[(i, k)].is_zero())?;
            m.swap_rows(k, p);
            inv.swap_rows(k, p);
            let piv = m[(k, k)].clone();
            for j in 0..n {
                m[(k, j)] = &m[(k, j)] / &piv;
                inv[(k, j)] = &inv[(k, j)] / &piv;
            }
            for i in 0..n {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone();
                for j in 0..n {
                    m[(i, j)] = &m[(i, j)] - &f * &m[(k, j)];
                    inv[(i, j)] = &inv[(i, j)] - &f * &inv[(k, j)];
                }
            }
        }
        Some(inv)
    }

    /// Solve `self · x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        Some(self.inverse()?.mul_vec(b))
    }

    /// Rank by elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..m.cols {
                    m[(i, j)] = &m[(i, j)] - &f * &m[(r, j)];
                }
            }
            r += 1;
            if r == m.rows {
                break;
            }
        }
        r
    }

    /// Basis of the right kernel `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for j in 0..cols {
                m[(r, j)] = &m[(r, j)] / &piv;
            }
            for i in 0..rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..cols {
                        m[(i, j)] = &m[(i, j)] - &f * &m[(r, j)];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); cols];
                v[f] = Rat::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(k, f)].clone();
                }
                v
            })
            .collect()
    }

    /// General solution of `self · x = b`: a particular solution and a basis
    /// of the kernel, or `None` if inconsistent.
    pub fn solve_affine(&self, b: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = Matrix::from_fn(rows, cols + 1, |i, j| {
            if j < cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for j in 0..=cols {
                m[(r, j)] = &m[(r, j)] / &piv;
            }
            for i in 0..rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..=cols {
                        m[(i, j)] = &m[(i, j)] - &f * &m[(r, j)];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if (r..rows).any(|i| !m[(i, cols)].is_zero()) {
            return None;
        }
        let mut x = vec![Rat::zero(); cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = m[(k, cols)].clone();
        }
        Some((x, self.kernel()))
    }

    /// Exact Sylvester criterion: every leading principal minor positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.rows).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            self.submatrix(&idx, &idx).det().is_positive()
        })
    }

    /// Semidefiniteness via all principal minors being nonnegative.
    pub fn is_positive_semidefinite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.rows;
        (1u32..(1u32 << n)).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            !self.submatrix(&idx, &idx).det().is_negative()
        })
    }

    pub fn quad(&self, v: &[Rat]) -> Rat {
        self.bilinear(v, v)
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        arith::int_vec_vec::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = arith::int_vec_vec::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        arith::rat_vec_vec::serialize(&self.to_rows(), s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = arith::rat_vec_vec::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn det_and_inverse() {
        let m = IntegerMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), int(18));
        assert_eq!(m.to_rational().det(), rat(18, 1));
        let inv = m.to_rational().inverse().unwrap();
        assert_eq!(inv.mul(&m.to_rational()), RationalMatrix::identity(3));
        let z = IntegerMatrix::from_i64(&[&[0, 1], &[0, 2]]);
        assert_eq!(z.det(), int(0));
    }

    #[test]
    fn sylvester() {
        assert!(RationalMatrix::from_i64(&[&[2, 1], &[1, 2]]).is_positive_definite());
        assert!(!RationalMatrix::from_i64(&[&[1, 2], &[2, 1]]).is_positive_definite());
        assert!(RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]).is_positive_semidefinite());
        assert!(!RationalMatrix::from_i64(&[&[0, 0], &[0, -1]]).is_positive_semidefinite());
    }

    #[test]
    fn kernel_basis() {
        let m = RationalMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn json_shape() {
        let m = RationalMatrix::from_ratios(&[&[(1, 2), (3, 1)]]);
        let s = serde_json_like(&m);
        assert_eq!(s, "[[1/2, 3]]");
    }

    fn serde_json_like(m: &RationalMatrix) -> String {
        format!("{m:?}")
    }
}
