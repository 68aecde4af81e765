//! Full-rank sublattices of ℤ^r in row Hermite form.

use num::{Integer, One, Signed, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::normal_form::hermite_normal_form;
use super::LinalgError;
use crate::arith::{floor_q, rat_int, IVec, Int, QVec};

/// A full-rank sublattice `L ⊆ ℤ^r`, stored by the row HNF of a basis.
/// Coset representatives of `ℤ^r / L` are the points of the box
/// `0 ≤ xᵢ < hᵢᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    hnf: IntegerMatrix,
}

impl Sublattice {
    /// Columns of `basis` generate the lattice.
    pub fn from_columns(basis: &IntegerMatrix) -> Result<Self, LinalgError> {
        let r = basis.rows();
        let (h, _) = hermite_normal_form(&basis.transpose());
        if h.rows() < r || (0..r).any(|i| h[(i, i)].is_zero()) {
            return Err(LinalgError::NotInjective);
        }
        let hnf = IntegerMatrix::from_fn(r, r, |i, j| h[(i, j)].clone());
        Ok(Sublattice { hnf })
    }

    pub fn full(r: usize) -> Self {
        Sublattice { hnf: IntegerMatrix::identity(r) }
    }

    pub fn rank(&self) -> usize {
        self.hnf.rows()
    }

    /// Rows form a basis.
    pub fn hnf(&self) -> &IntegerMatrix {
        &self.hnf
    }

    /// Basis as columns.
    pub fn basis_columns(&self) -> IntegerMatrix {
        self.hnf.transpose()
    }

    pub fn index(&self) -> Int {
        (0..self.rank()).map(|i| self.hnf[(i, i)].clone()).product()
    }

    /// Splits `x = rep + t` with `rep` in the box and `t ∈ L`.
    pub fn reduce(&self, x: &[Int]) -> (IVec, IVec) {
        let mut rep = x.to_vec();
        let mut t = vec![Int::zero(); x.len()];
        for i in 0..self.rank() {
            let q = rep[i].div_floor(&self.hnf[(i, i)]);
            if q.is_zero() {
                continue;
            }
            for j in i..self.rank() {
                let s = &q * &self.hnf[(i, j)];
                rep[j] -= &s;
                t[j] += &s;
            }
        }
        (rep, t)
    }

    /// Rational analogue of [`reduce`](Self::reduce): the representative
    /// lies in the half-open parallelepiped spanned by the HNF rows.
    pub fn reduce_q(&self, x: &[crate::arith::Rat]) -> (QVec, IVec) {
        let mut rep = x.to_vec();
        let mut t = vec![Int::zero(); x.len()];
        for i in 0..self.rank() {
            let q = floor_q(&(&rep[i] / rat_int(&self.hnf[(i, i)])));
            if q.is_zero() {
                continue;
            }
            for j in i..self.rank() {
                let s = &q * &self.hnf[(i, j)];
                rep[j] -= rat_int(&s);
                t[j] += &s;
            }
        }
        (rep, t)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.reduce(x).0.iter().all(|v| v.is_zero())
    }

    /// Lattice coordinates of a member with respect to the HNF rows.
    pub fn coordinates(&self, x: &[Int]) -> Option<IVec> {
        let r = self.rank();
        let mut rest = x.to_vec();
        let mut c = vec![Int::zero(); r];
        for i in 0..r {
            let (q, m) = rest[i].div_mod_floor(&self.hnf[(i, i)]);
            if !m.is_zero() {
                return None;
            }
            for j in i..r {
                rest[j] -= &q * &self.hnf[(i, j)];
            }
            c[i] = q;
        }
        Some(c)
    }

    /// All coset representatives in the HNF box, lexicographic order.
    pub fn coset_reps(&self) -> Vec<IVec> {
        let r = self.rank();
        let bounds: Vec<i64> =
            (0..r).map(|i| self.hnf[(i, i)].to_i64().expect("index fits in i64")).collect();
        let mut out = vec![Vec::new()];
        for &b in &bounds {
            let mut next = Vec::with_capacity(out.len() * b as usize);
            for p in &out {
                for v in 0..b {
                    let mut q: IVec = p.clone();
                    q.push(Int::from(v));
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    /// `self ⊆ other`.
    pub fn is_sublattice_of(&self, other: &Sublattice) -> bool {
        (0..self.rank()).all(|i| other.contains(self.hnf.row(i)))
    }

    pub fn is_full(&self) -> bool {
        self.index().is_one()
    }

    /// Smallest multiple `N` with `N·ℤ^r ⊆ L`.
    pub fn exponent(&self) -> Int {
        let r = self.rank();
        let mut n = Int::one();
        loop {
            let ok = (0..r).all(|i| {
                let mut e = vec![Int::zero(); r];
                e[i] = n.clone();
                self.contains(&e)
            });
            if ok {
                return n;
            }
            n += 1;
            debug_assert!(n <= self.index().abs());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ivec};

    #[test]
    fn box_reduction() {
        let l = Sublattice::from_columns(&IntegerMatrix::from_i64(&[&[2, 1], &[0, 3]])).unwrap();
        assert_eq!(l.index(), int(6));
        let reps = l.coset_reps();
        assert_eq!(reps.len(), 6);
        for x in [ivec(&[5, -7]), ivec(&[-1, 0]), ivec(&[3, 3])] {
            let (rep, t) = l.reduce(&x);
            assert!(l.contains(&t));
            assert!(reps.contains(&rep));
            assert_eq!(crate::arith::add_i(&rep, &t), x);
        }
        assert!(l.contains(&ivec(&[1, 3])));
        assert!(!l.contains(&ivec(&[1, 0])));
        assert_eq!(l.coordinates(&ivec(&[2, 0])).map(|c| c.len()), Some(2));
        assert_eq!(l.exponent(), int(6));
    }

    #[test]
    fn rejects_degenerate() {
        let m = IntegerMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(Sublattice::from_columns(&m), Err(LinalgError::NotInjective));
    }
}
