//! Toric monoids `P = σ ∩ ℤ^k` for rational polyhedral cones given by
//! inequalities.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, qvec, IVec, Int, Rat};
use crate::linalg::RationalMatrix;
use crate::paving::primitive;
use crate::polytope::subsets;

use super::PwlError;

/// The monoid of lattice points `x ∈ ℤ^k` with `ℓ(x) ≥ 0` for every listed
/// functional `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricMonoid {
    ambient_rank: usize,
    #[serde(with = "arith::int_vec_vec_num")]
    functionals: Vec<IVec>,
}

impl ToricMonoid {
    pub fn new(ambient_rank: usize, functionals: Vec<IVec>) -> Result<Self, PwlError> {
        if functionals.iter().any(|l| l.len() != ambient_rank) {
            return Err(PwlError::RankMismatch { expected: ambient_rank, found: 0 });
        }
        Ok(ToricMonoid { ambient_rank, functionals })
    }

    /// `ℕ^k`.
    pub fn natural(k: usize) -> Self {
        let functionals = (0..k)
            .map(|i| (0..k).map(|j| Int::from((i == j) as i64)).collect())
            .collect();
        ToricMonoid { ambient_rank: k, functionals }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn functionals(&self) -> &[IVec] {
        &self.functionals
    }

    /// Membership in the real cone.
    pub fn cone_contains(&self, p: &[Rat]) -> bool {
        self.functionals.iter().all(|l| !arith::dot_q(&qvec(l), p).is_negative())
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        p.iter().all(|x| x.is_integer()) && self.cone_contains(p)
    }

    pub fn contains_i(&self, p: &[Int]) -> bool {
        self.functionals.iter().all(|l| !arith::dot_i(l, p).is_negative())
    }

    /// Invertible elements are those with `−p ∈ P` as well.
    pub fn is_unit(&self, p: &[Rat]) -> bool {
        let neg: Vec<Rat> = p.iter().map(|x| -x).collect();
        self.contains(p) && self.contains(&neg)
    }

    /// Membership in `P ∖ P^×`.
    pub fn contains_strict(&self, p: &[Rat]) -> bool {
        self.contains(p) && !self.is_unit(p)
    }

    /// No nonzero units: the functionals span the dual space.
    pub fn is_sharp(&self) -> bool {
        if self.ambient_rank == 0 {
            return true;
        }
        if self.functionals.is_empty() {
            return false;
        }
        let m = RationalMatrix::from_rows(self.functionals.iter().map(|l| qvec(l)).collect())
            .expect("rectangular");
        m.rank() == self.ambient_rank
    }

    /// Primitive generators of the extreme rays of a sharp cone.
    pub fn rays(&self) -> Result<Vec<IVec>, PwlError> {
        if !self.is_sharp() {
            return Err(PwlError::NotSharp);
        }
        let k = self.ambient_rank;
        if k == 1 {
            let out: Vec<IVec> = [1i64, -1]
                .iter()
                .map(|&s| vec![Int::from(s)])
                .filter(|v| self.contains_i(v))
                .collect();
            return Ok(out);
        }
        let mut out: BTreeSet<IVec> = BTreeSet::new();
        for s in subsets(self.functionals.len(), k - 1) {
            let m = RationalMatrix::from_rows(s.iter().map(|&i| qvec(&self.functionals[i])).collect())
                .expect("rectangular");
            let ker = m.kernel();
            if ker.len() != 1 {
                continue;
            }
            let v = primitive(&ker[0]);
            let neg: IVec = v.iter().map(|x| -x).collect();
            for c in [v, neg] {
                if self.contains_i(&c) {
                    out.insert(c);
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Minimal generating set of the monoid. Every Hilbert basis element lies
    /// in the zonotope spanned by the rays, so candidates are the lattice
    /// points of its bounding box.
    pub fn hilbert_basis(&self) -> Result<Vec<IVec>, PwlError> {
        let rays = self.rays()?;
        let k = self.ambient_rank;
        let lo: Vec<i64> = (0..k)
            .map(|i| rays.iter().map(|r| to_i64(&r[i]).min(0)).sum())
            .collect();
        let hi: Vec<i64> = (0..k)
            .map(|i| rays.iter().map(|r| to_i64(&r[i]).max(0)).sum())
            .collect();
        let volume: i64 = lo.iter().zip(&hi).map(|(a, b)| b - a + 1).product();
        if volume > 2_000_000 {
            return Err(PwlError::TooLarge);
        }
        let mut cands: Vec<IVec> = Vec::new();
        let mut cur = lo.clone();
        'outer: loop {
            let v: IVec = cur.iter().map(|&x| Int::from(x)).collect();
            if v.iter().any(|x| !x.is_zero()) && self.contains_i(&v) {
                cands.push(v);
            }
            for i in 0..k {
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    continue 'outer;
                }
                cur[i] = lo[i];
            }
            break;
        }
        let basis = cands
            .iter()
            .filter(|x| {
                !cands
                    .iter()
                    .any(|y| y != *x && self.contains_i(&arith::sub_i(x, y)))
            })
            .cloned()
            .collect();
        Ok(basis)
    }
}

fn to_i64(x: &Int) -> i64 {
    num::ToPrimitive::to_i64(x).expect("ray entries fit in i64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ivec, rat};

    #[test]
    fn natural_numbers() {
        let n = ToricMonoid::natural(1);
        assert!(n.contains(&[rat(3, 1)]));
        assert!(!n.contains(&[rat(-1, 1)]));
        assert!(!n.contains(&[rat(1, 2)]));
        assert!(n.contains_strict(&[rat(1, 1)]));
        assert!(!n.contains_strict(&[rat(0, 1)]));
        assert_eq!(n.hilbert_basis().unwrap(), vec![ivec(&[1])]);
    }

    #[test]
    fn mixed_sign_fails_in_n2() {
        let n2 = ToricMonoid::natural(2);
        assert!(!n2.contains(&[rat(1, 1), rat(-1, 1)]));
        assert_eq!(n2.rays().unwrap(), vec![ivec(&[0, 1]), ivec(&[1, 0])]);
    }

    #[test]
    fn a1_singularity() {
        // cone spanned by (0,1) and (2,1): x ≥ 0, 2y − x ≥ 0
        let p = ToricMonoid::new(2, vec![ivec(&[1, 0]), ivec(&[-1, 2])]).unwrap();
        let hb = p.hilbert_basis().unwrap();
        assert_eq!(hb, vec![ivec(&[0, 1]), ivec(&[1, 1]), ivec(&[2, 1])]);
    }

    #[test]
    fn non_sharp() {
        let p = ToricMonoid::new(2, vec![ivec(&[1, 0])]).unwrap();
        assert!(!p.is_sharp());
        assert_eq!(p.rays(), Err(PwlError::NotSharp));
        assert!(p.is_unit(&[rat(0, 1), rat(5, 1)]));
        assert!(!p.contains_strict(&[rat(0, 1), rat(5, 1)]));
    }

    #[test]
    fn rank_three_cone() {
        // cone over the unit square at height 1
        let p = ToricMonoid::new(
            3,
            vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[-1, 0, 1]), ivec(&[0, -1, 1])],
        )
        .unwrap();
        assert_eq!(p.rays().unwrap().len(), 4);
        assert_eq!(p.hilbert_basis().unwrap().len(), 4);
    }
}
