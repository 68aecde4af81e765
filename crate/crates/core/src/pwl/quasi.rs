//! Splitting a quasiperiodic function on ℤ^r into a quadratic and a periodic
//! part.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, add_i, qvec, IVec, Int, QVec, Rat};
use crate::linalg::{IntegerMatrix, RationalMatrix, Sublattice};

use super::PwlError;

/// `ψ = A + periodic` with `A(x) = ½B(x,x) + ½L(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiperiodicDecomposition {
    pub bilinear: RationalMatrix,
    #[serde(with = "arith::rat_vec")]
    pub quadratic_linear: QVec,
    pub period_basis: IntegerMatrix,
    #[serde(with = "periodic_codec")]
    pub periodic: BTreeMap<IVec, Rat>,
}

mod periodic_codec {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Entry {
        #[serde(with = "arith::int_vec_num")]
        point: IVec,
        #[serde(with = "arith::rat_str")]
        value: Rat,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<IVec, Rat>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> =
            m.iter().map(|(p, x)| Entry { point: p.clone(), value: x.clone() }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<IVec, Rat>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter().map(|e| (e.point, e.value)).collect())
    }
}

impl QuasiperiodicDecomposition {
    /// `A(x) = ½B(x,x) + ½L(x)`.
    pub fn quadratic(&self, x: &[Rat]) -> Rat {
        let half = Rat::new(Int::one(), Int::from(2));
        (self.bilinear.quad(x) + arith::dot_q(&self.quadratic_linear, x)) * half
    }

    /// The associated quadratic form `½B`.
    pub fn associated_form(&self) -> RationalMatrix {
        self.bilinear.scale(&Rat::new(Int::one(), Int::from(2)))
    }

    pub fn periodic_at(&self, x: &[Int]) -> Rat {
        let lattice = Sublattice::from_columns(&self.period_basis).expect("validated");
        let (rep, _) = lattice.reduce(x);
        self.periodic[&rep].clone()
    }

    /// The reconstructed value `A(x) + periodic(x)`.
    pub fn eval(&self, x: &[Int]) -> Rat {
        self.quadratic(&qvec(x)) + self.periodic_at(x)
    }

    /// `A_λ(x) = ψ(x+λ) − ψ(x) = B(λ,x) + A(λ)`.
    pub fn increment(&self, lambda: &[Int], x: &[Rat]) -> Rat {
        let l = qvec(lambda);
        self.bilinear.bilinear(&l, x) + self.quadratic(&l)
    }
}

/// Fits `Δ(x) = ℓ·x + c` exactly through the given samples.
pub(crate) fn fit_affine_scalar(
    points: &[(IVec, Rat)],
    r: usize,
) -> Result<(QVec, Rat), PwlError> {
    if points.is_empty() {
        return Err(PwlError::InsufficientSamples);
    }
    let rows: Vec<QVec> = points
        .iter()
        .map(|(x, _)| {
            let mut row = qvec(x);
            row.push(Rat::one());
            row
        })
        .collect();
    let a = RationalMatrix::from_rows(rows).expect("rectangular");
    let b: Vec<Rat> = points.iter().map(|(_, v)| v.clone()).collect();
    let (sol, ker) = a.solve_affine(&b).ok_or(PwlError::NotQuasiperiodic)?;
    if !ker.is_empty() {
        return Err(PwlError::InsufficientSamples);
    }
    Ok((sol[..r].to_vec(), sol[r].clone()))
}

/// Recovers `B`, `L` and the periodic part from samples of a scalar
/// function quasiperiodic with respect to the columns of `period_basis`.
pub fn quasiperiodic_decompose(
    samples: &BTreeMap<IVec, Rat>,
    period_basis: &IntegerMatrix,
) -> Result<QuasiperiodicDecomposition, PwlError> {
    let r = period_basis.rows();
    if !period_basis.is_square() {
        return Err(PwlError::RankMismatch { expected: r, found: period_basis.cols() });
    }
    if let Some(x) = samples.keys().find(|x| x.len() != r) {
        return Err(PwlError::RankMismatch { expected: r, found: x.len() });
    }
    let lattice = Sublattice::from_columns(period_basis)?;
    let gens = lattice_generators(period_basis);
    let mut slopes: Vec<QVec> = Vec::with_capacity(r);
    let mut consts: Vec<Rat> = Vec::with_capacity(r);
    for g in &gens {
        let diffs: Vec<(IVec, Rat)> = samples
            .iter()
            .filter_map(|(x, v)| samples.get(&add_i(x, g)).map(|w| (x.clone(), w - v)))
            .collect();
        let (l, c) = fit_affine_scalar(&diffs, r)?;
        slopes.push(l);
        consts.push(c);
    }
    // rows of Pᵀ B are the slopes ℓⱼ = gⱼᵀB
    let pt_inv = period_basis.to_rational().transpose().inverse().expect("nonsingular");
    let m = RationalMatrix::from_rows(slopes).expect("rectangular");
    let bilinear = pt_inv.mul(&m);
    if !bilinear.is_symmetric() {
        return Err(PwlError::NotQuasiperiodic);
    }
    // L·gⱼ = 2cⱼ − B(gⱼ,gⱼ)
    let two = Rat::from_integer(Int::from(2));
    let rhs: Vec<Rat> = gens
        .iter()
        .zip(&consts)
        .map(|(g, c)| c * &two - bilinear.quad(&qvec(g)))
        .collect();
    let quadratic_linear = pt_inv.mul_vec(&rhs);
    let mut dec = QuasiperiodicDecomposition {
        bilinear,
        quadratic_linear,
        period_basis: period_basis.clone(),
        periodic: BTreeMap::new(),
    };
    for rep in lattice.coset_reps() {
        let v = samples.get(&rep).ok_or(PwlError::InsufficientSamples)?;
        let p = v - dec.quadratic(&qvec(&rep));
        dec.periodic.insert(rep, p);
    }
    for (x, v) in samples {
        if dec.eval(x) != *v {
            return Err(PwlError::NotQuasiperiodic);
        }
    }
    Ok(dec)
}

/// Componentwise decomposition of a vector-valued function.
pub fn quasiperiodic_decompose_vector(
    samples: &BTreeMap<IVec, QVec>,
    period_basis: &IntegerMatrix,
) -> Result<Vec<QuasiperiodicDecomposition>, PwlError> {
    let k = samples.values().next().map_or(0, |v| v.len());
    if let Some(v) = samples.values().find(|v| v.len() != k) {
        return Err(PwlError::RankMismatch { expected: k, found: v.len() });
    }
    (0..k)
        .map(|s| {
            let comp: BTreeMap<IVec, Rat> =
                samples.iter().map(|(x, v)| (x.clone(), v[s].clone())).collect();
            quasiperiodic_decompose(&comp, period_basis)
        })
        .collect()
}

pub(crate) fn lattice_generators(period_basis: &IntegerMatrix) -> Vec<IVec> {
    (0..period_basis.cols()).map(|j| period_basis.col(j)).collect()
}

/// Lattice points `x` of the coset box extended by one period shell, enough
/// to run [`quasiperiodic_decompose`].
pub fn sample_domain(period_basis: &IntegerMatrix) -> Vec<IVec> {
    let lattice = Sublattice::from_columns(period_basis).expect("nonsingular");
    let r = period_basis.rows();
    let gens = lattice_generators(period_basis);
    let mut out: std::collections::BTreeSet<IVec> = std::collections::BTreeSet::new();
    // reps, reps + gⱼ, and enough unit translates to span affinely
    let mut base = lattice.coset_reps();
    for i in 0..r {
        let mut e = vec![Int::zero(); r];
        e[i] = Int::one();
        base.push(e);
    }
    base.push(vec![Int::zero(); r]);
    for b in &base {
        out.insert(b.clone());
        for g in &gens {
            out.insert(add_i(b, g));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ivec, rat};

    fn samples(f: impl Fn(i64) -> Rat, lo: i64, hi: i64) -> BTreeMap<IVec, Rat> {
        (lo..=hi).map(|x| (ivec(&[x]), f(x))).collect()
    }

    #[test]
    fn half_square() {
        let s = samples(|x| rat(x * x, 2), -3, 3);
        let d = quasiperiodic_decompose(&s, &IntegerMatrix::identity(1)).unwrap();
        assert_eq!(d.bilinear, RationalMatrix::from_i64(&[&[1]]));
        assert!(d.periodic.values().all(|v| v.is_zero()));
        assert!(d.quadratic_linear.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn square_plus_parity() {
        let s = samples(|x| rat(x * x + x.rem_euclid(2), 1), -4, 5);
        let d = quasiperiodic_decompose(&s, &IntegerMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(d.associated_form(), RationalMatrix::from_i64(&[&[1]]));
        assert_eq!(d.periodic[&ivec(&[0])], rat(0, 1));
        assert_eq!(d.periodic[&ivec(&[1])], rat(1, 1));
        for x in -4..=5 {
            assert_eq!(d.eval(&[int(x)]), s[&ivec(&[x])]);
        }
    }

    #[test]
    fn cubic_rejected() {
        let s = samples(|x| rat(x * x * x, 1), -4, 4);
        assert_eq!(
            quasiperiodic_decompose(&s, &IntegerMatrix::identity(1)),
            Err(PwlError::NotQuasiperiodic)
        );
    }

    #[test]
    fn too_few_samples() {
        let s = samples(|x| rat(x, 1), 0, 1);
        assert_eq!(
            quasiperiodic_decompose(&s, &IntegerMatrix::identity(1)),
            Err(PwlError::InsufficientSamples)
        );
    }

    #[test]
    fn rank_two_with_linear_term() {
        // ψ(x,y) = x² + xy + 3y² + x/2 − y + periodic
        let p = IntegerMatrix::from_i64(&[&[2, 1], &[0, 1]]);
        let per = |x: i64, y: i64| rat((x - y).rem_euclid(2) * 5, 3);
        let mut s = BTreeMap::new();
        for x in -4..=4 {
            for y in -4..=4 {
                let v = rat(x * x + x * y + 3 * y * y, 1) + rat(x, 2) - rat(y, 1) + per(x, y);
                s.insert(ivec(&[x, y]), v);
            }
        }
        let d = quasiperiodic_decompose(&s, &p).unwrap();
        assert_eq!(d.bilinear, RationalMatrix::from_i64(&[&[2, 1], &[1, 6]]));
        assert_eq!(d.quadratic_linear, vec![rat(1, 1), rat(-2, 1)]);
        for (x, v) in &s {
            assert_eq!(&d.eval(x), v);
        }
    }
}
