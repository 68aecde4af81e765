//! The twisted monoid `S(X) ⋊ P` of a convex piecewise-affine function,
//! Fourier indices, the dual complex of the central fiber and quotients by
//! faces of the base monoid.

use std::collections::{BTreeMap, BTreeSet};

use num::{Integer, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, add_i, qvec, IVec, Int, QVec, Rat};
use crate::linalg::{
    smith_normal_form, IntegerMatrix, LinalgError, PolarizationType, RationalMatrix, Sublattice,
};
use crate::paving::{LatticePolytope, PavingError, PeriodicPaving};
use crate::pwl::{affine_regions, AffinePiece, PwAffineFunction, PwlError, ToricMonoid};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("point lies outside the support cone")]
    OutsideSupport,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("data violate B = φᵀφ̌")]
    InconsistentData,
    #[error("paving is not invariant under the given lattice")]
    NotInvariant,
    #[error("functionals do not cut out a face")]
    NotAFace,
    #[error("height is not above the minimal lift")]
    NotInMonoid,
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error(transparent)]
    Paving(#[from] PavingError),
    #[error(transparent)]
    Lattice(#[from] LinalgError),
}

impl MonoidError {
    pub fn code(&self) -> &'static str {
        match self {
            MonoidError::OutsideSupport => "OutsideSupport",
            MonoidError::RankMismatch { .. } => "RankMismatch",
            MonoidError::InconsistentData => "InconsistentData",
            MonoidError::NotInvariant => "NotInvariant",
            MonoidError::NotAFace => "NotAFace",
            MonoidError::NotInMonoid => "NotInMonoid",
            MonoidError::Pwl(e) => e.code(),
            MonoidError::Paving(e) => e.code(),
            MonoidError::Lattice(e) => e.code(),
        }
    }
}

/// `(degree, point)` in the cone over the paving.
pub type DegreePoint = (Int, IVec);

/// `φ̃(d, x) = d·φ(x/d)`, extended by `φ̃(0, 0) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenizedFunction {
    base: PwAffineFunction,
}

impl HomogenizedFunction {
    pub fn new(base: PwAffineFunction) -> Self {
        HomogenizedFunction { base }
    }

    pub fn base(&self) -> &PwAffineFunction {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn payload_rank(&self) -> usize {
        self.base.payload_rank()
    }

    pub fn eval(&self, d: &Int, x: &[Int]) -> Result<QVec, MonoidError> {
        if x.len() != self.rank() {
            return Err(MonoidError::RankMismatch { expected: self.rank(), found: x.len() });
        }
        if d.is_negative() {
            return Err(MonoidError::OutsideSupport);
        }
        if d.is_zero() {
            if x.iter().all(|c| c.is_zero()) {
                return Ok(vec![Rat::zero(); self.payload_rank()]);
            }
            return Err(MonoidError::OutsideSupport);
        }
        let dq = Rat::from_integer(d.clone());
        let y: QVec = x.iter().map(|c| Rat::from_integer(c.clone()) / &dq).collect();
        Ok(self.base.eval(&y).into_iter().map(|v| v * &dq).collect())
    }
}

/// `α * β = φ̃(α) + φ̃(β) − φ̃(α + β)`.
pub fn star_cocycle(
    a: &DegreePoint,
    b: &DegreePoint,
    phi: &HomogenizedFunction,
) -> Result<QVec, MonoidError> {
    let fa = phi.eval(&a.0, &a.1)?;
    let fb = phi.eval(&b.0, &b.1)?;
    let fab = phi.eval(&(&a.0 + &b.0), &add_i(&a.1, &b.1))?;
    Ok(fa.iter().zip(&fb).zip(&fab).map(|((x, y), z)| x + y - z).collect())
}

/// An element `(d, x, p)` of `S(X) ⋊ P`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedMonoidElement {
    #[serde(with = "arith::int_str")]
    pub degree: Int,
    #[serde(with = "arith::int_vec_num")]
    pub point: IVec,
    #[serde(with = "arith::rat_vec")]
    pub payload: QVec,
}

impl TwistedMonoidElement {
    pub fn identity(rank: usize, payload_rank: usize) -> Self {
        TwistedMonoidElement {
            degree: Int::zero(),
            point: vec![Int::zero(); rank],
            payload: vec![Rat::zero(); payload_rank],
        }
    }

    pub fn degree_point(&self) -> DegreePoint {
        (self.degree.clone(), self.point.clone())
    }
}

pub fn twisted_add(
    x: &TwistedMonoidElement,
    y: &TwistedMonoidElement,
    phi: &HomogenizedFunction,
) -> Result<TwistedMonoidElement, MonoidError> {
    let k = phi.payload_rank();
    for e in [x, y] {
        if e.payload.len() != k {
            return Err(MonoidError::RankMismatch { expected: k, found: e.payload.len() });
        }
    }
    let c = star_cocycle(&x.degree_point(), &y.degree_point(), phi)?;
    Ok(TwistedMonoidElement {
        degree: &x.degree + &y.degree,
        point: add_i(&x.point, &y.point),
        payload: (0..k).map(|s| &x.payload[s] + &y.payload[s] + &c[s]).collect(),
    })
}

/// The basis element over `q`: payload zero, height `φ̃(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalLift {
    pub element: TwistedMonoidElement,
    #[serde(with = "arith::rat_vec")]
    pub height: QVec,
}

pub fn minimal_lift(q: &DegreePoint, phi: &HomogenizedFunction) -> Result<MinimalLift, MonoidError> {
    let height = phi.eval(&q.0, &q.1)?;
    Ok(MinimalLift {
        element: TwistedMonoidElement {
            degree: q.0.clone(),
            point: q.1.clone(),
            payload: vec![Rat::zero(); phi.payload_rank()],
        },
        height,
    })
}

/// Splits an element `(d, x, h)` of `S(Q_φ)` as the minimal lift over
/// `(d, x)` plus a payload in `P`.
pub fn free_basis_decomposition(
    q: &DegreePoint,
    height: &[Rat],
    phi: &HomogenizedFunction,
    p: &ToricMonoid,
) -> Result<(MinimalLift, QVec), MonoidError> {
    let lift = minimal_lift(q, phi)?;
    if height.len() != lift.height.len() {
        return Err(MonoidError::RankMismatch { expected: lift.height.len(), found: height.len() });
    }
    let rest = arith::sub_q(height, &lift.height);
    if !p.contains(&rest) {
        return Err(MonoidError::NotInMonoid);
    }
    Ok((lift, rest))
}

/// Representatives of `X / φ(Y)` and the type of the quotient.
pub fn fourier_indices(
    x_rank: usize,
    phi_map: &IntegerMatrix,
) -> Result<(Vec<IVec>, PolarizationType), MonoidError> {
    if phi_map.rows() != x_rank || phi_map.cols() != x_rank {
        return Err(MonoidError::RankMismatch { expected: x_rank, found: phi_map.rows() });
    }
    let lattice = Sublattice::from_columns(phi_map)?;
    let (d, _, _) = smith_normal_form(phi_map);
    let diag: Vec<u64> = d
        .iter()
        .map(|x| num::ToPrimitive::to_u64(&x.abs()).expect("invariant factor fits in u64"))
        .collect();
    Ok((lattice.coset_reps(), PolarizationType::new(diag)?))
}

/// Data of a quadratic function `A(λ) = ½B(λ,λ) + ½L(λ)` on `Y` with maps
/// `φ: Y → X` and `φ̌: Y → X^∨` satisfying `B = φᵀφ̌`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialActionData {
    pub bilinear: RationalMatrix,
    #[serde(with = "arith::rat_vec")]
    pub linear: QVec,
    pub phi: IntegerMatrix,
    pub phi_check: IntegerMatrix,
}

impl MonomialActionData {
    pub fn validate(&self) -> Result<(), MonoidError> {
        let g = self.bilinear.rows();
        if self.linear.len() != g || self.phi.cols() != g || self.phi_check.cols() != g {
            return Err(MonoidError::RankMismatch { expected: g, found: self.phi.cols() });
        }
        if self.phi.rows() != self.phi_check.rows() {
            return Err(MonoidError::RankMismatch {
                expected: self.phi.rows(),
                found: self.phi_check.rows(),
            });
        }
        let pairing = self.phi.transpose().mul(&self.phi_check).to_rational();
        if pairing != self.bilinear {
            return Err(MonoidError::InconsistentData);
        }
        Ok(())
    }

    pub fn quadratic(&self, lambda: &[Int]) -> Rat {
        let l = qvec(lambda);
        (self.bilinear.quad(&l) + arith::dot_q(&self.linear, &l)) / Rat::from_integer(Int::from(2))
    }
}

/// Result of `λ` acting on the monomial indexed by `μ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialAction {
    #[serde(with = "arith::int_vec_num")]
    pub new_mu: IVec,
    #[serde(with = "arith::rat_str")]
    pub q_exponent: Rat,
    #[serde(with = "arith::int_str")]
    pub char_exponent: Int,
}

/// `ζ_μ ↦ X^μ(λ) q^{A(λ)} ζ_{μ+φ̌(λ)}`: the character factor is recorded by
/// its exponent `⟨φ(λ), μ⟩`.
pub fn y_action_on_monomial(
    lambda: &[Int],
    mu: &[Int],
    data: &MonomialActionData,
) -> Result<MonomialAction, MonoidError> {
    data.validate()?;
    let g = data.bilinear.rows();
    if lambda.len() != g {
        return Err(MonoidError::RankMismatch { expected: g, found: lambda.len() });
    }
    if mu.len() != data.phi_check.rows() {
        return Err(MonoidError::RankMismatch { expected: data.phi_check.rows(), found: mu.len() });
    }
    Ok(MonomialAction {
        new_mu: add_i(mu, &data.phi_check.mul_vec(lambda)),
        q_exponent: data.quadratic(lambda),
        char_exponent: arith::dot_i(&data.phi.mul_vec(lambda), mu),
    })
}

/// One codimension-one incidence between components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub a: usize,
    pub b: usize,
    pub face: LatticePolytope,
}

/// Components (cell orbits under `φ(Y)`) and their incidences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralFiberComplex {
    pub components: Vec<LatticePolytope>,
    pub incidences: Vec<Incidence>,
}

impl CentralFiberComplex {
    /// Neighbors of every component, one entry per incidence end.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.components.len()];
        for inc in &self.incidences {
            adj[inc.a].push(inc.b);
            adj[inc.b].push(inc.a);
        }
        for a in adj.iter_mut() {
            a.sort();
        }
        adj
    }

    /// Whether the dual graph is a single cycle through every component.
    pub fn is_cycle(&self) -> bool {
        let n = self.components.len();
        let adj = self.adjacency();
        if n == 0 || adj.iter().any(|a| a.len() != 2) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(adj[i].iter().copied());
        }
        seen.iter().all(|&s| s) && self.incidences.len() == n
    }
}

pub fn central_fiber_complex(
    paving: &PeriodicPaving,
    phi_image_basis: &IntegerMatrix,
) -> Result<CentralFiberComplex, MonoidError> {
    let r = paving.rank();
    if phi_image_basis.rows() != r || phi_image_basis.cols() != r {
        return Err(MonoidError::RankMismatch { expected: r, found: phi_image_basis.cols() });
    }
    let image = Sublattice::from_columns(phi_image_basis)?;
    for j in 0..r {
        let g = phi_image_basis.col(j);
        for c in paving.cells() {
            if paving.find_cell(&c.translate(&g)).is_none() {
                return Err(MonoidError::NotInvariant);
            }
        }
    }
    // translations of the period lattice modulo a common sublattice N·ℤ^r
    let n = paving.lattice().exponent().lcm(&image.exponent());
    let common = Sublattice::from_columns(&IntegerMatrix::diag(&vec![n; r]))?;
    let shifts: Vec<IVec> =
        common.coset_reps().into_iter().filter(|t| paving.lattice().contains(t)).collect();
    let key = |c: &LatticePolytope| c.canonical_mod(&image).0;
    let mut comps: BTreeSet<LatticePolytope> = BTreeSet::new();
    for c in paving.cells() {
        for t in &shifts {
            comps.insert(key(&c.translate(t)));
        }
    }
    let components: Vec<LatticePolytope> = comps.into_iter().collect();
    let index: BTreeMap<&LatticePolytope, usize> =
        components.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut faces: BTreeMap<LatticePolytope, (usize, usize)> = BTreeMap::new();
    for w in paving.walls()? {
        for t in &shifts {
            let face = key(&w.face.translate(t));
            if faces.contains_key(&face) {
                continue;
            }
            let side = |p: &(usize, IVec)| {
                let cell = paving.placed(&(p.0, add_i(&p.1, t)));
                index[&key(&cell)]
            };
            faces.insert(face, (side(&w.plus), side(&w.minus)));
        }
    }
    let incidences = faces.into_iter().map(|(face, (a, b))| Incidence { a, b, face }).collect();
    Ok(CentralFiberComplex { components, incidences })
}

/// Quotient data attached to a face `F` of `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceQuotientData {
    pub quotient: ToricMonoid,
    /// `π: ℤ^k → ℤ^{k'}` with kernel the saturated span of `F`.
    pub projection: IntegerMatrix,
    /// `π∘φ`; absent when the quotient is trivial.
    pub function: Option<PwAffineFunction>,
    /// Affine regions of `π∘φ`; absent when they are unbounded.
    pub paving: Option<PeriodicPaving>,
    pub admissible: bool,
}

pub fn face_quotient(
    p: &ToricMonoid,
    face_functionals: &[IVec],
    phi: &PwAffineFunction,
) -> Result<FaceQuotientData, MonoidError> {
    let k = p.ambient_rank();
    if phi.payload_rank() != k {
        return Err(MonoidError::RankMismatch { expected: k, found: phi.payload_rank() });
    }
    if face_functionals.iter().any(|l| l.len() != k) {
        return Err(MonoidError::NotAFace);
    }
    let rays = p.rays()?;
    if face_functionals.iter().any(|l| rays.iter().any(|r| arith::dot_i(l, r).is_negative())) {
        return Err(MonoidError::NotAFace);
    }
    let on_face = |v: &IVec| face_functionals.iter().all(|l| arith::dot_i(l, v).is_zero());
    let face_rays: Vec<IVec> = rays.iter().filter(|r| on_face(r)).cloned().collect();
    let (projection, section) = quotient_maps(&face_rays, k);
    let k2 = projection.rows();
    let functionals: Vec<IVec> = p
        .functionals()
        .iter()
        .filter(|l| face_rays.iter().all(|r| arith::dot_i(l, r).is_zero()))
        .map(|l| section.vec_mul(l))
        .collect();
    let quotient = ToricMonoid::new(k2, functionals)?;
    if k2 == 0 {
        return Ok(FaceQuotientData {
            quotient,
            projection,
            function: None,
            paving: None,
            admissible: false,
        });
    }
    let pr = projection.to_rational();
    let push = |a: &AffinePiece| AffinePiece {
        linear: pr.mul(&a.linear),
        constant: pr.mul_vec(&a.constant),
    };
    let pushed = PwAffineFunction::new(
        phi.paving().clone(),
        k2,
        phi.pieces().iter().map(push).collect(),
        phi.increments().iter().map(push).collect(),
    )?;
    let paving = match affine_regions(&pushed) {
        Ok(p) => Some(p),
        Err(PwlError::UnboundedRegion) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(FaceQuotientData {
        quotient,
        projection,
        admissible: paving.is_some(),
        function: Some(pushed),
        paving,
    })
}

/// `(π, s)`: `π` has kernel the saturated span of `rays`, `s` is a section
/// with `π·s = 1`.
fn quotient_maps(rays: &[IVec], k: usize) -> (IntegerMatrix, IntegerMatrix) {
    if rays.is_empty() {
        return (IntegerMatrix::identity(k), IntegerMatrix::identity(k));
    }
    let m = IntegerMatrix::from_rows(rays.to_vec()).expect("rectangular");
    let (d, _, v) = smith_normal_form(&m);
    let rank = d.iter().filter(|x| !x.is_zero()).count();
    let keep: Vec<usize> = (rank..k).collect();
    let proj = IntegerMatrix::from_fn(keep.len(), k, |i, j| v[(j, keep[i])].clone());
    let vt_inv = v.transpose().inverse_unimodular().expect("unimodular");
    let section = IntegerMatrix::from_fn(k, keep.len(), |i, j| vt_inv[(i, keep[j])].clone());
    (proj, section)
}

/// Enumerates `S(X)` points of degree `1..=max_degree` with coordinates
/// bounded by `bound`, together with `(0, 0)`.
pub fn degree_points(rank: usize, max_degree: u32, bound: i64) -> Vec<DegreePoint> {
    let mut out = vec![(Int::zero(), vec![Int::zero(); rank])];
    for d in 1..=max_degree {
        let mut cur = vec![-bound; rank];
        'outer: loop {
            out.push((Int::from(d), cur.iter().map(|&x| Int::from(x)).collect()));
            for c in cur.iter_mut() {
                if *c < bound {
                    *c += 1;
                    continue 'outer;
                }
                *c = -bound;
            }
            break;
        }
    }
    out
}
