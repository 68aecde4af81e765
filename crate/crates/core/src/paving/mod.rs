//! Periodic pavings of ℝ^r by lattice polytopes.

mod geometry;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, add_i, qvec, sub_i, IVec, Int, QVec, Rat};
use crate::linalg::{IntegerMatrix, LinalgError, Sublattice};

pub use geometry::{CellGeometry, PavingGeometry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PavingError {
    #[error("invalid paving: {0}")]
    InvalidPaving(String),
    #[error("pieces disagree on a wall: {0}")]
    NonMatchingFaces(String),
    #[error("period basis: {0}")]
    Lattice(#[from] LinalgError),
}

impl PavingError {
    pub fn code(&self) -> &'static str {
        match self {
            PavingError::InvalidPaving(_) => "InvalidPaving",
            PavingError::NonMatchingFaces(_) => "NonMatchingFaces",
            PavingError::Lattice(e) => e.code(),
        }
    }
}

/// A lattice polytope, stored by its vertices in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePolytope {
    #[serde(with = "arith::int_vec_vec_num")]
    vertices: Vec<IVec>,
}

impl LatticePolytope {
    pub fn new(mut vertices: Vec<IVec>) -> Self {
        vertices.sort();
        vertices.dedup();
        LatticePolytope { vertices }
    }

    pub fn vertices(&self) -> &[IVec] {
        &self.vertices
    }

    pub fn rank(&self) -> usize {
        self.vertices.first().map_or(0, |v| v.len())
    }

    pub fn translate(&self, t: &[Int]) -> Self {
        LatticePolytope { vertices: self.vertices.iter().map(|v| add_i(v, t)).collect() }
    }

    pub fn rational_vertices(&self) -> Vec<QVec> {
        self.vertices.iter().map(|v| qvec(v)).collect()
    }

    pub fn dim(&self) -> usize {
        crate::polytope::affine_rank_i(&self.vertices)
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim() + 1
    }

    pub fn contains_vertex(&self, v: &[Int]) -> bool {
        self.vertices.binary_search_by(|w| w.as_slice().cmp(v)).is_ok()
    }

    /// Translate so that the lexicographically smallest vertex is the
    /// canonical representative of its class modulo `lattice`. Returns the
    /// canonical polytope and the translation `t` with `self = canon + t`.
    pub fn canonical_mod(&self, lattice: &Sublattice) -> (LatticePolytope, IVec) {
        let (_, t) = lattice.reduce(&self.vertices[0]);
        let neg: IVec = t.iter().map(|x| -x).collect();
        (self.translate(&neg), t)
    }

    pub fn barycenter(&self) -> QVec {
        let n = Rat::from_integer(Int::from(self.vertices.len()));
        let r = self.rank();
        (0..r)
            .map(|i| {
                self.vertices.iter().fold(Rat::zero(), |a, v| a + arith::rat_int(&v[i])) / &n
            })
            .collect()
    }
}

/// Placement of a cell representative: cell index plus a lattice translation.
pub type Placed = (usize, IVec);

/// A codimension-one face shared by two cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub face: LatticePolytope,
    /// Primitive integral normal, first nonzero entry positive.
    #[serde(with = "arith::int_vec_num")]
    pub normal: IVec,
    /// Side where `normal · x` exceeds its value on the wall.
    #[serde(with = "placed_codec")]
    pub plus: Placed,
    #[serde(with = "placed_codec")]
    pub minus: Placed,
}

mod placed_codec {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W {
        cell: usize,
        #[serde(with = "arith::int_vec_num")]
        translation: IVec,
    }

    pub fn serialize<S: Serializer>(p: &Placed, s: S) -> Result<S::Ok, S::Error> {
        W { cell: p.0, translation: p.1.clone() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Placed, D::Error> {
        let w = W::deserialize(d)?;
        Ok((w.cell, w.translation))
    }
}

/// A Λ-periodic paving: one representative per Λ-orbit of maximal cells.
#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicPaving {
    rank: usize,
    period_basis: IntegerMatrix,
    cells: Vec<LatticePolytope>,
    #[serde(default = "default_window")]
    window: u32,
    /// Rational shift of the site set; cells live on `shift + ℤ^r`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_qvec")]
    shift: Option<QVec>,
    #[serde(skip)]
    geometry: OnceLock<Arc<PavingGeometry>>,
}

fn default_window() -> u32 {
    4
}

mod opt_qvec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<QVec>, s: S) -> Result<S::Ok, S::Error> {
        let w: Option<Vec<arith::RatStr>> =
            v.as_ref().map(|x| x.iter().cloned().map(arith::RatStr).collect());
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<QVec>, D::Error> {
        let w: Option<Vec<arith::RatStr>> = Option::deserialize(d)?;
        Ok(w.map(|x| x.into_iter().map(|r| r.0).collect()))
    }
}

impl PartialEq for PeriodicPaving {
    fn eq(&self, o: &Self) -> bool {
        self.rank == o.rank
            && self.period_basis == o.period_basis
            && self.cells == o.cells
            && self.shift == o.shift
    }
}

impl Eq for PeriodicPaving {}

impl std::fmt::Debug for PeriodicPaving {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.debug_struct("PeriodicPaving")
            .field("period_basis", &self.period_basis)
            .field("cells", &self.cells)
            .field("window", &self.window)
            .finish()
    }
}

impl PeriodicPaving {
    /// Builds a paving, canonicalizing every cell representative modulo the
    /// period lattice and sorting them.
    pub fn new(
        period_basis: IntegerMatrix,
        cells: Vec<LatticePolytope>,
        window: u32,
    ) -> Result<Self, PavingError> {
        let rank = period_basis.rows();
        if !period_basis.is_square() {
            return Err(PavingError::InvalidPaving("period basis must be square".into()));
        }
        if cells.iter().any(|c| c.vertices.is_empty() || c.rank() != rank) {
            return Err(PavingError::InvalidPaving("cell rank mismatch".into()));
        }
        let lattice = Sublattice::from_columns(&period_basis)?;
        let mut canon: Vec<LatticePolytope> =
            cells.iter().map(|c| c.canonical_mod(&lattice).0).collect();
        canon.sort();
        let before = canon.len();
        canon.dedup();
        if canon.len() != before {
            return Err(PavingError::InvalidPaving("duplicate cell orbit".into()));
        }
        Ok(PeriodicPaving {
            rank,
            period_basis,
            cells: canon,
            window,
            shift: None,
            geometry: OnceLock::new(),
        })
    }

    pub fn with_shift(mut self, shift: Option<QVec>) -> Self {
        self.shift = shift.filter(|s| s.iter().any(|x| !x.is_zero()));
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn period_basis(&self) -> &IntegerMatrix {
        &self.period_basis
    }

    pub fn cells(&self) -> &[LatticePolytope] {
        &self.cells
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn shift(&self) -> Option<&QVec> {
        self.shift.as_ref()
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.geometry().lattice
    }

    pub fn geometry(&self) -> &PavingGeometry {
        self.geometry.get_or_init(|| {
            Arc::new(PavingGeometry::build(&self.period_basis, &self.cells))
        })
    }

    /// The cell placement `(i, λ)` for a polytope given in absolute
    /// position, if it is a translate of a representative.
    pub fn find_cell(&self, poly: &LatticePolytope) -> Option<Placed> {
        let (c, t) = poly.canonical_mod(self.lattice());
        self.cells.binary_search(&c).ok().map(|i| (i, t))
    }

    pub fn placed(&self, p: &Placed) -> LatticePolytope {
        self.cells[p.0].translate(&p.1)
    }

    /// First placement containing the rational point `p`.
    pub fn locate(&self, p: &[Rat]) -> Option<Placed> {
        self.geometry().locate(p)
    }

    /// All placements having the lattice point `v` as a vertex.
    pub fn cells_at_vertex(&self, v: &[Int]) -> Vec<Placed> {
        self.geometry().cells_at_vertex(&self.cells, v)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cells.iter().all(|c| c.is_simplex())
    }

    /// Checks full-dimensionality, that listed points are vertices, the
    /// volume identity and the face-to-face property.
    pub fn validate(&self) -> Result<(), PavingError> {
        let r = self.rank;
        let mut total = Rat::zero();
        for c in &self.cells {
            let pts = c.rational_vertices();
            if crate::polytope::affine_rank(&pts) != r {
                return Err(PavingError::InvalidPaving(format!(
                    "cell {:?} is not full-dimensional",
                    c.vertices
                )));
            }
            if crate::polytope::extreme_points(&pts).len() != pts.len() {
                return Err(PavingError::InvalidPaving(format!(
                    "cell {:?} lists a non-vertex point",
                    c.vertices
                )));
            }
            total += crate::polytope::normalized_volume(&pts);
        }
        let fact: Int = (1..=r as u64).map(Int::from).product();
        let expected = Rat::from_integer(self.period_basis.det().abs() * fact);
        if total != expected {
            return Err(PavingError::InvalidPaving(format!(
                "normalized volume {} differs from {}",
                arith::fmt_rat(&total),
                arith::fmt_rat(&expected)
            )));
        }
        self.walls().map(|_| ())
    }

    /// Walls modulo the period lattice, each with its two sides.
    pub fn walls(&self) -> Result<Vec<Wall>, PavingError> {
        let lattice = self.lattice();
        let mut seen: BTreeMap<LatticePolytope, usize> = BTreeMap::new();
        let mut out: Vec<Wall> = Vec::new();
        let geom = self.geometry();
        for (i, cell) in self.cells.iter().enumerate() {
            for facet in &geom.cells[i].facets {
                let face = LatticePolytope::new(
                    facet.points.iter().map(|&k| cell.vertices[k].clone()).collect(),
                );
                let key = face.canonical_mod(lattice).0;
                if seen.contains_key(&key) {
                    continue;
                }
                let other = self.neighbor_across(i, &face)?;
                let normal = primitive_normal(&face, self.rank);
                let wall_val = arith::dot_i(&normal, &face.vertices[0]);
                let off = cell
                    .vertices
                    .iter()
                    .map(|v| arith::dot_i(&normal, v) - &wall_val)
                    .find(|x| !x.is_zero())
                    .expect("full-dimensional cell leaves its facet");
                let here: Placed = (i, vec![Int::zero(); self.rank]);
                let (plus, minus) = if off.is_positive() { (here, other) } else { (other, here) };
                seen.insert(key, out.len());
                out.push(Wall { face, normal, plus, minus });
            }
        }
        Ok(out)
    }

    /// The unique placement other than `(i, 0)` containing `face`, meeting
    /// it exactly in `face`.
    fn neighbor_across(&self, i: usize, face: &LatticePolytope) -> Result<Placed, PavingError> {
        let v0 = &face.vertices[0];
        let zero = vec![Int::zero(); self.rank];
        let mut found: Vec<Placed> = Vec::new();
        for p in self.cells_at_vertex(v0) {
            if p.0 == i && p.1 == zero {
                continue;
            }
            let poly = self.placed(&p);
            if face.vertices.iter().all(|v| poly.contains_vertex(v)) {
                found.push(p);
            }
        }
        match found.len() {
            1 => {
                let p = found.pop().unwrap();
                let poly = self.placed(&p);
                let normal = primitive_normal(face, self.rank);
                let val = arith::dot_i(&normal, v0);
                let on: Vec<&IVec> =
                    poly.vertices.iter().filter(|v| arith::dot_i(&normal, v) == val).collect();
                if on.len() != face.vertices.len() {
                    return Err(PavingError::InvalidPaving(format!(
                        "cells meet improperly along {:?}",
                        face.vertices
                    )));
                }
                Ok(p)
            }
            0 => Err(PavingError::InvalidPaving(format!(
                "facet {:?} has no neighbor",
                face.vertices
            ))),
            _ => Err(PavingError::InvalidPaving(format!(
                "facet {:?} has several neighbors",
                face.vertices
            ))),
        }
    }

    /// Lattice points `x` with `|ℓᵢ(x)| ≤ w` for the rows `ℓᵢ` of the inverse
    /// period basis.
    pub fn window_points(&self, w: u32) -> Vec<IVec> {
        window_points(&self.period_basis, w)
    }

    /// Canonical form of a set of cells modulo the period lattice, for
    /// comparisons between pavings with different representatives.
    pub fn cell_keys(&self) -> Vec<LatticePolytope> {
        self.cells.clone()
    }
}

/// Primitive integral normal of a codimension-one face, first nonzero entry
/// positive.
pub fn primitive_normal(face: &LatticePolytope, r: usize) -> IVec {
    let v0 = &face.vertices[0];
    let rows: Vec<QVec> = face.vertices[1..].iter().map(|v| qvec(&sub_i(v, v0))).collect();
    let m = if rows.is_empty() {
        crate::linalg::RationalMatrix::zeros(0, r)
    } else {
        crate::linalg::RationalMatrix::from_rows(rows).expect("rectangular")
    };
    let ker = m.kernel();
    assert_eq!(ker.len(), 1, "face is not of codimension one");
    primitive(&ker[0])
}

/// Scale a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive(v: &[Rat]) -> IVec {
    let den = v.iter().fold(Int::from(1), |l, x| num::Integer::lcm(&l, x.denom()));
    let mut iv: IVec = v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = arith::gcd_all(iv.iter());
    if !g.is_zero() {
        for x in iv.iter_mut() {
            *x = &*x / &g;
        }
    }
    if iv.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in iv.iter_mut() {
            *x = -x.clone();
        }
    }
    iv
}

pub fn window_points(period_basis: &IntegerMatrix, w: u32) -> Vec<IVec> {
    let r = period_basis.rows();
    let inv = period_basis.to_rational().inverse().expect("period basis is nonsingular");
    let bound: Vec<i64> = (0..r)
        .map(|m| {
            let s: Int = (0..r).map(|i| period_basis[(m, i)].abs()).sum();
            num::ToPrimitive::to_i64(&(s * Int::from(w))).expect("window fits in i64")
        })
        .collect();
    let wq = Rat::from_integer(Int::from(w));
    let mut out = Vec::new();
    let mut cur = vec![0i64; r];
    fn rec(
        k: usize,
        bound: &[i64],
        cur: &mut Vec<i64>,
        inv: &crate::linalg::RationalMatrix,
        wq: &Rat,
        out: &mut Vec<IVec>,
    ) {
        if k == bound.len() {
            let x = arith::ivec(cur);
            let xq = qvec(&x);
            if inv.mul_vec(&xq).iter().all(|c| c.abs() <= *wq) {
                out.push(x);
            }
            return;
        }
        for v in -bound[k]..=bound[k] {
            cur[k] = v;
            rec(k + 1, bound, cur, inv, wq, out);
        }
    }
    rec(0, &bound, &mut cur, &inv, &wq, &mut out);
    out
}
