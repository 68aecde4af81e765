use std::collections::BTreeMap;

use num::ToPrimitive;

use super::{LatticePolytope, Placed};
use crate::arith::{qvec, sub_i, sub_q, IVec, Int, Rat};
use crate::linalg::{IntegerMatrix, Sublattice};
use crate::polytope::{self, Facet, HPolytope};

/// Cached per-cell data.
#[derive(Debug, Clone)]
pub struct CellGeometry {
    pub facets: Vec<Facet>,
    pub hull: Option<HPolytope>,
    pub lo: IVec,
    pub hi: IVec,
}

/// Lookup structures derived from a paving.
#[derive(Debug, Clone)]
pub struct PavingGeometry {
    pub lattice: Sublattice,
    pub cells: Vec<CellGeometry>,
    /// Placements whose bounding box meets the closed fundamental box.
    near: Vec<Placed>,
    /// Box representative of a vertex → (cell, vertex index).
    vertex_classes: BTreeMap<IVec, Vec<(usize, usize)>>,
}

impl PavingGeometry {
    pub fn build(period_basis: &IntegerMatrix, cells: &[LatticePolytope]) -> Self {
        let lattice = Sublattice::from_columns(period_basis).expect("validated period basis");
        let r = period_basis.rows();
        let mut geo = Vec::with_capacity(cells.len());
        let mut vertex_classes: BTreeMap<IVec, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, c) in cells.iter().enumerate() {
            let pts = c.rational_vertices();
            let (_, facets) = polytope::facets(&pts);
            let hull = HPolytope::new(&pts);
            let lo: IVec = (0..r).map(|k| c.vertices().iter().map(|v| v[k].clone()).min().unwrap()).collect();
            let hi: IVec = (0..r).map(|k| c.vertices().iter().map(|v| v[k].clone()).max().unwrap()).collect();
            geo.push(CellGeometry { facets, hull, lo, hi });
            for (k, v) in c.vertices().iter().enumerate() {
                let (rep, _) = lattice.reduce(v);
                vertex_classes.entry(rep).or_default().push((i, k));
            }
        }
        let h = lattice.hnf().clone();
        let mut near = Vec::new();
        for (i, g) in geo.iter().enumerate() {
            for lam in translates_meeting_box(&h, &g.lo, &g.hi) {
                near.push((i, lam));
            }
        }
        PavingGeometry { lattice, cells: geo, near, vertex_classes }
    }

    pub fn locate(&self, p: &[Rat]) -> Option<Placed> {
        let (p0, t) = self.lattice.reduce_q(p);
        for (i, lam) in &self.near {
            let Some(h) = &self.cells[*i].hull else { continue };
            let y = sub_q(&p0, &qvec(lam));
            if h.contains(&y) {
                return Some((*i, crate::arith::add_i(lam, &t)));
            }
        }
        None
    }

    pub fn cells_at_vertex(&self, cells: &[LatticePolytope], v: &[Int]) -> Vec<Placed> {
        let (rep, t) = self.lattice.reduce(v);
        let Some(list) = self.vertex_classes.get(&rep) else { return Vec::new() };
        let mut out: Vec<Placed> = list
            .iter()
            .map(|&(i, k)| {
                let w = &cells[i].vertices()[k];
                (i, crate::arith::add_i(&sub_i(&rep, w), &t))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Lattice vectors `λ = Σ kⱼ hⱼ` (rows of the upper-triangular HNF `h`) such
/// that `[lo, hi] + λ` meets the closed box `Π [0, hᵢᵢ]`.
fn translates_meeting_box(h: &IntegerMatrix, lo: &[Int], hi: &[Int]) -> Vec<IVec> {
    let r = h.rows();
    let mut out = Vec::new();
    let mut lam = vec![Int::from(0); r];
    fn rec(
        j: usize,
        h: &IntegerMatrix,
        lo: &[Int],
        hi: &[Int],
        lam: &mut IVec,
        out: &mut Vec<IVec>,
    ) {
        let r = h.rows();
        if j == r {
            out.push(lam.clone());
            return;
        }
        // coordinate j of λ is fixed once k_0..k_j are chosen
        let d = &h[(j, j)];
        let partial = lam[j].clone();
        // need  -hi_j ≤ partial + k d ≤ h_jj - lo_j
        let lo_k = num::Integer::div_ceil(&(-&hi[j] - &partial), d);
        let hi_k = num::Integer::div_floor(&(d - &lo[j] - &partial), d);
        let (a, b) = (lo_k.to_i64().unwrap(), hi_k.to_i64().unwrap());
        for k in a..=b {
            let kk = Int::from(k);
            for m in j..r {
                lam[m] += &kk * &h[(j, m)];
            }
            rec(j + 1, h, lo, hi, lam, out);
            for m in j..r {
                lam[m] -= &kk * &h[(j, m)];
            }
        }
    }
    rec(0, h, lo, hi, &mut lam, &mut out);
    out
}
