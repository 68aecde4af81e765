//! Small-dimensional exact polytope routines: affine hulls, facets by brute
//! force, pulling triangulations, volumes and point location.
//!
//! Point sets are tiny (cells of pavings in rank ≤ 3), so every routine is
//! written for clarity rather than asymptotics.

use num::{Signed, Zero};

use crate::arith::{qvec, sub_q, IVec, QVec, Rat};
use crate::linalg::RationalMatrix;

/// Affine frame of a point set: an origin, the pivot coordinates on which the
/// projection to the hull is injective, and the hull dimension.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    pub origin: QVec,
    pub pivots: Vec<usize>,
}

impl AffineFrame {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn project(&self, p: &[Rat]) -> QVec {
        self.pivots.iter().map(|&i| p[i].clone()).collect()
    }
}

pub fn affine_frame(points: &[QVec]) -> AffineFrame {
    let Some(o) = points.first() else {
        return AffineFrame { origin: Vec::new(), pivots: Vec::new() };
    };
    let n = o.len();
    let diffs: Vec<QVec> = points[1..].iter().map(|p| sub_q(p, o)).collect();
    let mut m = RationalMatrix::from_rows(diffs).unwrap_or_else(|_| RationalMatrix::zeros(0, n));
    if m.cols() != n {
        m = RationalMatrix::zeros(0, n);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.rows()).find(|&i| !m[(i, c)].is_zero()) else { continue };
        m.swap_rows(r, p);
        let piv = m[(r, c)].clone();
        for i in r + 1..m.rows() {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = &m[(i, c)] / &piv;
            for j in c..n {
                m[(i, j)] = &m[(i, j)] - &f * &m[(r, j)];
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.rows() {
            break;
        }
    }
    AffineFrame { origin: o.clone(), pivots }
}

pub fn affine_rank(points: &[QVec]) -> usize {
    affine_frame(points).dim()
}

pub fn affine_rank_i(points: &[IVec]) -> usize {
    affine_rank(&points.iter().map(|p| qvec(p)).collect::<Vec<_>>())
}

/// Halfspace `normal · x ≥ offset` in some coordinate system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: QVec,
    pub offset: Rat,
}

impl Halfspace {
    pub fn eval(&self, p: &[Rat]) -> Rat {
        crate::arith::dot_q(&self.normal, p) - &self.offset
    }
}

/// A facet: the inward halfspace (in hull coordinates) and the indices of the
/// input points lying on it.
#[derive(Debug, Clone)]
pub struct Facet {
    pub halfspace: Halfspace,
    pub points: Vec<usize>,
}

/// Facets of `conv(points)` relative to its affine hull.
pub fn facets(points: &[QVec]) -> (AffineFrame, Vec<Facet>) {
    let frame = affine_frame(points);
    let d = frame.dim();
    let proj: Vec<QVec> = points.iter().map(|p| frame.project(p)).collect();
    let mut out: Vec<Facet> = Vec::new();
    if d == 0 {
        return (frame, out);
    }
    for subset in subsets(proj.len(), d) {
        let base = &proj[subset[0]];
        let rows: Vec<QVec> = subset[1..].iter().map(|&i| sub_q(&proj[i], base)).collect();
        let m = if rows.is_empty() {
            RationalMatrix::zeros(0, d)
        } else {
            RationalMatrix::from_rows(rows).expect("rectangular")
        };
        let ker = m.kernel();
        if ker.len() != 1 {
            continue;
        }
        let mut normal = ker.into_iter().next().unwrap();
        let offset = crate::arith::dot_q(&normal, base);
        let vals: Vec<Rat> =
            proj.iter().map(|p| crate::arith::dot_q(&normal, p) - &offset).collect();
        let pos = vals.iter().any(|v| v.is_positive());
        let neg = vals.iter().any(|v| v.is_negative());
        if pos && neg {
            continue;
        }
        let (normal, offset) = if neg {
            for x in normal.iter_mut() {
                *x = -x.clone();
            }
            let off = crate::arith::dot_q(&normal, base);
            (normal, off)
        } else {
            (normal, offset)
        };
        let on: Vec<usize> = (0..proj.len()).filter(|&i| vals[i].is_zero()).collect();
        if out.iter().any(|f| f.points == on) {
            continue;
        }
        out.push(Facet { halfspace: Halfspace { normal, offset }, points: on });
    }
    (frame, out)
}

/// Indices of the extreme points (vertices) of `conv(points)`; duplicates
/// keep their first occurrence only.
pub fn extreme_points(points: &[QVec]) -> Vec<usize> {
    let mut uniq: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if !uniq.iter().any(|&j| points[j] == points[i]) {
            uniq.push(i);
        }
    }
    let pts: Vec<QVec> = uniq.iter().map(|&i| points[i].clone()).collect();
    extreme_rec(&pts, &(0..pts.len()).collect::<Vec<_>>())
        .into_iter()
        .map(|i| uniq[i])
        .collect()
}

fn extreme_rec(points: &[QVec], idx: &[usize]) -> Vec<usize> {
    let sub: Vec<QVec> = idx.iter().map(|&i| points[i].clone()).collect();
    let frame = affine_frame(&sub);
    if frame.dim() == 0 {
        return idx.iter().take(1).copied().collect();
    }
    // a point is extreme iff it is extreme in some facet
    let (_, fs) = facets(&sub);
    let mut out: Vec<usize> = Vec::new();
    for f in fs {
        let fidx: Vec<usize> = f.points.iter().map(|&k| idx[k]).collect();
        for v in extreme_rec(points, &fidx) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Pulling triangulation using only extreme points, pulling the
/// lexicographically smallest point first. The order is global, so the
/// triangulations of two polytopes agree on a common face.
pub fn pulling_triangulation(points: &[QVec]) -> Vec<Vec<usize>> {
    let ext = extreme_points(points);
    pull(points, ext)
}

fn pull(points: &[QVec], idx: Vec<usize>) -> Vec<Vec<usize>> {
    let sub: Vec<QVec> = idx.iter().map(|&i| points[i].clone()).collect();
    let d = affine_rank(&sub);
    if idx.len() == d + 1 {
        let mut s = idx;
        s.sort_unstable();
        return vec![s];
    }
    let apex = *idx
        .iter()
        .min_by(|&&a, &&b| points[a].cmp(&points[b]))
        .expect("nonempty point set");
    let (_, fs) = facets(&sub);
    let mut out = Vec::new();
    for f in fs {
        let fidx: Vec<usize> = f.points.iter().map(|&k| idx[k]).collect();
        if fidx.contains(&apex) {
            continue;
        }
        let ext: Vec<usize> = {
            let fp: Vec<QVec> = fidx.iter().map(|&i| points[i].clone()).collect();
            extreme_points(&fp).into_iter().map(|k| fidx[k]).collect()
        };
        for mut s in pull(points, ext) {
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// `|det|` of the simplex edge vectors in its own ambient space; the
/// normalized volume of a full-dimensional simplex.
pub fn simplex_volume(points: &[QVec], simplex: &[usize]) -> Rat {
    let base = &points[simplex[0]];
    let rows: Vec<QVec> = simplex[1..].iter().map(|&i| sub_q(&points[i], base)).collect();
    let m = RationalMatrix::from_rows(rows).expect("rectangular");
    if !m.is_square() {
        return Rat::zero();
    }
    m.det().abs()
}

/// Normalized volume (`r!·vol`) of a full-dimensional polytope.
pub fn normalized_volume(points: &[QVec]) -> Rat {
    let tri = pulling_triangulation(points);
    tri.iter().fold(Rat::zero(), |acc, s| acc + simplex_volume(points, s))
}

/// Full-dimensional polytope given by inward halfspaces in ambient
/// coordinates.
#[derive(Debug, Clone)]
pub struct HPolytope {
    pub facets: Vec<Facet>,
}

impl HPolytope {
    pub fn new(points: &[QVec]) -> Option<Self> {
        let (frame, fs) = facets(points);
        let n = points.first().map_or(0, |p| p.len());
        if frame.dim() != n {
            return None;
        }
        Some(HPolytope { facets: fs })
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.facets.iter().all(|f| !f.halfspace.eval(p).is_negative())
    }

    pub fn contains_interior(&self, p: &[Rat]) -> bool {
        self.facets.iter().all(|f| f.halfspace.eval(p).is_positive())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Strict feasibility of `aᵢ·t < bᵢ` by Fourier-Motzkin elimination.
pub fn strictly_feasible(ineqs: &[(QVec, Rat)]) -> bool {
    let Some(first) = ineqs.first() else { return true };
    let k = first.0.len();
    if k == 0 {
        return ineqs.iter().all(|(_, b)| b.is_positive());
    }
    let j = k - 1;
    let mut lo: Vec<(QVec, Rat)> = Vec::new();
    let mut hi: Vec<(QVec, Rat)> = Vec::new();
    let mut rest: Vec<(QVec, Rat)> = Vec::new();
    for (a, b) in ineqs {
        let c = &a[j];
        let head: QVec = a[..j].to_vec();
        if c.is_zero() {
            rest.push((head, b.clone()));
        } else {
            // normalize to  head'·t' ± t_j < b'
            let s = c.abs();
            let h: QVec = head.iter().map(|x| x / &s).collect();
            if c.is_positive() {
                hi.push((h, b / &s));
            } else {
                lo.push((h, b / &s));
            }
        }
    }
    for (ha, ba) in &hi {
        for (hb, bb) in &lo {
            let h = crate::arith::add_q(ha, hb);
            rest.push((h, ba + bb));
        }
    }
    if rest.is_empty() {
        return true;
    }
    strictly_feasible(&rest)
}
