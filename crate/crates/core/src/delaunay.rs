//! Delaunay decompositions of ℤ^r for positive definite rational forms and
//! membership in closed second Voronoi cones.
//!
//! Cells are obtained from the vertices of the Voronoi cell of the origin:
//! each vertex `c` is the center of the Delaunay cell `{x : Q(x − c) = Q(c)}`.
//! All truncations to the lattice window are certified by checking that the
//! relevant ellipsoids fit inside it.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, qvec, sub_q, IVec, Int, QVec, Rat};
use crate::linalg::{IntegerMatrix, RationalMatrix, Sublattice};
use crate::paving::{window_points, LatticePolytope, PavingError, PeriodicPaving};
use crate::polytope::{strictly_feasible, subsets};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DelaunayError {
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("window {0} is too small to certify the computation")]
    WindowTooSmall(u32),
    #[error("quadratic form must be a symmetric square matrix of rank {0}")]
    BadForm(usize),
    #[error(transparent)]
    Paving(#[from] PavingError),
}

impl DelaunayError {
    pub fn code(&self) -> &'static str {
        match self {
            DelaunayError::NotPositiveDefinite => "NotPositiveDefinite",
            DelaunayError::WindowTooSmall(_) => "WindowTooSmall",
            DelaunayError::BadForm(_) => "BadForm",
            DelaunayError::Paving(e) => e.code(),
        }
    }
}

/// A symmetric rational form on ℤ^r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RationalMatrix", into = "RationalMatrix")]
pub struct QuadraticForm {
    matrix: RationalMatrix,
}

impl TryFrom<RationalMatrix> for QuadraticForm {
    type Error = DelaunayError;
    fn try_from(m: RationalMatrix) -> Result<Self, DelaunayError> {
        QuadraticForm::new(m)
    }
}

impl From<QuadraticForm> for RationalMatrix {
    fn from(q: QuadraticForm) -> RationalMatrix {
        q.matrix
    }
}

impl QuadraticForm {
    pub fn new(matrix: RationalMatrix) -> Result<Self, DelaunayError> {
        if !matrix.is_symmetric() {
            return Err(DelaunayError::BadForm(matrix.rows()));
        }
        Ok(QuadraticForm { matrix })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QuadraticForm::new(RationalMatrix::from_i64(rows)).expect("symmetric literal")
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn is_positive_definite(&self) -> bool {
        self.matrix.is_positive_definite()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.matrix.quad(x)
    }

    pub fn eval_i(&self, x: &[Int]) -> Rat {
        self.matrix.quad(&qvec(x))
    }

    pub fn bilinear(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.matrix.bilinear(x, y)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        QuadraticForm { matrix: self.matrix.scale(s) }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadraticForm { matrix: self.matrix.add(&o.matrix) }
    }
}

/// Window geometry: the region `|ℓᵢ(x)| ≤ w` with `ℓᵢ` the rows of `P⁻¹`.
struct Window {
    w: Rat,
    rows: Vec<QVec>,
    /// `ℓᵢᵀ Q⁻¹ ℓᵢ`
    spread: Vec<Rat>,
    points: Vec<IVec>,
}

impl Window {
    fn new(q: &QuadraticForm, period_basis: &IntegerMatrix, w: u32) -> Self {
        let pinv = period_basis.to_rational().inverse().expect("nonsingular period basis");
        let qinv = q.matrix.inverse().expect("positive definite");
        let rows: Vec<QVec> = (0..pinv.rows()).map(|i| pinv.row(i).to_vec()).collect();
        let spread = rows.iter().map(|l| qinv.quad(l)).collect();
        Window {
            w: Rat::from_integer(Int::from(w)),
            rows,
            spread,
            points: window_points(period_basis, w),
        }
    }

    /// Whether the ellipsoid `Q(x − c) ≤ rr` lies inside the window.
    fn fits(&self, c: &[Rat], rr: &Rat) -> bool {
        self.rows.iter().zip(&self.spread).all(|(l, s)| {
            let lc = arith::dot_q(l, c).abs();
            if lc > self.w {
                return false;
            }
            let gap = &self.w - lc;
            rr * s <= &gap * &gap
        })
    }
}

/// Voronoi-relevant vectors: `v` such that `±v` are the only minimal vectors
/// of `v + 2ℤ^r`. Both signs are returned.
fn relevant_vectors(q: &QuadraticForm, win: &Window) -> Result<Vec<IVec>, DelaunayError> {
    let r = q.rank();
    let mut out = Vec::new();
    for class in 1u32..(1 << r) {
        let parity = |x: &IVec| {
            (0..r).all(|i| num::Integer::is_odd(&x[i]) == (class >> i & 1 == 1))
        };
        let mut best: Option<Rat> = None;
        let mut mins: Vec<&IVec> = Vec::new();
        for x in win.points.iter().filter(|x| parity(x)) {
            let v = q.eval_i(x);
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => mins.push(x),
                _ => {
                    best = Some(v);
                    mins = vec![x];
                }
            }
        }
        let Some(m) = best else {
            return Err(DelaunayError::WindowTooSmall(0));
        };
        if !win.fits(&vec![Rat::zero(); r], &m) {
            return Err(DelaunayError::WindowTooSmall(0));
        }
        if mins.len() == 2 {
            out.extend(mins.into_iter().cloned());
        }
    }
    Ok(out)
}

/// Vertices of the Voronoi cell of the origin.
fn voronoi_vertices(q: &QuadraticForm, relevant: &[IVec]) -> Vec<QVec> {
    let r = q.rank();
    let two = Rat::from_integer(Int::from(2));
    let rows: Vec<QVec> = relevant
        .iter()
        .map(|v| q.matrix.vec_mul(&qvec(v)).into_iter().map(|x| x * &two).collect())
        .collect();
    let rhs: Vec<Rat> = relevant.iter().map(|v| q.eval_i(v)).collect();
    let mut seen: BTreeSet<QVec> = BTreeSet::new();
    for s in subsets(relevant.len(), r) {
        let a = RationalMatrix::from_rows(s.iter().map(|&i| rows[i].clone()).collect())
            .expect("rectangular");
        let Some(inv) = a.inverse() else { continue };
        let c = inv.mul_vec(&s.iter().map(|&i| rhs[i].clone()).collect::<Vec<_>>());
        if rows.iter().zip(&rhs).all(|(row, b)| arith::dot_q(row, &c) <= *b) {
            seen.insert(c);
        }
    }
    seen.into_iter().collect()
}

/// Delaunay cells containing the origin, one per Voronoi vertex.
fn cells_at_origin(
    q: &QuadraticForm,
    win: &Window,
) -> Result<Vec<(QVec, LatticePolytope)>, DelaunayError> {
    let relevant = relevant_vectors(q, win)?;
    let mut out = Vec::new();
    for c in voronoi_vertices(q, &relevant) {
        let rr = q.eval(&c);
        if !win.fits(&c, &rr) {
            return Err(DelaunayError::WindowTooSmall(0));
        }
        let verts: Vec<IVec> = win
            .points
            .iter()
            .filter(|x| q.eval(&sub_q(&qvec(x), &c)) == rr)
            .cloned()
            .collect();
        out.push((c, LatticePolytope::new(verts)));
    }
    Ok(out)
}

/// The Delaunay paving of `q`, with one representative per orbit of the
/// period lattice.
pub fn delaunay_subdivision(
    q: &QuadraticForm,
    period_basis: &IntegerMatrix,
    window: u32,
) -> Result<PeriodicPaving, DelaunayError> {
    delaunay_subdivision_shifted(q, period_basis, window, None)
}

/// As [`delaunay_subdivision`] for the site set `shift + ℤ^r`. Since the
/// sites are a translate of ℤ^r the cells are the translates of the
/// unshifted ones; they are stored as integer offsets with the shift.
pub fn delaunay_subdivision_shifted(
    q: &QuadraticForm,
    period_basis: &IntegerMatrix,
    window: u32,
    shift: Option<QVec>,
) -> Result<PeriodicPaving, DelaunayError> {
    let r = q.rank();
    if period_basis.rows() != r || !period_basis.is_square() {
        return Err(DelaunayError::BadForm(r));
    }
    if !q.is_positive_definite() {
        return Err(DelaunayError::NotPositiveDefinite);
    }
    if window < 2 {
        return Err(DelaunayError::WindowTooSmall(window));
    }
    let lattice = Sublattice::from_columns(period_basis).map_err(PavingError::from)?;
    let win = Window::new(q, period_basis, window);
    let full = Sublattice::full(r);
    let mut orbits: BTreeSet<LatticePolytope> = BTreeSet::new();
    for (_, cell) in cells_at_origin(q, &win).map_err(|_| DelaunayError::WindowTooSmall(window))? {
        orbits.insert(cell.canonical_mod(&full).0);
    }
    let mut cells = Vec::new();
    for rep in lattice.coset_reps() {
        for c in &orbits {
            cells.push(c.translate(&rep));
        }
    }
    Ok(PeriodicPaving::new(period_basis.clone(), cells, window)?.with_shift(shift))
}

/// Whether some center is Q-equidistant from all vertices of `cell` and
/// strictly closer to them than to every other lattice point in the cube of
/// radius `window` around the cell.
pub fn empty_sphere_check(
    cell: &LatticePolytope,
    q: &QuadraticForm,
    window: u32,
) -> Result<bool, DelaunayError> {
    if !q.is_positive_definite() {
        return Err(DelaunayError::NotPositiveDefinite);
    }
    let r = q.rank();
    let verts = cell.vertices();
    if verts.is_empty() || verts[0].len() != r {
        return Err(DelaunayError::BadForm(r));
    }
    if verts.len() == 1 {
        return Ok(true);
    }
    let two = Rat::from_integer(Int::from(2));
    let v0 = qvec(&verts[0]);
    let q0 = q.eval(&v0);
    // 2(vᵢ − v₀)ᵀQ c = Q(vᵢ) − Q(v₀)
    let lin = |x: &QVec| -> QVec {
        q.matrix.vec_mul(&sub_q(x, &v0)).into_iter().map(|a| a * &two).collect()
    };
    let rows: Vec<QVec> = verts[1..].iter().map(|v| lin(&qvec(v))).collect();
    let rhs: Vec<Rat> = verts[1..].iter().map(|v| q.eval_i(v) - &q0).collect();
    let a = RationalMatrix::from_rows(rows).expect("rectangular");
    let Some((c0, kernel)) = a.solve_affine(&rhs) else {
        return Ok(false);
    };
    let n = RationalMatrix::from_rows(kernel.clone()).ok().map(|m| m.transpose());
    let w = Int::from(window);
    let mut ineqs: Vec<(QVec, Rat)> = Vec::new();
    for x in cube(&verts[0], &w) {
        if cell.contains_vertex(&x) {
            continue;
        }
        let xq = qvec(&x);
        let g = lin(&xq);
        let b = q.eval(&xq) - &q0 - arith::dot_q(&g, &c0);
        let coeff: QVec = match &n {
            Some(n) if !kernel.is_empty() => n.vec_mul(&g),
            _ => Vec::new(),
        };
        ineqs.push((coeff, b));
    }
    Ok(strictly_feasible(&ineqs))
}

fn cube(center: &[Int], w: &Int) -> Vec<IVec> {
    let mut out = vec![Vec::new()];
    for c in center {
        let mut next = Vec::new();
        for p in &out {
            let mut k = c - w;
            while k <= c + w {
                let mut q: IVec = p.clone();
                q.push(k.clone());
                next.push(q);
                k += 1;
            }
        }
        out = next;
    }
    out
}

/// Whether the Delaunay decomposition of the semidefinite form `q` is equal
/// to or coarser than `paving`, i.e. `q` lies in the closed cone of the
/// paving.
///
/// Equivalent test: on every cell `σ` the values `½Q` at the vertices are
/// affine, and the interpolating affine function `a_σ` satisfies
/// `a_σ(x) ≤ ½Q(x)` at every lattice point.
pub fn voronoi_cone_contains(
    paving: &PeriodicPaving,
    q: &QuadraticForm,
) -> Result<bool, DelaunayError> {
    let r = paving.rank();
    if q.rank() != r {
        return Err(DelaunayError::BadForm(r));
    }
    if !q.matrix.is_positive_semidefinite() {
        return Ok(false);
    }
    paving.validate()?;
    let half = Rat::new(Int::one(), Int::from(2));
    let definite = q.is_positive_definite();
    let w = paving.window().max(2);
    let win = definite.then(|| Window::new(q, paving.period_basis(), w));
    let qinv = definite.then(|| q.matrix.inverse().expect("definite"));
    let points = paving.window_points(w);
    for cell in paving.cells() {
        let Some((lin, cst)) = affine_interpolant(cell, |x| q.eval_i(x) * &half) else {
            return Ok(false);
        };
        // ½Q − a_σ is minimized on an ellipsoid centered at Q⁻¹·lin
        if let (Some(win), Some(qinv)) = (&win, &qinv) {
            let center = qinv.mul_vec(&lin);
            let v0 = qvec(&cell.vertices()[0]);
            let rr = q.eval(&sub_q(&v0, &center));
            if !win.fits(&center, &rr) {
                return Err(DelaunayError::WindowTooSmall(w));
            }
        }
        for x in &points {
            let a = arith::dot_q(&lin, &qvec(x)) + &cst;
            if a > q.eval_i(x) * &half {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The affine function interpolating `f` on the vertices of `cell`, if one
/// exists: returns `(linear part, constant)`.
pub fn affine_interpolant(
    cell: &LatticePolytope,
    f: impl Fn(&IVec) -> Rat,
) -> Option<(QVec, Rat)> {
    let verts = cell.vertices();
    let r = cell.rank();
    let rows: Vec<QVec> = verts
        .iter()
        .map(|v| {
            let mut row = qvec(v);
            row.push(Rat::one());
            row
        })
        .collect();
    let a = RationalMatrix::from_rows(rows).ok()?;
    let b: Vec<Rat> = verts.iter().map(&f).collect();
    let (sol, _) = a.solve_affine(&b)?;
    Some((sol[..r].to_vec(), sol[r].clone()))
}

/// Whether every cell of `fine` lies inside a cell of `coarse` (both pavings
/// of ℤ^r with all lattice points as vertices of `coarse`).
pub fn refines(fine: &PeriodicPaving, coarse: &PeriodicPaving) -> bool {
    fine.cells().iter().all(|c| {
        match coarse.locate(&c.barycenter()) {
            Some(p) => {
                let big = coarse.placed(&p);
                c.vertices().iter().all(|v| big.contains_vertex(v))
            }
            None => false,
        }
    })
}
