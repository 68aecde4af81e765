//! Periodic piecewise-affine functions with values in a lattice `ℤ^k`:
//! bending parameters, convexity with respect to a toric monoid,
//! interpolation, the linear section `Q ↦ ½Q`, the discrete Legendre
//! transform and the affine-region paving.

mod quasi;
mod toric;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, add_i, qvec, sub_i, IVec, Int, QVec, Rat};
use crate::delaunay::{delaunay_subdivision, DelaunayError, QuadraticForm};
use crate::linalg::{IntegerMatrix, LinalgError, RationalMatrix};
use crate::paving::{LatticePolytope, PavingError, PeriodicPaving, Placed, Wall};
use crate::polytope::{extreme_points, normalized_volume};

pub use quasi::{
    quasiperiodic_decompose, quasiperiodic_decompose_vector, sample_domain,
    QuasiperiodicDecomposition,
};
pub use toric::ToricMonoid;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PwlError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("affine pieces disagree across a wall: {0}")]
    NonMatchingFaces(String),
    #[error("function is not quasiperiodic")]
    NotQuasiperiodic,
    #[error("samples do not determine the decomposition")]
    InsufficientSamples,
    #[error("paving is not a triangulation")]
    NotSimplicial,
    #[error("no value at vertex {0}")]
    MissingVertexValue(String),
    #[error("values are not affine on cell {0}")]
    NotAffineOnCell(usize),
    #[error("function is not convex")]
    NotConvex,
    #[error("associated quadratic form is not positive definite")]
    Unbounded,
    #[error("affine region is unbounded")]
    UnboundedRegion,
    #[error("monoid is not sharp")]
    NotSharp,
    #[error("computation exceeds the enumeration bound")]
    TooLarge,
    #[error("functions live on different pavings")]
    PavingMismatch,
    #[error(transparent)]
    Paving(#[from] PavingError),
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
    #[error(transparent)]
    Lattice(#[from] LinalgError),
}

impl PwlError {
    pub fn code(&self) -> &'static str {
        match self {
            PwlError::RankMismatch { .. } => "RankMismatch",
            PwlError::NonMatchingFaces(_) => "NonMatchingFaces",
            PwlError::NotQuasiperiodic => "NotQuasiperiodic",
            PwlError::InsufficientSamples => "InsufficientSamples",
            PwlError::NotSimplicial => "NotSimplicial",
            PwlError::MissingVertexValue(_) => "MissingVertexValue",
            PwlError::NotAffineOnCell(_) => "NotAffineOnCell",
            PwlError::NotConvex => "NotConvex",
            PwlError::Unbounded => "Unbounded",
            PwlError::UnboundedRegion => "UnboundedRegion",
            PwlError::NotSharp => "NotSharp",
            PwlError::TooLarge => "TooLarge",
            PwlError::PavingMismatch => "PavingMismatch",
            PwlError::Paving(e) => e.code(),
            PwlError::Delaunay(e) => e.code(),
            PwlError::Lattice(e) => e.code(),
        }
    }
}

/// `x ↦ linear·x + constant`, valued in `ℚ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePiece {
    pub linear: RationalMatrix,
    #[serde(with = "arith::rat_vec")]
    pub constant: QVec,
}

impl AffinePiece {
    pub fn eval(&self, x: &[Rat]) -> QVec {
        arith::add_q(&self.linear.mul_vec(x), &self.constant)
    }

    pub fn eval_i(&self, x: &[Int]) -> QVec {
        self.eval(&qvec(x))
    }

    pub fn add(&self, o: &Self) -> Self {
        AffinePiece {
            linear: self.linear.add(&o.linear),
            constant: arith::add_q(&self.constant, &o.constant),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        AffinePiece {
            linear: self.linear.scale(s),
            constant: self.constant.iter().map(|c| c * s).collect(),
        }
    }
}

/// Fits an affine map through `values` at `points`.
fn fit_affine(points: &[IVec], values: &[QVec], r: usize) -> Option<AffinePiece> {
    let k = values.first()?.len();
    let rows: Vec<QVec> = points
        .iter()
        .map(|x| {
            let mut row = qvec(x);
            row.push(Rat::one());
            row
        })
        .collect();
    let a = RationalMatrix::from_rows(rows).expect("rectangular");
    let mut lin = Vec::with_capacity(k);
    let mut cst = Vec::with_capacity(k);
    for s in 0..k {
        let b: Vec<Rat> = values.iter().map(|v| v[s].clone()).collect();
        let (sol, ker) = a.solve_affine(&b)?;
        if !ker.is_empty() {
            return None;
        }
        lin.push(sol[..r].to_vec());
        cst.push(sol[r].clone());
    }
    Some(AffinePiece { linear: RationalMatrix::from_rows(lin).expect("rectangular"), constant: cst })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    payload_rank: usize,
    paving: PeriodicPaving,
    pieces: Vec<AffinePiece>,
    increments: Vec<AffinePiece>,
    #[serde(default)]
    rank: Option<usize>,
}

/// A piecewise-affine function on a periodic paving, quasiperiodic with
/// respect to the paving's period lattice: `f(x + gⱼ) − f(x) = Aⱼ(x)` for
/// the period generators `gⱼ` (columns of the period basis).
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawFunction")]
pub struct PwAffineFunction {
    rank: usize,
    payload_rank: usize,
    paving: PeriodicPaving,
    pieces: Vec<AffinePiece>,
    increments: Vec<AffinePiece>,
    /// per component: `A_λ(x) = λᵀBx + ½λᵀBλ + m·λ`
    #[serde(skip)]
    bilinear: Vec<RationalMatrix>,
    #[serde(skip)]
    drift: Vec<QVec>,
}

impl TryFrom<RawFunction> for PwAffineFunction {
    type Error = PwlError;
    fn try_from(raw: RawFunction) -> Result<Self, PwlError> {
        if let Some(r) = raw.rank {
            if r != raw.paving.rank() {
                return Err(PwlError::RankMismatch { expected: raw.paving.rank(), found: r });
            }
        }
        PwAffineFunction::new(raw.paving, raw.payload_rank, raw.pieces, raw.increments)
    }
}

impl PartialEq for PwAffineFunction {
    fn eq(&self, o: &Self) -> bool {
        self.payload_rank == o.payload_rank
            && self.paving == o.paving
            && self.pieces == o.pieces
            && self.increments == o.increments
    }
}

impl Eq for PwAffineFunction {}

impl std::fmt::Debug for PwAffineFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PwAffineFunction")
            .field("paving", &self.paving)
            .field("pieces", &self.pieces)
            .field("increments", &self.increments)
            .finish()
    }
}

impl PwAffineFunction {
    pub fn new(
        paving: PeriodicPaving,
        payload_rank: usize,
        pieces: Vec<AffinePiece>,
        increments: Vec<AffinePiece>,
    ) -> Result<Self, PwlError> {
        let r = paving.rank();
        let k = payload_rank;
        if k == 0 {
            return Err(PwlError::RankMismatch { expected: 1, found: 0 });
        }
        if pieces.len() != paving.cells().len() {
            return Err(PwlError::RankMismatch { expected: paving.cells().len(), found: pieces.len() });
        }
        if increments.len() != r {
            return Err(PwlError::RankMismatch { expected: r, found: increments.len() });
        }
        for p in pieces.iter().chain(&increments) {
            if p.linear.rows() != k || p.linear.cols() != r || p.constant.len() != k {
                return Err(PwlError::RankMismatch { expected: k, found: p.linear.rows() });
            }
        }
        let pb = paving.period_basis();
        let pt_inv = pb.to_rational().transpose().inverse().expect("nonsingular period basis");
        let half = Rat::new(Int::one(), Int::from(2));
        let mut bilinear = Vec::with_capacity(k);
        let mut drift = Vec::with_capacity(k);
        for s in 0..k {
            let m = RationalMatrix::from_rows(
                increments.iter().map(|a| a.linear.row(s).to_vec()).collect(),
            )
            .expect("rectangular");
            let b = pt_inv.mul(&m);
            if !b.is_symmetric() {
                return Err(PwlError::NotQuasiperiodic);
            }
            let rhs: Vec<Rat> = (0..r)
                .map(|j| &increments[j].constant[s] - b.quad(&qvec(&pb.col(j))) * &half)
                .collect();
            drift.push(pt_inv.mul_vec(&rhs));
            bilinear.push(b);
        }
        let f = PwAffineFunction { rank: r, payload_rank: k, paving, pieces, increments, bilinear, drift };
        for w in f.paving.walls()? {
            let a = f.piece_at(&w.plus);
            let b = f.piece_at(&w.minus);
            for v in w.face.vertices() {
                if a.eval_i(v) != b.eval_i(v) {
                    return Err(PwlError::NonMatchingFaces(format!("{:?}", w.face.vertices())));
                }
            }
        }
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn payload_rank(&self) -> usize {
        self.payload_rank
    }

    pub fn paving(&self) -> &PeriodicPaving {
        &self.paving
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn increments(&self) -> &[AffinePiece] {
        &self.increments
    }

    /// The symmetric form `B` of component `s`; `½B` is the associated
    /// quadratic form.
    pub fn bilinear(&self, s: usize) -> &RationalMatrix {
        &self.bilinear[s]
    }

    /// `a(λ) = A_λ(0)`.
    pub fn translation_constant(&self, lambda: &[Int]) -> QVec {
        let l = qvec(lambda);
        let half = Rat::new(Int::one(), Int::from(2));
        (0..self.payload_rank)
            .map(|s| self.bilinear[s].quad(&l) * &half + arith::dot_q(&self.drift[s], &l))
            .collect()
    }

    /// `A_λ` for a period vector `λ`.
    pub fn increment_at(&self, lambda: &[Int]) -> AffinePiece {
        let l = qvec(lambda);
        let rows: Vec<QVec> = self.bilinear.iter().map(|b| b.vec_mul(&l)).collect();
        AffinePiece {
            linear: RationalMatrix::from_rows(rows).expect("rectangular"),
            constant: self.translation_constant(lambda),
        }
    }

    /// The affine function of `f` on the placed cell `C_i + λ`.
    pub fn piece_at(&self, placed: &Placed) -> AffinePiece {
        let (i, lambda) = placed;
        let base = &self.pieces[*i];
        if lambda.iter().all(|x| x.is_zero()) {
            return base.clone();
        }
        let l = qvec(lambda);
        let inc = self.increment_at(lambda);
        // f(x) = base(x − λ) + A_λ(x − λ)
        let linear = base.linear.add(&inc.linear);
        let constant = (0..self.payload_rank)
            .map(|s| &base.constant[s] + &inc.constant[s] - arith::dot_q(linear.row(s), &l))
            .collect();
        AffinePiece { linear, constant }
    }

    pub fn eval(&self, p: &[Rat]) -> QVec {
        let placed = self.paving.locate(p).expect("valid pavings cover ℝ^r");
        self.piece_at(&placed).eval(p)
    }

    pub fn eval_i(&self, p: &[Int]) -> QVec {
        self.eval(&qvec(p))
    }

    /// Scalar value of a payload-rank-one function.
    pub fn value(&self, p: &[Rat]) -> Rat {
        self.eval(p).swap_remove(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self, PwlError> {
        if self.paving != o.paving || self.payload_rank != o.payload_rank {
            return Err(PwlError::PavingMismatch);
        }
        PwAffineFunction::new(
            self.paving.clone(),
            self.payload_rank,
            self.pieces.iter().zip(&o.pieces).map(|(a, b)| a.add(b)).collect(),
            self.increments.iter().zip(&o.increments).map(|(a, b)| a.add(b)).collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Self {
        PwAffineFunction::new(
            self.paving.clone(),
            self.payload_rank,
            self.pieces.iter().map(|a| a.scale(s)).collect(),
            self.increments.iter().map(|a| a.scale(s)).collect(),
        )
        .expect("scaling preserves validity")
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }
}

/// An integral vector `ω` with `n·ω = 1` for primitive `n`.
pub fn transversal(n: &[Int]) -> IVec {
    let mut w = vec![Int::zero(); n.len()];
    let mut g = Int::zero();
    for (i, a) in n.iter().enumerate() {
        let (h, s, t) = arith::xgcd(&g, a);
        for x in w.iter_mut().take(i) {
            *x = &*x * &s;
        }
        w[i] = t;
        g = h;
    }
    assert!(g.is_one(), "normal vector is not primitive");
    w
}

/// Bending parameter of every wall: the linear part of `f|σ₊ − f|σ₋` at a
/// transversal `ω` with `n·ω = 1`.
pub fn bending_parameters(f: &PwAffineFunction) -> Result<Vec<(Wall, QVec)>, PwlError> {
    let mut out = Vec::new();
    for w in f.paving.walls()? {
        let a = f.piece_at(&w.plus);
        let b = f.piece_at(&w.minus);
        for v in w.face.vertices() {
            if a.eval_i(v) != b.eval_i(v) {
                return Err(PwlError::NonMatchingFaces(format!("{:?}", w.face.vertices())));
            }
        }
        let d = a.linear.sub(&b.linear);
        let omega = qvec(&transversal(&w.normal));
        let p = d.mul_vec(&omega);
        let n = qvec(&w.normal);
        for s in 0..f.payload_rank {
            for (j, nj) in n.iter().enumerate() {
                if d[(s, j)] != &p[s] * nj {
                    return Err(PwlError::NonMatchingFaces(format!("{:?}", w.face.vertices())));
                }
            }
        }
        out.push((w, p));
    }
    Ok(out)
}

/// Whether every bending parameter lies in the cone of `p` (strictly: and
/// is not invertible there).
pub fn is_p_convex(f: &PwAffineFunction, p: &ToricMonoid, strict: bool) -> Result<bool, PwlError> {
    if f.payload_rank != p.ambient_rank() {
        return Err(PwlError::RankMismatch { expected: p.ambient_rank(), found: f.payload_rank });
    }
    let neg = |v: &QVec| v.iter().map(|x| -x).collect::<QVec>();
    Ok(bending_parameters(f)?.iter().all(|(_, b)| {
        p.cone_contains(b) && !(strict && p.cone_contains(&neg(b)))
    }))
}

/// Convexity of a scalar function: all bendings nonnegative.
pub fn is_convex(f: &PwAffineFunction) -> Result<bool, PwlError> {
    if f.payload_rank != 1 {
        return Err(PwlError::RankMismatch { expected: 1, found: f.payload_rank });
    }
    Ok(bending_parameters(f)?.iter().all(|(_, b)| !b[0].is_negative()))
}

/// Affine interpolation of `values` over each cell of `paving`. The values
/// must be affine on every cell; increments along the period generators are
/// read off from the translated cells.
pub fn interpolate(
    paving: &PeriodicPaving,
    payload_rank: usize,
    values: impl Fn(&IVec) -> Option<QVec>,
) -> Result<PwAffineFunction, PwlError> {
    paving.validate()?;
    let r = paving.rank();
    let fit = |cell: &LatticePolytope, idx: usize| -> Result<AffinePiece, PwlError> {
        let vals = cell
            .vertices()
            .iter()
            .map(|v| {
                let x = values(v).ok_or_else(|| PwlError::MissingVertexValue(fmt_point(v)))?;
                if x.len() != payload_rank {
                    return Err(PwlError::RankMismatch { expected: payload_rank, found: x.len() });
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>, _>>()?;
        fit_affine(cell.vertices(), &vals, r).ok_or(PwlError::NotAffineOnCell(idx))
    };
    let pieces = paving
        .cells()
        .iter()
        .enumerate()
        .map(|(i, c)| fit(c, i))
        .collect::<Result<Vec<_>, _>>()?;
    let mut increments = Vec::with_capacity(r);
    for j in 0..r {
        let g = paving.period_basis().col(j);
        let gq = qvec(&g);
        let mut found: Option<AffinePiece> = None;
        for (i, c) in paving.cells().iter().enumerate() {
            let moved = fit(&c.translate(&g), i)?;
            // A(x) = moved(x + g) − piece(x)
            let linear = moved.linear.sub(&pieces[i].linear);
            let shift = moved.linear.mul_vec(&gq);
            let constant = (0..payload_rank)
                .map(|s| &moved.constant[s] + &shift[s] - &pieces[i].constant[s])
                .collect();
            let inc = AffinePiece { linear, constant };
            match &found {
                Some(prev) if *prev != inc => return Err(PwlError::NotQuasiperiodic),
                _ => found = Some(inc),
            }
        }
        increments.push(found.ok_or(PwlError::InsufficientSamples)?);
    }
    PwAffineFunction::new(paving.clone(), payload_rank, pieces, increments)
}

/// Interpolation of scalar vertex values over a triangulation.
pub fn interpolate_on_triangulation(
    values: &BTreeMap<IVec, Rat>,
    t: &PeriodicPaving,
) -> Result<PwAffineFunction, PwlError> {
    if !t.is_simplicial() {
        return Err(PwlError::NotSimplicial);
    }
    interpolate(t, 1, |v| values.get(v).map(|x| vec![x.clone()]))
}

fn fmt_point(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Whether `ψ` lies in the cone of the triangulation `t`: its interpolation
/// over `t` is convex and lies below `ψ` at every lattice point.
pub fn cone_cy_membership(
    psi: &BTreeMap<IVec, Rat>,
    t: &PeriodicPaving,
    period_basis: &IntegerMatrix,
) -> Result<bool, PwlError> {
    let dec = quasiperiodic_decompose(psi, period_basis)?;
    if !t.is_simplicial() {
        return Err(PwlError::NotSimplicial);
    }
    let g = interpolate(t, 1, |v| Some(vec![dec.eval(v)]))?;
    if !is_convex(&g)? {
        return Ok(false);
    }
    // g − ψ is periodic under the period lattice of ψ
    let lattice = crate::linalg::Sublattice::from_columns(period_basis)?;
    let mut points: BTreeSet<IVec> = lattice.coset_reps().into_iter().collect();
    points.extend(t.window_points(t.window()));
    Ok(points.iter().all(|a| g.value(&qvec(a)) <= dec.eval(a)))
}

/// Interpolation of `½Q` over the Delaunay paving of `Q`.
pub fn sigma_section(
    q: &QuadraticForm,
    period_basis: &IntegerMatrix,
    window: u32,
) -> Result<PwAffineFunction, PwlError> {
    let paving = delaunay_subdivision(q, period_basis, window)?;
    let half = Rat::new(Int::one(), Int::from(2));
    interpolate(&paving, 1, |v| Some(vec![q.eval_i(v) * &half]))
}

/// `φ̌(μ) = −min_y (f(y) + ⟨y, μ⟩)` together with a minimizing vertex.
///
/// The minimum is found by descent along vertices of the paving. For a
/// convex function a vertex minimizing over its star is a global minimizer.
pub fn legendre_at(f: &PwAffineFunction, mu: &[Int]) -> Result<(Rat, IVec), PwlError> {
    check_legendre(f)?;
    legendre_unchecked(f, mu)
}

fn check_legendre(f: &PwAffineFunction) -> Result<(), PwlError> {
    if !is_convex(f)? {
        return Err(PwlError::NotConvex);
    }
    if !f.bilinear[0].is_positive_definite() {
        return Err(PwlError::Unbounded);
    }
    Ok(())
}

fn legendre_unchecked(f: &PwAffineFunction, mu: &[Int]) -> Result<(Rat, IVec), PwlError> {
    if mu.len() != f.rank {
        return Err(PwlError::RankMismatch { expected: f.rank, found: mu.len() });
    }
    let muq = qvec(mu);
    let b = &f.bilinear[0];
    let start = b
        .inverse()
        .expect("definite")
        .mul_vec(&arith::add_q(&f.drift[0], &muq))
        .into_iter()
        .map(|x| -x.round())
        .collect::<QVec>();
    let placed = f.paving.locate(&start).expect("valid paving");
    let mut v = f.paving.placed(&placed).vertices()[0].clone();
    let objective =
        |piece: &AffinePiece, x: &IVec| &piece.eval_i(x)[0] + arith::dot_i(x, mu);
    let mut best = objective(&f.piece_at(&placed), &v);
    loop {
        let mut next: Option<(Rat, IVec)> = None;
        for p in f.paving.cells_at_vertex(&v) {
            let piece = f.piece_at(&p);
            for w in f.paving.placed(&p).vertices() {
                let val = objective(&piece, w);
                let cur = next.as_ref().map_or(&best, |(x, _)| x);
                if val < *cur {
                    next = Some((val, w.clone()));
                }
            }
        }
        match next {
            Some((val, w)) => {
                best = val;
                v = w;
            }
            None => return Ok((-best, v)),
        }
    }
}

/// `φ̌` on all dual lattice points with coordinates bounded by `window`.
pub fn legendre_transform(
    f: &PwAffineFunction,
    window: u32,
) -> Result<BTreeMap<IVec, Rat>, PwlError> {
    check_legendre(f)?;
    let r = f.rank;
    let w = window as i64;
    let mut out = BTreeMap::new();
    let mut cur = vec![-w; r];
    'outer: loop {
        let mu: IVec = cur.iter().map(|&x| Int::from(x)).collect();
        let (val, _) = legendre_unchecked(f, &mu)?;
        out.insert(mu, val);
        for c in cur.iter_mut() {
            if *c < w {
                *c += 1;
                continue 'outer;
            }
            *c = -w;
        }
        break;
    }
    Ok(out)
}

/// The coarsest paving on whose cells `f` is affine: cells joined across
/// walls with vanishing bending parameter.
pub fn affine_regions(f: &PwAffineFunction) -> Result<PeriodicPaving, PwlError> {
    let bends = bending_parameters(f)?;
    let n = f.paving.cells().len();
    let mut adj: Vec<Vec<(usize, IVec)>> = vec![Vec::new(); n];
    for (w, b) in &bends {
        if b.iter().all(|x| x.is_zero()) {
            let (a, ta) = &w.plus;
            let (c, tc) = &w.minus;
            adj[*a].push((*c, sub_i(tc, ta)));
            adj[*c].push((*a, sub_i(ta, tc)));
        }
    }
    let zero = vec![Int::zero(); f.rank];
    let mut done = vec![false; n];
    let mut merged: BTreeSet<LatticePolytope> = BTreeSet::new();
    for start in 0..n {
        if done[start] {
            continue;
        }
        let mut seen: BTreeSet<Placed> = BTreeSet::new();
        let mut queue: VecDeque<Placed> = VecDeque::new();
        seen.insert((start, zero.clone()));
        queue.push_back((start, zero.clone()));
        while let Some((i, t)) = queue.pop_front() {
            for (j, off) in &adj[i] {
                let next = (*j, add_i(&t, off));
                if seen.contains(&next) {
                    continue;
                }
                if seen.iter().any(|(k, _)| *k == *j) {
                    return Err(PwlError::UnboundedRegion);
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
        let mut pts: BTreeSet<IVec> = BTreeSet::new();
        let mut vol = Rat::zero();
        for p in &seen {
            done[p.0] = true;
            let cell = f.paving.placed(p);
            vol += normalized_volume(&cell.rational_vertices());
            pts.extend(cell.vertices().iter().cloned());
        }
        let pts: Vec<IVec> = pts.into_iter().collect();
        let q: Vec<QVec> = pts.iter().map(|x| qvec(x)).collect();
        let ext: Vec<IVec> = extreme_points(&q).into_iter().map(|k| pts[k].clone()).collect();
        let region = LatticePolytope::new(ext);
        if normalized_volume(&region.rational_vertices()) != vol {
            return Err(PwlError::NotConvex);
        }
        merged.insert(region.canonical_mod(f.paving.lattice()).0);
    }
    Ok(PeriodicPaving::new(
        f.paving.period_basis().clone(),
        merged.into_iter().collect(),
        f.paving.window(),
    )?)
}

#[cfg(test)]
mod tests;
