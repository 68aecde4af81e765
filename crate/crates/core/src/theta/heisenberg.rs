//! The finite Heisenberg group `ℋ(δ, M) = μ_M × H(δ) × Ĥ(δ)`, its
//! Schrödinger representation on functions `H(δ) → ℤ[ζ_M]`, and balanced
//! sums of translates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::cyclotomic::CyclotomicInteger;
use super::ThetaError;
use crate::linalg::PolarizationType;

/// `(t, a, b)`: scalar exponent `t` of `ζ_M`, translation `a ∈ H(δ)` and
/// character exponents `b ∈ Ĥ(δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, Vec<i64>, Vec<i64>)", into = "(i64, Vec<i64>, Vec<i64>)")]
pub struct HeisenbergElement {
    pub t: i64,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl From<(i64, Vec<i64>, Vec<i64>)> for HeisenbergElement {
    fn from((t, a, b): (i64, Vec<i64>, Vec<i64>)) -> Self {
        HeisenbergElement { t, a, b }
    }
}

impl From<HeisenbergElement> for (i64, Vec<i64>, Vec<i64>) {
    fn from(x: HeisenbergElement) -> Self {
        (x.t, x.a, x.b)
    }
}

impl HeisenbergElement {
    pub fn new(t: i64, a: &[i64], b: &[i64]) -> Self {
        HeisenbergElement { t, a: a.to_vec(), b: b.to_vec() }
    }
}

/// `ℋ(δ, M)` with law `(t,a,b)(t',a',b') = (t + t' + ⟨b',a⟩, a + a', b + b')`,
/// where `⟨b,a⟩ = Σ bᵢaᵢ·M/δᵢ` is the pairing `H(δ) × Ĥ(δ) → ℤ/M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergGroup {
    delta: PolarizationType,
    modulus: i64,
}

impl HeisenbergGroup {
    /// Requires `2δ_g | M`.
    pub fn new(delta: PolarizationType, modulus: i64) -> Result<Self, ThetaError> {
        let top = delta.last() as i64;
        if modulus <= 0 || modulus % (2 * top) != 0 {
            return Err(ThetaError::BadModulus { modulus, required: 2 * top });
        }
        Ok(HeisenbergGroup { delta, modulus })
    }

    pub fn delta(&self) -> &PolarizationType {
        &self.delta
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.delta.len()
    }

    /// `|H(δ)|`.
    pub fn degree(&self) -> usize {
        self.delta.degree() as usize
    }

    pub fn order(&self) -> u64 {
        self.modulus as u64 * (self.degree() as u64).pow(2)
    }

    fn dims(&self) -> impl Iterator<Item = i64> + '_ {
        self.delta.diag().iter().map(|&d| d as i64)
    }

    fn check_shape(&self, v: &[i64]) -> Result<(), ThetaError> {
        if v.len() != self.rank() {
            return Err(ThetaError::RankMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    pub fn reduce_point(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(self.dims()).map(|(x, d)| x.rem_euclid(d)).collect()
    }

    pub fn reduce(&self, x: &HeisenbergElement) -> Result<HeisenbergElement, ThetaError> {
        self.check_shape(&x.a)?;
        self.check_shape(&x.b)?;
        Ok(HeisenbergElement {
            t: x.t.rem_euclid(self.modulus),
            a: self.reduce_point(&x.a),
            b: self.reduce_point(&x.b),
        })
    }

    /// Exponent of `ζ_M` in `⟨b, a⟩`.
    pub fn pairing(&self, b: &[i64], a: &[i64]) -> i64 {
        let m = self.modulus;
        b.iter()
            .zip(a)
            .zip(self.dims())
            .map(|((bi, ai), d)| (bi * ai).rem_euclid(d) * (m / d))
            .sum::<i64>()
            .rem_euclid(m)
    }

    pub fn identity(&self) -> HeisenbergElement {
        let g = self.rank();
        HeisenbergElement { t: 0, a: vec![0; g], b: vec![0; g] }
    }

    pub fn mul(&self, x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement, ThetaError> {
        let (x, y) = (self.reduce(x)?, self.reduce(y)?);
        let t = x.t + y.t + self.pairing(&y.b, &x.a);
        let a: Vec<i64> = x.a.iter().zip(&y.a).map(|(p, q)| p + q).collect();
        let b: Vec<i64> = x.b.iter().zip(&y.b).map(|(p, q)| p + q).collect();
        self.reduce(&HeisenbergElement { t, a, b })
    }

    pub fn inverse(&self, x: &HeisenbergElement) -> Result<HeisenbergElement, ThetaError> {
        let x = self.reduce(x)?;
        let t = -x.t + self.pairing(&x.b, &x.a);
        let a: Vec<i64> = x.a.iter().map(|v| -v).collect();
        let b: Vec<i64> = x.b.iter().map(|v| -v).collect();
        self.reduce(&HeisenbergElement { t, a, b })
    }

    pub fn pow(&self, x: &HeisenbergElement, n: u64) -> Result<HeisenbergElement, ThetaError> {
        let mut acc = self.identity();
        let mut base = self.reduce(x)?;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn commutator(&self, x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement, ThetaError> {
        let xy = self.mul(x, y)?;
        let xi = self.inverse(x)?;
        let yi = self.inverse(y)?;
        self.mul(&self.mul(&xy, &xi)?, &yi)
    }

    /// Image `−a` in `K̂₂ ≅ H(δ)`.
    pub fn weight(&self, x: &HeisenbergElement) -> Vec<i64> {
        self.reduce_point(&x.a.iter().map(|v| -v).collect::<Vec<_>>())
    }

    /// All of `H(δ)` in index order.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for d in self.dims() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn index_of(&self, x: &[i64]) -> usize {
        self.reduce_point(x).iter().zip(self.dims()).fold(0usize, |acc, (v, d)| acc * d as usize + *v as usize)
    }

    pub fn elements(&self) -> Vec<HeisenbergElement> {
        let pts = self.points();
        let mut out = Vec::with_capacity(self.order() as usize);
        for t in 0..self.modulus {
            for a in &pts {
                for b in &pts {
                    out.push(HeisenbergElement { t, a: a.clone(), b: b.clone() });
                }
            }
        }
        out
    }
}

pub fn heis_mul(
    x: &HeisenbergElement,
    y: &HeisenbergElement,
    delta: &PolarizationType,
    modulus: i64,
) -> Result<HeisenbergElement, ThetaError> {
    HeisenbergGroup::new(delta.clone(), modulus)?.mul(x, y)
}

pub fn heis_inverse(
    x: &HeisenbergElement,
    delta: &PolarizationType,
    modulus: i64,
) -> Result<HeisenbergElement, ThetaError> {
    HeisenbergGroup::new(delta.clone(), modulus)?.inverse(x)
}

/// Result of checking the `M`-th power map on `ℋ(δ, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerMapReport {
    pub order: u64,
    pub kernel_is_everything: bool,
    pub homomorphism: bool,
    pub pairs_checked: u64,
}

const EXHAUSTIVE_ORDER: u64 = 10_000;
const EXHAUSTIVE_PAIRS: u64 = 1_000_000;

/// Checks `g^M = e` for every element and `(gh)^M = g^M h^M` on all pairs,
/// or on a deterministic stride of pairs when there are too many.
pub fn power_map_kernel_check(delta: &PolarizationType, modulus: i64) -> Result<PowerMapReport, ThetaError> {
    let grp = HeisenbergGroup::new(delta.clone(), modulus)?;
    let order = grp.order();
    if order > EXHAUSTIVE_ORDER {
        return Err(ThetaError::TooLarge { size: order, limit: EXHAUSTIVE_ORDER });
    }
    let elems = grp.elements();
    let e = grp.identity();
    let m = modulus as u64;
    let powers: Vec<HeisenbergElement> = elems.iter().map(|g| grp.pow(g, m)).collect::<Result<_, _>>()?;
    let kernel_is_everything = powers.iter().all(|p| *p == e);
    let n = elems.len();
    let stride = if order * order <= EXHAUSTIVE_PAIRS { 1 } else { (order * order / EXHAUSTIVE_PAIRS + 1) as usize };
    let mut homomorphism = true;
    let mut pairs_checked = 0u64;
    let mut k = 0usize;
    while k < n * n {
        let (i, j) = (k / n, (k % n + 7 * (k / n)) % n);
        let lhs = grp.pow(&grp.mul(&elems[i], &elems[j])?, m)?;
        let rhs = grp.mul(&powers[i], &powers[j])?;
        homomorphism &= lhs == rhs;
        pairs_checked += 1;
        k += stride;
    }
    Ok(PowerMapReport { order, kernel_is_everything, homomorphism, pairs_checked })
}

/// A function `H(δ) → ℤ[ζ_M]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VectorWire", into = "VectorWire")]
pub struct SchrodingerVector {
    delta: PolarizationType,
    modulus: i64,
    coeffs: Vec<CyclotomicInteger>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorWire {
    delta: PolarizationType,
    modulus: i64,
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryWire {
    x: Vec<i64>,
    exponents: Vec<u64>,
}

impl TryFrom<VectorWire> for SchrodingerVector {
    type Error = ThetaError;
    fn try_from(w: VectorWire) -> Result<Self, ThetaError> {
        let grp = HeisenbergGroup::new(w.delta, w.modulus)?;
        let mut v = SchrodingerVector::zero(&grp);
        for e in w.entries {
            grp.check_shape(&e.x)?;
            let i = grp.index_of(&e.x);
            let c = CyclotomicInteger::from_exponents(w.modulus as usize, &e.exponents);
            v.coeffs[i] = v.coeffs[i].add(&c);
        }
        Ok(v)
    }
}

impl From<SchrodingerVector> for VectorWire {
    fn from(v: SchrodingerVector) -> Self {
        let grp = v.group();
        let entries = grp
            .points()
            .into_iter()
            .zip(&v.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(x, c)| EntryWire { x, exponents: c.exponents() })
            .collect();
        VectorWire { delta: v.delta, modulus: v.modulus, entries }
    }
}

impl SchrodingerVector {
    pub fn zero(grp: &HeisenbergGroup) -> Self {
        SchrodingerVector {
            delta: grp.delta.clone(),
            modulus: grp.modulus,
            coeffs: vec![CyclotomicInteger::zero(grp.modulus as usize); grp.degree()],
        }
    }

    /// Indicator of the point `x`.
    pub fn basis(grp: &HeisenbergGroup, x: &[i64]) -> Self {
        let mut v = Self::zero(grp);
        v.coeffs[grp.index_of(x)] = CyclotomicInteger::one(grp.modulus as usize);
        v
    }

    pub fn from_coeffs(grp: &HeisenbergGroup, coeffs: Vec<CyclotomicInteger>) -> Result<Self, ThetaError> {
        if coeffs.len() != grp.degree() || coeffs.iter().any(|c| c.modulus() != grp.modulus as usize) {
            return Err(ThetaError::RankMismatch { expected: grp.degree(), found: coeffs.len() });
        }
        Ok(SchrodingerVector { delta: grp.delta.clone(), modulus: grp.modulus, coeffs })
    }

    pub fn group(&self) -> HeisenbergGroup {
        HeisenbergGroup { delta: self.delta.clone(), modulus: self.modulus }
    }

    pub fn coeffs(&self) -> &[CyclotomicInteger] {
        &self.coeffs
    }

    pub fn at(&self, x: &[i64]) -> &CyclotomicInteger {
        &self.coeffs[self.group().index_of(x)]
    }

    pub fn add(&self, o: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        SchrodingerVector { coeffs, ..self.clone() }
    }

    /// Multiplication by `ζ^k`.
    pub fn rotate(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.rotate(k)).collect();
        SchrodingerVector { coeffs, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Points with a nonzero coefficient.
    pub fn support(&self) -> Vec<Vec<i64>> {
        let grp = self.group();
        grp.points().into_iter().zip(&self.coeffs).filter(|(_, c)| !c.is_zero()).map(|(x, _)| x).collect()
    }

    fn key(&self) -> Vec<Vec<i64>> {
        self.coeffs.iter().map(|c| c.reduced()).collect()
    }

    /// Canonical representative of `μ_M·self`: the first nonzero coefficient
    /// becomes `1` when it is a root of unity, otherwise the smallest key wins.
    fn normalized(&self) -> (Vec<Vec<i64>>, SchrodingerVector) {
        if let Some(k) = self.coeffs.iter().find(|c| !c.is_zero()).and_then(|c| c.root_exponent()) {
            let r = self.rotate(-k);
            return (r.key(), r);
        }
        (0..self.modulus)
            .map(|k| {
                let r = self.rotate(k);
                (r.key(), r)
            })
            .min_by(|x, y| x.0.cmp(&y.0))
            .expect("modulus is positive")
    }
}

/// `(S_g f)(x) = ζ^t · ζ^{⟨b,x⟩} · f(x + a)`.
pub fn schrodinger_action(g: &HeisenbergElement, v: &SchrodingerVector) -> Result<SchrodingerVector, ThetaError> {
    let grp = v.group();
    let g = grp.reduce(g)?;
    let coeffs = grp
        .points()
        .iter()
        .map(|x| {
            let shifted: Vec<i64> = x.iter().zip(&g.a).map(|(p, q)| p + q).collect();
            v.at(&shifted).rotate(g.t + grp.pairing(&g.b, x))
        })
        .collect();
    Ok(SchrodingerVector { coeffs, ..v.clone() })
}

/// Character operator `T_b = S_{(0,0,b)}`.
fn character_op(grp: &HeisenbergGroup, b: &[i64], v: &SchrodingerVector) -> Result<SchrodingerVector, ThetaError> {
    let g = HeisenbergElement { t: 0, a: vec![0; grp.rank()], b: b.to_vec() };
    schrodinger_action(&g, v)
}

/// Eigenspace of the character subgroup `K₂ = {(0,0,b)}` for the character
/// indexed by `character ∈ H(δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eigenspace {
    pub character: Vec<i64>,
    pub basis: Vec<SchrodingerVector>,
}

/// `|K₂|·P_α = Σ_b ζ^{−⟨b,α⟩} T_b`.
fn scaled_projector(grp: &HeisenbergGroup, alpha: &[i64], v: &SchrodingerVector) -> Result<SchrodingerVector, ThetaError> {
    let mut acc = SchrodingerVector::zero(grp);
    for b in grp.points() {
        let tv = character_op(grp, &b, v)?;
        acc = acc.add(&tv.rotate(-grp.pairing(&b, alpha)));
    }
    Ok(acc)
}

/// Removes the integer content of all coefficients.
fn primitive(v: &SchrodingerVector) -> SchrodingerVector {
    let m = v.modulus as usize;
    let reduced: Vec<Vec<i64>> = v.coeffs.iter().map(|c| c.reduced()).collect();
    let g = reduced.iter().flatten().fold(0i64, |acc, &x| num::integer::gcd(acc, x));
    if g <= 1 {
        return v.clone();
    }
    let coeffs = reduced
        .iter()
        .map(|r| CyclotomicInteger::from_coeffs(m, &r.iter().map(|x| x / g).collect::<Vec<_>>()))
        .collect();
    SchrodingerVector { coeffs, ..v.clone() }
}

/// Decomposes the Schrödinger model into `K₂`-eigenspaces, one per character.
/// Bases are the primitive images of the point indicators under the
/// projectors.
pub fn kw_decompose(delta: &PolarizationType, modulus: i64) -> Result<Vec<Eigenspace>, ThetaError> {
    let grp = HeisenbergGroup::new(delta.clone(), modulus)?;
    let pts = grp.points();
    let mut out = Vec::new();
    for alpha in &pts {
        let mut basis: Vec<SchrodingerVector> = Vec::new();
        for x in &pts {
            let img = scaled_projector(&grp, alpha, &SchrodingerVector::basis(&grp, x))?;
            if img.is_zero() {
                continue;
            }
            let img = primitive(&img);
            let key = img.normalized().0;
            if !basis.iter().any(|b| b.normalized().0 == key) {
                basis.push(img);
            }
        }
        if !basis.is_empty() {
            out.push(Eigenspace { character: alpha.clone(), basis });
        }
    }
    Ok(out)
}

/// If `v` is a nonzero `K₂`-eigenvector, its character.
pub fn eigencharacter(v: &SchrodingerVector) -> Option<Vec<i64>> {
    let grp = v.group();
    if v.is_zero() {
        return None;
    }
    grp.points().into_iter().find(|alpha| {
        grp.points().iter().all(|b| {
            character_op(&grp, b, v).map(|tv| tv == v.rotate(grp.pairing(b, alpha))).unwrap_or(false)
        })
    })
}

/// Every `S_g` carries `V_α` into `V_{α + w(g)}`, and the translations act
/// transitively on the characters.
pub fn kw_permutation_check(delta: &PolarizationType, modulus: i64) -> Result<bool, ThetaError> {
    let grp = HeisenbergGroup::new(delta.clone(), modulus)?;
    let spaces = kw_decompose(delta, modulus)?;
    if spaces.len() != grp.degree() {
        return Ok(false);
    }
    let mut reached = BTreeSet::new();
    let base = &spaces[0].character;
    for g in grp.elements() {
        let w = grp.weight(&g);
        for sp in &spaces {
            let target = grp.reduce_point(&sp.character.iter().zip(&w).map(|(p, q)| p + q).collect::<Vec<_>>());
            for v in &sp.basis {
                if eigencharacter(&schrodinger_action(&g, v)?) != Some(target.clone()) {
                    return Ok(false);
                }
            }
        }
        reached.insert(grp.reduce_point(&base.iter().zip(&w).map(|(p, q)| p + q).collect::<Vec<_>>()));
    }
    Ok(reached.len() == spaces.len())
}

/// `T_b S_g = ζ^{⟨b, w(g)⟩} S_g T_b` on every basis vector, for every `g`
/// and every `b`.
pub fn heisenberg_relation_check(delta: &PolarizationType, modulus: i64) -> Result<bool, ThetaError> {
    let grp = HeisenbergGroup::new(delta.clone(), modulus)?;
    let pts = grp.points();
    for g in grp.elements() {
        let w = grp.weight(&g);
        for b in &pts {
            let chi = grp.pairing(b, &w);
            for x in &pts {
                let e = SchrodingerVector::basis(&grp, x);
                let lhs = character_op(&grp, b, &schrodinger_action(&g, &e)?)?;
                let rhs = schrodinger_action(&g, &character_op(&grp, b, &e)?)?.rotate(chi);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `Σ_α S_{lift(α)} ϑ₀` where `ϑ₀` is the first basis vector of the
/// eigenspace of `theta0_index`.
pub fn balanced_sections(
    delta: &PolarizationType,
    modulus: i64,
    theta0_index: &[i64],
    lifts: &[(Vec<i64>, HeisenbergElement)],
) -> Result<SchrodingerVector, ThetaError> {
    let grp = HeisenbergGroup::new(delta.clone(), modulus)?;
    grp.check_shape(theta0_index)?;
    let target = grp.reduce_point(theta0_index);
    let theta0 = kw_decompose(delta, modulus)?
        .into_iter()
        .find(|sp| sp.character == target)
        .map(|sp| sp.basis[0].clone())
        .ok_or_else(|| ThetaError::InconsistentData(format!("no eigenspace for {target:?}")))?;
    balanced_sum(&theta0, lifts)
}

/// `Σ_α S_{lift(α)} ϑ₀` over all characters `α`. Each lift must satisfy
/// `w(lift(α)) = α`, and every character needs exactly one lift.
pub fn balanced_sum(
    theta0: &SchrodingerVector,
    lifts: &[(Vec<i64>, HeisenbergElement)],
) -> Result<SchrodingerVector, ThetaError> {
    let grp = theta0.group();
    if eigencharacter(theta0).is_none() {
        return Err(ThetaError::InconsistentData("ϑ₀ is not a nonzero K₂-eigenvector".into()));
    }
    let mut by_char: BTreeMap<Vec<i64>, &HeisenbergElement> = BTreeMap::new();
    for (alpha, g) in lifts {
        grp.check_shape(alpha)?;
        let alpha = grp.reduce_point(alpha);
        if grp.weight(&grp.reduce(g)?) != alpha {
            return Err(ThetaError::BadLift(alpha));
        }
        if by_char.insert(alpha.clone(), g).is_some() {
            return Err(ThetaError::BadLift(alpha));
        }
    }
    if let Some(missing) = grp.points().into_iter().find(|a| !by_char.contains_key(a)) {
        return Err(ThetaError::BadLift(missing));
    }
    let mut acc = SchrodingerVector::zero(&grp);
    for g in by_char.values() {
        acc = acc.add(&schrodinger_action(g, theta0)?);
    }
    Ok(acc)
}

/// Default bound on `|H(δ)|` for [`enumerate_balanced_set`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;
const ENUMERATION_CAP: u64 = 1_000_000;

/// All balanced sections over every choice of lifts and every eigenbasis
/// vector `ϑ₀`, up to a global factor in `μ_M`.
pub fn enumerate_balanced_set(
    delta: &PolarizationType,
    modulus: i64,
    bound: usize,
) -> Result<Vec<SchrodingerVector>, ThetaError> {
    let grp = HeisenbergGroup::new(delta.clone(), modulus)?;
    let d = grp.degree();
    if d > bound {
        return Err(ThetaError::TooLarge { size: d as u64, limit: bound as u64 });
    }
    let spaces = kw_decompose(delta, modulus)?;
    let pts = grp.points();
    let mut found: BTreeMap<Vec<Vec<i64>>, SchrodingerVector> = BTreeMap::new();
    for sp in &spaces {
        for theta0 in &sp.basis {
            // the lifts of each character can be chosen independently
            let mut options: Vec<Vec<SchrodingerVector>> = Vec::new();
            for alpha in &pts {
                let mut seen: BTreeMap<Vec<Vec<i64>>, SchrodingerVector> = BTreeMap::new();
                let a: Vec<i64> = alpha.iter().map(|v| -v).collect();
                for t in 0..modulus {
                    for b in &pts {
                        let g = HeisenbergElement { t, a: a.clone(), b: b.clone() };
                        let img = schrodinger_action(&g, theta0)?;
                        seen.entry(img.key()).or_insert(img);
                    }
                }
                options.push(seen.into_values().collect());
            }
            let total = options.iter().try_fold(1u64, |acc, o| acc.checked_mul(o.len() as u64));
            match total {
                Some(n) if n <= ENUMERATION_CAP => {}
                _ => return Err(ThetaError::TooLarge { size: total.unwrap_or(u64::MAX), limit: ENUMERATION_CAP }),
            }
            let mut partial = vec![SchrodingerVector::zero(&grp)];
            for opts in &options {
                partial = partial.iter().flat_map(|p| opts.iter().map(move |o| p.add(o))).collect();
            }
            for s in partial {
                let (key, rep) = s.normalized();
                found.entry(key).or_insert(rep);
            }
        }
    }
    Ok(found.into_values().collect())
}
