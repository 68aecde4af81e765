//! Exponent data of degenerating theta functions: the quadratic function
//! `a(λ) = Q(λ)`, the bilinear pairing `b(λ, α) = λᵀ·2Q·𝔡⁻¹·α`, the sign
//! twist attached to a skew form, and valuation profiles of sections.

use num::{Integer, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::heisenberg::SchrodingerVector;
use super::ThetaError;
use crate::arith::{self, floor_q, qvec, Int, IVec, Rat};
use crate::linalg::{smith_normal_form, IntegerMatrix, PolarizationType, RationalMatrix};
use crate::monoid::fourier_indices;
use crate::pwl::PwAffineFunction;

/// `Q` (so that `a(λ) = λᵀQλ`), the dual map `φ̌ = 𝔡⁻¹·2Q`, the type `𝔡`,
/// an integral skew form and a symmetric integral lift of it mod 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationData {
    pub quadratic: RationalMatrix,
    pub phi_check: IntegerMatrix,
    pub polarization: PolarizationType,
    pub twist_skew: IntegerMatrix,
    pub twist_symmetric: IntegerMatrix,
}

/// Reduction of `x` into `[0, 2)`.
pub fn mod_two(x: &Rat) -> Rat {
    let two = Rat::from_integer(Int::from(2));
    x - &two * Rat::from_integer(floor_q(&(x / &two)))
}

/// `S_ξ mod 2` lifted to `{0, 1}` with zero diagonal.
pub fn default_twist_symmetric(skew: &IntegerMatrix) -> IntegerMatrix {
    let two = Int::from(2);
    IntegerMatrix::from_fn(skew.rows(), skew.cols(), |i, j| {
        if i == j {
            Int::zero()
        } else {
            skew[(i, j)].mod_floor(&two)
        }
    })
}

impl DegenerationData {
    pub fn rank(&self) -> usize {
        self.quadratic.rows()
    }

    fn type_inverse(&self) -> RationalMatrix {
        let inv: Vec<Rat> = self.polarization.diag().iter().map(|&d| Rat::new(1.into(), d.into())).collect();
        RationalMatrix::diag(&inv)
    }

    fn check_vec(&self, v: &[Int]) -> Result<(), ThetaError> {
        if v.len() != self.rank() {
            return Err(ThetaError::RankMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// `Q` symmetric and `𝔡·φ̌ = 2Q`.
    pub fn validate(&self) -> Result<(), ThetaError> {
        let g = self.rank();
        let shapes = [
            (self.quadratic.cols(), "quadratic"),
            (self.phi_check.rows(), "phi_check"),
            (self.phi_check.cols(), "phi_check"),
            (self.polarization.len(), "polarization"),
        ];
        if let Some((found, _)) = shapes.iter().find(|(n, _)| *n != g) {
            return Err(ThetaError::RankMismatch { expected: g, found: *found });
        }
        if !self.quadratic.is_symmetric() {
            return Err(ThetaError::InconsistentData("Q is not symmetric".into()));
        }
        let two_q = self.quadratic.scale(&Rat::from_integer(Int::from(2)));
        if self.polarization.matrix().mul(&self.phi_check).to_rational() != two_q {
            return Err(ThetaError::InconsistentData("𝔡·φ̌ differs from 2Q".into()));
        }
        Ok(())
    }

    /// Skew form skew, symmetric lift symmetric, and the two agree mod 2.
    pub fn validate_twist(&self) -> Result<(), ThetaError> {
        let g = self.rank();
        for m in [&self.twist_skew, &self.twist_symmetric] {
            if m.rows() != g || m.cols() != g {
                return Err(ThetaError::RankMismatch { expected: g, found: m.rows() });
            }
        }
        if !self.twist_skew.is_skew() {
            return Err(ThetaError::BadTwistPair("skew form is not alternating".into()));
        }
        if !self.twist_symmetric.is_symmetric() {
            return Err(ThetaError::BadTwistPair("lift is not symmetric".into()));
        }
        let two = Int::from(2);
        for i in 0..g {
            for j in 0..g {
                let d = &self.twist_skew[(i, j)] - &self.twist_symmetric[(i, j)];
                if !d.is_multiple_of(&two) {
                    return Err(ThetaError::BadTwistPair(format!("entries ({i},{j}) differ mod 2")));
                }
            }
        }
        Ok(())
    }

    /// `a(λ) = λᵀQλ`.
    pub fn a_exponent(&self, lambda: &[Int]) -> Rat {
        self.quadratic.quad(&qvec(lambda))
    }

    /// `b(λ, α) = λᵀ·2Q·𝔡⁻¹·α`.
    pub fn b_exponent(&self, lambda: &[Int], alpha: &[Int]) -> Rat {
        let m = self.quadratic.mul(&self.type_inverse()).scale(&Rat::from_integer(Int::from(2)));
        m.bilinear(&qvec(lambda), &qvec(alpha))
    }

    /// `φ(μ) = 𝔡·μ`.
    pub fn phi(&self, mu: &[Int]) -> IVec {
        self.polarization.matrix().mul_vec(mu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenExponents {
    #[serde(with = "arith::rat_str")]
    pub a_exp: Rat,
    #[serde(with = "arith::rat_str")]
    pub b_exp: Rat,
}

pub fn degen_exponents(data: &DegenerationData, lambda: &[Int], alpha: &[Int]) -> Result<DegenExponents, ThetaError> {
    data.validate()?;
    data.check_vec(lambda)?;
    data.check_vec(alpha)?;
    Ok(DegenExponents { a_exp: data.a_exponent(lambda), b_exp: data.b_exponent(lambda, alpha) })
}

/// Exponents in `[0, 2)` of `−1`: the twist is `exp(πi·exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistExponents {
    #[serde(with = "arith::rat_str")]
    pub a_twist: Rat,
    #[serde(with = "arith::rat_str")]
    pub b_twist: Rat,
}

impl DegenerationData {
    /// `−½·λᵀS′λ mod 2`.
    pub fn a_twist(&self, lambda: &[Int]) -> Rat {
        let q = self.twist_symmetric.to_rational().quad(&qvec(lambda));
        mod_two(&(-q / Rat::from_integer(Int::from(2))))
    }

    /// `−λᵀS_ξ𝔡⁻¹α mod 2`.
    pub fn b_twist(&self, lambda: &[Int], alpha: &[Int]) -> Rat {
        let m = self.twist_skew.to_rational().mul(&self.type_inverse());
        mod_two(&-m.bilinear(&qvec(lambda), &qvec(alpha)))
    }
}

pub fn twist_data(data: &DegenerationData, lambda: &[Int], alpha: &[Int]) -> Result<TwistExponents, ThetaError> {
    data.validate_twist()?;
    data.check_vec(lambda)?;
    data.check_vec(alpha)?;
    if data.polarization.len() != data.rank() {
        return Err(ThetaError::RankMismatch { expected: data.rank(), found: data.polarization.len() });
    }
    Ok(TwistExponents { a_twist: data.a_twist(lambda), b_twist: data.b_twist(lambda, alpha) })
}

/// `a(λ+μ) = b(λ, φμ) + a(λ) + a(μ)`.
pub fn quadratic_relation_holds(data: &DegenerationData, lambda: &[Int], mu: &[Int]) -> bool {
    let sum: IVec = lambda.iter().zip(mu).map(|(p, q)| p + q).collect();
    data.a_exponent(&sum) == data.b_exponent(lambda, &data.phi(mu)) + data.a_exponent(lambda) + data.a_exponent(mu)
}

/// The same relation for the twist, modulo 2.
pub fn twist_relation_holds(data: &DegenerationData, lambda: &[Int], mu: &[Int]) -> bool {
    let sum: IVec = lambda.iter().zip(mu).map(|(p, q)| p + q).collect();
    let lhs = data.a_twist(&sum);
    let rhs = mod_two(&(data.b_twist(lambda, &data.phi(mu)) + data.a_twist(lambda) + data.a_twist(mu)));
    lhs == rhs
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    #[serde(with = "arith::int_vec_num")]
    pub class: IVec,
    pub index: Vec<i64>,
    #[serde(with = "arith::rat_str")]
    pub exponent: Rat,
}

/// For each class `α ∈ X/φ(Y)`, the least value of `φ` on `α + φ(Y)`,
/// searched over `λ ∈ [−window, window]^g` and rejected when the minimum
/// is only reached on the boundary of the box.
pub fn section_valuation_profile(
    section: &SchrodingerVector,
    phi: &PwAffineFunction,
    phi_map: &IntegerMatrix,
    window: u32,
) -> Result<Vec<ProfileEntry>, ThetaError> {
    let r = phi.rank();
    if phi.payload_rank() != 1 {
        return Err(ThetaError::RankMismatch { expected: 1, found: phi.payload_rank() });
    }
    if window == 0 {
        return Err(ThetaError::WindowTooSmall(window));
    }
    let (reps, ptype) = fourier_indices(r, phi_map)?;
    let grp = section.group();
    // drop leading unit factors on both sides
    let full = ptype.diag();
    let target = grp.delta().diag();
    let nontrivial = |v: &[u64]| v.iter().copied().filter(|&d| d != 1).collect::<Vec<_>>();
    let aligned = target.len() <= full.len() && nontrivial(full) == nontrivial(target);
    if !aligned {
        return Err(ThetaError::InconsistentData(format!(
            "section type {:?} does not match X/φ(Y) of type {:?}",
            target, full
        )));
    }
    let (_, u, _) = smith_normal_form(phi_map);
    let skip = full.len() - target.len();
    let index_of = |x: &IVec| -> Vec<i64> {
        let ux = u.mul_vec(x);
        ux[skip..]
            .iter()
            .zip(target)
            .map(|(v, &d)| v.mod_floor(&Int::from(d)).to_i64().expect("small residue"))
            .collect()
    };
    let g = phi_map.cols();
    let w = window as i64;
    let mut box_pts: Vec<(Vec<i64>, bool)> = vec![(vec![], false)];
    for _ in 0..g {
        box_pts = box_pts
            .into_iter()
            .flat_map(|(p, edge)| {
                (-w..=w).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    (q, edge || c.abs() == w)
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for alpha in reps {
        let index = index_of(&alpha);
        if section.at(&index).is_zero() {
            return Err(ThetaError::EmptyComponent(index));
        }
        let mut inner: Option<Rat> = None;
        let mut edge: Option<Rat> = None;
        for (lam, on_edge) in &box_pts {
            let lam: IVec = lam.iter().map(|&c| Int::from(c)).collect();
            let x: IVec = alpha.iter().zip(phi_map.mul_vec(&lam)).map(|(p, q)| p + q).collect();
            let val = phi.eval_i(&x).remove(0);
            let slot = if *on_edge { &mut edge } else { &mut inner };
            if slot.as_ref().is_none_or(|m| val < *m) {
                *slot = Some(val);
            }
        }
        let best = match (inner, edge) {
            (Some(i), Some(e)) if i <= e => i,
            (Some(i), None) => i,
            _ => return Err(ThetaError::WindowTooSmall(window)),
        };
        out.push(ProfileEntry { class: alpha, index, exponent: best });
    }
    Ok(out)
}
