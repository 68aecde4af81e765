//! Finite Heisenberg groups, their Schrödinger models over cyclotomic
//! integers, balanced theta sections and degeneration exponents.

mod cyclotomic;
mod degeneration;
mod heisenberg;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::monoid::MonoidError;
use crate::pwl::PwlError;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicInteger};
pub use degeneration::{
    default_twist_symmetric, degen_exponents, mod_two, quadratic_relation_holds, section_valuation_profile,
    twist_data, twist_relation_holds, DegenExponents, DegenerationData, ProfileEntry, TwistExponents,
};
pub use heisenberg::{
    balanced_sections, balanced_sum, eigencharacter, enumerate_balanced_set, heis_inverse, heis_mul, heisenberg_relation_check,
    kw_decompose, kw_permutation_check, power_map_kernel_check, schrodinger_action, Eigenspace, HeisenbergElement,
    HeisenbergGroup, PowerMapReport, SchrodingerVector, DEFAULT_ENUMERATION_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("modulus {modulus} is not a positive multiple of {required}")]
    BadModulus { modulus: i64, required: i64 },
    #[error("lift for character {0:?} is missing, repeated or has the wrong image")]
    BadLift(Vec<i64>),
    #[error("size {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error("inconsistent data: {0}")]
    InconsistentData(String),
    #[error("bad twist pair: {0}")]
    BadTwistPair(String),
    #[error("section vanishes on component {0:?}")]
    EmptyComponent(Vec<i64>),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("minimum not certified inside window {0}")]
    WindowTooSmall(u32),
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error(transparent)]
    Lattice(#[from] LinalgError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

impl ThetaError {
    pub fn code(&self) -> &'static str {
        match self {
            ThetaError::BadModulus { .. } => "BadModulus",
            ThetaError::BadLift(_) => "BadLift",
            ThetaError::TooLarge { .. } => "TooLarge",
            ThetaError::InconsistentData(_) => "InconsistentData",
            ThetaError::BadTwistPair(_) => "BadTwistPair",
            ThetaError::EmptyComponent(_) => "EmptyComponent",
            ThetaError::RankMismatch { .. } => "RankMismatch",
            ThetaError::WindowTooSmall(_) => "WindowTooSmall",
            ThetaError::Pwl(e) => e.code(),
            ThetaError::Lattice(e) => e.code(),
            ThetaError::Monoid(e) => e.code(),
        }
    }
}

#[cfg(test)]
mod tests;
