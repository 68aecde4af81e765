//! Scalar helpers shared by every module: integer/rational shorthands,
//! the `"p/q"` string format, and small vector utilities.

use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Integer lattice point.
pub type IVec = Vec<Int>;
/// Rational point.
pub type QVec = Vec<Rat>;

#[inline]
pub fn int(v: i64) -> Int {
    Int::from(v)
}

#[inline]
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

#[inline]
pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn qvec(v: &[Int]) -> QVec {
    v.iter().map(rat_int).collect()
}

/// Rational vector back to integers, if every entry is integral.
pub fn to_ivec(v: &[Rat]) -> Option<IVec> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

pub fn dot_q(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_i(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub_i(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_i(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Floor of a rational as an integer.
pub fn floor_q(x: &Rat) -> Int {
    x.floor().to_integer()
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
pub fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(it: I) -> Int {
    it.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// `a mod m` reduced into `[0, |m|)`.
pub fn modp(a: &Int, m: &Int) -> Int {
    a.mod_floor(&m.abs())
}

/// `a mod m` for small moduli.
pub fn mod_i64(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| err())?;
            let d: Int = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: Int = t.parse().map_err(|_| err())?;
            Ok(Rat::from_integer(n))
        }
    }
}

pub fn is_positive_int(x: &Int) -> bool {
    x.sign() == Sign::Plus
}

/// Best-effort conversion used by the floating point module and error messages.
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_one() -> Rat {
    Rat::one()
}

// ---------------------------------------------------------------------------
// serde: rationals and integers as strings, accepting JSON numbers on input.

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        parse_rat(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat::from_integer(Int::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat::from_integer(Int::from(v)))
    }
}

/// Serde wrapper writing a rational as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatStr(pub Rat);

/// Serde wrapper writing an integer as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntStr(pub Int);

impl serde::Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

impl<'de> serde::Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RatVisitor).map(RatStr)
    }
}

impl serde::Serialize for IntStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for IntStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = d.deserialize_any(RatVisitor)?;
        if r.is_integer() {
            Ok(IntStr(r.to_integer()))
        } else {
            Err(de::Error::custom(format!("expected an integer, got {}", fmt_rat(&r))))
        }
    }
}

macro_rules! codec {
    ($name:ident, $ty:ty, $wire:ty, $to:expr, $from:expr) => {
        pub mod $name {
            use super::*;
            use serde::{Deserialize, Serialize};

            pub fn serialize<S: Serializer>(v: &$ty, s: S) -> Result<S::Ok, S::Error> {
                let w: $wire = ($to)(v);
                w.serialize(s)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                let w = <$wire>::deserialize(d)?;
                Ok(($from)(w))
            }
        }
    };
}

codec!(rat_str, Rat, RatStr, |x: &Rat| RatStr(x.clone()), |w: RatStr| w.0);
codec!(int_str, Int, IntStr, |x: &Int| IntStr(x.clone()), |w: IntStr| w.0);
codec!(
    rat_vec,
    Vec<Rat>,
    Vec<RatStr>,
    |v: &Vec<Rat>| v.iter().cloned().map(RatStr).collect::<Vec<_>>(),
    |w: Vec<RatStr>| w.into_iter().map(|x| x.0).collect()
);
codec!(
    int_vec,
    Vec<Int>,
    Vec<IntStr>,
    |v: &Vec<Int>| v.iter().cloned().map(IntStr).collect::<Vec<_>>(),
    |w: Vec<IntStr>| w.into_iter().map(|x| x.0).collect()
);
codec!(
    rat_vec_vec,
    Vec<Vec<Rat>>,
    Vec<Vec<RatStr>>,
    |v: &Vec<Vec<Rat>>| v
        .iter()
        .map(|r| r.iter().cloned().map(RatStr).collect())
        .collect::<Vec<Vec<_>>>(),
    |w: Vec<Vec<RatStr>>| w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect()
);
codec!(
    int_vec_vec,
    Vec<Vec<Int>>,
    Vec<Vec<IntStr>>,
    |v: &Vec<Vec<Int>>| v
        .iter()
        .map(|r| r.iter().cloned().map(IntStr).collect())
        .collect::<Vec<Vec<_>>>(),
    |w: Vec<Vec<IntStr>>| w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect()
);

/// Serde wrapper writing a small integer as a JSON number (falling back to a
/// string when it does not fit in `i64`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntNum(pub Int);

impl serde::Serialize for IntNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> serde::Deserialize<'de> for IntNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        <IntStr as serde::Deserialize>::deserialize(d).map(|x| IntNum(x.0))
    }
}

codec!(
    int_vec_num,
    Vec<Int>,
    Vec<IntNum>,
    |v: &Vec<Int>| v.iter().cloned().map(IntNum).collect::<Vec<_>>(),
    |w: Vec<IntNum>| w.into_iter().map(|x| x.0).collect()
);
codec!(
    int_vec_vec_num,
    Vec<Vec<Int>>,
    Vec<Vec<IntNum>>,
    |v: &Vec<Vec<Int>>| v
        .iter()
        .map(|r| r.iter().cloned().map(IntNum).collect())
        .collect::<Vec<Vec<_>>>(),
    |w: Vec<Vec<IntNum>>| w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect()
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4, 1));
        assert_eq!(parse_rat(" 2/-4 ").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(-6, 4)), "-3/2");
        assert_eq!(fmt_rat(&rat(8, 4)), "2");
    }

    #[test]
    fn xgcd_sign() {
        let (g, s, t) = xgcd(&int(-4), &int(6));
        assert_eq!(g, int(2));
        assert_eq!(s * int(-4) + t * int(6), int(2));
    }
}
