//! Exact rational scalars and their serialized form.
//!
//! Every lattice-facing quantity in this crate (weights, exponents, ratios) is
//! an arbitrary-precision rational; floating point appears only in the
//! numerical modules.  Serialized output never reduces an exact quantity to a
//! bare float: rationals are written as `{"num", "den", "decimal"}` where the
//! decimal string is a rendering, not the value of record.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exact rational scalar used throughout the lattice-side API.
pub type Rat = BigRational;

/// Build `n / d` (reduced).  Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Build the integer `n` as a rational.
pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// `(1/3)^k` exactly.
pub fn pow_third(k: u32) -> Rat {
    BigRational::new(BigInt::one(), BigInt::from(3u32).pow(k))
}

/// Smallest integer `m` with `2m >= p`, i.e. `ceil(p/2)`, for `p > 0`.
pub fn ceil_half(p: &Rat) -> u64 {
    assert!(p.is_positive(), "ceil_half needs a positive argument");
    let half = p / rint(2);
    half.ceil()
        .to_integer()
        .to_u64()
        .expect("exponent does not fit in u64")
}

/// Lossy conversion for the numerical modules.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Decimal rendering with `digits` places, round-half-away-from-zero.
/// This is a display form; the exact value lives in `num`/`den`.
pub fn decimal_string(r: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let abs = rounded.magnitude().to_string();
    let digits = digits as usize;
    let padded = if abs.len() <= digits {
        format!("0.{}{}", "0".repeat(digits - abs.len()), abs)
    } else {
        let (int_part, frac_part) = abs.split_at(abs.len() - digits);
        format!("{int_part}.{frac_part}")
    };
    if negative {
        format!("-{padded}")
    } else {
        padded
    }
}

/// Serialized form of a [`Rat`]: exact numerator/denominator strings plus a
/// six-place decimal rendering for human readers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatRepr {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&Rat> for RatRepr {
    fn from(r: &Rat) -> Self {
        RatRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: decimal_string(r, 6),
        }
    }
}

impl RatRepr {
    /// Parse back to the exact value; the decimal field is ignored.
    pub fn to_rat(&self) -> Result<Rat, String> {
        let num: BigInt = self.num.parse().map_err(|e| format!("bad numerator: {e}"))?;
        let den: BigInt = self.den.parse().map_err(|e| format!("bad denominator: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(num, den))
    }
}

impl fmt::Display for RatRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == "1" {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Compact display form: `n` or `n/d`.
pub fn display(r: &Rat) -> String {
    RatRepr::from(r).to_string()
}

/// Serde adapter: serialize a `Rat` field through [`RatRepr`].
pub mod rat_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        RatRepr::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let repr = RatRepr::deserialize(d)?;
        repr.to_rat().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rat>` fields.
pub mod opt_rat_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(RatRepr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let repr = Option::<RatRepr>::deserialize(d)?;
        repr.map(|r| r.to_rat().map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for `Vec<Rat>` fields.
pub mod vec_rat_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(RatRepr::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let reprs = Vec::<RatRepr>::deserialize(d)?;
        reprs
            .iter()
            .map(|r| r.to_rat().map_err(serde::de::Error::custom))
            .collect()
    }
}
