//! Lossless JSON encodings for exact values.
//!
//! Integers inside the IEEE-754 safe range (|n| < 2^53) are written as JSON
//! numbers, larger ones as decimal strings. Rationals are objects
//! `{"num": "...", "den": "..."}` with string components. Deserialization
//! accepts either integer form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const MAX_SAFE: i64 = (1 << 53) - 1;

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Str(String),
}

impl IntRepr {
    fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Num(n) => Ok(BigInt::from(n)),
            IntRepr::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|e| E::custom(format!("bad integer {s:?}: {e}"))),
        }
    }
}

/// A `BigInt` wrapper carrying the JSON encoding above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        int::deserialize(d).map(JsonInt)
    }
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(n) if n.abs() <= MAX_SAFE => s.serialize_i64(n),
            _ => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        IntRepr::deserialize(d)?.into_bigint()
    }
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| JsonInt(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<JsonInt>::deserialize(d)?
            .into_iter()
            .map(|j| j.0)
            .collect())
    }
}

pub mod int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter()
                .map(|row| row.iter().cloned().map(JsonInt).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Vec<JsonInt>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(|j| j.0).collect())
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: String,
    den: String,
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RatRepr {
            num: v.numer().to_string(),
            den: v.denom().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let r = RatRepr::deserialize(d)?;
        let num: BigInt = r.num.trim().parse().map_err(D::Error::custom)?;
        let den: BigInt = r.den.trim().parse().map_err(D::Error::custom)?;
        if den.is_negative() || den == BigInt::from(0) {
            return Err(D::Error::custom("rational denominator must be positive"));
        }
        Ok(BigRational::new(num, den))
    }
}
