//! Serde adapters writing big integers as plain JSON numbers when they fit
//! in 64 bits and as decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

fn to_repr(x: &BigInt) -> Repr {
    match x.to_i64() {
        Some(v) => Repr::Signed(v),
        None => Repr::Text(x.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigInt, E> {
    match r {
        Repr::Signed(v) => Ok(BigInt::from(v)),
        Repr::Unsigned(v) => Ok(BigInt::from(v)),
        Repr::Text(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| E::custom(format!("bad integer {s:?}: {e}"))),
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_repr(x).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_repr(Repr::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(from_repr::<D::Error>)
            .collect()
    }
}

pub mod rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        rows.iter()
            .map(|r| r.iter().map(to_repr).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw = Vec::<Vec<Repr>>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for r in raw {
            out.push(
                r.into_iter()
                    .map(from_repr::<D::Error>)
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        if let Some(first) = out.first() {
            if out.iter().any(|r| r.len() != first.len()) {
                return Err(D::Error::custom("ragged matrix rows"));
            }
        }
        Ok(out)
    }
}
