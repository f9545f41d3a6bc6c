//! Serde adapters writing big integers as decimal strings.

use num_bigint::BigInt;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

fn parse<'de, D: Deserializer<'de>>(s: &str) -> Result<BigInt, D::Error> {
    s.parse::<BigInt>()
        .map_err(|e| D::Error::custom(format!("bad integer {s:?}: {e}")))
}

pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        parse::<D>(&s)
    }
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse::<D>(s)).collect()
    }
}

pub mod mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| r.iter().map(|s| parse::<D>(s)).collect())
            .collect()
    }
}

pub mod pairs {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[(BigInt, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<[String; 2]> = m
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(BigInt, BigInt)>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| Ok((parse::<D>(a)?, parse::<D>(b)?)))
            .collect()
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        match Option::<String>::deserialize(d)? {
            Some(s) => Ok(Some(parse::<D>(&s)?)),
            None => Ok(None),
        }
    }
}
