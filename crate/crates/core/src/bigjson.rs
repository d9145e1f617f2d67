//! Arbitrary-precision integers as plain JSON numbers.

use num_bigint::BigInt;
use serde::{de::Error as _, ser::Error as _, Deserialize, Deserializer, Serialize, Serializer};

pub(crate) fn to_number(n: &BigInt) -> Result<serde_json::Number, String> {
    n.to_string().parse::<serde_json::Number>().map_err(|e| e.to_string())
}

pub(crate) fn from_number(n: &serde_json::Number) -> Result<BigInt, String> {
    n.to_string()
        .parse::<BigInt>()
        .map_err(|_| format!("{n} is not an integer"))
}

pub(crate) fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_number(n).map_err(S::Error::custom)?.serialize(s)
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_number(&serde_json::Number::deserialize(d)?).map_err(D::Error::custom)
}

pub(crate) mod vec {
    use super::*;

    pub(crate) fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(to_number)
            .collect::<Result<Vec<_>, _>>()
            .map_err(S::Error::custom)?
            .serialize(s)
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<serde_json::Number>::deserialize(d)?
            .iter()
            .map(from_number)
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)
    }
}

pub(crate) mod matrix {
    use super::*;

    pub(crate) fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(to_number).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(S::Error::custom)?
            .serialize(s)
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<serde_json::Number>>::deserialize(d)?
            .iter()
            .map(|row| row.iter().map(from_number).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)
    }
}
