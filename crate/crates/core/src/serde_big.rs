//! Serde adapters that write integers and rationals as decimal strings so
//! JSON consumers never lose precision.

use num::{BigInt, BigRational};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

fn parse_int<E: serde::de::Error>(s: &str) -> Result<BigInt, E> {
    s.parse::<BigInt>()
        .map_err(|e| E::custom(format!("invalid integer {s:?}: {e}")))
}

fn parse_rational<E: serde::de::Error>(s: &str) -> Result<BigRational, E> {
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_int::<E>(den)?;
            if den == BigInt::from(0) {
                return Err(E::custom(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int::<E>(num)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int::<E>(s)?)),
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub mod int {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        parse_int(&s)
    }
}

pub mod u64str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|e| D::Error::custom(format!("invalid integer {s:?}: {e}")))
    }
}

pub mod i64str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &i64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|e| D::Error::custom(format!("invalid integer {s:?}: {e}")))
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
    }
}

pub mod matrix {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let dim = rows.len();
        rows.into_iter()
            .map(|row| {
                if row.len() != dim {
                    return Err(D::Error::custom("matrix must be square"));
                }
                row.iter().map(|x| parse_int(x)).collect()
            })
            .collect()
    }
}
