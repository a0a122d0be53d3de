//! JSON helpers for complex scalars and symbols.
//!
//! A complex number is a `[re, im]` pair; a group symbol is an array of pairs
//! indexed in the group's element order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::C64;

pub fn to_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn symbol_to_pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|&z| to_pair(z)).collect()
}

pub fn symbol_from_pairs(pairs: &[[f64; 2]]) -> Result<Vec<C64>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &[re, im])| {
            if re.is_finite() && im.is_finite() {
                Ok(C64::new(re, im))
            } else {
                Err(Error::MalformedMatrix(format!(
                    "symbol entry {i} is not finite"
                )))
            }
        })
        .collect()
}

pub fn parse_symbol(text: &str) -> Result<Vec<C64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    symbol_from_pairs(&pairs)
}

/// `#[serde(with = "wire::complex")]`
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// `#[serde(with = "wire::complex_vec")]`
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        symbol_to_pairs(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}
