//! JSON encodings shared by the library, the CLI and the FFI layer.
//!
//! Integers are emitted as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; both forms are accepted on input. Words are
//! emitted in their letter notation (`"aBa"`, `"1"` for the identity).

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::words::Word;
use crate::zlattice::{IntMatrix, IntVector};

/// An integer that may arrive as a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Uint(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(x) => Ok(JsonInt(x.into())),
            Raw::Uint(x) => Ok(JsonInt(x.into())),
            Raw::Text(t) => BigInt::from_str(t.trim())
                .map(JsonInt)
                .map_err(|_| de::Error::custom(format!("not an integer: {t:?}"))),
        }
    }
}

pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

pub fn deserialize_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    JsonInt::deserialize(d).map(|j| j.0)
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for x in self.iter() {
            seq.serialize_element(&JsonInt(x.clone()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<JsonInt>::deserialize(d)?;
        Ok(IntVector::new(raw.into_iter().map(|j| j.0).collect()))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            seq.serialize_element(&self.row_vector(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<Vec<JsonInt>>::deserialize(d)?;
        let rows = raw.into_iter().map(|r| r.into_iter().map(|j| j.0).collect()).collect();
        IntMatrix::from_rows(rows).map_err(de::Error::custom)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_round_trip_in_both_forms() {
        let big = BigInt::from(i64::MAX) * BigInt::from(10);
        let v = IntVector::new(vec![BigInt::from(-3), big.clone()]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, format!("[-3,\"{big}\"]"));
        assert_eq!(serde_json::from_str::<IntVector>(&text).unwrap(), v);
        assert_eq!(serde_json::from_str::<IntVector>("[\"7\", 8]").unwrap(), IntVector::from_i64(&[7, 8]));
        assert!(serde_json::from_str::<IntVector>("[\"x\"]").is_err());
    }

    #[test]
    fn matrices_are_row_lists() {
        let m = IntMatrix::from_i64(&[[1, 2], [3, 4]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,2],[3,4]]");
        assert_eq!(serde_json::from_str::<IntMatrix>("[[1,2],[3,4]]").unwrap(), m);
        assert!(serde_json::from_str::<IntMatrix>("[[1,2],[3]]").is_err());
    }

    #[test]
    fn words_serialize_as_text() {
        let w = Word::parse("aBa", 2).unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), "\"aBa\"");
        assert_eq!(serde_json::to_string(&Word::identity(2)).unwrap(), "\"1\"");
    }
}
