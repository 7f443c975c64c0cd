//! Serde helpers for fields that may hold +inf (p grids, p0 endpoints).
//! JSON has no infinity literal and serde_json turns non-finite floats into
//! null, which cannot round-trip back into f64; these encode infinities as
//! the string "inf".

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::Deserialize;

pub mod float_or_inf {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        super::parse(serde_json::Value::deserialize(d)?).map_err(de::Error::custom)
    }
}

pub mod vec_float_or_inf {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for &x in v {
            if x.is_finite() {
                seq.serialize_element(&x)?;
            } else {
                seq.serialize_element(if x > 0.0 { "inf" } else { "-inf" })?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.into_iter()
            .map(|v| super::parse(v).map_err(de::Error::custom))
            .collect()
    }
}

fn parse(value: serde_json::Value) -> Result<f64, String> {
    match value {
        serde_json::Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| format!("not an f64: {n}")),
        serde_json::Value::String(s) => match s.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => other
                .parse::<f64>()
                .map_err(|e| format!("bad float `{other}`: {e}")),
        },
        serde_json::Value::Null => Ok(f64::INFINITY),
        other => Err(format!("expected number or \"inf\", got {other}")),
    }
}
