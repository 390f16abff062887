//! Serde helpers: big integers travel as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
