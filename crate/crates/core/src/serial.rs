//! Lossless text encodings for binary64 values.
//!
//! Every float that ends up in a certificate or system file is written as the
//! shortest decimal string that parses back to the identical bit pattern.
//! Readers accept either such strings or plain JSON numbers.

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

pub fn format_f64(x: f64) -> String {
    // `Debug` prints the shortest representation that round-trips.
    format!("{x:?}")
}

pub fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok()
}

/// A binary64 value that (de)serializes as a round-trip string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lossless(pub f64);

impl Serialize for Lossless {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_f64(self.0))
    }
}

struct LosslessVisitor;

impl<'de> Visitor<'de> for LosslessVisitor {
    type Value = Lossless;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a float encoded as a string or number")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Lossless, E> {
        parse_f64(v)
            .map(Lossless)
            .ok_or_else(|| E::custom(format!("invalid float literal {v:?}")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Lossless, E> {
        Ok(Lossless(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Lossless, E> {
        Ok(Lossless(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Lossless, E> {
        Ok(Lossless(v as f64))
    }
}

impl<'de> Deserialize<'de> for Lossless {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(LosslessVisitor)
    }
}

/// `#[serde(with = "f64_str")]` for a single float field.
pub mod f64_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        Lossless(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Lossless::deserialize(d)?.0)
    }
}

/// `#[serde(with = "complex_vec")]` for a vector of complex numbers encoded as `[[re, im], ...]`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v {
            seq.serialize_element(&[Lossless(z.re), Lossless(z.im)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw: Vec<[Lossless; 2]> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re.0, im.0)).collect())
    }
}

/// Same as [`complex_vec`] for an optional vector.
pub mod opt_complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for z in v {
                    seq.serialize_element(&[Lossless(z.re), Lossless(z.im)])?;
                }
                seq.end()
            }
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Complex64>>, D::Error> {
        let raw: Option<Vec<[Lossless; 2]>> = Option::deserialize(d)?;
        Ok(raw.map(|v| v.into_iter().map(|[re, im]| Complex64::new(re.0, im.0)).collect()))
    }
}

pub(crate) struct FixedSeq<const N: usize>(pub [f64; N]);

impl<'de, const N: usize> Deserialize<'de> for FixedSeq<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<const N: usize>;
        impl<'de, const N: usize> Visitor<'de> for V<N> {
            type Value = FixedSeq<N>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of {N} floats")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut out = [0.0; N];
                for (i, slot) in out.iter_mut().enumerate() {
                    let v: Lossless = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(i, &self))?;
                    *slot = v.0;
                }
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(N + 1, &self));
                }
                Ok(FixedSeq(out))
            }
        }
        d.deserialize_seq(V::<N>)
    }
}

pub(crate) fn serialize_fixed<S: Serializer, const N: usize>(vals: [f64; N], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(N))?;
    for v in vals {
        seq.serialize_element(&Lossless(v))?;
    }
    seq.end()
}
