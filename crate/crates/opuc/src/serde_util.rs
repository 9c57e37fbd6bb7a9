//! Serde adapters for complex data.
//!
//! All external interfaces encode a complex number as a two-element array
//! `[re, im]`. These helpers let struct fields of type `Complex64` or
//! `Vec<Complex64>` use that encoding via `#[serde(with = "...")]`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `Vec<Complex64>` as `[[re, im], ...]`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], ser: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(de)?;
        Ok(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// A single `Complex64` as `[re, im]`.
pub mod complex_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Complex64, D::Error> {
        let p = <[f64; 2]>::deserialize(de)?;
        Ok(Complex64::new(p[0], p[1]))
    }
}
