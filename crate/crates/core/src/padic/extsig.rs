use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::symfunc::Signature;

/// A singular number: exact below the working precision, otherwise only
/// known to be at least `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SnPart {
    Exact(i64),
    AtLeastPrecision,
}

/// Singular numbers computed at precision `D`. Parts are weakly decreasing
/// with any censored parts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedSignature {
    precision: u32,
    parts: Vec<SnPart>,
}

impl ExtendedSignature {
    pub(crate) fn new(precision: u32, parts: Vec<SnPart>) -> Self {
        ExtendedSignature { precision, parts }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn parts(&self) -> &[SnPart] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_censored(&self) -> bool {
        self.parts.iter().any(|p| matches!(p, SnPart::AtLeastPrecision))
    }

    /// The exact signature, if no part was censored.
    pub fn exact(&self) -> Option<Signature> {
        let v: Option<Vec<i64>> = self
            .parts
            .iter()
            .map(|p| match p {
                SnPart::Exact(v) => Some(*v),
                SnPart::AtLeastPrecision => None,
            })
            .collect();
        v.map(Signature::from_sorted)
    }

    /// Censored parts replaced by `D`.
    pub fn clamped(&self) -> Signature {
        Signature::from_sorted(
            self.parts
                .iter()
                .map(|p| match p {
                    SnPart::Exact(v) => *v,
                    SnPart::AtLeastPrecision => self.precision as i64,
                })
                .collect(),
        )
    }

    fn sentinel(&self) -> String {
        format!(">={}", self.precision)
    }
}

impl fmt::Display for ExtendedSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match p {
                SnPart::Exact(v) => write!(f, "{v}")?,
                SnPart::AtLeastPrecision => write!(f, "{}", self.sentinel())?,
            }
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonPart {
    Int(i64),
    Text(String),
}

impl Serialize for ExtendedSignature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<JsonPart> = self
            .parts
            .iter()
            .map(|p| match p {
                SnPart::Exact(v) => JsonPart::Int(*v),
                SnPart::AtLeastPrecision => JsonPart::Text(self.sentinel()),
            })
            .collect();
        let mut st = s.serialize_struct("ExtendedSignature", 2)?;
        st.serialize_field("precision", &self.precision)?;
        st.serialize_field("parts", &parts)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExtendedSignature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            precision: u32,
            parts: Vec<JsonPart>,
        }
        let raw = Raw::deserialize(d)?;
        let sentinel = format!(">={}", raw.precision);
        let mut parts = Vec::with_capacity(raw.parts.len());
        for p in raw.parts {
            parts.push(match p {
                JsonPart::Int(v) if v < raw.precision as i64 => SnPart::Exact(v),
                JsonPart::Int(v) => return Err(de::Error::custom(format!("part {v} not below precision"))),
                JsonPart::Text(s) if s == sentinel => SnPart::AtLeastPrecision,
                JsonPart::Text(s) => return Err(de::Error::custom(format!("unexpected part '{s}'"))),
            });
        }
        let key = |p: &SnPart| match p {
            SnPart::Exact(v) => *v,
            SnPart::AtLeastPrecision => i64::MAX,
        };
        if parts.windows(2).any(|w| key(&w[0]) < key(&w[1])) {
            return Err(de::Error::custom("parts are not weakly decreasing"));
        }
        Ok(ExtendedSignature { precision: raw.precision, parts })
    }
}
