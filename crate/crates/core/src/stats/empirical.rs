use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::symfunc::Signature;

/// Observed counts of signatures. Serialized as
/// `{"total": .., "counts": [{"signature": [..], "count": ..}, ..]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "EmpiricalJson", try_from = "EmpiricalJson")]
pub struct EmpiricalDist {
    pub counts: BTreeMap<Signature, u64>,
    pub total: u64,
}

impl EmpiricalDist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, s: Signature) {
        *self.counts.entry(s).or_insert(0) += 1;
        self.total += 1;
    }

    /// Pools counts from another sample; the operation is associative and
    /// commutative, so parallel merging gives the same result.
    pub fn merge(&mut self, other: &EmpiricalDist) {
        for (s, c) in &other.counts {
            *self.counts.entry(s.clone()).or_insert(0) += c;
        }
        self.total += other.total;
    }

    pub fn count(&self, s: &Signature) -> u64 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn freq(&self, s: &Signature) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(s) as f64 / self.total as f64
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CountJson {
    signature: Signature,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct EmpiricalJson {
    total: u64,
    counts: Vec<CountJson>,
}

impl From<EmpiricalDist> for EmpiricalJson {
    fn from(e: EmpiricalDist) -> Self {
        EmpiricalJson {
            total: e.total,
            counts: e.counts.into_iter().map(|(signature, count)| CountJson { signature, count }).collect(),
        }
    }
}

impl TryFrom<EmpiricalJson> for EmpiricalDist {
    type Error = String;
    fn try_from(j: EmpiricalJson) -> Result<Self, String> {
        let mut e = EmpiricalDist::new();
        for c in j.counts {
            *e.counts.entry(c.signature).or_insert(0) += c.count;
            e.total += c.count;
        }
        if e.total != j.total {
            return Err(format!("counts sum to {} but total is {}", e.total, j.total));
        }
        Ok(e)
    }
}

impl FromIterator<Signature> for EmpiricalDist {
    fn from_iter<I: IntoIterator<Item = Signature>>(iter: I) -> Self {
        let mut e = EmpiricalDist::new();
        for s in iter {
            e.add(s);
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let e: EmpiricalDist = [vec![1, 0], vec![1, 0], vec![2, 1]].into_iter().map(|v| Signature::new(v).unwrap()).collect();
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.contains(r#"{"signature":[1,0],"count":2}"#));
        assert_eq!(serde_json::from_str::<EmpiricalDist>(&text).unwrap(), e);
        assert!(serde_json::from_str::<EmpiricalDist>(r#"{"total":3,"counts":[]}"#).is_err());
    }
}
