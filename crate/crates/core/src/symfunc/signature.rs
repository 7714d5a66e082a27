//! Weakly decreasing integer tuples and the two interlacing relations.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};

/// A signature `λ_1 ≥ λ_2 ≥ … ≥ λ_n`, possibly with negative parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Signature(Vec<i64>);

impl TryFrom<Vec<i64>> for Signature {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Signature::new(v)
    }
}

impl From<Signature> for Vec<i64> {
    fn from(s: Signature) -> Self {
        s.0
    }
}

impl Signature {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return arg(format!("{parts:?} is not weakly decreasing"));
        }
        Ok(Signature(parts))
    }

    /// Caller guarantees the parts are weakly decreasing.
    pub(crate) fn from_sorted(parts: Vec<i64>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Signature(parts)
    }

    /// Sorts arbitrary integers into a signature.
    pub fn from_unsorted(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Signature(parts)
    }

    pub fn zeros(n: usize) -> Self {
        Signature(vec![0; n])
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_stat(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &l)| i as i64 * l).sum()
    }

    pub fn multiplicity(&self, k: i64) -> usize {
        self.0.iter().filter(|&&l| l == k).count()
    }

    pub fn multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for &l in &self.0 {
            *m.entry(l).or_insert(0) += 1;
        }
        m
    }

    pub fn first(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.last().is_none_or(|l| l >= 0)
    }

    pub fn shifted(&self, d: i64) -> Self {
        Signature(self.0.iter().map(|&l| l + d).collect())
    }

    /// Number of nonzero parts of a nonnegative signature.
    pub fn nonzero_len(&self) -> usize {
        self.0.iter().filter(|&&l| l != 0).count()
    }

    /// Pads with zeros or drops trailing zeros to reach length `n`.
    pub fn with_len(&self, n: usize) -> Result<Self> {
        let mut v = self.0.clone();
        if n >= v.len() {
            v.resize(n, 0);
            return Signature::new(v);
        }
        if v[n..].iter().any(|&l| l != 0) {
            return arg(format!("{self} has more than {n} nonzero parts"));
        }
        v.truncate(n);
        Ok(Signature(v))
    }

    /// `self ≺_P outer`: `outer` has one more part and `outer_i ≥ self_i ≥ outer_{i+1}`.
    pub fn p_interlaces(&self, outer: &Signature) -> bool {
        outer.len() == self.len() + 1
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &m)| outer.0[i] >= m && m >= outer.0[i + 1])
    }

    /// `self ≺_Q outer`: same length, `outer_i ≥ self_i` and `self_i ≥ outer_{i+1}`.
    pub fn q_interlaces(&self, outer: &Signature) -> bool {
        let n = self.len();
        outer.len() == n
            && (0..n).all(|i| outer.0[i] >= self.0[i] && (i + 1 == n || self.0[i] >= outer.0[i + 1]))
    }

    /// Coordinatewise `self ≤ other`.
    pub fn dominated_by(&self, other: &Signature) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Every signature in the box `lo_i ≤ s_i ≤ hi_i`, provided each admissible
/// choice is automatically weakly decreasing (true for interlacing boxes).
pub(crate) fn box_signatures(lo: &[i64], hi: &[i64]) -> Vec<Signature> {
    debug_assert_eq!(lo.len(), hi.len());
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        if cur.windows(2).all(|w| w[0] >= w[1]) {
            out.push(Signature(cur.clone()));
        }
        let mut i = cur.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                for j in i + 1..cur.len() {
                    cur[j] = lo[j];
                }
                break;
            }
        }
    }
}

/// Nonnegative signatures of length `n` and size exactly `size`,
/// in decreasing lexicographic order.
pub fn signatures_of_size(n: usize, size: i64) -> Vec<Signature> {
    fn rec(n: usize, remaining: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if cur.len() == n {
            if remaining == 0 {
                out.push(Signature(cur.clone()));
            }
            return;
        }
        let slots = (n - cur.len()) as i64;
        let top = cap.min(remaining);
        for v in (0..=top).rev() {
            if v * slots < remaining {
                break;
            }
            cur.push(v);
            rec(n, remaining - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if size == 0 {
            out.push(Signature(Vec::new()));
        }
        return out;
    }
    if size < 0 {
        return out;
    }
    rec(n, size, size, &mut Vec::with_capacity(n), &mut out);
    out
}
