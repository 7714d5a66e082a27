//! Generalized variables `x̂ = (x, tx, …, t^{m-1}x)` and lists of them.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::padic::Dim;
use crate::rational::{check_unit_interval, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Length {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedVariable {
    pub x: Rational,
    pub length: Length,
}

impl GeneralizedVariable {
    pub fn new(x: Rational, length: Length) -> Result<Self> {
        if x <= Rational::zero() || x >= Rational::one() {
            return arg(format!("generalized variable needs 0 < x < 1, got {x}"));
        }
        if length == Length::Finite(0) {
            return arg("generalized variable needs length at least 1");
        }
        Ok(GeneralizedVariable { x, length })
    }

    pub fn single(x: Rational) -> Result<Self> {
        Self::new(x, Length::Finite(1))
    }
}

impl fmt::Display for GeneralizedVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.length {
            Length::Finite(m) => write!(f, "{}[{m}]", self.x),
            Length::Infinite => write!(f, "{}[inf]", self.x),
        }
    }
}

/// The parameter `t` and the variables inserted at steps `1, 2, …`
/// (cycled when the process runs longer than the list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub t: Rational,
    pub vars: Vec<GeneralizedVariable>,
}

impl Specialization {
    pub fn new(t: Rational, vars: Vec<GeneralizedVariable>) -> Result<Self> {
        check_unit_interval("t", &t)?;
        if vars.is_empty() {
            return arg("a specialization needs at least one generalized variable");
        }
        Ok(Specialization { t, vars })
    }

    /// The variables matching corners of size `n` of Haar matrices in
    /// `GL_{N_j}(Z_p)`: `x̂_j = (t, t^2, …, t^{N_j-n})` with `t = 1/p`.
    pub fn matrix(p: u64, n: usize, dims: &[Dim]) -> Result<Self> {
        let t = rat(1, p as i64);
        let vars = dims
            .iter()
            .map(|d| match *d {
                Dim::Finite(big) if big > n => GeneralizedVariable::new(t.clone(), Length::Finite((big - n) as u64)),
                Dim::Finite(big) => arg(format!("matrix size {big} must exceed n = {n}")),
                Dim::Infinite => GeneralizedVariable::new(t.clone(), Length::Infinite),
            })
            .collect::<Result<Vec<_>>>()?;
        Specialization::new(t, vars)
    }

    /// The variable used at step `j` (zero-based).
    pub fn var(&self, j: usize) -> &GeneralizedVariable {
        &self.vars[j % self.vars.len()]
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(|v| v.to_string()).collect();
        write!(f, "t={} x=[{}]", self.t, vars.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_dictionary() {
        let s = Specialization::matrix(2, 2, &[Dim::Finite(4), Dim::Infinite]).unwrap();
        assert_eq!(s.t, rat(1, 2));
        assert_eq!(s.vars[0].length, Length::Finite(2));
        assert_eq!(s.vars[1].length, Length::Infinite);
        assert_eq!(s.var(3), &s.vars[1]);
        assert!(Specialization::matrix(2, 2, &[Dim::Finite(2)]).is_err());
    }

    #[test]
    fn rejects_bad_variables() {
        assert!(GeneralizedVariable::single(rat(1, 1)).is_err());
        assert!(GeneralizedVariable::new(rat(1, 3), Length::Finite(0)).is_err());
        assert!(Specialization::new(rat(1, 2), vec![]).is_err());
    }
}
