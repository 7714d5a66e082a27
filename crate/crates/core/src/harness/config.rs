use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{arg, Result};
use crate::hlproc::{GeneralizedVariable, Specialization};
use crate::padic::{Dim, Precision};
use crate::rational::{check_unit_interval, parse, rat, Rational};
use crate::symfunc::Signature;

/// Which sampler produces trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Matrix,
    Process,
}

impl std::str::FromStr for SampleKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(SampleKind::Matrix),
            "process" => Ok(SampleKind::Process),
            _ => arg(format!("unknown sample kind '{s}' (expected matrix or process)")),
        }
    }
}

/// Parameters shared by every experiment. Fields a command does not use are
/// ignored by it but still enter the content hash.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub p: u64,
    /// Overrides `1/p` in the exact laws and in the particle process.
    #[serde(with = "opt_rational")]
    pub t: Option<Rational>,
    /// A single variable `x` for the particle process in place of the
    /// matrix dictionary.
    #[serde(with = "opt_rational")]
    pub x: Option<Rational>,
    pub n: usize,
    /// Number of columns of a corner; defaults to `n`.
    pub m: Option<usize>,
    pub dims: Vec<Dim>,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub precision: Precision,
    pub tol_tv: f64,
    pub tol_p: f64,
    pub kind: Option<SampleKind>,
    pub lambda: Option<Signature>,
    pub mu: Option<Signature>,
    /// Largest `|λ|` enumerated by the identity suites.
    pub max_size: Option<i64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: 2,
            t: None,
            x: None,
            n: 2,
            m: None,
            dims: vec![Dim::Finite(4)],
            k: 1,
            trials: 10_000,
            seed: 1,
            precision: Precision::Auto,
            tol_tv: 0.02,
            tol_p: 0.001,
            kind: None,
            lambda: None,
            mu: None,
            max_size: None,
        }
    }
}

impl ExperimentConfig {
    pub fn t_value(&self) -> Rational {
        self.t.clone().unwrap_or_else(|| rat(1, self.p as i64))
    }

    pub fn m_value(&self) -> usize {
        self.m.unwrap_or(self.n)
    }

    /// Fixed precision, or the automatic choice for `k` steps (at least 16).
    pub fn working_precision(&self) -> u32 {
        match self.precision {
            Precision::Fixed(d) => d,
            Precision::Auto => crate::padic::auto_precision(self.p, self.k.max(1)).max(16),
        }
    }

    /// Checks the preconditions common to all commands.
    pub fn validate(&self) -> Result<()> {
        if !crate::padic::is_prime(self.p) {
            return arg(format!("p = {} is not a prime", self.p));
        }
        if self.n == 0 {
            return arg("n must be at least 1");
        }
        if self.m_value() < self.n {
            return arg(format!("corner width m = {} is smaller than n = {}", self.m_value(), self.n));
        }
        if self.dims.is_empty() {
            return arg("--N needs at least one entry");
        }
        for d in &self.dims {
            if let Dim::Finite(big) = d {
                if *big < self.m_value() {
                    return arg(format!("N = {big} is smaller than the corner size"));
                }
            }
        }
        if self.trials == 0 {
            return arg("trials must be at least 1");
        }
        if let Some(t) = &self.t {
            check_unit_interval("t", t)?;
        }
        if let Some(x) = &self.x {
            check_unit_interval("x", x)?;
        }
        if !(self.tol_tv > 0.0 && self.tol_tv <= 1.0) {
            return arg(format!("tol-tv must lie in (0, 1], got {}", self.tol_tv));
        }
        if !(self.tol_p > 0.0 && self.tol_p < 1.0) {
            return arg(format!("tol-p must lie in (0, 1), got {}", self.tol_p));
        }
        if let (Some(l), Some(m)) = (&self.lambda, &self.mu) {
            if l.len() != m.len() {
                return arg("lambda and mu must have the same length");
            }
        }
        Ok(())
    }

    /// The particle-process specialization: a single variable `x` with the
    /// given `t` when `x` is set, otherwise the matrix dictionary for `dims`.
    pub fn specialization(&self) -> Result<Specialization> {
        match &self.x {
            Some(x) => Specialization::new(self.t_value(), vec![GeneralizedVariable::single(x.clone())?]),
            None => {
                let mut s = Specialization::matrix(self.p, self.n, &self.dims)?;
                if let Some(t) = &self.t {
                    s.t = t.clone();
                    for v in &mut s.vars {
                        v.x = t.clone();
                    }
                }
                Ok(s)
            }
        }
    }

    /// SHA-256 of `"config <len>\0<canonical JSON>"`, in hex.
    pub fn hash(&self) -> String {
        content_hash("config", &serde_json::to_vec(self).expect("config serializes"))
    }
}

pub(crate) fn content_hash(kind: &str, bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("{kind} {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Rationals as `"num/den"` strings.
pub(crate) mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.seed = 2;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn json_roundtrip() {
        let mut c = ExperimentConfig { t: Some(rat(1, 3)), dims: vec![Dim::Infinite, Dim::Finite(5)], ..Default::default() };
        c.lambda = Some(Signature::new(vec![1, 0]).unwrap());
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#""t":"1/3""#));
        assert!(text.contains(r#""dims":["inf","5"]"#));
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), c);
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        assert!(ExperimentConfig { p: 4, ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { dims: vec![Dim::Finite(1)], ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { tol_p: 0.0, ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { m: Some(1), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn specializations() {
        let c = ExperimentConfig { x: Some(rat(1, 2)), t: Some(rat(1, 2)), n: 1, ..Default::default() };
        assert_eq!(c.specialization().unwrap().vars.len(), 1);
        let c = ExperimentConfig { dims: vec![Dim::Finite(4)], ..Default::default() };
        let s = c.specialization().unwrap();
        assert_eq!(s.t, rat(1, 2));
    }
}
