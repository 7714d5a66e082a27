//! Singular numbers along the product `A_k ⋯ A_1` of corners of Haar
//! matrices (or iid matrices when `N = ∞`).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::PadicMatrix;
use crate::error::{arg, resource, Error, Result};
use crate::trajectory::{Source, Trajectory, TrajectoryMeta};

/// Size of the ambient Haar matrix whose corner is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Dim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Dim::Infinite),
            other => other
                .parse::<usize>()
                .map(Dim::Finite)
                .map_err(|_| Error::Argument(format!("'{s}' is neither an integer nor 'inf'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Precision {
    Auto,
    Fixed(u32),
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Auto => write!(f, "auto"),
            Precision::Fixed(d) => write!(f, "{d}"),
        }
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl From<$ty> for String {
            fn from(v: $ty) -> String {
                v.to_string()
            }
        }
        impl TryFrom<String> for $ty {
            type Error = Error;
            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }
    };
}
string_serde!(Dim);
string_serde!(Precision);

impl FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(Precision::Auto),
            other => match other.parse::<u32>() {
                Ok(d) if d > 0 => Ok(Precision::Fixed(d)),
                _ => arg(format!("precision must be a positive integer or 'auto', got '{s}'")),
            },
        }
    }
}

/// `⌈k/(p-1) + 8√(k+1) + 8⌉`: the mean growth of `λ_1` plus generous slack.
pub fn auto_precision(p: u64, k: usize) -> u32 {
    let k = k as f64;
    (k / (p as f64 - 1.0) + 8.0 * (k + 1.0).sqrt() + 8.0).ceil() as u32
}

const MAX_RETRIES: usize = 3;

/// One draw of `A_j`: the `n × n` corner of a Haar element of `GL_N`, or an
/// iid matrix when `N = ∞`.
pub fn corner_factor<R: Rng + ?Sized>(n: usize, dim: Dim, p: u64, precision: u32, rng: &mut R) -> Result<PadicMatrix> {
    match dim {
        Dim::Finite(big) => PadicMatrix::haar_gl(big, p, precision, rng)?.corner(n, n),
        Dim::Infinite => PadicMatrix::haar_additive(n, n, p, precision, rng),
    }
}

/// Runs the chain with a caller-supplied factor sampler at a fixed precision.
/// Returns the trajectory and whether any part was censored (censored parts
/// are clamped to `D`).
pub fn product_chain_with<R, F>(n: usize, p: u64, precision: u32, k: usize, rng: &mut R, mut factor: F) -> Result<(Vec<Vec<i64>>, bool)>
where
    R: Rng + ?Sized,
    F: FnMut(usize, &mut R) -> Result<PadicMatrix>,
{
    let mut running = PadicMatrix::identity(p, precision, n)?;
    let mut steps = vec![vec![0i64; n]];
    let mut censored = false;
    for j in 0..k {
        let a = factor(j, rng)?;
        if a.rows() != n || a.cols() != n {
            return arg(format!("factor {j} is {}×{}, expected {n}×{n}", a.rows(), a.cols()));
        }
        running = a.matmul(&running)?;
        let sn = running.smith();
        censored |= sn.is_censored();
        steps.push(sn.clamped().parts().to_vec());
    }
    Ok((steps, censored))
}

/// `SN(A_1), SN(A_2 A_1), …, SN(A_k ⋯ A_1)` with `A_j` the corner of size
/// `n` of a Haar element of `GL_{N_j}` (the list `dims` is cycled).
///
/// With `Precision::Auto` a censored run is repeated from the same random
/// state at doubled precision, at most three times.
pub fn sn_product_chain<R>(n: usize, dims: &[Dim], p: u64, k: usize, precision: Precision, rng: &mut R) -> Result<Trajectory>
where
    R: Rng + Clone,
{
    if n == 0 || k == 0 || dims.is_empty() {
        return arg("need n ≥ 1, k ≥ 1 and at least one matrix size");
    }
    if let Some(Dim::Finite(big)) = dims.iter().find(|d| matches!(d, Dim::Finite(b) if *b <= n)) {
        return arg(format!("each N_j must exceed n = {n}; got {big}"));
    }
    let spec = format!(
        "p={p} n={n} N=[{}]",
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    );
    let (mut d, retries) = match precision {
        Precision::Auto => (auto_precision(p, k), MAX_RETRIES),
        Precision::Fixed(d) => (d, 0),
    };
    let start = rng.clone();
    for attempt in 0..=retries {
        let mut local = start.clone();
        let (steps, censored) = product_chain_with(n, p, d, k, &mut local, |j, r| {
            corner_factor(n, dims[j % dims.len()], p, d, r)
        })?;
        if censored && attempt < retries {
            d *= 2;
            continue;
        }
        if censored && precision == Precision::Auto {
            break;
        }
        *rng = local;
        let meta = TrajectoryMeta { seed: None, stream: None, spec, source: Source::Matrix, precision: Some(d), censored };
        return Ok(Trajectory { n, steps, meta });
    }
    resource(format!("singular numbers still censored at precision {d} after {MAX_RETRIES} doublings"))
}
