//! Marginal normality and pairwise correlation of fluctuation samples.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{arg, Result};

const MIN_SAMPLES: usize = 100;
/// Two-sided 99% standard normal quantile.
const Z99: f64 = 2.5758293035489;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Three standard errors of the mean, skewness and excess kurtosis
    /// under normality: `3/√n`, `3√(6/n)`, `3√(24/n)`.
    pub mean_band: f64,
    pub skew_band: f64,
    pub kurtosis_band: f64,
    /// Kolmogorov–Smirnov distance to the standard normal.
    pub ks: f64,
    pub degenerate: bool,
}

pub fn normality_report(samples: &[f64]) -> Result<NormalityReport> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return arg(format!("normality report needs at least {MIN_SAMPLES} samples, got {n}"));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let m3 = samples.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / nf;
    let m4 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let degenerate = m2 <= 0.0;
    let (skewness, excess_kurtosis) = if degenerate { (0.0, 0.0) } else { (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0) };
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let ks = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs())
        })
        .fold(0.0, f64::max);
    Ok(NormalityReport {
        count: n,
        mean,
        variance: m2 * nf / (nf - 1.0),
        skewness,
        excess_kurtosis,
        mean_band: 3.0 / nf.sqrt(),
        skew_band: 3.0 * (6.0 / nf).sqrt(),
        kurtosis_band: 3.0 * (24.0 / nf).sqrt(),
        ks,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub count: usize,
    pub correlation: f64,
    /// Fisher-z 99% confidence interval for the correlation.
    pub ci_low: f64,
    pub ci_high: f64,
    pub degenerate: bool,
}

pub fn independence_report(pairs: &[(f64, f64)]) -> Result<IndependenceReport> {
    let n = pairs.len();
    if n < MIN_SAMPLES {
        return arg(format!("independence report needs at least {MIN_SAMPLES} pairs, got {n}"));
    }
    let nf = n as f64;
    let (mx, my) = pairs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (mx / nf, my / nf);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Ok(IndependenceReport { count: n, correlation: f64::NAN, ci_low: f64::NAN, ci_high: f64::NAN, degenerate: true });
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let half = Z99 / (nf - 3.0).sqrt();
    let z = r.clamp(-0.999_999_999, 0.999_999_999).atanh();
    Ok(IndependenceReport { count: n, correlation: r, ci_low: (z - half).tanh(), ci_high: (z + half).tanh(), degenerate: false })
}
