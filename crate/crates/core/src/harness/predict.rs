use std::collections::BTreeMap;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::asym::{clt_scale, lln_center, lyapunov_predict};
use crate::error::Result;
use crate::padic::Dim;
use crate::rational::{rat, to_f64, Rational};

/// Predicted centers and scales at time `k` and the Lyapunov table.
/// Exact rationals are written as `"num/den"` strings alongside a float.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub config_hash: String,
    pub k: usize,
    pub i: Vec<usize>,
    pub center: Vec<String>,
    pub center_f64: Vec<f64>,
    pub scale: Vec<f64>,
    /// Row `i` is `L_i`, the growth rate of `λ_{n-i+1}`.
    pub lyapunov: Vec<String>,
    pub lyapunov_f64: Vec<f64>,
    pub normalized_ratio: Vec<String>,
}

/// Each distinct `N` weighted by its share of the cyclic list.
pub fn frequency_profile(dims: &[Dim]) -> Vec<(Dim, Rational)> {
    let mut counts: BTreeMap<String, (Dim, i64)> = BTreeMap::new();
    for d in dims {
        counts.entry(d.to_string()).or_insert((*d, 0)).1 += 1;
    }
    counts.into_values().map(|(d, c)| (d, rat(c, dims.len() as i64))).collect()
}

/// With `k = 0` the per-time arrays are empty. The Lyapunov table only
/// applies to matrix dictionaries and is empty when `x` is set.
pub fn predict(cfg: &ExperimentConfig) -> Result<Prediction> {
    cfg.validate()?;
    let spec = cfg.specialization()?;
    let mut out = Prediction {
        config_hash: cfg.hash(),
        k: cfg.k,
        i: Vec::new(),
        center: Vec::new(),
        center_f64: Vec::new(),
        scale: Vec::new(),
        lyapunov: Vec::new(),
        lyapunov_f64: Vec::new(),
        normalized_ratio: Vec::new(),
    };
    if cfg.k > 0 {
        for i in 1..=cfg.n {
            let c = lln_center(i, &spec, cfg.k);
            out.i.push(i);
            out.center_f64.push(to_f64(&c));
            out.center.push(c.to_string());
            out.scale.push(clt_scale(i, &spec, cfg.k));
        }
    }
    if cfg.x.is_none() && cfg.t.is_none() {
        for row in lyapunov_predict(cfg.n, &frequency_profile(&cfg.dims), cfg.p)? {
            out.lyapunov_f64.push(to_f64(&row.exponent));
            out.lyapunov.push(row.exponent.to_string());
            out.normalized_ratio.push(row.normalized_ratio.to_string());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iid_rates() {
        let cfg = ExperimentConfig { n: 3, dims: vec![Dim::Infinite], k: 10, ..Default::default() };
        let p = predict(&cfg).unwrap();
        assert_eq!(p.center, vec!["10", "10/3", "10/7"]);
        assert_eq!(p.lyapunov, vec!["1/7", "1/3", "1"]);
    }

    #[test]
    fn zero_steps() {
        let cfg = ExperimentConfig { k: 0, ..Default::default() };
        let p = predict(&cfg).unwrap();
        assert!(p.i.is_empty() && p.center.is_empty() && p.scale.is_empty());
    }

    #[test]
    fn profile_weights() {
        let prof = frequency_profile(&[Dim::Finite(4), Dim::Infinite, Dim::Finite(4)]);
        assert_eq!(prof.len(), 2);
        assert!(prof.contains(&(Dim::Finite(4), rat(2, 3))));
    }
}
