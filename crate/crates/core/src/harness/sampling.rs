use serde::Serialize;

use super::config::{ExperimentConfig, SampleKind};
use crate::error::Result;
use crate::exec::{try_map_trials, Execution};
use crate::hlproc::run_process;
use crate::padic::{sn_product_chain, Dim, PadicMatrix};
use crate::rng::stream;
use crate::stats::EmpiricalDist;
use crate::symfunc::Signature;
use crate::trajectory::Trajectory;

/// Singular numbers of independent matrices. Censored draws (some part at
/// the working precision) are clamped and kept; their number is reported.
#[derive(Clone, Debug, Serialize)]
pub struct SnSample {
    pub dist: EmpiricalDist,
    pub censored: u64,
    pub precision: u32,
}

fn collect(trials: u64, exec: Execution, draw: impl Fn(u64) -> Result<(Signature, bool)> + Sync + Send) -> Result<(EmpiricalDist, u64)> {
    let draws = try_map_trials(trials, exec, draw)?;
    let censored = draws.iter().filter(|(_, c)| *c).count() as u64;
    Ok((draws.into_iter().map(|(s, _)| s).collect(), censored))
}

/// The `n × m` top-left corner of a Haar element of `GL_N` with `N = dims[0]`,
/// or an `n × m` matrix with iid additive Haar entries when `N = ∞`.
pub fn corner_sample(cfg: &ExperimentConfig, exec: Execution) -> Result<SnSample> {
    let (n, m, p, d) = (cfg.n, cfg.m_value(), cfg.p, cfg.working_precision());
    let dim = cfg.dims[0];
    let (dist, censored) = collect(cfg.trials, exec, |i| {
        let mut rng = stream(cfg.seed, i);
        let a = match dim {
            Dim::Finite(big) => PadicMatrix::haar_gl(big, p, d, &mut rng)?.corner(n, m)?,
            Dim::Infinite => PadicMatrix::haar_additive(n, m, p, d, &mut rng)?,
        };
        let sn = a.smith();
        Ok((sn.clamped(), sn.is_censored()))
    })?;
    Ok(SnSample { dist, censored, precision: d })
}

/// `SN(AB)` with `A`, `B` independent bi-invariant matrices of types `λ`, `μ`.
pub fn product_sample(cfg: &ExperimentConfig, lambda: &Signature, mu: &Signature, exec: Execution) -> Result<SnSample> {
    let (p, d) = (cfg.p, cfg.working_precision());
    let (dist, censored) = collect(cfg.trials, exec, |i| {
        let mut rng = stream(cfg.seed, i);
        let a = PadicMatrix::bi_invariant(lambda, p, d, &mut rng)?;
        let b = PadicMatrix::bi_invariant(mu, p, d, &mut rng)?;
        let sn = a.matmul(&b)?.smith();
        Ok((sn.clamped(), sn.is_censored()))
    })?;
    Ok(SnSample { dist, censored, precision: d })
}

/// `trials` independent paths of length `k`, trial `i` driven by stream
/// `(seed, i)`.
pub fn sample_paths(cfg: &ExperimentConfig, kind: SampleKind, exec: Execution) -> Result<Vec<Trajectory>> {
    let spec = match kind {
        SampleKind::Process => Some(cfg.specialization()?),
        SampleKind::Matrix => None,
    };
    try_map_trials(cfg.trials, exec, |i| {
        let mut rng = stream(cfg.seed, i);
        let mut path = match &spec {
            Some(spec) => run_process(cfg.n, spec, cfg.k, &mut rng),
            None => sn_product_chain(cfg.n, &cfg.dims, cfg.p, cfg.k, cfg.precision, &mut rng)?,
        };
        path.meta.seed = Some(cfg.seed);
        path.meta.stream = Some(i);
        Ok(path)
    })
}

/// Law of `λ(k)` across paths.
pub fn final_marginal(paths: &[Trajectory]) -> Result<EmpiricalDist> {
    paths.iter().map(|t| Signature::new(t.last().to_vec())).collect::<Result<Vec<_>>>().map(|v| v.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_mode_independent() {
        let cfg = ExperimentConfig { trials: 40, k: 3, ..Default::default() };
        let a = sample_paths(&cfg, SampleKind::Matrix, Execution::Parallel).unwrap();
        let b = sample_paths(&cfg, SampleKind::Matrix, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[7].meta.stream, Some(7));
        let c = corner_sample(&cfg, Execution::Parallel).unwrap();
        assert_eq!(c.dist, corner_sample(&cfg, Execution::Sequential).unwrap().dist);
        assert_eq!(c.dist.total, 40);
    }

    #[test]
    fn process_paths_are_signatures() {
        let cfg = ExperimentConfig { trials: 5, k: 10, dims: vec![Dim::Infinite], ..Default::default() };
        for p in sample_paths(&cfg, SampleKind::Process, Execution::Sequential).unwrap() {
            p.validate().unwrap();
            assert_eq!(p.len(), 10);
        }
    }
}
