//! Sampling against exact laws and asymptotic predictions.

use serde::Serialize;

use super::config::{ExperimentConfig, SampleKind};
use super::sampling::{corner_sample, final_marginal, product_sample, sample_paths, SnSample};
use crate::asym::{clt_scale, lln_center, rescale_path};
use crate::error::{arg, Result};
use crate::exec::Execution;
use crate::hlproc::{ginibre_law, product_convolution_dist, truncated_haar_law, ExactLaw};
use crate::padic::Dim;
use crate::rational::to_f64;
use crate::stats::{
    chi_square, chi_square_two_sample, independence_report, normality_report, tv_report, tv_two_sample, EmpiricalDist,
    GofReport, IndependenceReport, NormalityReport,
};
use crate::symfunc::Signature;

/// Exact laws are enumerated until the unlisted mass is below this.
pub const SUPPORT_TOL: f64 = 1e-9;
/// Chi-square cells are pooled until every expected count reaches this.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Corners,
    Product,
    ProcessVsMatrix,
    Clt,
    Lln,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "corners" => Mode::Corners,
            "product" => Mode::Product,
            "process-vs-matrix" => Mode::ProcessVsMatrix,
            "clt" => Mode::Clt,
            "lln" => Mode::Lln,
            _ => return arg(format!("unknown compare mode '{s}'")),
        })
    }
}

/// A named scalar compared with a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, max: f64) -> Self {
        Check { name: name.into(), value, bound: format!("<= {max}"), pass: value <= max }
    }

    pub fn at_least(name: impl Into<String>, value: f64, min: f64) -> Self {
        Check { name: name.into(), value, bound: format!(">= {min}"), pass: value >= min }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check { name: name.into(), value, bound: format!("in [{lo}, {hi}]"), pass: (lo..=hi).contains(&value) }
    }

    /// Reported for information; never fails.
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Check { name: name.into(), value, bound: "none".into(), pass: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedNormality {
    pub name: String,
    pub report: NormalityReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedIndependence {
    pub name: String,
    pub report: IndependenceReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub mode: Mode,
    pub config_hash: String,
    pub samples: u64,
    pub censored: u64,
    pub gof: Vec<GofReport>,
    pub normality: Vec<NamedNormality>,
    pub independence: Vec<NamedIndependence>,
    pub checks: Vec<Check>,
    pub exact: Option<ExactLaw>,
    pub empirical: Vec<EmpiricalDist>,
    pub pass: bool,
}

impl CompareReport {
    fn new(mode: Mode, cfg: &ExperimentConfig) -> Self {
        CompareReport {
            mode,
            config_hash: cfg.hash(),
            samples: 0,
            censored: 0,
            gof: Vec::new(),
            normality: Vec::new(),
            independence: Vec::new(),
            checks: Vec::new(),
            exact: None,
            empirical: Vec::new(),
            pass: false,
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.gof.iter().all(|g| g.pass) && self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn markdown(&self) -> String {
        let mut s = format!("## compare {:?}: {}\n\nconfig hash `{}`, {} samples", self.mode, verdict(self.pass), self.config_hash, self.samples);
        if self.censored > 0 {
            s.push_str(&format!(", {} censored", self.censored));
        }
        s.push_str("\n\n");
        for g in &self.gof {
            s.push_str(&g.markdown(&format!("{:?}", g.kind)));
            s.push('\n');
        }
        if !self.checks.is_empty() {
            s.push_str("| check | value | bound | result |\n|---|---|---|---|\n");
            for c in &self.checks {
                s.push_str(&format!("| {} | {:.6} | {} | {} |\n", c.name, c.value, c.bound, verdict(c.pass)));
            }
        }
        s
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn compare(mode: Mode, cfg: &ExperimentConfig, exec: Execution) -> Result<CompareReport> {
    cfg.validate()?;
    match mode {
        Mode::Corners => compare_corners(cfg, exec),
        Mode::Product => compare_product(cfg, exec),
        Mode::ProcessVsMatrix => compare_process_vs_matrix(cfg, exec),
        Mode::Clt => compare_clt(cfg, exec),
        Mode::Lln => compare_lln(cfg, exec),
    }
}

fn against_exact(mut report: CompareReport, cfg: &ExperimentConfig, sample: SnSample, exact: ExactLaw) -> Result<CompareReport> {
    report.samples = sample.dist.total;
    report.censored = sample.censored;
    report.gof.push(chi_square(&sample.dist, &exact, MIN_EXPECTED, cfg.tol_p)?);
    report.gof.push(tv_report(&sample.dist, &exact, cfg.tol_tv)?);
    report.exact = Some(exact);
    report.empirical.push(sample.dist);
    Ok(report.finish())
}

/// Exact law of the singular numbers of the configured corner.
pub fn corner_law(cfg: &ExperimentConfig) -> Result<ExactLaw> {
    let t = cfg.t_value();
    match cfg.dims[0] {
        Dim::Finite(big) => truncated_haar_law(cfg.n, cfg.m_value(), big, &t, SUPPORT_TOL),
        Dim::Infinite => ginibre_law(cfg.n, cfg.m_value(), &t, SUPPORT_TOL),
    }
}

fn compare_corners(cfg: &ExperimentConfig, exec: Execution) -> Result<CompareReport> {
    let exact = corner_law(cfg)?;
    let sample = corner_sample(cfg, exec)?;
    against_exact(CompareReport::new(Mode::Corners, cfg), cfg, sample, exact)
}

fn product_shapes(cfg: &ExperimentConfig) -> Result<(Signature, Signature)> {
    let default = || {
        let mut v = vec![0; cfg.n];
        v[0] = 1;
        Signature::new(v)
    };
    let lambda = cfg.lambda.clone().map_or_else(default, Ok)?;
    let mu = cfg.mu.clone().map_or_else(default, Ok)?;
    if lambda.len() != cfg.n || mu.len() != cfg.n {
        return arg(format!("lambda and mu must have n = {} parts", cfg.n));
    }
    if !lambda.is_nonnegative() || !mu.is_nonnegative() {
        return arg("lambda and mu must be nonnegative");
    }
    Ok((lambda, mu))
}

fn compare_product(cfg: &ExperimentConfig, exec: Execution) -> Result<CompareReport> {
    let (lambda, mu) = product_shapes(cfg)?;
    let exact = product_convolution_dist(&lambda, &mu, &cfg.t_value())?;
    let sample = product_sample(cfg, &lambda, &mu, exec)?;
    let mut report = against_exact(CompareReport::new(Mode::Product, cfg), cfg, sample, exact)?;
    let (emp, exact) = (&report.empirical[0], report.exact.as_ref().expect("set above"));
    for (nu, p) in &exact.atoms {
        report.checks.push(Check::info(format!("freq{nu} - exact"), emp.freq(nu) - to_f64(p)));
    }
    Ok(report)
}

fn compare_process_vs_matrix(cfg: &ExperimentConfig, exec: Execution) -> Result<CompareReport> {
    if cfg.k == 0 {
        return arg("process-vs-matrix needs k >= 1");
    }
    let matrix = final_marginal(&sample_paths(cfg, SampleKind::Matrix, exec)?)?;
    // The particle runs use streams disjoint from the matrix runs.
    let shifted = ExperimentConfig { seed: cfg.seed ^ 0x9e37_79b9_7f4a_7c15, ..cfg.clone() };
    let process = final_marginal(&sample_paths(&shifted, SampleKind::Process, exec)?)?;
    let mut report = CompareReport::new(Mode::ProcessVsMatrix, cfg);
    report.samples = matrix.total + process.total;
    report.gof.push(chi_square_two_sample(&matrix, &process, MIN_EXPECTED, cfg.tol_p)?);
    report.checks.push(Check::info("two-sample TV", tv_two_sample(&matrix, &process)?));
    report.empirical = vec![matrix, process];
    Ok(report.finish())
}

/// Bounds applied to the rescaled fluctuations `f_i(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CltBounds {
    pub variance: (f64, f64),
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
    pub correlation: f64,
}

impl Default for CltBounds {
    fn default() -> Self {
        CltBounds { variance: (0.9, 1.1), skewness: 0.1, excess_kurtosis: 0.25, ks: 0.03, correlation: 0.05 }
    }
}

fn compare_clt(cfg: &ExperimentConfig, exec: Execution) -> Result<CompareReport> {
    clt_with_bounds(cfg, CltBounds::default(), exec)
}

/// Marginal normality of every `f_i(1)`, correlation of neighbouring
/// particles, and correlation of `f_i(1/2)` with `f_i(1) - f_i(1/2)`.
pub fn clt_with_bounds(cfg: &ExperimentConfig, bounds: CltBounds, exec: Execution) -> Result<CompareReport> {
    cfg.validate()?;
    if cfg.k < 2 {
        return arg("clt needs k >= 2");
    }
    let spec = cfg.specialization()?;
    let paths = sample_paths(cfg, cfg.kind.unwrap_or(SampleKind::Process), exec)?;
    let mut report = CompareReport::new(Mode::Clt, cfg);
    report.samples = paths.len() as u64;
    report.censored = paths.iter().filter(|p| p.meta.censored).count() as u64;
    let mut ends: Vec<Vec<f64>> = Vec::new();
    for i in 1..=cfg.n {
        let (mut end, mut pairs) = (Vec::new(), Vec::new());
        for path in &paths {
            let f = rescale_path(path, i, &spec)?;
            let (half, one) = (f.at(0.5), f.at(1.0));
            end.push(one);
            pairs.push((half, one - half));
        }
        let nr = normality_report(&end)?;
        let b = &bounds;
        report.checks.push(Check::within(format!("var f_{i}(1)"), nr.variance, b.variance.0, b.variance.1));
        report.checks.push(Check::at_most(format!("|skew f_{i}(1)|"), nr.skewness.abs(), b.skewness));
        report.checks.push(Check::at_most(format!("|ex-kurt f_{i}(1)|"), nr.excess_kurtosis.abs(), b.excess_kurtosis));
        report.checks.push(Check::at_most(format!("KS f_{i}(1)"), nr.ks, b.ks));
        report.normality.push(NamedNormality { name: format!("f_{i}(1)"), report: nr });
        let ind = independence_report(&pairs)?;
        report.checks.push(Check::at_most(format!("|corr f_{i}(1/2), increment|"), ind.correlation.abs(), b.correlation));
        report.independence.push(NamedIndependence { name: format!("f_{i}(1/2) vs f_{i}(1) - f_{i}(1/2)"), report: ind });
        ends.push(end);
    }
    for i in 1..cfg.n {
        let pairs: Vec<(f64, f64)> = ends[i - 1].iter().copied().zip(ends[i].iter().copied()).collect();
        let ind = independence_report(&pairs)?;
        report.checks.push(Check::at_most(format!("|corr f_{i}(1), f_{}(1)|", i + 1), ind.correlation.abs(), bounds.correlation));
        report.independence.push(NamedIndependence { name: format!("f_{i}(1) vs f_{}(1)", i + 1), report: ind });
    }
    Ok(report.finish())
}

/// `|λ_i(k) - center_i(k)| / k ≤ 5 scale_i(k) / k` on every path.
fn compare_lln(cfg: &ExperimentConfig, exec: Execution) -> Result<CompareReport> {
    if cfg.k == 0 {
        return arg("lln needs k >= 1");
    }
    let spec = cfg.specialization()?;
    let paths = sample_paths(cfg, cfg.kind.unwrap_or(SampleKind::Matrix), exec)?;
    let mut report = CompareReport::new(Mode::Lln, cfg);
    report.samples = paths.len() as u64;
    report.censored = paths.iter().filter(|p| p.meta.censored).count() as u64;
    let k = cfg.k as f64;
    for i in 1..=cfg.n {
        let center = to_f64(&lln_center(i, &spec, cfg.k)) / k;
        let bound = 5.0 * clt_scale(i, &spec, cfg.k) / k;
        let worst = paths.iter().map(|p| (p.last()[i - 1] as f64 / k - center).abs()).fold(0.0, f64::max);
        report.checks.push(Check::info(format!("predicted rate {i}"), center));
        report.checks.push(Check::at_most(format!("max |lambda_{i}(k)/k - rate|"), worst, bound));
    }
    Ok(report.finish())
}

/// Mean of `λ_i(k)/k` over the sampled paths, for `i = 1..n`. A Monte Carlo
/// cross-check of the Lyapunov exponents.
pub fn lyapunov_empirical(cfg: &ExperimentConfig, kind: SampleKind, exec: Execution) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.k == 0 {
        return arg("Lyapunov estimation needs k >= 1");
    }
    let paths = sample_paths(cfg, kind, exec)?;
    let denom = (cfg.k as f64) * paths.len() as f64;
    Ok((0..cfg.n).map(|i| paths.iter().map(|p| p.last()[i] as f64).sum::<f64>() / denom).collect())
}
