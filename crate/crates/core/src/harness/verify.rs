//! Exact-arithmetic identity suites.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{arg, Result};
use crate::hlproc::{interlacing_extensions, kernel_prob_product_form, kernel_prob_ratio_form};
use crate::rational::{rat, to_f64, Rational};
use crate::rng::stream;
use crate::symfunc::{
    cauchy_kernel, p_eval, principal_p, principal_q, q_eval, signatures_of_size, structure_coeffs, verify_factorization,
    Block, Params, Signature,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Factorization,
    Kernel,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "factorization" => Ok(Suite::Factorization),
            "kernel" => Ok(Suite::Kernel),
            _ => arg(format!("unknown suite '{s}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// Largest numerical defect, for identities that are only approximate.
    pub max_defect: Option<f64>,
    pub counterexample: Option<String>,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str) -> Self {
        IdentityCheck { name: name.into(), cases: 0, failures: 0, max_defect: None, counterexample: None, pass: true }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.pass = false;
            self.counterexample.get_or_insert_with(describe);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub config_hash: String,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let status = if c.pass { "PASS" } else { "FAIL" };
                let mut s = format!("[{status}] {} ({} cases", c.name, c.cases);
                if let Some(d) = c.max_defect {
                    s.push_str(&format!(", max defect {d:.3e}"));
                }
                s.push(')');
                if let Some(ce) = &c.counterexample {
                    s.push_str(&format!(": {ce}"));
                }
                s
            })
            .collect()
    }
}

pub fn verify(suite: Suite, cfg: &ExperimentConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let checks = match suite {
        Suite::Identities => identities(cfg.n, cfg.max_size.unwrap_or(6), &cfg.t_value())?,
        Suite::Factorization => vec![factorization(cfg.max_size.unwrap_or(12), &cfg.t_value())?],
        Suite::Kernel => vec![kernel_forms(cfg.n, cfg.trials.min(100_000), cfg.seed)?],
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { suite, config_hash: cfg.hash(), checks, pass })
}

fn geometric(x: &Rational, t: &Rational, len: usize) -> Vec<Rational> {
    std::iter::successors(Some(x.clone()), |v| Some(v * t)).take(len).collect()
}

/// Closed-form principal specializations against branching sums for
/// `n ≤ n_max`, `|λ| ≤ max_size`; normalization of the product law for
/// `n ≤ min(n_max, 3)`, `|λ|, |μ| ≤ min(max_size, 4)`; and the Cauchy
/// identity for two variables truncated at `|λ| ≤ 40`.
pub fn identities(n_max: usize, max_size: i64, t: &Rational) -> Result<Vec<IdentityCheck>> {
    let params = Params::hall_littlewood(t.clone())?;
    let mut principal = IdentityCheck::new("principal specialization = branching sum");
    for n in 1..=n_max {
        for size in 0..=max_size {
            for lambda in signatures_of_size(n, size) {
                for x in [Rational::one(), rat(2, 3)] {
                    let p = p_eval(&lambda, &geometric(&x, t, n), &params)?;
                    principal.record(p == principal_p(&lambda, &x, t)?, || format!("P_{lambda} at x = {x}"));
                    for k in [n, n + 1] {
                        let q = q_eval(&lambda, &geometric(&x, t, k), &params)?;
                        principal.record(q == principal_q(&lambda, &x, t, k)?, || format!("Q_{lambda} in {k} variables at x = {x}"));
                    }
                }
            }
        }
    }
    let mut product = IdentityCheck::new("product law sums to one");
    let one = Rational::one();
    for n in 1..=n_max.min(3) {
        let shapes: Vec<Signature> = (0..=max_size.min(4)).flat_map(|s| signatures_of_size(n, s)).collect();
        for lambda in &shapes {
            for mu in &shapes {
                let denom = principal_p(lambda, &one, t)? * principal_p(mu, &one, t)?;
                let mut total = Rational::zero();
                let mut negative = false;
                for (nu, c) in structure_coeffs(lambda, mu, &params)? {
                    negative |= c.is_negative();
                    total += c * principal_p(&nu, &one, t)?;
                }
                product.record(total == denom && !negative, || format!("{lambda} x {mu}: total {}", total / &denom));
            }
        }
    }
    Ok(vec![principal, product, truncated_cauchy(40, t)?])
}

/// `Σ_{|λ| ≤ max} P_λ(1, t) Q_λ(t, t²)` against `Π(1, t; t, t²)`.
fn truncated_cauchy(max: i64, t: &Rational) -> Result<IdentityCheck> {
    let params = Params::hall_littlewood(t.clone())?;
    let a = geometric(&Rational::one(), t, 2);
    let b = geometric(t, t, 2);
    let mut sum = Rational::zero();
    let mut cases = 0;
    for size in 0..=max {
        for lambda in signatures_of_size(2, size) {
            sum += p_eval(&lambda, &a, &params)? * q_eval(&lambda, &b, &params)?;
            cases += 1;
        }
    }
    let kernel = cauchy_kernel(&a, &b, &params, 0.0)?.exact().cloned().expect("q = 0 kernels are exact");
    let defect = to_f64(&(kernel - sum)).abs();
    let mut check = IdentityCheck::new("truncated Cauchy identity, two variables");
    check.cases = cases;
    check.max_defect = Some(defect);
    check.pass = defect < 1e-9;
    if !check.pass {
        check.failures = 1;
        check.counterexample = Some(format!("defect {defect:e} at |λ| ≤ {max}"));
    }
    Ok(check)
}

/// Stabilization of `P_{λ(D)} / x^{λ̂(D)}` for three variables split into
/// two blocks, on several monomials, at `q = 0`.
pub fn factorization(d_max: i64, t: &Rational) -> Result<IdentityCheck> {
    let params = Params::hall_littlewood(t.clone())?;
    let s = |v: &[i64]| Signature::new(v.to_vec());
    let layouts = [
        vec![Block { rate: 1, shape: s(&[0, 0])? }, Block { rate: 0, shape: s(&[0])? }],
        vec![Block { rate: 1, shape: s(&[1, 0])? }, Block { rate: 0, shape: s(&[0])? }],
        vec![Block { rate: 1, shape: s(&[0])? }, Block { rate: 0, shape: s(&[1, 0])? }],
    ];
    let monomials: [[i64; 3]; 5] = [[0, 0, 0], [-1, 0, 1], [0, -1, 1], [-1, -1, 2], [-2, 0, 2]];
    let mut check = IdentityCheck::new(&format!("coefficients stabilize to the factorised limit by D = {d_max}"));
    for blocks in &layouts {
        for mono in &monomials {
            let r = verify_factorization(blocks, d_max, mono, &params)?;
            let shapes: Vec<String> = blocks.iter().map(|b| format!("({}, {})", b.rate, b.shape)).collect();
            check.record(r.stabilized_from.is_some_and(|d0| d0 <= d_max), || {
                format!("blocks [{}], monomial {mono:?}: {:?} vs limit {}", shapes.join(", "), r.coefficients.last(), r.limit)
            });
        }
    }
    Ok(check)
}

/// The product and ratio forms of the one-step kernel agree exactly on
/// random `(λ, ν, x)`, three quarters of them with `λ ≺_Q ν`.
pub fn kernel_forms(n: usize, instances: u64, seed: u64) -> Result<IdentityCheck> {
    let mut rng = stream(seed, 0);
    let t = rat(1, 2);
    let mut check = IdentityCheck::new(&format!("one-step kernel: product form = ratio form (n = {n})"));
    for _ in 0..instances {
        let lambda = Signature::from_unsorted((0..n).map(|_| rng.gen_range(-2..=4)).collect());
        let nu = if rng.gen_bool(0.75) {
            let extra = rng.gen_range(0..=4);
            interlacing_extensions(&lambda, 1, extra).choose(&mut rng).cloned().unwrap_or_else(|| lambda.clone())
        } else {
            Signature::from_unsorted((0..n).map(|_| rng.gen_range(-2..=6)).collect())
        };
        let den = rng.gen_range(2..=12i64);
        let x = rat(rng.gen_range(1..den), den);
        let t = if rng.gen_bool(0.5) { t.clone() } else { rat(1, rng.gen_range(2..=7)) };
        let a = kernel_prob_product_form(&lambda, &nu, &x, &t)?;
        let b = kernel_prob_ratio_form(&lambda, &nu, &x, &t)?;
        check.record(a == b, || format!("λ = {lambda}, ν = {nu}, x = {x}, t = {t}: {a} vs {b}"));
    }
    Ok(check)
}
