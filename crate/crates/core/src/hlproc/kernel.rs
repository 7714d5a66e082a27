//! Transition probabilities of one single-variable Cauchy step.

use num_traits::{One, Zero};

use super::measures::{accumulate_by_size, ExactLaw};
use crate::error::{arg, Error, Result};
use crate::rational::{check_unit_interval, pow, powu, Rational};
use crate::symfunc::{principal_p, skew_eval, Params, Signature, SkewKind};

fn check(lambda: &Signature, nu: &Signature, x: &Rational, t: &Rational) -> Result<()> {
    if lambda.len() != nu.len() {
        return arg(format!("signatures {lambda} and {nu} have different lengths"));
    }
    check_unit_interval("x", x)?;
    check_unit_interval("t", t)
}

/// `(1-x)/(1-t^n x) · Π_{j: m_j(λ) = m_j(ν)+1} (1 - t^{m_j(λ)}) · Π_i (x t^{i-1})^{ν_i - λ_i}`.
pub fn kernel_prob_product_form(lambda: &Signature, nu: &Signature, x: &Rational, t: &Rational) -> Result<Rational> {
    check(lambda, nu, x, t)?;
    if !lambda.q_interlaces(nu) {
        return Ok(Rational::zero());
    }
    let one = Rational::one();
    let n = lambda.len() as u64;
    let mut v = (&one - x) / (&one - powu(t, n) * x);
    let ml = lambda.multiplicities();
    let mn = nu.multiplicities();
    for (k, &m) in &ml {
        if m == mn.get(k).copied().unwrap_or(0) + 1 {
            v *= &one - powu(t, m as u64);
        }
    }
    let mut xi = x.clone();
    for (l, n_) in lambda.parts().iter().zip(nu.parts()) {
        v *= pow(&xi, n_ - l)?;
        xi *= t;
    }
    Ok(v)
}

/// `Q_{ν/λ}(x) P_ν(1,…,t^{n-1}) / (P_λ(1,…,t^{n-1}) Π(x; 1,…,t^{n-1}))`, with
/// the skew function evaluated by branching and the kernel telescoped to
/// `(1-t^n x)/(1-x)`.
pub fn kernel_prob_ratio_form(lambda: &Signature, nu: &Signature, x: &Rational, t: &Rational) -> Result<Rational> {
    check(lambda, nu, x, t)?;
    let params = Params::hall_littlewood(t.clone())?;
    let q = skew_eval(nu, lambda, std::slice::from_ref(x), SkewKind::Q, &params)?;
    if q.is_zero() {
        return Ok(q);
    }
    let one = Rational::one();
    let kernel = (&one - powu(t, lambda.len() as u64) * x) / (&one - x);
    Ok(q * principal_p(nu, &one, t)? / (principal_p(lambda, &one, t)? * kernel))
}

/// `Pr(ι(X; λ) = ν)` with `X_i ~ G_{x t^{i-1}}`. Both closed forms are
/// evaluated and must agree exactly.
pub fn cauchy_kernel_prob(lambda: &Signature, nu: &Signature, x: &Rational, t: &Rational) -> Result<Rational> {
    let a = kernel_prob_product_form(lambda, nu, x, t)?;
    let b = kernel_prob_ratio_form(lambda, nu, x, t)?;
    if a != b {
        return Err(Error::Validation(format!("kernel forms disagree at {lambda} → {nu}: {a} vs {b}")));
    }
    Ok(a)
}

/// Signatures `ν ≥ λ` with `ν_{i+k} ≤ λ_i` and `|ν| = |λ| + extra`: the
/// support of `Q_{ν/λ}` in `k` variables.
pub fn interlacing_extensions(lambda: &Signature, k: usize, extra: i64) -> Vec<Signature> {
    fn rec(l: &[i64], k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        let i = cur.len();
        if i == l.len() {
            if left == 0 {
                out.push(Signature::new(cur.clone()).expect("built decreasing"));
            }
            return;
        }
        let mut hi = l[i] + left;
        if i >= k {
            hi = hi.min(l[i - k]);
        }
        if i > 0 {
            hi = hi.min(cur[i - 1]);
        }
        for v in l[i]..=hi {
            cur.push(v);
            rec(l, k, left - (v - l[i]), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if extra >= 0 && k > 0 {
        rec(lambda.parts(), k, extra, &mut Vec::new(), &mut out);
    } else if extra == 0 {
        out.push(lambda.clone());
    }
    out
}

/// The law of `ι(X; λ)`, enumerated by `|ν| - |λ|` until the remaining
/// mass is below `tol`.
pub fn kernel_law(lambda: &Signature, x: &Rational, t: &Rational, tol: f64) -> Result<ExactLaw> {
    check(lambda, lambda, x, t)?;
    accumulate_by_size(tol, |s| {
        interlacing_extensions(lambda, 1, s)
            .into_iter()
            .map(|nu| kernel_prob_product_form(lambda, &nu, x, t).map(|p| (nu, p)))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hlproc::sampler::gx_pmf;
    use crate::rational::rat;

    fn s(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let h = rat(1, 2);
        let lam = s(&[2, 1, 0]);
        assert_eq!(cauchy_kernel_prob(&lam, &lam, &h, &h).unwrap(), rat(1, 2) / rat(15, 16));
        for l in 0..6 {
            assert_eq!(cauchy_kernel_prob(&s(&[0]), &s(&[l]), &h, &h).unwrap(), gx_pmf(&h, &h, l as u64));
        }
        assert_eq!(cauchy_kernel_prob(&s(&[0, 0]), &s(&[1, 0]), &h, &h).unwrap(), rat(3, 14));
        assert_eq!(cauchy_kernel_prob(&s(&[0, 0]), &s(&[1, 1]), &h, &h).unwrap(), Rational::zero());
        assert!(cauchy_kernel_prob(&s(&[0, 0]), &s(&[1]), &h, &h).is_err());
    }

    #[test]
    fn exhaustive_two_particle_check() {
        // Sum over impulse pairs (X_1, X_2) of the product pmf, grouped by outcome.
        let (x, t) = (rat(1, 2), rat(1, 2));
        let lam = s(&[1, 0]);
        let mut by_outcome = std::collections::BTreeMap::new();
        for a in 0..40u64 {
            for b in 0..40u64 {
                let p = gx_pmf(&x, &t, a) * gx_pmf(&(&x * &t), &t, b);
                let nu = crate::hlproc::sampler::insert(&[a as i64, b as i64], &lam).unwrap();
                *by_outcome.entry(nu).or_insert_with(Rational::zero) += p;
            }
        }
        for nu in [s(&[1, 0]), s(&[2, 0]), s(&[1, 1]), s(&[3, 1])] {
            let exact = crate::rational::to_f64(&cauchy_kernel_prob(&lam, &nu, &x, &t).unwrap());
            let brute = crate::rational::to_f64(&by_outcome[&nu]);
            assert!((exact - brute).abs() < 1e-9, "{nu}: {exact} vs {brute}");
        }
    }

    #[test]
    fn law_sums_to_one() {
        let law = kernel_law(&s(&[2, 1, 0]), &rat(1, 2), &rat(1, 2), 1e-12).unwrap();
        assert!(crate::rational::to_f64(&law.tail) < 1e-12);
        assert!(law.atoms.keys().all(|nu| s(&[2, 1, 0]).q_interlaces(nu)));
    }

    #[test]
    fn extensions_respect_depth() {
        let lam = s(&[2, 0]);
        let one = interlacing_extensions(&lam, 1, 3);
        assert_eq!(one, vec![s(&[3, 2]), s(&[4, 1]), s(&[5, 0])]);
        let two = interlacing_extensions(&lam, 2, 2);
        assert_eq!(two.len(), 3);
    }
}
