//! Stabilisation of monomial coefficients of `P_{λ(D)} / x^{λ̂(D)}` as the
//! blocks of `λ(D)` separate, compared with the factorised limit
//! `Π_i P_{λ^(i)}(block_i) · Π_i Π(block_i^{-1}; later variables)`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::branching::Params;
use super::hl::{p_monomial_coefficient, p_poly};
use super::laurent::LaurentPoly;
use super::signature::Signature;
use crate::error::{arg, Result};
use crate::rational::{qpoch, Rational};

/// One block: a growth rate `L_i` and a fixed signature `λ^(i)`.
#[derive(Clone, Debug)]
pub struct Block {
    pub rate: i64,
    pub shape: Signature,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub d_values: Vec<i64>,
    #[serde(serialize_with = "ser_rats")]
    pub coefficients: Vec<Rational>,
    #[serde(serialize_with = "ser_rat")]
    pub limit: Rational,
    /// Smallest `D_0` with `coefficient(D) = limit` for every `D_0 ≤ D ≤ Dmax`.
    pub stabilized_from: Option<i64>,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn lambda_of(blocks: &[Block], d: i64) -> Option<(Signature, Vec<i64>)> {
    let mut parts = Vec::new();
    let mut hat = Vec::new();
    for b in blocks {
        for &l in b.shape.parts() {
            parts.push(l + b.rate * d);
            hat.push(b.rate * d);
        }
    }
    Signature::new(parts).ok().map(|s| (s, hat))
}

/// Coefficient of `x^d` in the factorised right-hand side.
pub fn factorized_coefficient(blocks: &[Block], monomial: &[i64], params: &Params) -> Result<Rational> {
    let n: usize = blocks.iter().map(|b| b.shape.len()).sum();
    if monomial.len() != n {
        return arg(format!("monomial has {} exponents, expected {n}", monomial.len()));
    }
    // Product of the block polynomials, embedded in n variables.
    let mut prod = LaurentPoly::constant(n, Rational::one());
    let mut start = 0;
    let mut pairs = Vec::new();
    for b in blocks {
        let len = b.shape.len();
        let p = p_poly(&b.shape, params)?;
        let mut embedded = LaurentPoly::zero(n);
        for (e, c) in p.terms() {
            let mut full = vec![0; n];
            full[start..start + len].copy_from_slice(e);
            embedded.add_term(full, c.clone());
        }
        prod = &prod * &embedded;
        for a in start..start + len {
            for later in start + len..n {
                pairs.push((a, later));
            }
        }
        start += len;
    }
    let mut series = KernelSeries { pairs, params, memo: HashMap::new(), coeff_cache: Vec::new() };
    let mut acc = Rational::zero();
    for (e, c) in prod.terms() {
        let target: Vec<i64> = monomial.iter().zip(e).map(|(a, b)| a - b).collect();
        let k = series.coefficient(0, &target);
        if !k.is_zero() {
            acc += c * k;
        }
    }
    Ok(acc)
}

/// Coefficients of `Π_{(a,b)} (t z_{ab}; q)_∞ / (z_{ab}; q)_∞` with
/// `z_{ab} = x_b / x_a`; each factor contributes `(t;q)_r/(q;q)_r z^r`.
struct KernelSeries<'a> {
    pairs: Vec<(usize, usize)>,
    params: &'a Params,
    memo: HashMap<(usize, Vec<i64>), Rational>,
    coeff_cache: Vec<Rational>,
}

impl KernelSeries<'_> {
    fn factor_coeff(&mut self, r: usize) -> Rational {
        while self.coeff_cache.len() <= r {
            let k = self.coeff_cache.len() as u64;
            let q = &self.params.q;
            let v = qpoch(&self.params.t, q, k) / qpoch(q, q, k);
            self.coeff_cache.push(v);
        }
        self.coeff_cache[r].clone()
    }

    fn coefficient(&mut self, idx: usize, target: &[i64]) -> Rational {
        if idx == self.pairs.len() {
            return if target.iter().all(|&v| v == 0) { Rational::one() } else { Rational::zero() };
        }
        // Potential Σ j·target_j equals Σ r_ab (b - a) over remaining pairs.
        let potential: i64 = target.iter().enumerate().map(|(j, &v)| j as i64 * v).sum();
        if potential < 0 || target.iter().sum::<i64>() != 0 {
            return Rational::zero();
        }
        let key = (idx, target.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (a, b) = self.pairs[idx];
        let step = (b - a) as i64;
        let mut acc = Rational::zero();
        let mut t = target.to_vec();
        let mut r = 0usize;
        loop {
            if (r as i64) * step > potential {
                break;
            }
            let sub = self.coefficient(idx + 1, &t);
            if !sub.is_zero() {
                acc += self.factor_coeff(r) * sub;
            }
            // Taking one more power of x_b / x_a.
            t[b] -= 1;
            t[a] += 1;
            r += 1;
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

/// Computes the coefficient sequence for `D` from the first valid value up
/// to `d_max` and compares it with the factorised limit.
pub fn verify_factorization(blocks: &[Block], d_max: i64, monomial: &[i64], params: &Params) -> Result<FactorizationReport> {
    if blocks.is_empty() {
        return arg("at least one block is required");
    }
    if blocks.windows(2).any(|w| w[0].rate <= w[1].rate) {
        return arg("block rates must be strictly decreasing");
    }
    let limit = factorized_coefficient(blocks, monomial, params)?;
    let mut d_values = Vec::new();
    let mut coefficients = Vec::new();
    for d in 0..=d_max {
        let Some((lambda, hat)) = lambda_of(blocks, d) else { continue };
        let exps: Vec<i64> = hat.iter().zip(monomial).map(|(h, m)| h + m).collect();
        d_values.push(d);
        coefficients.push(p_monomial_coefficient(&lambda, &exps, params)?);
    }
    let mut stabilized_from = None;
    for (i, c) in coefficients.iter().enumerate().rev() {
        if *c != limit {
            break;
        }
        stabilized_from = Some(d_values[i]);
    }
    Ok(FactorizationReport { d_values, coefficients, limit, stabilized_from })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    fn hl() -> Params {
        Params::hall_littlewood(rat(1, 2)).unwrap()
    }

    #[test]
    fn single_block_is_constant() {
        let blocks = [Block { rate: 0, shape: s(&[2, 1, 0]) }];
        let r = verify_factorization(&blocks, 4, &[1, 1, 1], &hl()).unwrap();
        assert_eq!(r.stabilized_from, Some(0));
        assert!(r.coefficients.iter().all(|c| *c == r.limit));
    }

    #[test]
    fn two_variable_leading_term() {
        let blocks = [Block { rate: 1, shape: s(&[0]) }, Block { rate: 0, shape: s(&[0]) }];
        let r = verify_factorization(&blocks, 6, &[0, 0], &hl()).unwrap();
        assert_eq!(r.limit, Rational::one());
        assert_eq!(r.stabilized_from, Some(0));
    }

    #[test]
    fn three_variables_off_diagonal() {
        let blocks = [Block { rate: 1, shape: s(&[0, 0]) }, Block { rate: 0, shape: s(&[0]) }];
        let r = verify_factorization(&blocks, 8, &[-1, 0, 1], &hl()).unwrap();
        // Only the pair (x_1, x_3) with r = 1 contributes: 1 - t.
        assert_eq!(r.limit, rat(1, 2));
        assert!(r.stabilized_from.is_some());
    }

    #[test]
    fn rejects_bad_rates() {
        let blocks = [Block { rate: 0, shape: s(&[0]) }, Block { rate: 1, shape: s(&[0]) }];
        assert!(verify_factorization(&blocks, 3, &[0, 0], &hl()).is_err());
    }
}
