//! Evaluation of (skew) `P` and `Q` functions by summing over
//! Gelfand–Tsetlin chains, memoised on `(row, variables left)`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::branching::{branch_coefficient, Params, SkewKind};
use super::laurent::LaurentPoly;
use super::signature::{box_signatures, Signature};
use crate::error::{arg, resource, Result};
use crate::rational::{powu, qpoch, Rational};

/// Largest number of variables accepted by polynomial expansion routines.
pub const MAX_POLY_VARIABLES: usize = 6;
/// Largest normalised weight `|λ - λ_n|` accepted by polynomial expansion routines.
pub const MAX_POLY_WEIGHT: i64 = 40;
/// Memo entries allowed in a single chain sum before giving up.
pub const MAX_CHAIN_NODES: usize = 2_000_000;

pub(crate) trait Weights {
    type V: Clone;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
    /// `acc += coeff * x_var^exp * value`
    fn accumulate(&self, acc: &mut Self::V, coeff: &Rational, var: usize, exp: i64, value: &Self::V);
}

struct Point {
    powers: Vec<Vec<Rational>>,
}

impl Point {
    fn new(xs: &[Rational], max_exp: i64) -> Self {
        let max = max_exp.max(0) as usize;
        let powers = xs
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(max + 1);
                let mut cur = Rational::one();
                for _ in 0..=max {
                    v.push(cur.clone());
                    cur *= x;
                }
                v
            })
            .collect();
        Point { powers }
    }
}

impl Weights for Point {
    type V = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn accumulate(&self, acc: &mut Rational, coeff: &Rational, var: usize, exp: i64, value: &Rational) {
        if value.is_zero() {
            return;
        }
        *acc += coeff * &self.powers[var][exp as usize] * value;
    }
}

struct Formal {
    nvars: usize,
}

impl Weights for Formal {
    type V = LaurentPoly;
    fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(self.nvars)
    }
    fn one(&self) -> LaurentPoly {
        LaurentPoly::constant(self.nvars, Rational::one())
    }
    fn accumulate(&self, acc: &mut LaurentPoly, coeff: &Rational, var: usize, exp: i64, value: &LaurentPoly) {
        let mut shift = vec![0; self.nvars];
        shift[var] = exp;
        acc.add_scaled_shifted(value, coeff, &shift);
    }
}

/// Sum over chains `inner = κ_0 → κ_1 → … → κ_k = outer` where each
/// step is one branching move of the given kind and step `r` carries `x_r`.
struct ChainSum<'a, W: Weights> {
    kind: SkewKind,
    params: &'a Params,
    inner: &'a Signature,
    weights: &'a W,
    memo: HashMap<(Signature, usize), W::V>,
}

impl<W: Weights> ChainSum<'_, W> {
    fn children(&self, row: &Signature, r: usize) -> Vec<Signature> {
        let p = row.parts();
        let inner = self.inner.parts();
        let len = match self.kind {
            SkewKind::P => p.len() - 1,
            SkewKind::Q => p.len(),
        };
        let mut lo = Vec::with_capacity(len);
        let mut hi = Vec::with_capacity(len);
        for i in 0..len {
            let mut l = match p.get(i + 1) {
                Some(&v) => v,
                None => inner[i],
            };
            let mut h = p[i];
            if let Some(&v) = inner.get(i) {
                l = l.max(v);
            }
            if i + 1 >= r {
                if let Some(&v) = inner.get(i + 1 - r) {
                    h = h.min(v);
                }
            }
            lo.push(l);
            hi.push(h);
        }
        box_signatures(&lo, &hi)
    }

    fn eval(&mut self, row: &Signature, r: usize) -> Result<W::V> {
        if r == 0 {
            return Ok(if row == self.inner { self.weights.one() } else { self.weights.zero() });
        }
        if let Some(v) = self.memo.get(&(row.clone(), r)) {
            return Ok(v.clone());
        }
        if self.memo.len() >= MAX_CHAIN_NODES {
            return resource(format!("chain sum exceeded {MAX_CHAIN_NODES} states"));
        }
        let mut acc = self.weights.zero();
        for child in self.children(row, r) {
            let c = branch_coefficient(row, &child, self.kind, self.params);
            if c.is_zero() {
                continue;
            }
            let sub = self.eval(&child, r - 1)?;
            self.weights.accumulate(&mut acc, &c, r - 1, row.size() - child.size(), &sub);
        }
        self.memo.insert((row.clone(), r), acc.clone());
        Ok(acc)
    }
}

fn check_skew_shape(outer: &Signature, inner: &Signature, k: usize, kind: SkewKind) -> Result<()> {
    let ok = match kind {
        SkewKind::P => outer.len() == inner.len() + k,
        SkewKind::Q => outer.len() == inner.len(),
    };
    if !ok {
        return arg(format!(
            "skew {kind:?} function {outer}/{inner} is not defined in {k} variables"
        ));
    }
    Ok(())
}

/// Shift making both signatures nonnegative with smallest part zero.
fn normalising_shift(outer: &Signature, inner: &Signature) -> i64 {
    let m = outer.last().into_iter().chain(inner.last()).min().unwrap_or(0);
    -m
}

/// `P_{λ/μ}(x_1..x_k)` or `Q_{λ/ν}(x_1..x_k)` at a rational point.
pub fn skew_eval(outer: &Signature, inner: &Signature, xs: &[Rational], kind: SkewKind, params: &Params) -> Result<Rational> {
    check_skew_shape(outer, inner, xs.len(), kind)?;
    let d = normalising_shift(outer, inner);
    let (o, i) = (outer.shifted(d), inner.shifted(d));
    let point = Point::new(xs, o.size() - i.size());
    let mut sum = ChainSum { kind, params, inner: &i, weights: &point, memo: HashMap::new() };
    let v = sum.eval(&o, xs.len())?;
    if kind == SkewKind::P && d != 0 && !v.is_zero() {
        let prod: Rational = xs.iter().product();
        return Ok(v * crate::rational::pow(&prod, -d)?);
    }
    Ok(v)
}

/// The same skew function as a Laurent polynomial in `k` variables.
pub fn skew_poly(outer: &Signature, inner: &Signature, k: usize, kind: SkewKind, params: &Params) -> Result<LaurentPoly> {
    check_skew_shape(outer, inner, k, kind)?;
    let d = normalising_shift(outer, inner);
    let (o, i) = (outer.shifted(d), inner.shifted(d));
    check_poly_caps(k, o.size() - i.size())?;
    let formal = Formal { nvars: k };
    let mut sum = ChainSum { kind, params, inner: &i, weights: &formal, memo: HashMap::new() };
    let v = sum.eval(&o, k)?;
    if kind == SkewKind::P && d != 0 {
        let mono = LaurentPoly::monomial(vec![-d; k], Rational::one());
        return Ok(&v * &mono);
    }
    Ok(v)
}

pub(crate) fn check_poly_caps(nvars: usize, weight: i64) -> Result<()> {
    if nvars > MAX_POLY_VARIABLES || weight > MAX_POLY_WEIGHT {
        return resource(format!(
            "polynomial expansion limited to {MAX_POLY_VARIABLES} variables and weight {MAX_POLY_WEIGHT} (got {nvars}, {weight})"
        ));
    }
    Ok(())
}

/// `P_λ(x_1..x_n)` with `n = len(λ)`.
pub fn p_eval(lambda: &Signature, xs: &[Rational], params: &Params) -> Result<Rational> {
    skew_eval(lambda, &Signature::zeros(0), xs, SkewKind::P, params)
}

/// `P_λ` as a polynomial in `len(λ)` variables.
pub fn p_poly(lambda: &Signature, params: &Params) -> Result<LaurentPoly> {
    skew_poly(lambda, &Signature::zeros(0), lambda.len(), SkewKind::P, params)
}

/// `Q_λ(y_1..y_k) = Q_{λ/0^n}(y_1..y_k)` for nonnegative `λ`, any `k`.
pub fn q_eval(lambda: &Signature, ys: &[Rational], params: &Params) -> Result<Rational> {
    if !lambda.is_nonnegative() {
        return arg(format!("Q_λ needs a nonnegative signature, got {lambda}"));
    }
    skew_eval(lambda, &Signature::zeros(lambda.len()), ys, SkewKind::Q, params)
}

/// `b_λ = Π_{i ≠ 0} (t;t)_{m_i(λ)}` so that `Q_λ = b_λ P_λ` (Hall–Littlewood case).
pub fn b_lambda(lambda: &Signature, t: &Rational) -> Rational {
    lambda
        .multiplicities()
        .into_iter()
        .filter(|&(k, _)| k != 0)
        .map(|(_, m)| qpoch(t, t, m as u64))
        .product()
}

/// `P_λ(x, xt, …, xt^{n-1})` in closed form (Hall–Littlewood), any integer parts.
pub fn principal_p(lambda: &Signature, x: &Rational, t: &Rational) -> Result<Rational> {
    let n = lambda.len() as u64;
    let mut v = crate::rational::pow(x, lambda.size())? * crate::rational::pow(t, lambda.n_stat())? * qpoch(t, t, n);
    for (_, m) in lambda.multiplicities() {
        v /= qpoch(t, t, m as u64);
    }
    Ok(v)
}

/// `Q_λ(x, xt, …, xt^{k-1})` in closed form (Hall–Littlewood), `λ` nonnegative.
pub fn principal_q(lambda: &Signature, x: &Rational, t: &Rational, k: usize) -> Result<Rational> {
    if !lambda.is_nonnegative() {
        return arg(format!("Q_λ needs a nonnegative signature, got {lambda}"));
    }
    let l = lambda.nonzero_len();
    if l > k {
        return Ok(Rational::zero());
    }
    let padded = lambda.with_len(k)?;
    Ok(b_lambda(lambda, t) * principal_p(&padded, x, t)?)
}

/// `Q_λ(x, xt, xt^2, …)` with infinitely many variables: `x^{|λ|} t^{n(λ)}`.
pub fn principal_q_infinite(lambda: &Signature, x: &Rational, t: &Rational) -> Result<Rational> {
    if !lambda.is_nonnegative() {
        return arg(format!("Q_λ needs a nonnegative signature, got {lambda}"));
    }
    Ok(crate::rational::pow(x, lambda.size())? * powu(t, lambda.n_stat() as u64))
}

/// The coefficient of a single monomial `x^e` in `P_λ(x_1..x_n)`,
/// computed by restricting chains to rows of prescribed size.
pub fn p_monomial_coefficient(lambda: &Signature, exps: &[i64], params: &Params) -> Result<Rational> {
    let n = lambda.len();
    if exps.len() != n {
        return arg("exponent vector length must match the signature length");
    }
    if exps.iter().sum::<i64>() != lambda.size() {
        return Ok(Rational::zero());
    }
    // Row r (length r) must have size e_1 + … + e_r.
    let mut sizes = vec![0i64; n + 1];
    for r in 0..n {
        sizes[r + 1] = sizes[r] + exps[r];
    }
    fn rec(
        row: &Signature,
        sizes: &[i64],
        params: &Params,
        memo: &mut HashMap<Signature, Rational>,
    ) -> Result<Rational> {
        let r = row.len();
        if r == 0 {
            return Ok(Rational::one());
        }
        if let Some(v) = memo.get(row) {
            return Ok(v.clone());
        }
        if memo.len() >= MAX_CHAIN_NODES {
            return resource("monomial coefficient exceeded the state budget");
        }
        let p = row.parts();
        let lo: Vec<i64> = (0..r - 1).map(|i| p[i + 1]).collect();
        let hi: Vec<i64> = (0..r - 1).map(|i| p[i]).collect();
        let mut acc = Rational::zero();
        for child in box_signatures(&lo, &hi) {
            if child.size() != sizes[r - 1] {
                continue;
            }
            let c = branch_coefficient(row, &child, SkewKind::P, params);
            if c.is_zero() {
                continue;
            }
            acc += c * rec(&child, sizes, params, memo)?;
        }
        memo.insert(row.clone(), acc.clone());
        Ok(acc)
    }
    rec(lambda, &sizes, params, &mut HashMap::new())
}
