//! q-Pochhammer symbols and the Cauchy kernel `Π_{(q,t)}(a; b)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::branching::Params;
use crate::error::{domain, Error, Result};
use crate::rational::{qpoch, to_f64, Rational};

/// Length of a Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
}

/// Exact when the product is finite, otherwise a float with the
/// multiplicative error bound of the discarded tail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Value {
    Exact(#[serde(serialize_with = "ser_rat")] Rational),
    Approx { value: f64, rel_tail_bound: f64 },
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Approx { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx { .. } => None,
        }
    }
}

/// `(a; q)_n`, truncating an infinite product once `|a q^m| < tol`.
pub fn pochhammer(a: &Rational, q: &Rational, n: Count, tol: f64) -> Result<Value> {
    match n {
        Count::Finite(n) => Ok(Value::Exact(qpoch(a, q, n))),
        Count::Infinite => {
            if q.abs() >= Rational::one() {
                return domain(format!("(a;q)_∞ needs |q| < 1, got q = {q}"));
            }
            let (v, bound) = infinite_product(to_f64(a), to_f64(q), tol);
            Ok(Value::Approx { value: v, rel_tail_bound: bound })
        }
    }
}

/// Returns the truncated product and a bound `B` with
/// `|log(full / truncated)| ≤ B`.
fn infinite_product(a: f64, q: f64, tol: f64) -> (f64, f64) {
    let mut acc = 1.0;
    let mut term = a;
    if q == 0.0 {
        return (1.0 - a, 0.0);
    }
    while term.abs() >= tol {
        acc *= 1.0 - term;
        term *= q;
    }
    let r = term.abs();
    let bound = if r == 0.0 { 0.0 } else { r / ((1.0 - q.abs()) * (1.0 - r)) };
    (acc, bound)
}

/// `Π_{(q,t)}(a; b) = Π_{i,j} (t a_i b_j; q)_∞ / (a_i b_j; q)_∞`.
pub fn cauchy_kernel(a: &[Rational], b: &[Rational], params: &Params, tol: f64) -> Result<Value> {
    for x in a {
        for y in b {
            if (x * y).abs() >= Rational::one() {
                return Err(Error::Divergence(format!("a_i b_j = {} ≥ 1", x * y)));
            }
        }
    }
    if params.q.is_zero() {
        let mut acc = Rational::one();
        for x in a {
            for y in b {
                let z = x * y;
                acc *= (Rational::one() - &params.t * &z) / (Rational::one() - z);
            }
        }
        return Ok(Value::Exact(acc));
    }
    let q = to_f64(&params.q);
    let t = to_f64(&params.t);
    let mut log_acc = 0.0f64;
    let mut bound = 0.0;
    for x in a {
        for y in b {
            let z = to_f64(&(x * y));
            let (num, bn) = infinite_product(t * z, q, tol);
            let (den, bd) = infinite_product(z, q, tol);
            log_acc += num.ln() - den.ln();
            bound += bn + bd;
        }
    }
    Ok(Value::Approx { value: log_acc.exp(), rel_tail_bound: bound })
}

/// `Π_{(0,t)}(1, t, …, t^{n-1}; y, yt, yt^2, …) = Π_{i<n} 1/(1 - t^i y)`,
/// the product over the second alphabet telescoping.
pub fn principal_infinite_kernel(n: usize, y: &Rational, t: &Rational) -> Result<Rational> {
    if y.is_negative() || *y >= Rational::one() {
        return Err(Error::Divergence(format!("kernel needs 0 ≤ y < 1, got {y}")));
    }
    let mut acc = Rational::one();
    let mut ti = Rational::one();
    for _ in 0..n {
        acc /= Rational::one() - &ti * y;
        ti *= t;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn pochhammer_examples() {
        let h = rat(1, 2);
        assert_eq!(pochhammer(&h, &h, Count::Finite(0), 1e-9).unwrap(), Value::Exact(Rational::one()));
        assert_eq!(pochhammer(&h, &h, Count::Finite(2), 1e-9).unwrap(), Value::Exact(rat(3, 8)));
        let inf = pochhammer(&h, &h, Count::Infinite, 1e-9).unwrap();
        assert!((inf.to_f64() - 0.288_788_095_086_602_4).abs() < 1e-8);
        assert!(pochhammer(&h, &rat(3, 2), Count::Infinite, 1e-9).is_err());
    }

    #[test]
    fn kernel_examples() {
        let p = Params::hall_littlewood(rat(1, 2)).unwrap();
        let one = Rational::one();
        assert_eq!(cauchy_kernel(&[], &[rat(1, 2)], &p, 1e-12).unwrap(), Value::Exact(one.clone()));
        assert_eq!(cauchy_kernel(&[one.clone()], &[rat(1, 2)], &p, 1e-12).unwrap(), Value::Exact(rat(3, 2)));
        assert_eq!(
            cauchy_kernel(&[one.clone(), rat(1, 2)], &[rat(1, 2)], &p, 1e-12).unwrap(),
            Value::Exact(rat(7, 4))
        );
        assert!(matches!(cauchy_kernel(&[one.clone()], &[one], &p, 1e-12), Err(Error::Divergence(_))));
    }

    #[test]
    fn general_q_matches_hl_limit() {
        let a = [rat(1, 3)];
        let b = [rat(1, 2)];
        let hl = Params::hall_littlewood(rat(1, 2)).unwrap();
        let tiny = Params::macdonald(rat(1, 1_000_000), rat(1, 2)).unwrap();
        let e = cauchy_kernel(&a, &b, &hl, 1e-14).unwrap().to_f64();
        let m = cauchy_kernel(&a, &b, &tiny, 1e-14).unwrap().to_f64();
        assert!((e - m).abs() < 1e-5);
    }
}
