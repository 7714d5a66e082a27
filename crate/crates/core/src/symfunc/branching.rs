//! One-variable branching coefficients `ψ_{λ/μ}` and `φ_{λ/ν}`.
//!
//! For `q = 0` the Hall–Littlewood multiplicity products are used. For
//! general `q` the Macdonald product formulas are evaluated exactly.

use num_traits::{One, Zero};

use super::signature::Signature;
use crate::error::Result;
use crate::rational::{check_unit_interval, powu, qpoch, Rational};

/// The two families of skew functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkewKind {
    P,
    Q,
}

/// Macdonald parameters. `q = 0` gives Hall–Littlewood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub q: Rational,
    pub t: Rational,
}

impl Params {
    pub fn hall_littlewood(t: Rational) -> Result<Self> {
        check_unit_interval("t", &t)?;
        Ok(Params { q: Rational::zero(), t })
    }

    pub fn macdonald(q: Rational, t: Rational) -> Result<Self> {
        check_unit_interval("t", &t)?;
        if q < Rational::zero() || q >= Rational::one() {
            return crate::error::domain(format!("q must lie in [0,1), got {q}"));
        }
        Ok(Params { q, t })
    }

    pub fn is_hall_littlewood(&self) -> bool {
        self.q.is_zero()
    }
}

/// Coefficient of `x^{|outer|-|inner|}` in the single-variable skew function.
/// Zero when the pair does not interlace in the required way.
pub fn branch_coefficient(outer: &Signature, inner: &Signature, kind: SkewKind, params: &Params) -> Rational {
    match kind {
        SkewKind::P if !inner.p_interlaces(outer) => Rational::zero(),
        SkewKind::Q if !inner.q_interlaces(outer) => Rational::zero(),
        _ if params.is_hall_littlewood() => hl_branch(outer, inner, kind, &params.t),
        SkewKind::P => psi(outer, inner, &params.q, &params.t),
        SkewKind::Q => phi(outer, inner, &params.q, &params.t),
    }
}

fn hl_branch(outer: &Signature, inner: &Signature, kind: SkewKind, t: &Rational) -> Rational {
    let mo = outer.multiplicities();
    let mi = inner.multiplicities();
    let mut acc = Rational::one();
    let (big, small) = match kind {
        SkewKind::P => (&mi, &mo),
        SkewKind::Q => (&mo, &mi),
    };
    for (k, &m) in big {
        if m == small.get(k).copied().unwrap_or(0) + 1 {
            acc *= Rational::one() - powu(t, m as u64);
        }
    }
    acc
}

/// `f(t^a q^b) / f(t^a q^c)` where `f(u) = (tu;q)_∞ / (qu;q)_∞`, `b, c ≥ 0`.
fn f_ratio(a: u64, b: i64, c: i64, q: &Rational, t: &Rational) -> Rational {
    if b > c {
        return f_ratio(a, c, b, q, t).recip();
    }
    let n = (c - b) as u64;
    let ta = powu(t, a);
    let qb = powu(q, b as u64);
    let num = qpoch(&(&ta * t * &qb), q, n);
    let den = qpoch(&(&ta * &qb * q), q, n);
    num / den
}

fn psi(lambda: &Signature, mu: &Signature, q: &Rational, t: &Rational) -> Rational {
    let l = lambda.parts();
    let m = mu.parts();
    let n = l.len();
    let mut acc = Rational::one();
    for i in 0..n - 1 {
        for j in i..n - 1 {
            let a = (j - i) as u64;
            acc *= f_ratio(a, m[i] - m[j], l[i] - m[j], q, t);
            acc *= f_ratio(a, l[i] - l[j + 1], m[i] - l[j + 1], q, t);
        }
    }
    acc
}

fn phi(lambda: &Signature, nu: &Signature, q: &Rational, t: &Rational) -> Rational {
    let l = lambda.parts();
    let v = nu.parts();
    let n = l.len();
    let mut acc = Rational::one();
    for i in 0..n {
        for j in i..n {
            acc *= f_ratio((j - i) as u64, l[i] - l[j], l[i] - v[j], q, t);
        }
    }
    for i in 0..n.saturating_sub(1) {
        for j in i..n - 1 {
            acc *= f_ratio((j - i) as u64, v[i] - v[j + 1], v[i] - l[j + 1], q, t);
        }
    }
    acc
}
