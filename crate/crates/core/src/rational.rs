//! Thin helpers over [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{arg, domain, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `base^exp` for any integer exponent, with `0^0 = 1`.
///
/// A negative power of zero is reported as a domain error.
pub fn pow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        if exp < 0 {
            return domain("negative power of zero");
        }
        return Ok(Rational::zero());
    }
    let e = exp.unsigned_abs();
    let e: i32 = match i32::try_from(e) {
        Ok(e) => e,
        Err(_) => return domain("exponent too large"),
    };
    let v = num_traits::pow::Pow::pow(base, e);
    Ok(if exp < 0 { v.recip() } else { v })
}

/// Non-negative power; infallible.
pub fn powu(base: &Rational, exp: u64) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    num_traits::pow::Pow::pow(base, exp as u32)
}

/// `(a; q)_n = prod_{i<n} (1 - a q^i)`.
pub fn qpoch(a: &Rational, q: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= Rational::one() - &term;
        term *= q;
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"3"`, `"-1/2"` or an exact decimal such as `"0.125"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad(s))?;
        let d: BigInt = d.trim().parse().map_err(|_| bad(s))?;
        if d.is_zero() {
            return arg(format!("zero denominator in '{s}'"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return arg(format!("cannot parse '{s}' as a rational"));
        }
        let n: BigInt = digits.parse().map_err(|_| bad(s))?;
        let d = num_traits::pow::Pow::pow(BigInt::from(10), frac.len() as u32);
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad(s))?;
    Ok(Rational::from_integer(n))
}

fn bad(s: &str) -> crate::error::Error {
    crate::error::Error::Argument(format!("cannot parse '{s}' as a rational"))
}

/// Checks `0 < t < 1`.
pub fn check_unit_interval(name: &str, t: &Rational) -> Result<()> {
    if !t.is_positive() || *t >= Rational::one() {
        return domain(format!("{name} must lie in (0,1), got {t}"));
    }
    Ok(())
}
