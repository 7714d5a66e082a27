//! A uniform variable on `[0,1)` whose binary digits are drawn on demand, so
//! that comparisons with exact rational thresholds are never wrong.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed};
use rand::Rng;

use crate::rational::Rational;

/// Margin used when deciding a comparison from floating-point
/// approximations; far above the error of the thresholds we form.
const FLOAT_MARGIN: f64 = 1e-9;

pub struct LazyUniform {
    /// `U ∈ [bits / 2^len, (bits + 1) / 2^len)`.
    bits: BigInt,
    len: u64,
    /// First 64 bits as a float, for the fast path.
    head: f64,
}

impl LazyUniform {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let w = rng.next_u64();
        LazyUniform { bits: BigInt::from(w), len: 64, head: w as f64 / 18446744073709551616.0 }
    }

    /// Exact `U < r`.
    pub fn less_than<R: Rng + ?Sized>(&mut self, r: &Rational, rng: &mut R) -> bool {
        if !r.is_positive() {
            return false;
        }
        if *r >= Rational::one() {
            return true;
        }
        let (num, den) = (r.numer(), r.denom());
        loop {
            let target = num << self.len;
            let lo = &self.bits * den;
            if lo >= target {
                return false;
            }
            if lo + den <= target {
                return true;
            }
            self.bits = (&self.bits << 64u32) + BigInt::from_biguint(Sign::Plus, rng.next_u64().into());
            self.len += 64;
        }
    }

    /// `U < r` where `approx` is within `1e-12` of `r`; `exact` is only
    /// evaluated when the float comparison is too close to call.
    pub fn less_than_approx<R, F>(&mut self, approx: f64, exact: F, rng: &mut R) -> bool
    where
        R: Rng + ?Sized,
        F: FnOnce() -> Rational,
    {
        if self.head + FLOAT_MARGIN < approx {
            return true;
        }
        if self.head > approx + FLOAT_MARGIN {
            return false;
        }
        let r = exact();
        self.less_than(&r, rng)
    }

    #[cfg(test)]
    fn all_zero_head() -> Self {
        LazyUniform { bits: BigInt::from(0u8), len: 64, head: 0.0 }
    }

    #[cfg(test)]
    fn value_bounds(&self) -> (Rational, Rational) {
        let scale = BigInt::one() << self.len;
        (Rational::new(self.bits.clone(), scale.clone()), Rational::new(&self.bits + 1, scale))
    }
}
