//! The residue rings `Z/p^D`, with a machine-word path when `p^D < 2^63`
//! and an arbitrary-precision path otherwise.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// Entry storage for a matrix over one of the two ring implementations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Storage {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

pub(crate) trait ResidueRing: Sync {
    type E: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn store(v: Vec<Self::E>) -> Storage;

    fn p(&self) -> u64;
    fn precision(&self) -> u32;
    fn zero(&self) -> Self::E;
    fn from_u64(&self, v: u64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Residue mod `p`.
    fn residue(&self, a: &Self::E) -> u64;
    /// p-adic valuation of the representative; `precision()` for zero.
    fn valuation(&self, a: &Self::E) -> u32;
    /// Integer division of the representative by `p^v` (exact by assumption).
    fn div_p_pow(&self, a: &Self::E, v: u32) -> Self::E;
    /// Uniform element congruent to `r` mod `p`.
    fn random_lift<R: Rng + ?Sized>(&self, r: u64, rng: &mut R) -> Self::E;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::E;
    fn from_biguint(&self, a: &BigUint) -> Self::E;

    /// Inverse of a unit by Newton–Hensel lifting from its inverse mod `p`.
    fn inv_unit(&self, u: &Self::E) -> Self::E {
        let r = self.residue(u);
        debug_assert!(r != 0, "not a unit");
        let mut x = self.from_u64(inv_mod_prime(r, self.p()));
        let two = self.from_u64(2);
        let mut prec = 1u32;
        while prec < self.precision() {
            let ux = self.mul(u, &x);
            x = self.mul(&x, &self.sub(&two, &ux));
            prec = prec.saturating_mul(2);
        }
        x
    }
}

fn inv_mod_prime(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i128) as u64
}

/// `p^D` as a `u64` when it is below `2^63`.
pub(crate) fn small_modulus(p: u64, precision: u32) -> Option<u64> {
    p.checked_pow(precision).filter(|&m| m < (1u64 << 63))
}

pub(crate) struct SmallRing {
    p: u64,
    precision: u32,
    modulus: u64,
}

impl SmallRing {
    pub(crate) fn new(p: u64, precision: u32) -> Option<Self> {
        small_modulus(p, precision).map(|modulus| SmallRing { p, precision, modulus })
    }
}

impl ResidueRing for SmallRing {
    type E = u64;

    fn store(v: Vec<u64>) -> Storage {
        Storage::Small(v)
    }

    fn p(&self) -> u64 {
        self.p
    }
    fn precision(&self) -> u32 {
        self.precision
    }
    fn zero(&self) -> u64 {
        0
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.modulus
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn residue(&self, a: &u64) -> u64 {
        a % self.p
    }
    fn valuation(&self, a: &u64) -> u32 {
        if *a == 0 {
            return self.precision;
        }
        if self.p == 2 {
            return a.trailing_zeros();
        }
        let mut v = 0;
        let mut x = *a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }
    fn div_p_pow(&self, a: &u64, v: u32) -> u64 {
        a / self.p.pow(v)
    }
    fn random_lift<R: Rng + ?Sized>(&self, r: u64, rng: &mut R) -> u64 {
        let high = self.modulus / self.p;
        r + self.p * rng.gen_range(0..high)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.modulus)
    }
    fn from_biguint(&self, a: &BigUint) -> u64 {
        (a % self.modulus).to_u64().expect("reduced value fits")
    }
}

pub(crate) struct BigRing {
    p: u64,
    p_big: BigUint,
    precision: u32,
    modulus: BigUint,
    high: BigUint,
}

impl BigRing {
    pub(crate) fn new(p: u64, precision: u32) -> Self {
        let p_big = BigUint::from(p);
        let modulus = num_traits::pow(p_big.clone(), precision as usize);
        let high = &modulus / &p_big;
        BigRing { p, p_big, precision, modulus, high }
    }
}

impl ResidueRing for BigRing {
    type E = BigUint;

    fn store(v: Vec<BigUint>) -> Storage {
        Storage::Big(v)
    }

    fn p(&self) -> u64 {
        self.p
    }
    fn precision(&self) -> u32 {
        self.precision
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn from_u64(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.modulus
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn residue(&self, a: &BigUint) -> u64 {
        (a % &self.p_big).to_u64().expect("residue fits")
    }
    fn valuation(&self, a: &BigUint) -> u32 {
        if a.is_zero() {
            return self.precision;
        }
        if self.p == 2 {
            return a.trailing_zeros().map_or(self.precision, |z| z as u32);
        }
        let mut v = 0;
        let mut x = a.clone();
        loop {
            let (q, r) = x.div_rem(&self.p_big);
            if !r.is_zero() {
                return v;
            }
            x = q;
            v += 1;
        }
    }
    fn div_p_pow(&self, a: &BigUint, v: u32) -> BigUint {
        if self.p == 2 {
            return a >> v as usize;
        }
        a / num_traits::pow(self.p_big.clone(), v as usize)
    }
    fn random_lift<R: Rng + ?Sized>(&self, r: u64, rng: &mut R) -> BigUint {
        let h = rng.gen_biguint_below(&self.high);
        h * &self.p_big + BigUint::from(r)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        rng.gen_biguint_below(&self.modulus)
    }
    fn from_biguint(&self, a: &BigUint) -> BigUint {
        a % &self.modulus
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn inverses_small_and_big() {
        let s = SmallRing::new(3, 10).unwrap();
        for u in [1u64, 2, 4, 5, 7, 59048] {
            assert_eq!(s.mul(&u, &s.inv_unit(&u)), 1);
        }
        let b = BigRing::new(2, 200);
        let u = BigUint::from(12345677u64);
        assert!(b.mul(&u, &b.inv_unit(&u)).is_one());
    }

    #[test]
    fn valuations() {
        let s = SmallRing::new(2, 10).unwrap();
        assert_eq!(s.valuation(&12), 2);
        assert_eq!(s.valuation(&0), 10);
        let b = BigRing::new(5, 40);
        assert_eq!(b.valuation(&BigUint::from(250u32)), 3);
        assert_eq!(b.div_p_pow(&BigUint::from(250u32), 3), BigUint::from(2u32));
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }
}
