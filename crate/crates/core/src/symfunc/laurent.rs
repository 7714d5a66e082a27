//! Sparse Laurent polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{arg, Result};
use crate::rational::{pow, Rational};

/// Map from exponent vectors to nonzero coefficients. The `BTreeMap` order
/// on `Vec<i64>` is lexicographic, so the last key is the lex-leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(exps: Vec<i64>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i64]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Vec<i64>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * x^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &LaurentPoly, c: &Rational, shift: &[i64]) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            let exps: Vec<i64> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            self.add_term(exps, v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    /// Symmetric under all permutations of variables; adjacent swaps suffice.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            self.terms.iter().all(|(e, v)| {
                let mut s = e.clone();
                s.swap(i, i + 1);
                self.terms.get(&s) == Some(v)
            })
        })
    }

    /// Total degree when homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<i64>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn evaluate(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.nvars {
            return arg(format!("expected {} values, got {}", self.nvars, values.len()));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in values.iter().zip(e) {
                term *= pow(x, k)?;
            }
            acc += term;
        }
        Ok(acc)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, &Rational::one(), &vec![0; self.nvars]);
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, &-Rational::one(), &vec![0; self.nvars]);
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_scaled_shifted(rhs, c, e);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn arithmetic() {
        let x = LaurentPoly::monomial(vec![1, 0], int(1));
        let y = LaurentPoly::monomial(vec![0, 1], int(1));
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq.coefficient(&[1, 1]), int(2));
        assert!(sq.is_symmetric());
        assert_eq!(sq.homogeneous_degree(), Some(2));
        assert_eq!(sq.leading_term().unwrap().0, &vec![2, 0]);
        let z = &sq - &sq;
        assert!(z.is_zero());
        assert_eq!(sq.evaluate(&[int(1), int(2)]).unwrap(), int(9));
        let xi = LaurentPoly::monomial(vec![-1, 0], int(1));
        assert_eq!((&xi * &x).coefficient(&[0, 0]), int(1));
        assert!(!x.is_symmetric());
    }
}
