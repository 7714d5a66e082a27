use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::jumps::mean_jump;
use crate::error::{arg, Result};
use crate::hlproc::{GeneralizedVariable, Length};
use crate::padic::Dim;
use crate::rational::{powu, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LyapunovRow {
    pub i: usize,
    /// `L_i = lim λ_{n-i+1}(k)/k`.
    pub exponent: Rational,
    /// `L_i / (p^{-n}(1 - c(n)))`, which tends to `p^{i-1}` as `n` grows.
    pub normalized_ratio: Rational,
}

/// Lyapunov exponents of products of `n × n` Haar corners whose sizes `N`
/// occur with frequencies `ρ(N)`.
pub fn lyapunov_predict(n: usize, profile: &[(Dim, Rational)], p: u64) -> Result<Vec<LyapunovRow>> {
    if n == 0 || profile.is_empty() {
        return arg("need n ≥ 1 and a nonempty frequency profile");
    }
    let t = rat(1, p as i64);
    let mut mass = Rational::zero();
    let mut c = Rational::zero();
    let mut vars = Vec::new();
    for (dim, rho) in profile {
        if rho.is_negative() {
            return arg("frequencies must be nonnegative");
        }
        mass += rho;
        let length = match *dim {
            Dim::Finite(big) if big <= n => return arg(format!("frequency on N = {big} ≤ n = {n}")),
            Dim::Finite(big) => {
                c += rho * powu(&t, (big - n) as u64);
                Length::Finite((big - n) as u64)
            }
            Dim::Infinite => Length::Infinite,
        };
        vars.push((GeneralizedVariable::new(t.clone(), length)?, rho.clone()));
    }
    if mass > Rational::one() {
        return arg(format!("frequencies sum to {mass} > 1"));
    }
    let norm = powu(&t, n as u64) * (Rational::one() - c);
    Ok((1..=n)
        .map(|i| {
            let exponent: Rational = vars.iter().map(|(v, rho)| rho * mean_jump(n - i + 1, v, &t)).sum();
            let normalized_ratio = &exponent / &norm;
            LyapunovRow { i, exponent, normalized_ratio }
        })
        .collect())
}
