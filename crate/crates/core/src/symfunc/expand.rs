//! Expansion of symmetric Laurent polynomials in the `P` basis and
//! structure coefficients `c^ν_{λ,μ}`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::branching::Params;
use super::hl::{check_poly_caps, p_poly};
use super::laurent::LaurentPoly;
use super::signature::Signature;
use crate::error::{arg, Error, Result};
use crate::rational::Rational;

/// Writes a symmetric Laurent polynomial as `Σ c_λ P_λ`.
///
/// The lex-leading exponent of the remainder is always a signature; its
/// coefficient is peeled off with `P_λ` (which has leading term `x^λ`).
pub fn expand_in_p(f: &LaurentPoly, params: &Params) -> Result<BTreeMap<Signature, Rational>> {
    if !f.is_symmetric() {
        return Err(Error::Validation("polynomial is not symmetric".into()));
    }
    let mut rem = f.clone();
    let mut out = BTreeMap::new();
    let mut cache: HashMap<Signature, LaurentPoly> = HashMap::new();
    while let Some((lead, c)) = rem.leading_term() {
        let lambda = Signature::new(lead.clone())?;
        let c = c.clone();
        let p = match cache.get(&lambda) {
            Some(p) => p.clone(),
            None => {
                let p = p_poly(&lambda, params)?;
                cache.insert(lambda.clone(), p.clone());
                p
            }
        };
        rem = &rem - &p.scale(&c);
        out.insert(lambda, c);
    }
    Ok(out)
}

/// Nonzero `c^ν_{λ,μ}` in `P_λ P_μ = Σ_ν c^ν_{λ,μ} P_ν`.
pub fn structure_coeffs(lambda: &Signature, mu: &Signature, params: &Params) -> Result<BTreeMap<Signature, Rational>> {
    let n = lambda.len();
    if mu.len() != n {
        return arg("structure coefficients need signatures of equal length");
    }
    // P_{λ+d} = (x_1⋯x_n)^d P_λ, so work with nonnegative representatives.
    let dl = lambda.last().unwrap_or(0);
    let dm = mu.last().unwrap_or(0);
    let (l0, m0) = (lambda.shifted(-dl), mu.shifted(-dm));
    check_poly_caps(n, l0.size() + m0.size())?;
    let prod = &p_poly(&l0, params)? * &p_poly(&m0, params)?;
    let coeffs = expand_in_p(&prod, params)?;
    Ok(coeffs
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(nu, c)| (nu.shifted(dl + dm), c))
        .collect())
}
