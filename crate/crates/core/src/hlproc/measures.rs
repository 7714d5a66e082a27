//! Exact laws of singular numbers under corners and products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::kernel::interlacing_extensions;
use crate::error::{arg, domain, resource, Error, Result};
use crate::rational::{powu, to_f64, Rational};
use crate::symfunc::signature::box_signatures;
use crate::symfunc::{
    cauchy_kernel, p_eval, principal_p, principal_q, principal_q_infinite, signatures_of_size, skew_eval,
    structure_coeffs, Params, Signature, SkewKind,
};
use crate::symfunc::kernel::principal_infinite_kernel;

/// A probability law on signatures. Atoms carry exact masses; `tail` is the
/// exact mass not listed (positive only for truncated infinite supports).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLaw {
    pub atoms: BTreeMap<Signature, Rational>,
    pub tail: Rational,
}

impl ExactLaw {
    pub fn from_atoms(atoms: BTreeMap<Signature, Rational>) -> Result<Self> {
        let total: Rational = atoms.values().sum();
        let tail = Rational::one() - total;
        if tail.is_negative() || atoms.values().any(|p| p.is_negative()) {
            return Err(Error::Validation(format!("masses do not form a probability law (tail {tail})")));
        }
        Ok(ExactLaw { atoms, tail })
    }

    pub fn point_mass(s: Signature) -> Self {
        ExactLaw { atoms: BTreeMap::from([(s, Rational::one())]), tail: Rational::zero() }
    }

    pub fn prob(&self, s: &Signature) -> Rational {
        self.atoms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn probs_f64(&self) -> BTreeMap<Signature, f64> {
        self.atoms.iter().map(|(s, p)| (s.clone(), to_f64(p))).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    signature: Signature,
    prob_num: String,
    prob_den: String,
}

/// Serialized as a list of `{signature, prob_num, prob_den}`; the tail is
/// whatever mass the list leaves out.
impl Serialize for ExactLaw {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<AtomJson> = self
            .atoms
            .iter()
            .map(|(sig, p)| AtomJson { signature: sig.clone(), prob_num: p.numer().to_string(), prob_den: p.denom().to_string() })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactLaw {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<AtomJson>::deserialize(d)?;
        let mut atoms = BTreeMap::new();
        for a in list {
            let num: BigInt = a.prob_num.parse().map_err(D::Error::custom)?;
            let den: BigInt = a.prob_den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            atoms.insert(a.signature, Rational::new(num, den));
        }
        ExactLaw::from_atoms(atoms).map_err(D::Error::custom)
    }
}

/// Largest size visited before giving up on an infinite support.
const MAX_ENUMERATED_SIZE: i64 = 5000;

/// Adds the atoms of size class `s = 0, 1, 2, …` (as produced by `class`)
/// until the unlisted mass drops below `tol`.
pub(crate) fn accumulate_by_size<F>(tol: f64, mut class: F) -> Result<ExactLaw>
where
    F: FnMut(i64) -> Result<Vec<(Signature, Rational)>>,
{
    let mut atoms = BTreeMap::new();
    let mut tail = Rational::one();
    for s in 0..=MAX_ENUMERATED_SIZE {
        for (sig, p) in class(s)? {
            if !p.is_zero() {
                tail -= &p;
                atoms.insert(sig, p);
            }
        }
        if tail.is_negative() {
            return Err(Error::Validation(format!("enumerated mass exceeds one by {}", -tail)));
        }
        if to_f64(&tail) < tol {
            return Ok(ExactLaw { atoms, tail });
        }
    }
    resource(format!("remaining mass {} after enumerating sizes up to {MAX_ENUMERATED_SIZE}", to_f64(&tail)))
}

fn geometric(x: &Rational, t: &Rational, len: usize) -> Vec<Rational> {
    let mut v = Vec::with_capacity(len);
    let mut cur = x.clone();
    for _ in 0..len {
        v.push(cur.clone());
        cur *= t;
    }
    v
}

fn exact_kernel(a: &[Rational], b: &[Rational], t: &Rational) -> Result<Rational> {
    let params = Params::hall_littlewood(t.clone())?;
    Ok(cauchy_kernel(a, b, &params, 0.0)?.exact().cloned().expect("q = 0 kernels are exact"))
}

/// Law of the singular numbers of the top-left `n × m` corner of a Haar
/// element of `GL_N(Z_p)`, `t = 1/p`:
/// `P_λ(1,…,t^{n-1}) Q_λ(t^{m-n+1},…,t^{N-n}) / Π(1,…,t^{n-1}; t^{m-n+1},…,t^{N-n})`.
pub fn truncated_haar_law(n: usize, m: usize, big_n: usize, t: &Rational, tol: f64) -> Result<ExactLaw> {
    if n == 0 || n > m || m > big_n {
        return arg(format!("need 1 ≤ n ≤ m ≤ N, got n={n} m={m} N={big_n}"));
    }
    let one = Rational::one();
    let y = powu(t, (m - n + 1) as u64);
    let k = big_n - m;
    let z = exact_kernel(&geometric(&one, t, n), &geometric(&y, t, k), t)?;
    accumulate_by_size(tol, |s| {
        signatures_of_size(n, s)
            .into_iter()
            .map(|lam| {
                let p = principal_p(&lam, &one, t)? * principal_q(&lam, &y, t, k)? / &z;
                Ok((lam, p))
            })
            .collect()
    })
}

/// Law of the singular numbers of an `n × m` matrix with iid additive-Haar
/// entries: the `N → ∞` limit of [`truncated_haar_law`].
pub fn ginibre_law(n: usize, m: usize, t: &Rational, tol: f64) -> Result<ExactLaw> {
    if n == 0 || n > m {
        return arg(format!("need 1 ≤ n ≤ m, got n={n} m={m}"));
    }
    let one = Rational::one();
    let y = powu(t, (m - n + 1) as u64);
    let z = principal_infinite_kernel(n, &y, t)?;
    accumulate_by_size(tol, |s| {
        signatures_of_size(n, s)
            .into_iter()
            .map(|lam| {
                let p = principal_p(&lam, &one, t)? * principal_q_infinite(&lam, &y, t)? / &z;
                Ok((lam, p))
            })
            .collect()
    })
}

/// `λ ⊠ μ` at the principal specialization: the law of `SN(AB)` for
/// bi-invariant `A`, `B` with `SN(A) = λ`, `SN(B) = μ`.
pub fn product_convolution_dist(lambda: &Signature, mu: &Signature, t: &Rational) -> Result<ExactLaw> {
    let params = Params::hall_littlewood(t.clone())?;
    let one = Rational::one();
    let denom = principal_p(lambda, &one, t)? * principal_p(mu, &one, t)?;
    let mut atoms = BTreeMap::new();
    for (nu, c) in structure_coeffs(lambda, mu, &params)? {
        atoms.insert(nu.clone(), c * principal_p(&nu, &one, t)? / &denom);
    }
    let law = ExactLaw::from_atoms(atoms)?;
    if !law.tail.is_zero() {
        return Err(Error::Validation(format!("product law for {lambda} ⊠ {mu} misses mass {}", law.tail)));
    }
    Ok(law)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerMode {
    /// Keep the first `N - k` columns of an `n × N` matrix.
    Column,
    /// Keep the first `n - d` rows.
    Row,
}

/// Law of the singular numbers after removing `kd` columns or rows from a
/// bi-invariant `n × N` matrix with singular numbers `λ`.
///
/// Columns: `Q_{ν/λ}(1, t^{-1}, …, t^{-(k-1)}) P_ν(t^{N-n}, …, t^{N-1})`
/// divided by `P_λ(t^{N-n}, …) Π(1, …, t^{-(k-1)}; t^{N-n}, …, t^{N-1})`;
/// the support is infinite and is truncated at remaining mass `tol`.
///
/// Rows: `P_{λ/μ}(1, …, t^{d-1}) P_μ(t^d, …, t^{n-1}) / P_λ(1, …, t^{n-1})`.
pub fn corners_kernel_dist(lambda: &Signature, big_n: usize, kd: usize, mode: CornerMode, t: &Rational, tol: f64) -> Result<ExactLaw> {
    let n = lambda.len();
    let params = Params::hall_littlewood(t.clone())?;
    let one = Rational::one();
    match mode {
        CornerMode::Column => {
            if n == 0 || n > big_n || kd > big_n - n {
                return arg(format!("column corners need 1 ≤ n ≤ N and k ≤ N - n, got n={n} N={big_n} k={kd}"));
            }
            if kd == 0 {
                return Ok(ExactLaw::point_mass(lambda.clone()));
            }
            let tinv = one.clone() / t;
            let ys = geometric(&one, &tinv, kd);
            let base = powu(t, (big_n - n) as u64);
            let denom = principal_p(lambda, &base, t)? * exact_kernel(&ys, &geometric(&base, t, n), t)?;
            accumulate_by_size(tol, |s| {
                interlacing_extensions(lambda, kd, s)
                    .into_iter()
                    .map(|nu| {
                        let q = skew_eval(&nu, lambda, &ys, SkewKind::Q, &params)?;
                        let p = q * principal_p(&nu, &base, t)? / &denom;
                        Ok((nu, p))
                    })
                    .collect()
            })
        }
        CornerMode::Row => {
            if kd > n {
                return arg(format!("cannot remove {kd} rows from {n}"));
            }
            if kd == 0 {
                return Ok(ExactLaw::point_mass(lambda.clone()));
            }
            let l = lambda.parts();
            let r = n - kd;
            let lo: Vec<i64> = (0..r).map(|i| l[i + kd]).collect();
            let hi: Vec<i64> = l[..r].to_vec();
            let xs = geometric(&one, t, kd);
            let base = powu(t, kd as u64);
            let denom = principal_p(lambda, &one, t)?;
            let mut atoms = BTreeMap::new();
            for mu in box_signatures(&lo, &hi) {
                let p = skew_eval(lambda, &mu, &xs, SkewKind::P, &params)? * principal_p(&mu, &base, t)? / &denom;
                if !p.is_zero() {
                    atoms.insert(mu, p);
                }
            }
            ExactLaw::from_atoms(atoms)
        }
    }
}

fn repeat_then(d: i64, copies: usize, rest: &[i64]) -> Result<Signature> {
    let mut v = vec![d; copies];
    v.extend_from_slice(rest);
    Signature::new(v)
}

fn last_parts(kappa: &Signature, r: usize) -> Signature {
    let p = kappa.parts();
    Signature::new(p[p.len() - r..].to_vec()).expect("tail of a signature")
}

fn exact_or_domain(v: crate::symfunc::Value) -> Result<Rational> {
    match v.exact() {
        Some(r) => Ok(r.clone()),
        None => domain("this limit formula is evaluated exactly only for q = 0"),
    }
}

/// The law of the last `n` parts of `(D[N-n], λ) ⊠_a (D[N-m], 0[m])`.
pub fn cauchy_projection_measure(lambda: &Signature, m: usize, big_n: usize, d: i64, a: &[Rational], params: &Params) -> Result<BTreeMap<Signature, Rational>> {
    let n = lambda.len();
    if !(n <= m && m <= big_n && n <= big_n - m) || a.len() != big_n {
        return arg(format!("need n ≤ m ≤ N, n ≤ N - m and {big_n} values"));
    }
    let first = repeat_then(d, big_n - n, lambda.parts())?;
    let second = repeat_then(d, big_n - m, &vec![0; m])?;
    project(&first, &second, n, a, params)
}

/// The law of the last `n - k` parts of `λ ⊠_a (D[k], 0[n-k])`.
pub fn branch_projection_measure(lambda: &Signature, k: usize, d: i64, a: &[Rational], params: &Params) -> Result<BTreeMap<Signature, Rational>> {
    let n = lambda.len();
    if k == 0 || k > n || a.len() != n {
        return arg(format!("need 0 < k ≤ n = {n} and {n} values"));
    }
    let second = repeat_then(d, k, &vec![0; n - k])?;
    project(lambda, &second, n - k, a, params)
}

fn project(first: &Signature, second: &Signature, keep: usize, a: &[Rational], params: &Params) -> Result<BTreeMap<Signature, Rational>> {
    let denom = p_eval(first, a, params)? * p_eval(second, a, params)?;
    let mut out: BTreeMap<Signature, Rational> = BTreeMap::new();
    for (kappa, c) in structure_coeffs(first, second, params)? {
        let w = c * p_eval(&kappa, a, params)? / &denom;
        *out.entry(last_parts(&kappa, keep)).or_insert_with(Rational::zero) += w;
    }
    Ok(out)
}

/// `Q_{ν/λ}(a_1^{-1}, …, a_{N-m}^{-1}) P_ν(a_{N-n+1}, …, a_N)` divided by
/// `P_λ(a_{N-n+1}, …, a_N) Π(a_1^{-1}, …, a_{N-m}^{-1}; a_{N-n+1}, …, a_N)`.
pub fn cauchy_projection_limit(lambda: &Signature, nu: &Signature, m: usize, a: &[Rational], params: &Params) -> Result<Rational> {
    let (n, big_n) = (lambda.len(), a.len());
    if nu.len() != n || n > m || m > big_n {
        return arg("incompatible sizes for the projection limit");
    }
    let inv: Vec<Rational> = a[..big_n - m].iter().map(|v| v.recip()).collect();
    let tail = &a[big_n - n..];
    let kernel = exact_or_domain(cauchy_kernel(&inv, tail, params, 0.0)?)?;
    let q = skew_eval(nu, lambda, &inv, SkewKind::Q, params)?;
    Ok(q * p_eval(nu, tail, params)? / (p_eval(lambda, tail, params)? * kernel))
}

/// `P_{λ/μ}(a_1, …, a_k) P_μ(a_{k+1}, …, a_n) / P_λ(a)`.
pub fn branch_projection_limit(lambda: &Signature, mu: &Signature, k: usize, a: &[Rational], params: &Params) -> Result<Rational> {
    let n = lambda.len();
    if mu.len() + k != n || a.len() != n {
        return arg("incompatible sizes for the projection limit");
    }
    let skew = skew_eval(lambda, mu, &a[..k], SkewKind::P, params)?;
    Ok(skew * p_eval(mu, &a[k..], params)? / p_eval(lambda, a, params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn product_examples() {
        let t = rat(1, 2);
        let law = product_convolution_dist(&s(&[1, 0]), &s(&[1, 0]), &t).unwrap();
        assert_eq!(law.prob(&s(&[2, 0])), rat(2, 3));
        assert_eq!(law.prob(&s(&[1, 1])), rat(1, 3));
        let law = product_convolution_dist(&s(&[3, 1]), &s(&[0, 0]), &t).unwrap();
        assert_eq!(law, ExactLaw::point_mass(s(&[3, 1])));
        let law = product_convolution_dist(&s(&[2]), &s(&[5]), &t).unwrap();
        assert_eq!(law, ExactLaw::point_mass(s(&[7])));
    }

    #[test]
    fn single_entry_corner() {
        // 1×1 corner of Haar GL_2(Z_2): Pr(SN = 0) = 2/3.
        let law = truncated_haar_law(1, 1, 2, &rat(1, 2), 1e-12).unwrap();
        assert_eq!(law.prob(&s(&[0])), rat(2, 3));
    }

    #[test]
    fn ginibre_single_entry_is_geometric() {
        let law = ginibre_law(1, 1, &rat(1, 3), 1e-10).unwrap();
        for l in 0..5 {
            assert_eq!(law.prob(&s(&[l])), rat(2, 3) * powu(&rat(1, 3), l as u64));
        }
    }

    #[test]
    fn row_corner_example() {
        let t = rat(1, 2);
        let law = corners_kernel_dist(&s(&[1, 0]), 3, 1, CornerMode::Row, &t, 0.0).unwrap();
        // P_{(1,0)/(1)}(1) P_(1)(t) / P_(1,0)(1,t) = t/(1+t).
        assert_eq!(law.prob(&s(&[1])), rat(1, 3));
        assert_eq!(law.prob(&s(&[0])), rat(2, 3));
        assert!(law.tail.is_zero());
        let point = corners_kernel_dist(&s(&[1, 0]), 3, 0, CornerMode::Row, &t, 0.0).unwrap();
        assert_eq!(point, ExactLaw::point_mass(s(&[1, 0])));
    }

    #[test]
    fn column_corner_normalizes() {
        let t = rat(1, 2);
        let law = corners_kernel_dist(&s(&[1, 0]), 4, 2, CornerMode::Column, &t, 1e-9).unwrap();
        assert!(to_f64(&law.tail) < 1e-9);
        assert!(law.atoms.keys().all(|nu| s(&[1, 0]).dominated_by(nu)));
        assert!(corners_kernel_dist(&s(&[1, 0]), 4, 3, CornerMode::Column, &t, 1e-9).is_err());
    }

    #[test]
    fn branch_projection_converges() {
        let t = rat(1, 2);
        let p = Params::hall_littlewood(t.clone()).unwrap();
        let a = vec![rat(1, 1), t.clone()];
        let lam = s(&[1, 0]);
        let mut errs = Vec::new();
        for d in [2, 4, 6] {
            let m = branch_projection_measure(&lam, 1, d, &a, &p).unwrap();
            assert_eq!(m.values().sum::<Rational>(), Rational::one());
            let err: Rational = [s(&[0]), s(&[1])]
                .iter()
                .map(|mu| (m.get(mu).cloned().unwrap_or_else(Rational::zero) - branch_projection_limit(&lam, mu, 1, &a, &p).unwrap()).abs())
                .sum();
            errs.push(to_f64(&err));
        }
        assert!(errs[2] <= errs[0] && errs[2] < 0.05, "{errs:?}");
    }

    #[test]
    fn json_round_trip() {
        let law = product_convolution_dist(&s(&[1, 0]), &s(&[1, 0]), &rat(1, 2)).unwrap();
        let text = serde_json::to_string(&law).unwrap();
        assert!(text.contains("\"prob_num\":\"2\""));
        let back: ExactLaw = serde_json::from_str(&text).unwrap();
        assert_eq!(back, law);
    }
}
