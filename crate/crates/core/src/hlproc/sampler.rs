//! Exact sampling of the Cauchy dynamics by random insertion.
//!
//! A step with the generalized variable `x̂ = (x, …, t^{m-1}x)` inserts the
//! arrays `ω_0, …, ω_{m-1}` in order, where `ω_j` has independent
//! coordinates `ω_{j,i} ~ G_{t^{j+i} x}` (zero-based `i`). Zero arrays act
//! trivially, so only the nonzero entries are drawn: for each particle the
//! index of the next nonzero entry is drawn directly from the telescoping
//! product `Π_{j ∈ [J, J')} G_{y_j}(0) = (1 - y_J)/(1 - y_{J'})`, and its
//! value from `1 + Geom(y)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use super::specialization::{GeneralizedVariable, Length, Specialization};
use super::uniform::LazyUniform;
use crate::error::{arg, Result};
use crate::rational::{check_unit_interval, powu, to_f64, Rational};
use crate::symfunc::Signature;
use crate::trajectory::{Source, Trajectory, TrajectoryMeta};

/// `G_x(ℓ) = (1-x)/(1-tx) · (1-t)^{[ℓ>0]} · x^ℓ`.
pub fn gx_pmf(x: &Rational, t: &Rational, l: u64) -> Rational {
    let one = Rational::one();
    let mut v = (&one - x) / (&one - t * x) * powu(x, l);
    if l > 0 {
        v *= &one - t;
    }
    v
}

/// A rational together with its float value.
#[derive(Clone)]
struct Num {
    exact: Rational,
    approx: f64,
}

impl Num {
    fn new(exact: Rational) -> Self {
        let approx = to_f64(&exact);
        Num { exact, approx }
    }
}

/// `t^e x`, exact and approximate.
struct Ladder<'a> {
    x: &'a Num,
    t: &'a Num,
}

impl Ladder<'_> {
    fn approx(&self, e: u64) -> f64 {
        self.t.approx.powi(e.min(i32::MAX as u64) as i32) * self.x.approx
    }
    fn exact(&self, e: u64) -> Rational {
        powu(&self.t.exact, e) * &self.x.exact
    }
}

fn draw_gx_num<R: Rng + ?Sized>(y: &Num, t: &Num, rng: &mut R) -> u64 {
    // CDF(ℓ) = 1 - (1-t) y^{ℓ+1} / (1-ty).
    let mut u = LazyUniform::draw(rng);
    let mut l = 0u64;
    loop {
        let approx = 1.0 - (1.0 - t.approx) * y.approx.powi((l + 1) as i32) / (1.0 - t.approx * y.approx);
        let exact = || {
            let one = Rational::one();
            &one - (&one - &t.exact) * powu(&y.exact, l + 1) / (&one - &t.exact * &y.exact)
        };
        if u.less_than_approx(approx, exact, rng) {
            return l;
        }
        l += 1;
    }
}

/// `1 + Geom(y)`, the law of a `G_y` draw conditioned to be positive.
fn draw_positive<R: Rng + ?Sized>(y: &Num, rng: &mut R) -> u64 {
    // Geom(y): CDF(ℓ) = 1 - y^{ℓ+1}.
    let mut u = LazyUniform::draw(rng);
    let mut l = 0u64;
    loop {
        let approx = 1.0 - y.approx.powi((l + 1) as i32);
        if u.less_than_approx(approx, || Rational::one() - powu(&y.exact, l + 1), rng) {
            return l + 1;
        }
        l += 1;
    }
}

/// One exact draw from `G_x`.
pub fn sample_gx<R: Rng + ?Sized>(x: &Rational, t: &Rational, rng: &mut R) -> Result<u64> {
    check_unit_interval("x", x)?;
    check_unit_interval("t", t)?;
    Ok(draw_gx_num(&Num::new(x.clone()), &Num::new(t.clone()), rng))
}

/// The insertion map `ι(a; λ)` of the pushing particle system.
pub fn insert(impulses: &[i64], lambda: &Signature) -> Result<Signature> {
    if impulses.len() != lambda.len() {
        return arg(format!("{} impulses for {} particles", impulses.len(), lambda.len()));
    }
    if impulses.iter().any(|&a| a < 0) {
        return arg("impulses must be nonnegative");
    }
    let mut parts = lambda.parts().to_vec();
    let a: Vec<u64> = impulses.iter().map(|&a| a as u64).collect();
    insert_in_place(&mut parts, &a);
    Signature::new(parts)
}

/// `ι` on raw positions. Particle `r` ends at
/// `min(λ_{r-1}, max_{s ≥ r} (λ_s + a_r + … + a_s))`.
pub(crate) fn insert_in_place(parts: &mut [i64], a: &[u64]) {
    let n = parts.len();
    let mut reach = i64::MIN;
    for r in (0..n).rev() {
        reach = reach.max(parts[r]) + a[r] as i64;
        parts[r] = if r == 0 { reach } else { reach.min(parts[r - 1]) };
    }
}

/// The nonzero arrays of one generalized-variable step, keyed by their
/// index `j` within `x̂`.
pub type Arrays = BTreeMap<u64, Vec<u64>>;

/// Draws the nonzero entries of `(ω_0, ω_1, …)` by index skipping.
pub fn draw_arrays<R: Rng + ?Sized>(n: usize, var: &GeneralizedVariable, t: &Rational, rng: &mut R) -> Arrays {
    let x = Num::new(var.x.clone());
    let tn = Num::new(t.clone());
    let ladder = Ladder { x: &x, t: &tn };
    let one = Rational::one();
    let mut arrays = Arrays::new();
    for i in 0..n as u64 {
        let mut start = 0u64;
        loop {
            // Probability that some entry with index in [start, m) is nonzero.
            let (end_approx, end_exact) = match var.length {
                Length::Finite(m) if start >= m => break,
                Length::Finite(m) => (ladder.approx(m + i), Some(m + i)),
                Length::Infinite => (0.0, None),
            };
            let y_start = ladder.approx(start + i);
            let exact_any = || {
                let end = end_exact.map(|e| ladder.exact(e)).unwrap_or_else(Rational::zero);
                &one - (&one - ladder.exact(start + i)) / (&one - end)
            };
            let mut u = LazyUniform::draw(rng);
            if !u.less_than_approx(1.0 - (1.0 - y_start) / (1.0 - end_approx), exact_any, rng) {
                break;
            }
            let mut j = start;
            loop {
                let approx = 1.0 - (1.0 - y_start) / (1.0 - ladder.approx(j + 1 + i));
                let exact = || &one - (&one - ladder.exact(start + i)) / (&one - ladder.exact(j + 1 + i));
                if u.less_than_approx(approx, exact, rng) {
                    break;
                }
                j += 1;
            }
            let y = Num { exact: ladder.exact(j + i), approx: ladder.approx(j + i) };
            let v = draw_positive(&y, rng);
            arrays.entry(j).or_insert_with(|| vec![0; n])[i as usize] = v;
            start = j + 1;
        }
    }
    arrays
}

/// Reference sampler: draws every `ω_{j,i}` directly, truncating an
/// infinite variable once `t^j x < cutoff`.
pub fn draw_arrays_truncated<R: Rng + ?Sized>(
    n: usize,
    var: &GeneralizedVariable,
    t: &Rational,
    cutoff: f64,
    rng: &mut R,
) -> Arrays {
    let x = Num::new(var.x.clone());
    let tn = Num::new(t.clone());
    let ladder = Ladder { x: &x, t: &tn };
    let mut arrays = Arrays::new();
    let mut j = 0u64;
    loop {
        match var.length {
            Length::Finite(m) if j >= m => break,
            Length::Infinite if ladder.approx(j) < cutoff => break,
            _ => {}
        }
        let row: Vec<u64> = (0..n as u64)
            .map(|i| {
                let y = Num { exact: ladder.exact(j + i), approx: ladder.approx(j + i) };
                draw_gx_num(&y, &tn, rng)
            })
            .collect();
        if row.iter().any(|&v| v > 0) {
            arrays.insert(j, row);
        }
        j += 1;
    }
    arrays
}

pub(crate) fn apply_insertions(parts: &mut [i64], arrays: &Arrays) {
    for a in arrays.values() {
        insert_in_place(parts, a);
    }
}

pub(crate) fn apply_free(v: &mut [i64], arrays: &Arrays) {
    for a in arrays.values() {
        for (vi, ai) in v.iter_mut().zip(a) {
            *vi += *ai as i64;
        }
    }
}

/// One step of the Cauchy dynamics with the generalized variable `var`.
pub fn step_generalized<R: Rng + ?Sized>(lambda: &Signature, var: &GeneralizedVariable, t: &Rational, rng: &mut R) -> Signature {
    let mut parts = lambda.parts().to_vec();
    apply_insertions(&mut parts, &draw_arrays(lambda.len(), var, t, rng));
    Signature::new(parts).expect("insertion preserves order")
}

/// One step of the non-interacting walk: every coordinate receives its
/// own impulses with no blocking.
pub fn noninteracting_step<R: Rng + ?Sized>(v: &[i64], var: &GeneralizedVariable, t: &Rational, rng: &mut R) -> Vec<i64> {
    let mut out = v.to_vec();
    apply_free(&mut out, &draw_arrays(v.len(), var, t, rng));
    out
}

fn meta(spec: &Specialization, source: Source) -> TrajectoryMeta {
    TrajectoryMeta { seed: None, stream: None, spec: spec.to_string(), source, precision: None, censored: false }
}

/// `λ(0) = 0, λ(j) = ι(ω^{(j)}; λ(j-1))` for `j = 1..k`.
pub fn run_process<R: Rng + ?Sized>(n: usize, spec: &Specialization, k: usize, rng: &mut R) -> Trajectory {
    run_coupled(n, spec, k, rng).0
}

/// The interacting path and the non-interacting walk driven by the same
/// arrays.
pub fn run_coupled<R: Rng + ?Sized>(n: usize, spec: &Specialization, k: usize, rng: &mut R) -> (Trajectory, Trajectory) {
    let mut path = Trajectory::new(n, meta(spec, Source::Particle));
    let mut free = Trajectory::new(n, meta(spec, Source::Noninteracting));
    let mut lam = vec![0i64; n];
    let mut v = vec![0i64; n];
    for j in 0..k {
        let arrays = draw_arrays(n, spec.var(j), &spec.t, rng);
        apply_insertions(&mut lam, &arrays);
        apply_free(&mut v, &arrays);
        path.steps.push(lam.clone());
        free.steps.push(v.clone());
    }
    (path, free)
}
