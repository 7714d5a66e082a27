use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{arg, Result};
use crate::hlproc::{GeneralizedVariable, Length, Specialization};
use crate::rational::{powu, to_f64, Rational};
use crate::trajectory::Trajectory;

// For y = t^{i-1+j} x the j-th summand of the mean is y(1-t)/((1-y)(1-ty)),
// which equals g(y) - g(ty) with g(y) = y/(1-y). The variance summand is
// h(y) - h(ty) with h(y) = y/(1-y)^2. Both sums over j telescope.

fn g(y: &Rational) -> Rational {
    y / (Rational::one() - y)
}

fn h(y: &Rational) -> Rational {
    let d = Rational::one() - y;
    y / (&d * &d)
}

fn telescoped(i: usize, var: &GeneralizedVariable, t: &Rational, f: fn(&Rational) -> Rational) -> Rational {
    assert!(i >= 1, "particle indices start at 1");
    let first = powu(t, (i - 1) as u64) * &var.x;
    match var.length {
        Length::Infinite => f(&first),
        Length::Finite(m) => f(&first) - f(&(powu(t, m) * first)),
    }
}

/// Expected jump of particle `i` (1-based) in the non-interacting walk
/// during one step with `x̂`.
pub fn mean_jump(i: usize, var: &GeneralizedVariable, t: &Rational) -> Rational {
    telescoped(i, var, t, g)
}

/// Variance of that jump.
pub fn var_jump(i: usize, var: &GeneralizedVariable, t: &Rational) -> Rational {
    telescoped(i, var, t, h)
}

fn cyclic_sum(spec: &Specialization, k: usize, term: impl Fn(&GeneralizedVariable) -> Rational) -> Rational {
    let period = spec.vars.len();
    let per: Vec<Rational> = spec.vars.iter().map(&term).collect();
    let full: Rational = per.iter().sum();
    let rest: Rational = per[..k % period].iter().sum();
    full * Rational::from_integer(((k / period) as i64).into()) + rest
}

/// `Σ_{j=1}^k mean_jump(i, x̂_j)`.
pub fn lln_center(i: usize, spec: &Specialization, k: usize) -> Rational {
    cyclic_sum(spec, k, |v| mean_jump(i, v, &spec.t))
}

/// `Σ_{j=1}^k var_jump(i, x̂_j)`.
pub fn clt_variance(i: usize, spec: &Specialization, k: usize) -> Rational {
    cyclic_sum(spec, k, |v| var_jump(i, v, &spec.t))
}

pub fn clt_scale(i: usize, spec: &Specialization, k: usize) -> f64 {
    to_f64(&clt_variance(i, spec, k)).sqrt()
}

/// The piecewise-linear path `f(j/k) = (λ_i(j) - center_i(j)) / scale_i(k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FluctuationPath {
    /// Values at `0, 1/k, …, 1`.
    pub knots: Vec<f64>,
}

impl FluctuationPath {
    pub fn at(&self, s: f64) -> f64 {
        let k = self.knots.len() - 1;
        let pos = s.clamp(0.0, 1.0) * k as f64;
        let j = (pos.floor() as usize).min(k.saturating_sub(1));
        if k == 0 {
            return self.knots[0];
        }
        let frac = pos - j as f64;
        self.knots[j] * (1.0 - frac) + self.knots[j + 1] * frac
    }
}

pub fn rescale_path(traj: &Trajectory, i: usize, spec: &Specialization) -> Result<FluctuationPath> {
    let k = traj.len();
    if k == 0 || i == 0 || i > traj.n {
        return arg(format!("need a nonempty path and 1 ≤ i ≤ {}", traj.n));
    }
    let scale = clt_scale(i, spec, k);
    if scale == 0.0 {
        return arg("zero variance");
    }
    let mut center = Rational::zero();
    let mut knots = Vec::with_capacity(k + 1);
    knots.push(0.0);
    for j in 1..=k {
        center += mean_jump(i, spec.var(j - 1), &spec.t);
        knots.push((traj.steps[j][i - 1] as f64 - to_f64(&center)) / scale);
    }
    Ok(FluctuationPath { knots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Dim;
    use crate::rational::{int, rat};
    use crate::trajectory::{Source, TrajectoryMeta};

    fn single(x: Rational) -> GeneralizedVariable {
        GeneralizedVariable::single(x).unwrap()
    }

    #[test]
    fn examples() {
        let h = rat(1, 2);
        assert_eq!(mean_jump(1, &single(h.clone()), &h), rat(2, 3));
        assert_eq!(var_jump(1, &single(h.clone()), &h), rat(14, 9));
        let inf = GeneralizedVariable::new(h.clone(), Length::Infinite).unwrap();
        assert_eq!(mean_jump(1, &inf, &h), int(1));
        assert_eq!(mean_jump(2, &inf, &h), rat(1, 3));
        assert!(var_jump(1, &inf, &h) > var_jump(2, &inf, &h));
    }

    #[test]
    fn summands_match_direct_sums() {
        // Term-by-term sums of the per-variable formulas.
        let (t, x) = (rat(1, 3), rat(2, 5));
        let var = GeneralizedVariable::new(x.clone(), Length::Finite(4)).unwrap();
        for i in 1..4 {
            let (mut m, mut v) = (Rational::zero(), Rational::zero());
            for j in 0..4u64 {
                let y = powu(&t, i as u64 - 1 + j) * &x;
                let one = Rational::one();
                m += &y * (&one - &t) / ((&one - &y) * (&one - &t * &y));
                v += &y * (&one - &t) * (&one - &t * &y * &y) / ((&one - &y) * (&one - &y) * (&one - &t * &y) * (&one - &t * &y));
            }
            assert_eq!(mean_jump(i, &var, &t), m);
            assert_eq!(var_jump(i, &var, &t), v);
        }
    }

    #[test]
    fn matrix_dictionary_reproduces_corner_summand() {
        // Σ_{ℓ=0}^{N-n-1} p^{-i-ℓ}(1-p^{-1}) / ((1-p^{-i-ℓ-1})(1-p^{-i-ℓ})).
        let (p, n, big) = (3i64, 2usize, 6usize);
        let spec = Specialization::matrix(p as u64, n, &[Dim::Finite(big)]).unwrap();
        let t = rat(1, p);
        for i in 1..=n {
            let mut direct = Rational::zero();
            for l in 0..(big - n) as u64 {
                let a = powu(&t, i as u64 + l);
                let one = Rational::one();
                direct += &a * (&one - &t) / ((&one - &a * &t) * (&one - &a));
            }
            assert_eq!(lln_center(i, &spec, 1), direct);
        }
    }

    #[test]
    fn centers_are_linear() {
        let spec = Specialization::matrix(2, 3, &[Dim::Infinite]).unwrap();
        assert_eq!(lln_center(1, &spec, 100), int(100));
        assert!((clt_scale(2, &spec, 400) / clt_scale(2, &spec, 100) - 2.0).abs() < 1e-12);
        let mixed = Specialization::matrix(2, 1, &[Dim::Infinite, Dim::Finite(2)]).unwrap();
        let by_hand: Rational = (0..7).map(|j| mean_jump(1, mixed.var(j), &mixed.t)).sum();
        assert_eq!(lln_center(1, &mixed, 7), by_hand);
    }

    #[test]
    fn centered_path_is_zero() {
        // With x = t = 1/2 and an infinite variable the first particle's mean
        // jump is exactly 1, so the path λ_1(j) = j is its own centering.
        let spec = Specialization::matrix(2, 2, &[Dim::Infinite]).unwrap();
        let meta = TrajectoryMeta { seed: None, stream: None, spec: String::new(), source: Source::Particle, precision: None, censored: false };
        let mut tr = Trajectory::new(2, meta);
        for j in 1..=4 {
            tr.steps.push(vec![j, 0]);
        }
        let path = rescale_path(&tr, 1, &spec).unwrap();
        assert!(path.knots.iter().all(|v| v.abs() < 1e-12));
        let second = rescale_path(&tr, 2, &spec).unwrap();
        assert_eq!(second.at(0.0), 0.0);
        assert!((second.at(0.375) - (second.knots[1] + second.knots[2]) / 2.0).abs() < 1e-12);
        assert!(rescale_path(&tr, 3, &spec).is_err());
    }
}
