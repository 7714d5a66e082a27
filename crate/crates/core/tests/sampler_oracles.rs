//! Samplers checked against independent exact computations.

use std::collections::BTreeMap;

use num_traits::One;
use padic_hl::exec::{map_trials, Execution};
use padic_hl::hlproc::{
    draw_arrays, draw_arrays_truncated, insert, interlacing_extensions, step_generalized, ExactLaw, GeneralizedVariable,
    Length,
};
use padic_hl::rational::{rat, to_f64, Rational};
use padic_hl::rng::stream;
use padic_hl::stats::{chi_square, chi_square_two_sample, EmpiricalDist};
use padic_hl::symfunc::{cauchy_kernel, principal_p, skew_eval, Params, Signature, SkewKind};

fn sig(v: &[i64]) -> Signature {
    Signature::new(v.to_vec()).unwrap()
}

/// Law of one step from `λ` with the variables `(x, xt, …, xt^{m-1})`:
/// `Q_{ν/λ}(x̂) P_ν(1, …, t^{n-1}) / (P_λ(1, …, t^{n-1}) Π(1, …, t^{n-1}; x̂))`.
fn one_step_law(lambda: &Signature, x: &Rational, m: usize, t: &Rational) -> ExactLaw {
    let params = Params::hall_littlewood(t.clone()).unwrap();
    let n = lambda.len();
    let xs: Vec<Rational> = std::iter::successors(Some(x.clone()), |v| Some(v * t)).take(m).collect();
    let ones: Vec<Rational> = std::iter::successors(Some(Rational::one()), |v| Some(v * t)).take(n).collect();
    let kernel = cauchy_kernel(&ones, &xs, &params, 0.0).unwrap().exact().unwrap().clone();
    let base = principal_p(lambda, &Rational::one(), t).unwrap() * kernel;
    let mut atoms = BTreeMap::new();
    let mut mass = Rational::from_integer(0.into());
    for extra in 0.. {
        for nu in interlacing_extensions(lambda, m, extra) {
            let w = skew_eval(&nu, lambda, &xs, SkewKind::Q, &params).unwrap() * principal_p(&nu, &Rational::one(), t).unwrap() / &base;
            mass += &w;
            atoms.insert(nu, w);
        }
        if 1.0 - to_f64(&mass) < 1e-10 {
            break;
        }
    }
    ExactLaw::from_atoms(atoms).unwrap()
}

fn sample_steps(lambda: &Signature, var: &GeneralizedVariable, t: &Rational, draws: u64, seed: u64) -> EmpiricalDist {
    map_trials(draws, Execution::Parallel, |i| step_generalized(lambda, var, t, &mut stream(seed, i))).into_iter().collect()
}

#[test]
fn single_variable_step_matches_law() {
    let (lambda, x, t) = (sig(&[2, 1, 0]), rat(1, 2), rat(1, 2));
    let emp = sample_steps(&lambda, &GeneralizedVariable::single(x.clone()).unwrap(), &t, 20_000, 11);
    let r = chi_square(&emp, &one_step_law(&lambda, &x, 1, &t), 5.0, 0.001).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn finite_generalized_step_matches_law() {
    for (lambda, x, m, t) in [(sig(&[1, 0]), rat(1, 2), 2usize, rat(1, 2)), (sig(&[2, 0, -1]), rat(1, 3), 3, rat(1, 3))] {
        let var = GeneralizedVariable::new(x.clone(), Length::Finite(m as u64)).unwrap();
        let emp = sample_steps(&lambda, &var, &t, 20_000, 12);
        let r = chi_square(&emp, &one_step_law(&lambda, &x, m, &t), 5.0, 0.001).unwrap();
        assert!(r.pass, "{lambda} m={m}: {r:?}");
    }
}

/// Encodes the non-interacting impulse totals `(a, b)` of two particles
/// injectively as the signature `(a + b, b)`.
fn totals(arrays: &BTreeMap<u64, Vec<u64>>) -> Signature {
    let (a, b) = arrays.values().fold((0i64, 0i64), |(a, b), v| (a + v[0] as i64, b + v[1] as i64));
    sig(&[a + b, b])
}

fn inserted(arrays: &BTreeMap<u64, Vec<u64>>) -> Signature {
    arrays.values().fold(sig(&[0, 0]), |lam, a| insert(&a.iter().map(|&v| v as i64).collect::<Vec<_>>(), &lam).unwrap())
}

#[test]
fn index_skipping_matches_truncated_sampler() {
    let t = rat(1, 2);
    for var in [
        GeneralizedVariable::new(rat(1, 2), Length::Infinite).unwrap(),
        GeneralizedVariable::new(rat(2, 3), Length::Finite(6)).unwrap(),
    ] {
        let fast = map_trials(20_000, Execution::Parallel, |i| draw_arrays(2, &var, &t, &mut stream(21, i)));
        let slow = map_trials(20_000, Execution::Parallel, |i| draw_arrays_truncated(2, &var, &t, 1e-12, &mut stream(22, i)));
        for f in [totals, inserted] {
            let a: EmpiricalDist = fast.iter().map(f).collect();
            let b: EmpiricalDist = slow.iter().map(f).collect();
            let r = chi_square_two_sample(&a, &b, 5.0, 0.001).unwrap();
            assert!(r.pass, "{var}: {r:?}");
        }
        // Arrays are keyed by strictly increasing index and hold nonzero rows.
        for a in fast.iter().take(2000) {
            assert!(a.values().all(|row| row.iter().any(|&v| v > 0)));
        }
    }
}
