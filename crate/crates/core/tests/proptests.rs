use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use padic_hl::hlproc::insert;
use padic_hl::padic::PadicMatrix;
use padic_hl::rational::{pow, rat, Rational};
use padic_hl::rng::stream;
use padic_hl::stats::{tv_two_sample, EmpiricalDist};
use padic_hl::symfunc::{p_eval, principal_p, structure_coeffs, Params, Signature};

fn signature(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Signature> {
    prop::collection::vec(lo..=hi, n).prop_map(Signature::from_unsorted)
}

fn partition(n: usize, max_part: i64) -> impl Strategy<Value = Signature> {
    signature(n, 0, max_part)
}

fn sample(values: Vec<u8>) -> EmpiricalDist {
    values.into_iter().map(|v| Signature::new(vec![i64::from(v % 5)]).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_is_invariant_under_gl(n in 1usize..5, seed in any::<u64>(), entries in prop::collection::vec(0u64..6561, 16)) {
        let (p, d) = (3, 8);
        let a = PadicMatrix::from_u64s(p, d, n, n, &entries[..n * n]).unwrap();
        let mut rng = stream(seed, 0);
        let u = PadicMatrix::haar_gl(n, p, d, &mut rng).unwrap();
        let v = PadicMatrix::haar_gl(n, p, d, &mut rng).unwrap();
        prop_assert_eq!(u.matmul(&a).unwrap().matmul(&v).unwrap().smith(), a.smith());
    }

    #[test]
    fn smith_of_diagonal_recovers_exponents(lambda in partition(4, 9), seed in any::<u64>()) {
        let (p, d) = (2, 12);
        let diag = PadicMatrix::diagonal_powers(p, d, 4, 4, &lambda).unwrap();
        prop_assert_eq!(diag.smith().exact(), Some(lambda.clone()));
        let mut rng = stream(seed, 1);
        let u = PadicMatrix::haar_gl(4, p, d, &mut rng).unwrap();
        prop_assert_eq!(u.matmul(&diag).unwrap().smith().exact(), Some(lambda));
    }

    #[test]
    fn insertion_interlaces_and_conserves(lambda in signature(5, -5, 10), impulses in prop::collection::vec(0i64..7, 5)) {
        let nu = insert(&impulses, &lambda).unwrap();
        prop_assert!(lambda.q_interlaces(&nu));
        prop_assert_eq!(nu.size(), lambda.size() + impulses.iter().sum::<i64>());
    }

    #[test]
    fn structure_coefficients_form_a_law(lambda in partition(2, 3), mu in partition(2, 3), den in 2i64..6) {
        let t = rat(1, den);
        let params = Params::hall_littlewood(t.clone()).unwrap();
        let one = Rational::one();
        let mut total = Rational::zero();
        for (nu, c) in structure_coeffs(&lambda, &mu, &params).unwrap() {
            prop_assert!(!c.is_negative());
            prop_assert_eq!(nu.size(), lambda.size() + mu.size());
            total += c * principal_p(&nu, &one, &t).unwrap();
        }
        prop_assert_eq!(total, principal_p(&lambda, &one, &t).unwrap() * principal_p(&mu, &one, &t).unwrap());
    }

    #[test]
    fn shifting_multiplies_by_the_determinant(lambda in signature(3, -2, 4), d in -3i64..4, a in 1i64..9, b in 1i64..9) {
        let params = Params::hall_littlewood(rat(1, 3)).unwrap();
        let xs = vec![rat(a, 3), rat(-b, 5), rat(a + b, 7)];
        let det: Rational = xs.iter().product();
        let lhs = p_eval(&lambda.shifted(d), &xs, &params).unwrap();
        prop_assert_eq!(lhs, pow(&det, d).unwrap() * p_eval(&lambda, &xs, &params).unwrap());
    }

    #[test]
    fn tv_is_a_metric(a in prop::collection::vec(any::<u8>(), 1..60), b in prop::collection::vec(any::<u8>(), 1..60), c in prop::collection::vec(any::<u8>(), 1..60)) {
        let (a, b, c) = (sample(a), sample(b), sample(c));
        let ab = tv_two_sample(&a, &b).unwrap();
        prop_assert!((ab - tv_two_sample(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!(ab <= tv_two_sample(&a, &c).unwrap() + tv_two_sample(&c, &b).unwrap() + 1e-12);
        prop_assert_eq!(tv_two_sample(&a, &a).unwrap(), 0.0);
    }
}
