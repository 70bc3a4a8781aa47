mod common;

use proptest::prelude::*;
use rug::ops::Pow;
use rug::Float;
use vpt::optimizer::{sigma_roundtrip_error, SturmSequence};
use vpt::oracle::direct_extremize_wn;
use vpt::scaling::{d2w_domega2, d2w_domega2_at_extremum, dw_domega_closed_form};
use vpt::{
    build_scaling_polynomial, evaluate_wn, generate_bw_coefficients, omega_from_sigma,
    optimize_with, real_roots, reexpand, CandidateKind, OscillatorSpec, Precision, Rational,
    RationalPolynomial, SelectionPolicy,
};

use common::{rel, richardson_second_derivative};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn spec(p: u32, omega: Rational, g: Rational) -> OscillatorSpec {
    OscillatorSpec::new(p, omega, g).unwrap()
}

fn problems() -> Vec<OscillatorSpec> {
    let mut out = Vec::new();
    for p in [4, 6] {
        for (omega, g) in [
            (q(1, 1), q(1, 1)),
            (q(1, 1), q(1, 10)),
            (q(2, 1), q(10, 1)),
            (q(0, 1), q(1, 1)),
        ] {
            out.push(spec(p, omega, g));
        }
    }
    out
}

#[test]
fn flatness_matches_second_differences_at_fifty_extrema() {
    let prec = Precision::default();
    let mut checked = 0;
    'outer: for order in 1..=14 {
        for s in problems() {
            let bw = generate_bw_coefficients(s.p, order).unwrap();
            let series = reexpand(&bw, order).unwrap();
            let scaling = build_scaling_polynomial(&bw, order).unwrap();
            let result = optimize_with(&bw, &s, order, SelectionPolicy::default(), prec).unwrap();
            for c in result
                .all_candidates
                .iter()
                .filter(|c| c.kind == CandidateKind::Extremum)
            {
                let h = prec.float(&c.omega_trial) * prec.float(1e-4);
                let numeric = richardson_second_derivative(
                    |x| evaluate_wn(&series, &s, x, prec).unwrap(),
                    &c.omega_trial,
                    &h,
                    prec,
                );
                let numeric = Float::with_val(prec.bits(), numeric.abs_ref());
                assert!(
                    rel(&numeric, &c.flatness, 1e-300, prec) <= 1e-8,
                    "{s:?} N={order}"
                );
                let full = d2w_domega2(&scaling, &s, &c.omega_trial, prec).unwrap();
                let short =
                    d2w_domega2_at_extremum(&scaling, &s, &c.sigma, &c.omega_trial, prec).unwrap();
                assert!(rel(&full, &short, 1e-300, prec) <= 1e-20);
                checked += 1;
                if checked == 50 {
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(checked, 50);
}

#[test]
fn derivative_vanishes_at_every_extremum() {
    let prec = Precision::default();
    for s in problems() {
        for order in 1..=16 {
            let bw = generate_bw_coefficients(s.p, order).unwrap();
            let series = reexpand(&bw, order).unwrap();
            let scaling = build_scaling_polynomial(&bw, order).unwrap();
            let max_coeff = scaling
                .poly()
                .coeffs()
                .iter()
                .map(|c| c.to_f64().abs())
                .fold(0.0, f64::max);
            let result = optimize_with(&bw, &s, order, SelectionPolicy::default(), prec).unwrap();
            for c in result
                .all_candidates
                .iter()
                .filter(|c| c.kind == CandidateKind::Extremum)
            {
                let d = dw_domega_closed_form(&series, &scaling, &s, &c.omega_trial, prec).unwrap();
                let ghat = prec.float(&s.g)
                    / Float::with_val(prec.bits(), (&c.omega_trial).pow(s.coupling_power()));
                let scale = Float::with_val(prec.bits(), (&ghat).pow(order as u32)) * max_coeff;
                let ratio = (Float::with_val(prec.bits(), d.abs_ref()) / scale).to_f64();
                assert!(ratio <= 1e-8, "{s:?} N={order}: {ratio:.2e}");
            }
        }
    }
}

#[test]
fn direct_stationary_points_pair_with_sigma_branches() {
    let prec = Precision::default();
    for order in 1..=7 {
        let bw = generate_bw_coefficients(4, order).unwrap();
        let series = reexpand(&bw, order).unwrap();
        let scaling = build_scaling_polynomial(&bw, order).unwrap();
        for s in [
            spec(4, q(1, 1), q(1, 1)),
            spec(4, q(1, 1), q(1, 10)),
            spec(4, q(2, 1), q(10, 1)),
        ] {
            let direct = direct_extremize_wn(&bw, &series, &s, order, prec).unwrap();
            let pairs: usize = real_roots(scaling.poly(), prec)
                .unwrap()
                .iter()
                .map(|r| omega_from_sigma(&s, &r.value, prec).len())
                .sum();
            assert_eq!(direct.len(), pairs, "N={order} {s:?}");
        }
    }
}

fn product_of_linear_factors(roots: &[i64]) -> RationalPolynomial {
    roots
        .iter()
        .fold(RationalPolynomial::from_ints(&[1]), |acc, &r| {
            &acc * &RationalPolynomial::from_ints(&[-r, 1])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn root_count_is_certified(
        roots in prop::collection::vec(-20i64..20, 0..7),
        quadratics in prop::collection::vec(1i64..9, 0..3),
        scale in 1i64..50,
    ) {
        let prec = Precision::default();
        let mut poly = product_of_linear_factors(&roots)
            .scale(&Rational::from((scale, 7)));
        for c in &quadratics {
            poly = &poly * &RationalPolynomial::from_ints(&[*c, 0, 1]);
        }
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let found = real_roots(&poly, prec).unwrap();
        prop_assert_eq!(found.len(), distinct.len());
        prop_assert_eq!(SturmSequence::new(&poly).unwrap().count_real(), distinct.len());
        for (f, r) in found.iter().zip(&distinct) {
            let err = Float::with_val(prec.bits(), &f.value - *r).abs();
            prop_assert!(err < prec.epsilon(30));
        }
    }

    #[test]
    fn omega_from_sigma_branches(
        p in prop::sample::select(vec![4u32, 6, 8]),
        sigma in -5.0f64..60.0,
        omega in prop::sample::select(vec![0i64, 1, 2, 3]),
        g_num in 1i64..200,
    ) {
        let prec = Precision::default();
        let s = spec(p, Rational::from(omega), q(g_num, 20));
        let sig = prec.float(sigma);
        let solutions = omega_from_sigma(&s, &sig, prec);
        let om = prec.float(&s.omega);
        if sigma > 0.0 {
            prop_assert_eq!(solutions.len(), 1);
            prop_assert!(solutions[0] > om);
        } else {
            prop_assert!(solutions.len() <= 2);
            for x in &solutions {
                prop_assert!(*x < om);
            }
        }
        for x in &solutions {
            prop_assert!(*x > 0);
            let err = sigma_roundtrip_error(&s, &sig, x, prec);
            prop_assert!(err <= prec.epsilon(1), "roundtrip {}", err.to_f64());
        }
    }

    #[test]
    fn sextic_covariance(order in 1usize..9, lambda_num in 1i64..12, lambda_den in 1i64..6) {
        let prec = Precision::default();
        let lambda = q(lambda_num, lambda_den);
        let base = spec(6, q(1, 1), q(3, 4));
        let bw = generate_bw_coefficients(6, order).unwrap();
        let policy = SelectionPolicy::default();
        let r0 = optimize_with(&bw, &base, order, policy, prec).unwrap();
        let r1 = optimize_with(&bw, &base.rescaled(&lambda).unwrap(), order, policy, prec).unwrap();
        prop_assert!(rel(&r1.chosen.sigma, &r0.chosen.sigma, 1.0, prec) <= 1e-10);
        let expected = prec.float(&r0.chosen.energy) * prec.float(&lambda);
        prop_assert!(rel(&r1.chosen.energy, &expected, 0.0, prec) <= 1e-10);
    }
}
