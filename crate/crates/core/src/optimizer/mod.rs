//! Extremization of `W_N` through the roots of the scaling polynomial.

mod roots;

pub use roots::{cauchy_bound, real_roots, recover_rational_root, RealRoot, SturmSequence};

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::reexpansion::{evaluate_wn, evaluate_wn_exact, reexpand, sigma_of, OscillatorSpec};
use crate::scaling::{
    build_scaling_polynomial, d2w_domega2, d2w_domega2_at_extremum, ScalingPolynomial,
};
use crate::series::{generate_bw_coefficients, BwSeries, RationalPolynomial};

/// Default cap on the order of a convergence scan.
pub const DEFAULT_MAX_ORDER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    /// Root of `P_N`: a genuine stationary point of `W_N`.
    Extremum,
    /// Root of `P_N'`, used only when `P_N` has no usable real root.
    TurningPoint,
}

impl CandidateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CandidateKind::Extremum => "extremum",
            CandidateKind::TurningPoint => "turning_point",
        }
    }
}

/// Exact values for candidates whose `sigma` and `Omega` are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCandidate {
    pub sigma: Rational,
    pub omega_trial: Rational,
    pub energy: Rational,
}

#[derive(Debug, Clone)]
pub struct ExtremumCandidate {
    pub sigma: Float,
    pub omega_trial: Float,
    pub energy: Float,
    /// `|d^2 W_N / d Omega^2|`
    pub flatness: Float,
    pub kind: CandidateKind,
    pub exact: Option<ExactCandidate>,
}

#[derive(Debug, Clone)]
pub struct VariationalResult {
    pub spec: OscillatorSpec,
    pub order: usize,
    pub chosen: ExtremumCandidate,
    /// Sorted by flatness ascending; ties go to the larger `sigma`.
    pub all_candidates: Vec<ExtremumCandidate>,
    pub precision_digits: u32,
    /// True when no extremum existed and turning points were used instead.
    pub fallback_used: bool,
}

/// How the order-`N` approximation is picked among stationary points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionPolicy {
    /// Fall back to roots of `P_N'` when `P_N` yields no candidate.
    pub turning_point_fallback: bool,
    /// Flatness values within this relative distance count as tied; ties go
    /// to the larger `sigma`.
    pub tie_tolerance: f64,
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        SelectionPolicy {
            turning_point_fallback: true,
            tie_tolerance: 1e-6,
        }
    }
}

/// `Omega^((p+2)/2) - omega^2 Omega^((p-2)/2) - sigma g` as an exact
/// polynomial in `Omega`.
pub fn omega_polynomial(spec: &OscillatorSpec, sigma: &Rational) -> RationalPolynomial {
    let a = spec.coupling_power() as usize;
    let b = spec.sigma_power() as usize;
    let mut coeffs = vec![Rational::new(); a + 1];
    coeffs[a] = Rational::from(1);
    coeffs[b] = -spec.omega_squared();
    coeffs[0] -= Rational::from(sigma * &spec.g);
    RationalPolynomial::new(coeffs)
}

/// `Omega^b (Omega^2 - omega^2) - sigma g`
fn sigma_residual(spec: &OscillatorSpec, om: &Float, target: &Float, prec: Precision) -> Float {
    let mut v = prec.float(om.square_ref());
    v -= spec.omega_squared();
    v *= Float::with_val(prec.bits(), om.pow(spec.sigma_power()));
    v - target
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
fn bisect<F: Fn(&Float) -> Float>(f: F, mut lo: Float, mut hi: Float, prec: Precision) -> Float {
    let lo_positive = f(&lo).is_sign_positive();
    let tol = prec.epsilon(-4);
    for _ in 0..4 * prec.bits() {
        let mid = prec.float(&lo + &hi) / 2u32;
        let width = Float::with_val(prec.bits(), &hi - &lo);
        if width <= Float::with_val(prec.bits(), mid.abs_ref()) * &tol {
            return mid;
        }
        let v = f(&mid);
        if v.is_zero() {
            return mid;
        }
        if v.is_sign_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    prec.float(&lo + &hi) / 2u32
}

/// All positive trial frequencies with `sigma_of(spec, Omega) = sigma`,
/// ascending.
///
/// For `sigma > 0` there is exactly one solution and it exceeds `omega`;
/// for `sigma < 0` there are zero, one or two solutions below `omega`.
pub fn omega_from_sigma(spec: &OscillatorSpec, sigma: &Float, prec: Precision) -> Vec<Float> {
    let target = prec.float(sigma) * &spec.g;
    let exponent = spec.coupling_power();
    if spec.omega == 0 {
        if target.is_sign_positive() && !target.is_zero() {
            return vec![target.root(exponent)];
        }
        return Vec::new();
    }
    let omega = prec.float(&spec.omega);
    if target.is_zero() {
        return vec![omega];
    }
    let f = |om: &Float| sigma_residual(spec, om, &target, prec);
    if target.is_sign_positive() {
        let mut hi = prec.float(&omega * 2u32);
        while f(&hi).is_sign_negative() {
            hi *= 2u32;
        }
        return vec![bisect(f, omega, hi, prec)];
    }
    // Omega^b (Omega^2 - omega^2) has its minimum at omega sqrt(b / (b + 2)).
    let b = spec.sigma_power();
    let turn = prec.float(&omega * (prec.float(b) / (b + 2)).sqrt());
    let at_turn = f(&turn);
    if at_turn.is_sign_positive() && !at_turn.is_zero() {
        return Vec::new();
    }
    if at_turn.is_zero() {
        return vec![turn];
    }
    vec![
        bisect(f, prec.float(0), turn.clone(), prec),
        bisect(f, turn, omega, prec),
    ]
}

fn exact_candidate(
    spec: &OscillatorSpec,
    series: &crate::reexpansion::ReexpandedSeries,
    sigma: Option<&Rational>,
    omega_trial: &Float,
) -> Option<ExactCandidate> {
    let sigma = sigma?;
    let poly = omega_polynomial(spec, sigma);
    let approx = omega_trial.to_rational()?;
    let slack = Rational::from(approx.abs_ref()) / Rational::from(1u64 << 40)
        + Rational::from((1, 1u64 << 40));
    let lo = Rational::from(&approx - &slack);
    let hi = Rational::from(&approx + &slack);
    let omega_exact = recover_rational_root(&poly, &lo, &hi, omega_trial)?;
    if omega_exact <= 0 {
        return None;
    }
    let energy = evaluate_wn_exact(series, spec, &omega_exact).ok()?;
    Some(ExactCandidate {
        sigma: sigma.clone(),
        omega_trial: omega_exact,
        energy,
    })
}

fn candidates_from_roots(
    roots: &[RealRoot],
    kind: CandidateKind,
    scaling: &ScalingPolynomial,
    series: &crate::reexpansion::ReexpandedSeries,
    spec: &OscillatorSpec,
    prec: Precision,
) -> Result<Vec<ExtremumCandidate>> {
    let mut out = Vec::new();
    for root in roots {
        for approx in omega_from_sigma(spec, &root.value, prec) {
            let exact = exact_candidate(spec, series, root.exact.as_ref(), &approx);
            // Rational solutions replace the bisected frequency.
            let omega_trial = match &exact {
                Some(e) => prec.float(&e.omega_trial),
                None => approx,
            };
            let energy = match &exact {
                Some(e) => prec.float(&e.energy),
                None => evaluate_wn(series, spec, &omega_trial, prec)?,
            };
            let curvature = match kind {
                CandidateKind::Extremum => {
                    d2w_domega2_at_extremum(scaling, spec, &root.value, &omega_trial, prec)?
                }
                CandidateKind::TurningPoint => d2w_domega2(scaling, spec, &omega_trial, prec)?,
            };
            out.push(ExtremumCandidate {
                sigma: root.value.clone(),
                omega_trial,
                energy,
                flatness: curvature.abs(),
                kind,
                exact,
            });
        }
    }
    Ok(out)
}

/// Ascending flatness; within `tie_tolerance` the larger sigma wins.
fn rank(candidates: &mut [ExtremumCandidate], tie_tolerance: f64) {
    candidates.sort_by(|a, b| {
        a.flatness
            .partial_cmp(&b.flatness)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                b.sigma
                    .partial_cmp(&a.sigma)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    });
    let Some(best) = candidates.first().map(|c| c.flatness.clone()) else {
        return;
    };
    let limit = best * (1.0 + tie_tolerance);
    let tied = candidates
        .iter()
        .take_while(|c| c.flatness <= limit)
        .count();
    let winner = (0..tied)
        .max_by(|&i, &j| {
            candidates[i]
                .sigma
                .partial_cmp(&candidates[j].sigma)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(j.cmp(&i))
        })
        .unwrap_or(0);
    candidates[..=winner].rotate_right(1);
}

/// Order-`N` variational energy, generating the Bender-Wu series on the fly.
pub fn optimize(
    spec: &OscillatorSpec,
    order: usize,
    policy: SelectionPolicy,
    prec: Precision,
) -> Result<VariationalResult> {
    let bw = generate_bw_coefficients(spec.p, order)?;
    optimize_with(&bw, spec, order, policy, prec)
}

/// Order-`N` variational energy from precomputed coefficients.
///
/// Roots of `P_N` are mapped back to trial frequencies, each stationary
/// point is scored by `|d^2 W_N / d Omega^2|`, and the flattest one wins.
pub fn optimize_with(
    bw: &BwSeries,
    spec: &OscillatorSpec,
    order: usize,
    policy: SelectionPolicy,
    prec: Precision,
) -> Result<VariationalResult> {
    if order == 0 {
        return Err(Error::OrderTooLow);
    }
    if bw.p() != spec.p {
        return Err(Error::InvalidSpec(format!(
            "series is for p = {}, spec has p = {}",
            bw.p(),
            spec.p
        )));
    }
    let scaling = build_scaling_polynomial(bw, order)?;
    let series = reexpand(bw, order)?;
    let roots = real_roots(scaling.poly(), prec)?;
    let mut candidates = candidates_from_roots(
        &roots,
        CandidateKind::Extremum,
        &scaling,
        &series,
        spec,
        prec,
    )?;
    let mut fallback_used = false;
    if candidates.is_empty() && policy.turning_point_fallback {
        let turning = real_roots(&scaling.poly().derivative(), prec)?;
        candidates = candidates_from_roots(
            &turning,
            CandidateKind::TurningPoint,
            &scaling,
            &series,
            spec,
            prec,
        )?;
        fallback_used = true;
    }
    if candidates.is_empty() {
        return Err(Error::NoCandidates(order));
    }
    rank(&mut candidates, policy.tie_tolerance);
    Ok(VariationalResult {
        spec: spec.clone(),
        order,
        chosen: candidates[0].clone(),
        all_candidates: candidates,
        precision_digits: prec.decimal_digits(),
        fallback_used,
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub order: usize,
    pub energy: Float,
    pub abs_error: Float,
    pub sigma: Float,
    pub omega_trial: Float,
    pub kind: CandidateKind,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub spec: OscillatorSpec,
    pub oracle_energy: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// First pair of consecutive odd orders whose error grows, ignoring
    /// growth that stays at or below `floor`.
    pub fn first_odd_increase(&self, floor: f64) -> Option<(usize, usize)> {
        let odd: Vec<&ConvergenceRow> = self.rows.iter().filter(|r| r.order % 2 == 1).collect();
        odd.windows(2)
            .find(|w| w[1].abs_error > w[0].abs_error && w[1].abs_error > floor)
            .map(|w| (w[0].order, w[1].order))
    }
}

/// One optimized row per order `1..=max_order`, computed in parallel and
/// returned in order.
pub fn converge_scan(
    spec: &OscillatorSpec,
    max_order: usize,
    oracle_energy: f64,
    prec: Precision,
) -> Result<ConvergenceReport> {
    if max_order == 0 {
        return Err(Error::OrderTooLow);
    }
    let bw = generate_bw_coefficients(spec.p, max_order)?;
    converge_scan_with(&bw, spec, max_order, oracle_energy, prec)
}

pub fn converge_scan_with(
    bw: &BwSeries,
    spec: &OscillatorSpec,
    max_order: usize,
    oracle_energy: f64,
    prec: Precision,
) -> Result<ConvergenceReport> {
    if max_order == 0 {
        return Err(Error::OrderTooLow);
    }
    let oracle = prec.float(oracle_energy);
    let rows = (1..=max_order)
        .into_par_iter()
        .map(|order| {
            let result = optimize_with(bw, spec, order, SelectionPolicy::default(), prec)?;
            let chosen = result.chosen;
            let abs_error = Float::with_val(prec.bits(), &chosen.energy - &oracle).abs();
            Ok(ConvergenceRow {
                order,
                energy: chosen.energy,
                abs_error,
                sigma: chosen.sigma,
                omega_trial: chosen.omega_trial,
                kind: chosen.kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        spec: spec.clone(),
        oracle_energy,
        rows,
    })
}

/// Relative-to-`sigma` check that `Omega` solves the scaling relation.
pub fn sigma_roundtrip_error(
    spec: &OscillatorSpec,
    sigma: &Float,
    omega_trial: &Float,
    prec: Precision,
) -> Float {
    let back = sigma_of(spec, omega_trial, prec).unwrap_or_else(|_| prec.float(f64::NAN));
    let diff = Float::with_val(prec.bits(), &back - sigma).abs();
    let scale = Float::with_val(prec.bits(), sigma.abs_ref()).max(&prec.float(1));
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn omega_from_sigma_examples() {
        let prec = Precision::default();
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 1)).unwrap();
        assert_eq!(
            omega_from_sigma(&spec, &prec.float(0), prec),
            vec![prec.float(1)]
        );
        let six = omega_from_sigma(&spec, &prec.float(6), prec);
        assert_eq!(six.len(), 1);
        assert!(Float::with_val(prec.bits(), &six[0] - 2u32).abs() < prec.epsilon(2));
        let pure = OscillatorSpec::new(6, q(0, 1), q(3, 1)).unwrap();
        let om = omega_from_sigma(&pure, &prec.float(5), prec);
        let expect = prec.float(15).root(4);
        assert_eq!(om, vec![expect]);
        assert!(omega_from_sigma(&pure, &prec.float(-1), prec).is_empty());
    }

    #[test]
    fn negative_sigma_branches() {
        let prec = Precision::default();
        // p = 4: sigma = Omega (Omega^2 - 1) / g, minimum -2/(3 sqrt 3) / g.
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 10)).unwrap();
        let two = omega_from_sigma(&spec, &prec.float(-2), prec);
        assert_eq!(two.len(), 2);
        for om in &two {
            assert!(*om < 1 && *om > 0);
            let back = sigma_of(&spec, om, prec).unwrap();
            assert!(Float::with_val(prec.bits(), back + 2u32).abs() < prec.epsilon(3));
        }
        assert!(omega_from_sigma(&spec, &prec.float(-4), prec).is_empty());
    }

    #[test]
    fn omega_polynomial_root() {
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 1)).unwrap();
        let poly = omega_polynomial(&spec, &q(6, 1));
        assert_eq!(poly, RationalPolynomial::from_ints(&[-6, -1, 0, 1]));
        assert_eq!(poly.eval(&q(2, 1)), 0);
    }

    #[test]
    fn first_order_quartic_anchor() {
        let prec = Precision::default();
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 1)).unwrap();
        let res = optimize(&spec, 1, SelectionPolicy::default(), prec).unwrap();
        assert!(!res.fallback_used);
        assert_eq!(res.all_candidates.len(), 1);
        let exact = res.chosen.exact.clone().expect("rational path");
        assert_eq!(exact.sigma, 6);
        assert_eq!(exact.omega_trial, 2);
        assert_eq!(exact.energy, q(13, 16));
        assert_eq!(res.chosen.energy, 0.8125);
        assert_eq!(res.chosen.flatness, prec.float(11) / 32);
    }

    #[test]
    fn weak_coupling_limit() {
        let prec = Precision::default();
        let g = 1e-6;
        let spec = OscillatorSpec::from_f64(4, 1.0, g).unwrap();
        let res = optimize(&spec, 1, SelectionPolicy::default(), prec).unwrap();
        let om = res.chosen.omega_trial.to_f64();
        assert!(om > 1.0 && om - 1.0 < 1e-5);
        let w = res.chosen.energy.to_f64();
        assert!((w - (0.5 + 0.75 * g)).abs() < 10.0 * g * g);
    }

    #[test]
    fn even_order_falls_back_to_turning_points() {
        let prec = Precision::digits(40);
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 1)).unwrap();
        let res = optimize(&spec, 2, SelectionPolicy::default(), prec).unwrap();
        assert!(res.fallback_used);
        assert!(res
            .all_candidates
            .iter()
            .all(|c| c.kind == CandidateKind::TurningPoint));
        let strict = SelectionPolicy {
            turning_point_fallback: false,
            ..SelectionPolicy::default()
        };
        assert!(matches!(
            optimize(&spec, 2, strict, prec),
            Err(Error::NoCandidates(2))
        ));
        assert!(matches!(
            optimize(&spec, 0, strict, prec),
            Err(Error::OrderTooLow)
        ));
    }

    #[test]
    fn candidates_sorted_and_chosen_flattest() {
        let prec = Precision::digits(40);
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 1)).unwrap();
        let res = optimize(&spec, 15, SelectionPolicy::default(), prec).unwrap();
        assert!(res.all_candidates.len() >= 3);
        for w in res.all_candidates.windows(2) {
            assert!(w[0].flatness <= w[1].flatness);
        }
        assert_eq!(res.chosen.sigma, res.all_candidates[0].sigma);
    }

    #[test]
    fn tie_prefers_larger_sigma() {
        let prec = Precision::digits(30);
        let mk = |sigma: f64, flat: f64| ExtremumCandidate {
            sigma: prec.float(sigma),
            omega_trial: prec.float(1),
            energy: prec.float(0),
            flatness: prec.float(flat),
            kind: CandidateKind::Extremum,
            exact: None,
        };
        let mut c = vec![mk(-3.0, 1.0), mk(2.0, 1.0 + 1e-9), mk(5.0, 2.0)];
        rank(&mut c, 1e-6);
        assert_eq!(c[0].sigma, 2.0);
        let mut c = vec![mk(-3.0, 1.0), mk(2.0, 1.1)];
        rank(&mut c, 1e-6);
        assert_eq!(c[0].sigma, -3.0);
    }

    #[test]
    fn converge_scan_shape() {
        let prec = Precision::digits(40);
        let spec = OscillatorSpec::new(4, q(1, 1), q(1, 1)).unwrap();
        let report = converge_scan(&spec, 3, 0.8037706512342737, prec).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.rows[0].energy, 0.8125);
        assert_eq!(
            report.rows.iter().map(|r| r.order).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn omega_from_sigma_round_trips(
            p in prop::sample::select(vec![4u32, 6, 8]),
            om in 0.0f64..3.0, g in 0.05f64..20.0, sigma in -5.0f64..200.0,
        ) {
            let prec = Precision::digits(50);
            let spec = OscillatorSpec::from_f64(p, om, g).unwrap();
            let s = prec.float(sigma);
            let omegas = omega_from_sigma(&spec, &s, prec);
            if sigma > 0.0 {
                prop_assert_eq!(omegas.len(), 1);
                prop_assert!(omegas[0] > om);
            } else {
                prop_assert!(omegas.len() <= 2);
                for o in &omegas { prop_assert!(*o < om); }
            }
            for o in &omegas {
                let err = sigma_roundtrip_error(&spec, &s, o, prec);
                prop_assert!(err < prec.epsilon(1 + 4), "err {}", err);
            }
        }
    }
}
