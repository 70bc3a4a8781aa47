use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimizer::cauchy_bound;
use crate::precision::Precision;
use crate::reexpansion::{evaluate_wn, OscillatorSpec, ReexpandedSeries};
use crate::scaling::build_scaling_polynomial;
use crate::series::BwSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone)]
pub struct StationaryPoint {
    pub omega_trial: Float,
    pub kind: StationaryKind,
}

/// Grid points per decade of the logarithmic scan.
const SCAN_PER_DECADE: usize = 400;

/// Central difference of `W_N` with a step well inside the working precision.
fn dw_numeric(
    series: &ReexpandedSeries,
    spec: &OscillatorSpec,
    omega_trial: &Float,
    prec: Precision,
) -> Result<Float> {
    let step = prec.float(omega_trial) * prec.epsilon(prec.decimal_digits() as i32 * 2 / 3);
    let up = evaluate_wn(series, spec, &prec.float(omega_trial + &step), prec)?;
    let down = evaluate_wn(series, spec, &prec.float(omega_trial - &step), prec)?;
    Ok((up - down) / (step * 2u32))
}

/// Stationary points of `W_N(g, .)` found without the scaling polynomial:
/// the sign of a finite-difference derivative is scanned on a logarithmic
/// grid and every sign change is bisected.
///
/// The scan covers `[omega/10 + eps, 10 (S g)^(2/(p+2)) + 10 omega]`, where
/// `S` is a root bound for `P_N` (only used to size the window).
pub fn direct_extremize_wn(
    bw: &BwSeries,
    series: &ReexpandedSeries,
    spec: &OscillatorSpec,
    order: usize,
    prec: Precision,
) -> Result<Vec<StationaryPoint>> {
    if order == 0 {
        return Err(Error::OrderTooLow);
    }
    if series.order() != order {
        return Err(Error::OrderMismatch {
            scaling: order,
            series: series.order(),
        });
    }
    let sigma_bound = cauchy_bound(build_scaling_polynomial(bw, order)?.poly()).to_f64();
    let omega = spec.omega.to_f64();
    let g = spec.g.to_f64();
    let exponent = 2.0 / (spec.p as f64 + 2.0);
    let eps = 1e-2 * g.powf(exponent);
    let lo = omega / 10.0 + eps;
    let hi = 10.0 * (sigma_bound * g).powf(exponent) + 10.0 * omega;
    let decades = (hi / lo).log10();
    let steps = ((decades * SCAN_PER_DECADE as f64).ceil() as usize).max(SCAN_PER_DECADE);

    let at = |i: usize| -> Float {
        let t = i as f64 / steps as f64;
        prec.float(lo) * prec.float(hi / lo).pow(prec.float(t))
    };
    let mut points = Vec::new();
    let mut prev_x = at(0);
    let mut prev_d = dw_numeric(series, spec, &prev_x, prec)?;
    for i in 1..=steps {
        let x = at(i);
        let d = dw_numeric(series, spec, &x, prec)?;
        if d.is_zero() {
            points.push(classify(x.clone(), &prev_d));
        } else if !prev_d.is_zero() && d.is_sign_positive() != prev_d.is_sign_positive() {
            let root = refine(
                series,
                spec,
                prev_x.clone(),
                x.clone(),
                prev_d.is_sign_positive(),
                prec,
            )?;
            points.push(classify(root, &prev_d));
        }
        prev_x = x;
        prev_d = d;
    }
    Ok(points)
}

fn classify(omega_trial: Float, before: &Float) -> StationaryPoint {
    let kind = if before.is_sign_negative() {
        StationaryKind::Minimum
    } else {
        StationaryKind::Maximum
    };
    StationaryPoint { omega_trial, kind }
}

fn refine(
    series: &ReexpandedSeries,
    spec: &OscillatorSpec,
    mut lo: Float,
    mut hi: Float,
    lo_positive: bool,
    prec: Precision,
) -> Result<Float> {
    let tol = prec.epsilon(prec.decimal_digits() as i32 / 2);
    loop {
        let mid = prec.float(&lo + &hi) / 2u32;
        let width = Float::with_val(prec.bits(), &hi - &lo);
        if width <= Float::with_val(prec.bits(), &mid * &tol) {
            return Ok(mid);
        }
        let d = dw_numeric(series, spec, &mid, prec)?;
        if d.is_zero() {
            return Ok(mid);
        }
        if d.is_sign_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
