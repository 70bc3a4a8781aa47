#![allow(dead_code)]

use rug::Float;
use vpt::Precision;

/// `|a - b| / max(|b|, floor)`.
pub fn rel(a: &Float, b: &Float, floor: f64, prec: Precision) -> f64 {
    let diff = Float::with_val(prec.bits(), a - b).abs();
    let scale = Float::with_val(prec.bits(), b.abs_ref()).max(&prec.float(floor));
    (diff / scale).to_f64()
}

/// Central difference `(f(x+h) - f(x-h)) / 2h` extrapolated over `h, h/2, h/4`
/// to remove the `h^2` and `h^4` terms.
pub fn richardson_derivative<F>(f: F, x: &Float, h: &Float, prec: Precision) -> Float
where
    F: Fn(&Float) -> Float,
{
    let central = |h: &Float| {
        let up = f(&Float::with_val(prec.bits(), x + h));
        let down = f(&Float::with_val(prec.bits(), x - h));
        Float::with_val(prec.bits(), &up - &down) / (prec.float(2) * h)
    };
    let d0 = central(h);
    let d1 = central(&(prec.float(h) / 2u32));
    let d2 = central(&(prec.float(h) / 4u32));
    let r0 = (prec.float(&d1) * 4u32 - &d0) / 3u32;
    let r1 = (prec.float(&d2) * 4u32 - &d1) / 3u32;
    (r1 * 16u32 - r0) / 15u32
}

/// Second central difference extrapolated over `h, h/2, h/4`.
pub fn richardson_second_derivative<F>(f: F, x: &Float, h: &Float, prec: Precision) -> Float
where
    F: Fn(&Float) -> Float,
{
    let fx = f(x);
    let second = |h: &Float| {
        let up = f(&Float::with_val(prec.bits(), x + h));
        let down = f(&Float::with_val(prec.bits(), x - h));
        let num = Float::with_val(prec.bits(), &up + &down) - prec.float(&fx) * 2u32;
        num / Float::with_val(prec.bits(), h * h)
    };
    let d0 = second(h);
    let d1 = second(&(prec.float(h) / 2u32));
    let d2 = second(&(prec.float(h) / 4u32));
    let r0 = (prec.float(&d1) * 4u32 - &d0) / 3u32;
    let r1 = (prec.float(&d2) * 4u32 - &d1) / 3u32;
    (r1 * 16u32 - r0) / 15u32
}
