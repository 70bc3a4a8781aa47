//! Working precision for real-valued evaluation.

use rug::ops::Pow;
use rug::Float;

/// Decimal digits carried by real arithmetic unless the caller asks otherwise.
pub const DEFAULT_DIGITS: u32 = 60;

const GUARD_BITS: u32 = 32;

/// Significant decimal digits requested by the caller.
///
/// Internally the digits are turned into a binary precision with a fixed
/// number of guard bits, so results are reproducible for a given setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn digits(digits: u32) -> Self {
        Precision {
            digits: digits.max(1),
        }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision used for every `Float` created at this setting.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    /// Relative tolerance `10^(exponent - digits)`.
    pub fn epsilon(&self, exponent: i32) -> Float {
        let ten = self.float(10);
        ten.pow(exponent - self.digits as i32)
    }

    /// Scientific rendering with `digits` significant digits.
    pub fn render(&self, value: &Float) -> String {
        render_float(value, self.digits as usize)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(DEFAULT_DIGITS)
    }
}

/// Deterministic decimal rendering of a float with `digits` significant digits.
pub fn render_float(value: &Float, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    value.to_string_radix(10, Some(digits))
}
