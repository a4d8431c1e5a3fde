//! Conversions between exact integers and floating-point logs.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural log of a big integer, accurate to double precision at any size.
/// `ln 0 = -∞`.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return biguint_to_f64(x).ln();
    }
    let shift = bits - 64;
    biguint_to_f64(&(x >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational; `-∞` at zero, NaN when negative.
pub fn ln_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    if r.is_negative() {
        return f64::NAN;
    }
    ln_big(r.numer().magnitude()) - ln_big(r.denom().magnitude())
}

/// `|a - b| <= 10^{-digits} · max(|a|, |b|, 1)`.
pub fn agrees_to(a: f64, b: f64, digits: i32) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= 10f64.powi(-digits) * scale
}
