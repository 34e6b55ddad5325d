//! Gamma function at integer and half-integer arguments.
//!
//! Every Gamma value in the ultraspherical series has the form `Γ(n/2)`,
//! so a product recurrence from `Γ(1) = 1` or `Γ(1/2) = √π` is exact up to
//! one rounding per factor. Large arguments switch to a sum of logarithms.

use std::f64::consts::PI;

const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// Beyond this argument `Γ(x)` overflows an `f64`.
const OVERFLOW_ARG: f64 = 171.0;

fn check_half_integer(x: f64) {
    debug_assert!(x > 0.0 && (2.0 * x).fract() == 0.0, "Γ({x}) is not a half-integer");
}

/// `Γ(x)` for `x ∈ {1/2, 1, 3/2, 2, ...}`; `+∞` past the f64 range.
pub fn gamma_half_integer(x: f64) -> f64 {
    check_half_integer(x);
    if x >= OVERFLOW_ARG {
        return f64::INFINITY;
    }
    let (mut acc, mut t) = if x.fract() == 0.0 {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while t < x {
        acc *= t;
        t += 1.0;
    }
    acc
}

/// `ln Γ(x)` for positive half-integers.
pub fn ln_gamma_half_integer(x: f64) -> f64 {
    check_half_integer(x);
    if x < 20.0 {
        return gamma_half_integer(x).ln();
    }
    let (mut acc, mut t) = if x.fract() == 0.0 {
        (0.0, 1.0)
    } else {
        (LN_SQRT_PI, 0.5)
    };
    while t < x {
        acc += t.ln();
        t += 1.0;
    }
    acc
}

/// `n!` as a float.
pub fn factorial(n: u32) -> f64 {
    gamma_half_integer(n as f64 + 1.0)
}
