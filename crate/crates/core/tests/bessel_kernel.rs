//! Ultraspherical Bessel kernel against frozen extended-precision values and
//! the classical recurrences.
//!
//! Reference numbers come from `oracle/oracle.py` (mpmath, 50 digits), which
//! sums the ascending series independently and cross-checks it against
//! mpmath's own Bessel routines.

use freeplate::bessel::{
    p11, series_coeffs, ultra_i, ultra_i_deriv, ultra_i_scaled, ultra_j, ultra_j_deriv,
    DimensionContext, Kernel,
};
use proptest::prelude::*;

fn ctx(d: u32) -> DimensionContext {
    DimensionContext::new(d).unwrap()
}

fn assert_rel(got: f64, want: f64, tol: f64) {
    let err = (got - want).abs() / want.abs();
    assert!(err <= tol, "got {got:e}, want {want:e}, rel err {err:e}");
}

#[test]
fn classical_values_in_two_dimensions() {
    assert_rel(ultra_j(&ctx(2), 1, 1.0).unwrap(), 0.440_050_585_744_933_5, 1e-15);
    assert_rel(ultra_i(&ctx(2), 1, 2.0).unwrap(), 1.590_636_854_637_329, 1e-15);
    assert_rel(ultra_j_deriv(&ctx(2), 1, 1.0, 2).unwrap(), -0.325_147_100_813_033_04, 1e-15);
    // I_0' = I_1
    assert_rel(ultra_i_deriv(&ctx(2), 0, 1.0, 1).unwrap(), 0.565_159_103_992_485, 1e-15);
    assert_rel(ultra_i(&ctx(2), 1, 1.0).unwrap(), 0.565_159_103_992_485, 1e-15);
}

#[test]
fn scaled_modified_function_far_out() {
    let v = ultra_i_scaled(&ctx(2), 1, 50.0, 0).unwrap();
    assert!(v.is_finite() && v > 0.0);
    assert_rel(v, 0.055_993_123_892_895_4, 1e-13);
    // far beyond where i_l itself overflows
    let w = ultra_i_scaled(&ctx(3), 2, 900.0, 3).unwrap();
    assert!(w.is_finite() && w > 0.0);
}

#[test]
fn first_derivative_zero_matches_reference() {
    let reference = [
        (2, 1.841_183_781_340_659_3),
        (3, 2.081_575_977_818_100_6),
        (4, 2.299_910_330_228_411),
        (5, 2.501_132_620_409_396_7),
        (10, 3.340_550_752_180_135_6),
        (15, 4.014_327_969_034_418_6),
    ];
    for (d, want) in reference {
        let got = p11(&ctx(d)).unwrap();
        assert!((got - want).abs() < 1e-12, "d={d}: {got} vs {want}");
    }
}

#[test]
fn p11_sign_change_and_bracket() {
    for d in 2..=15 {
        let c = ctx(d);
        let p = p11(&c).unwrap();
        let df = d as f64;
        assert!(p * p > df && p * p < df + 2.0);
        assert!(ultra_j_deriv(&c, 1, p - 1e-9, 1).unwrap() > 0.0);
        assert!(ultra_j_deriv(&c, 1, p + 1e-9, 1).unwrap() < 0.0);
    }
    let p3 = p11(&ctx(3)).unwrap();
    assert!(p3 > 3f64.sqrt() && p3 < 5f64.sqrt());
}

#[test]
fn d_k_series_reproduces_second_derivative() {
    let coeffs = series_coeffs(&ctx(2), 30).unwrap();
    let z = 0.5;
    assert_rel(coeffs.second_derivative(z, true), -0.181_060_410_757_508_6, 1e-14);
    assert_rel(
        coeffs.second_derivative(z, true),
        ultra_j_deriv(&ctx(2), 1, z, 2).unwrap(),
        1e-14,
    );
    for d in [3, 5, 8] {
        let c = ctx(d);
        let coeffs = series_coeffs(&c, 40).unwrap();
        for z in [0.2, 1.0, 2.5] {
            assert_rel(
                coeffs.second_derivative(z, true),
                ultra_j_deriv(&c, 1, z, 2).unwrap(),
                1e-12,
            );
            assert_rel(
                coeffs.second_derivative(z, false),
                ultra_i_deriv(&c, 1, z, 2).unwrap(),
                1e-13,
            );
        }
    }
}

#[test]
fn large_argument_cancellation_is_absorbed() {
    // J_0(20) and J_1(20), classical values
    assert_rel(ultra_j(&ctx(2), 0, 20.0).unwrap(), 0.167_024_664_340_583_2, 1e-13);
    assert_rel(ultra_j(&ctx(2), 1, 20.0).unwrap(), 0.066_833_124_175_850_05, 1e-13);
    // j_0 in d = 3 is sin z / z
    for z in [5.0f64, 17.3, 40.0] {
        let want = z.sin() / z * (2.0 / std::f64::consts::PI).sqrt();
        assert!((ultra_j(&ctx(3), 0, z).unwrap() - want).abs() < 1e-14);
    }
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Every three-term identity between neighbouring orders, as
/// `(residual, largest term)`.
fn recurrence_residuals(d: u32, l: u32, z: f64) -> Vec<(&'static str, f64, f64)> {
    let k = Kernel::new(ctx(d));
    let df = d as f64;
    let lf = l as f64;
    let j = |n: u32| k.j(n, z).unwrap();
    let i = |n: u32| k.i(n, z).unwrap();
    let jd = |m: u32| k.j_deriv(l, z, m).unwrap();
    let id = |m: u32| k.i_deriv(l, z, m).unwrap();
    let mut out = Vec::new();

    let mut push = |name, terms: &[f64]| {
        let r: f64 = terms.iter().sum();
        out.push((name, r.abs(), max_abs(terms)));
    };

    let sep = lf * (lf + df - 2.0);
    push("j ode", &[z * z * jd(2), (df - 1.0) * z * jd(1), (z * z - sep) * jd(0)]);
    push("i ode", &[z * z * id(2), (df - 1.0) * z * id(1), -(z * z + sep) * id(0)]);
    push("j' lowering", &[jd(1), -lf / z * j(l), j(l + 1)]);
    push("i' lowering", &[id(1), -lf / z * i(l), -i(l + 1)]);
    push(
        "j''",
        &[jd(2), -((lf * lf - lf) / (z * z) - 1.0) * j(l), -(df - 1.0) / z * j(l + 1)],
    );
    push(
        "i''",
        &[id(2), -((lf * lf - lf) / (z * z) + 1.0) * i(l), (df - 1.0) / z * i(l + 1)],
    );
    if l >= 1 {
        let c = (df - 2.0 + 2.0 * lf) / z;
        push("j three-term", &[c * j(l), -j(l - 1), -j(l + 1)]);
        push("i three-term", &[c * i(l), -i(l - 1), i(l + 1)]);
        push("j' raising", &[jd(1), -j(l - 1), (lf + df - 2.0) / z * j(l)]);
        push("i' raising", &[id(1), -i(l - 1), (lf + df - 2.0) / z * i(l)]);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn recurrences_hold(d in prop::sample::select(vec![2u32, 3, 4, 7]), l in 0u32..=6, z in 1e-3f64..20.0) {
        for (name, resid, scale) in recurrence_residuals(d, l, z) {
            let tol = if name.ends_with("ode") { 1e-10 } else { 1e-11 };
            prop_assert!(resid <= tol * scale, "{} d={} l={} z={}: {:e} vs {:e}", name, d, l, z, resid, scale);
        }
    }

    #[test]
    fn modified_dominates(d in 2u32..=20, l in 0u32..=6, m in 0u32..=4, z in 1e-3f64..30.0) {
        let c = ctx(d);
        let j = ultra_j_deriv(&c, l, z, m).unwrap();
        let i = ultra_i_deriv(&c, l, z, m).unwrap();
        prop_assert!(i > 0.0);
        prop_assert!(j.abs() <= i);
    }

    #[test]
    fn evaluation_is_deterministic(d in 2u32..=9, l in 0u32..=5, z in 0.0f64..40.0) {
        let a = ultra_j_deriv(&ctx(d), l, z, 3).unwrap();
        let b = ultra_j_deriv(&ctx(d), l, z, 3).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let c = ctx(4);
    let h = 1e-5;
    for l in 0..4 {
        for z in [0.5, 2.0, 7.5] {
            for m in 0..4 {
                let fd = (ultra_j_deriv(&c, l, z + h, m).unwrap()
                    - ultra_j_deriv(&c, l, z - h, m).unwrap())
                    / (2.0 * h);
                let exact = ultra_j_deriv(&c, l, z, m + 1).unwrap();
                let scale = ultra_i_deriv(&c, l, z, m + 1).unwrap();
                assert!((fd - exact).abs() <= 1e-8 * scale, "l={l} z={z} m={m}");
            }
        }
    }
}
