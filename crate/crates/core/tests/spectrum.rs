//! Spectra and fundamental tones against a dense-scan reference.
//!
//! The reference values come from `oracle/oracle.py`, which scans `W_l` at
//! step 1e-4 with mpmath (50 digits) and refines each sign change there.

use freeplate::bessel::{p11, DimensionContext, Kernel};
use freeplate::spectrum::{
    determinant, eigenvalues, first_root, fundamental, fundamental_checked, rescale,
    split_omega, Mode, PlateProblem,
};

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

const FUNDAMENTALS: [(u32, f64, f64, f64); 12] = [
    (2, 0.1, 0.764_219_036_114_759_9, 0.399_494_973_127_749),
    (2, 1.0, 1.245_040_408_781_523_8, 3.953_015_055_725_600_2),
    (2, 10.0, 1.699_687_131_979_198_9, 37.235_316_680_953_87),
    (2, 100.0, 1.829_350_353_103_995, 345.851_485_718_177_7),
    (3, 0.1, 0.811_513_743_562_375_5, 0.499_549_558_815_066),
    (3, 1.0, 1.334_917_615_783_973_6, 4.957_547_006_831_613),
    (3, 10.0, 1.871_743_393_046_256, 47.308_208_319_193_55),
    (3, 100.0, 2.059_554_493_698_019_6, 442.169_039_127_480_1),
    (5, 0.1, 0.887_657_065_246_692_5, 0.699_635_173_964_945_2),
    (5, 1.0, 1.478_542_249_932_604_7, 6.965_064_364_538_946),
    (5, 10.0, 2.149_463_814_969_061, 67.548_145_909_317_28),
    (5, 100.0, 2.453_881_530_972_728_5, 638.412_335_359_116),
];

#[test]
fn fundamental_tones_match_reference() {
    for (d, tau, a, omega) in FUNDAMENTALS {
        let f = fundamental(&PlateProblem::new(d, tau, 1.0).unwrap()).unwrap();
        assert_eq!(f.l(), 1);
        assert!((f.a - a).abs() < 1e-11, "d={d} tau={tau}: a = {}", f.a);
        assert!(rel(f.omega, omega) < 1e-11, "d={d} tau={tau}: omega = {}", f.omega);
    }
}

#[test]
fn radius_two_reference() {
    let cells = [
        (2, 0.25, 0.247_063_440_982_850_02),
        (2, 1.0, 0.961_886_957_239_258_6),
        (2, 2.5, 2.327_207_292_559_616_7),
        (3, 0.25, 0.309_846_687_926_975_83),
        (3, 1.0, 1.214_388_356_585_985_2),
        (3, 2.5, 2.956_763_019_949_597),
    ];
    for (d, tau, omega) in cells {
        let f = fundamental(&PlateProblem::new(d, tau, 2.0).unwrap()).unwrap();
        assert!(rel(f.omega, omega) < 1e-11, "d={d} tau={tau}: {}", f.omega);
    }
}

fn check_spectrum(d: u32, tau: f64, l_max: u32, want: &[(f64, u32)]) {
    let table = eigenvalues(&PlateProblem::new(d, tau, 1.0).unwrap(), l_max, want.len()).unwrap();
    assert_eq!(table.entries.len(), want.len());
    for (e, &(omega, l)) in table.entries.iter().zip(want) {
        assert_eq!(e.l, l, "d={d} tau={tau} omega={omega}");
        if omega == 0.0 {
            assert_eq!(e.omega, 0.0);
            assert!(matches!(e.mode, Mode::Constant { .. }));
        } else {
            assert!(rel(e.omega, omega) < 1e-10, "d={d} tau={tau}: {} vs {omega}", e.omega);
            assert!(e.w_residual < 1e-9);
        }
    }
    assert!(table.complete_below >= want.last().unwrap().0);
}

#[test]
fn two_dimensional_spectra() {
    check_spectrum(
        2,
        10.0,
        5,
        &[
            (0.0, 0),
            (37.235_316_680_953_87, 1),
            (139.298_538_892_732_2, 2),
            (249.394_912_774_898_6, 0),
            (383.268_450_148_125_94, 3),
            (746.899_131_885_027_7, 1),
        ],
    );
    check_spectrum(
        2,
        1.0,
        6,
        &[
            (0.0, 0),
            (3.953_015_055_725_600_2, 1),
            (48.275_741_239_317_06, 2),
            (87.200_116_252_646_21, 0),
            (213.858_259_996_953_07, 3),
            (437.791_375_894_462_24, 1),
            (611.938_649_027_727_9, 4),
            (1_309.598_393_912_346_4, 2),
        ],
    );
}

#[test]
fn three_dimensional_spectra() {
    check_spectrum(
        3,
        10.0,
        5,
        &[
            (0.0, 0),
            (47.308_208_319_193_55, 1),
            (177.526_224_667_298_26, 2),
            (387.766_451_845_493, 0),
            (482.353_102_504_329_24, 3),
            (1_069.106_060_016_871, 1),
        ],
    );
    check_spectrum(
        3,
        1.0,
        6,
        &[
            (0.0, 0),
            (4.957_547_006_831_613, 1),
            (69.371_912_108_202_51, 2),
            (153.809_000_315_127_37, 0),
            (288.050_677_762_128_5, 3),
            (677.783_847_950_697_6, 1),
            (784.520_904_405_635_5, 4),
            (1_710.731_685_109_372_2, 5),
        ],
    );
}

#[test]
fn multiplicities_follow_harmonic_dimension() {
    let table = eigenvalues(&PlateProblem::new(3, 1.0, 1.0).unwrap(), 4, 6).unwrap();
    for e in &table.entries {
        assert_eq!(e.multiplicity, 2 * e.l as u64 + 1);
    }
    let table = eigenvalues(&PlateProblem::new(2, 1.0, 1.0).unwrap(), 4, 6).unwrap();
    for e in &table.entries {
        assert_eq!(e.multiplicity, if e.l == 0 { 1 } else { 2 });
    }
}

#[test]
fn spectrum_is_sorted_and_starts_at_zero() {
    for d in [2, 4, 7] {
        let table = eigenvalues(&PlateProblem::new(d, 3.0, 1.5).unwrap(), 5, 10).unwrap();
        assert_eq!(table.entries[0].omega, 0.0);
        assert_eq!(table.entries[0].l, 0);
        assert!(table.entries.windows(2).all(|w| w[0].omega <= w[1].omega));
        let f = fundamental(&table.problem).unwrap();
        assert_eq!(table.entries[1].l, 1);
        assert!(rel(table.entries[1].omega, f.omega) < 1e-12);
    }
}

#[test]
fn w1_changes_sign_and_w0_stays_positive_below_p11() {
    for d in [2, 3, 5] {
        let k = Kernel::new(DimensionContext::new(d).unwrap());
        let p = p11(k.ctx()).unwrap();
        for tau in [0.1, 1.0, 10.0, 100.0] {
            assert!(determinant(&k, 1, tau, 1e-3).unwrap() < 0.0);
            assert!(determinant(&k, 1, tau, p).unwrap() > 0.0);
            for i in 1..=500 {
                let a = p * i as f64 / 501.0;
                assert!(determinant(&k, 0, tau, a).unwrap() > 0.0, "d={d} tau={tau} a={a}");
            }
            assert!(first_root(&k, 0, tau, p).unwrap().is_none());
        }
    }
}

#[test]
fn checks_report_clear_orders() {
    let (f, checks) = fundamental_checked(&PlateProblem::new(3, 1.0, 1.0).unwrap()).unwrap();
    assert!(checks.all_pass());
    assert_eq!(checks.first_l1_root, f.a);
    assert!(checks.first_l1_root < checks.p11);
    assert_eq!(checks.higher_orders_clear.len(), 5);
}

#[test]
fn scaling_between_radii() {
    for d in [2, 3] {
        for tau in [0.25, 1.0, 2.5] {
            let big = fundamental(&PlateProblem::new(d, tau, 2.0).unwrap()).unwrap();
            let unit = fundamental(&PlateProblem::new(d, 4.0 * tau, 1.0).unwrap()).unwrap();
            let moved = rescale(&unit, &PlateProblem::new(d, tau, 2.0).unwrap()).unwrap();
            assert!(rel(moved.omega, big.omega) < 1e-10);
            assert!(rel(unit.omega / 16.0, big.omega) < 1e-10);
        }
    }
}

#[test]
fn fundamental_grows_with_tension() {
    for d in [2, 3] {
        let mut last = 0.0;
        for tau in [0.01, 0.1, 0.5, 1.0, 5.0, 20.0, 200.0] {
            let f = fundamental(&PlateProblem::new(d, tau, 1.0).unwrap()).unwrap();
            assert!(f.omega > last);
            assert!(f.a < p11(&f.dim).unwrap());
            last = f.omega;
        }
    }
}

#[test]
fn split_inverts_omega() {
    let f = fundamental(&PlateProblem::new(2, 7.0, 1.0).unwrap()).unwrap();
    let (a, b) = split_omega(7.0, f.omega).unwrap();
    assert!(rel(a, f.a) < 1e-14 && rel(b, f.b) < 1e-14);
}

#[test]
fn bad_requests_fail() {
    let p = PlateProblem::new(2, 1.0, 1.0).unwrap();
    assert!(eigenvalues(&p, 0, 5).is_err());
    assert!(eigenvalues(&p, 3, 0).is_err());
}
