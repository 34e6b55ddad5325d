//! Real spherical harmonics normalized in `L²(S^{d-1})`.
//!
//! Points on the sphere are given by two angles. In two dimensions `theta`
//! is the angle around the circle and `phi` is ignored. From three
//! dimensions on, `theta` is the polar angle from the north pole and `phi`
//! the azimuth; zonal factors ignore `phi`.

use crate::bessel::{factorial, gamma_half_integer, DimensionContext};
use crate::error::{domain, PlateError, Result};
use crate::quadrature::QuadratureRule;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularPoint {
    pub theta: f64,
    pub phi: f64,
}

impl AngularPoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn north_pole() -> Self {
        Self::new(0.0, 0.0)
    }
}

/// Which member of the degree-`l` eigenspace to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "order", rename_all = "snake_case")]
pub enum Variant {
    /// `cos(lθ)` in two dimensions.
    Cos,
    /// `sin(lθ)` in two dimensions, `l >= 1`.
    Sin,
    /// Real harmonic of azimuthal order `m ∈ -l..=l` in three dimensions:
    /// `cos(mφ)` for `m > 0`, `sin(|m|φ)` for `m < 0`.
    Order(i32),
    /// Depends on the polar angle only. In two dimensions this is `Cos`.
    Zonal,
}

/// A normalized angular factor `Y_l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularFactor {
    pub dim: DimensionContext,
    pub l: u32,
    pub variant: Variant,
    pub normalization: f64,
}

/// Surface area of `S^{n-1} ⊂ R^n`.
pub fn sphere_area(n: u32) -> f64 {
    let h = 0.5 * n as f64;
    2.0 * PI.powf(h) / gamma_half_integer(h)
}

/// Associated Legendre `P_l^m(x)` without the Condon–Shortley phase.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..m {
        pmm *= (2 * i + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for n in (m + 2)..=l {
        let nf = n as f64;
        let mf = m as f64;
        let next = ((2.0 * nf - 1.0) * x * p - (nf + mf - 1.0) * p_prev) / (nf - mf);
        p_prev = p;
        p = next;
    }
    p
}

/// Gegenbauer polynomial `C_l^α(t)`.
pub fn gegenbauer(l: u32, alpha: f64, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let (mut c0, mut c1) = (1.0, 2.0 * alpha * t);
    for n in 2..=l {
        let nf = n as f64;
        let c2 = (2.0 * t * (nf + alpha - 1.0) * c1 - (nf + 2.0 * alpha - 2.0) * c0) / nf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

fn legendre_norm(l: u32, m: u32) -> f64 {
    ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m) / factorial(l + m)).sqrt()
}

/// Nodes used for the numerical zonal normalization.
const ZONAL_RULE_ORDER: usize = 96;

/// `1 / sqrt(|S^{d-2}| ∫_0^π C_l^α(cos θ)² sin^{d-2}θ dθ)` by quadrature in `θ`.
fn zonal_norm(d: u32, l: u32) -> Result<f64> {
    let alpha = 0.5 * (d as f64 - 2.0);
    let rule = QuadratureRule::gauss_legendre(ZONAL_RULE_ORDER)?;
    let integral = rule.integrate(0.0, PI, |t| {
        let c = gegenbauer(l, alpha, t.cos());
        Ok(c * c * t.sin().powi(d as i32 - 2))
    })?;
    Ok(1.0 / (sphere_area(d - 1) * integral).sqrt())
}

impl AngularFactor {
    pub fn new(dim: DimensionContext, l: u32, variant: Variant) -> Result<Self> {
        let d = dim.dim();
        let normalization = match (d, variant) {
            (2, Variant::Cos | Variant::Zonal) => {
                if l == 0 {
                    1.0 / (2.0 * PI).sqrt()
                } else {
                    1.0 / PI.sqrt()
                }
            }
            (2, Variant::Sin) if l >= 1 => 1.0 / PI.sqrt(),
            (2, Variant::Sin) => return Err(domain("sin(0θ) vanishes; use the cosine variant for l = 0")),
            (3, Variant::Zonal) => legendre_norm(l, 0),
            (3, Variant::Order(m)) => {
                if m.unsigned_abs() > l {
                    return Err(domain(format!("order m = {m} outside -{l}..={l}")));
                }
                let base = legendre_norm(l, m.unsigned_abs());
                if m == 0 {
                    base
                } else {
                    base * std::f64::consts::SQRT_2
                }
            }
            (_, Variant::Zonal) if d >= 4 => zonal_norm(d, l)?,
            _ => {
                return Err(PlateError::Unsupported(format!(
                    "angular variant {variant:?} in d = {d}"
                )))
            }
        };
        Ok(Self {
            dim,
            l,
            variant,
            normalization,
        })
    }

    /// The default factor: cosine in two dimensions, zonal otherwise.
    pub fn zonal(dim: DimensionContext, l: u32) -> Result<Self> {
        Self::new(dim, l, Variant::Zonal)
    }

    pub fn eval(&self, p: AngularPoint) -> f64 {
        let l = self.l;
        let shape = match (self.dim.dim(), self.variant) {
            (2, Variant::Sin) => (l as f64 * p.theta).sin(),
            (2, _) => (l as f64 * p.theta).cos(),
            (3, Variant::Order(m)) => {
                let leg = assoc_legendre(l, m.unsigned_abs(), p.theta.cos());
                match m.signum() {
                    1 => leg * (m as f64 * p.phi).cos(),
                    -1 => leg * (-m as f64 * p.phi).sin(),
                    _ => leg,
                }
            }
            (3, _) => assoc_legendre(l, 0, p.theta.cos()),
            (d, _) => gegenbauer(l, 0.5 * (d as f64 - 2.0), p.theta.cos()),
        };
        self.normalization * shape
    }
}

/// Complex harmonic `Y_l^m(θ, φ)` in three dimensions, with the
/// Condon–Shortley phase.
pub fn complex_harmonic(l: u32, m: i32, p: AngularPoint) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(domain(format!("order m = {m} outside -{l}..={l}")));
    }
    let mag = legendre_norm(l, am) * assoc_legendre(l, am, p.theta.cos());
    let phase = Complex64::from_polar(1.0, am as f64 * p.phi);
    let y = phase * mag;
    Ok(if m < 0 {
        y.conj()
    } else if am % 2 == 1 {
        -y
    } else {
        y
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> DimensionContext {
        DimensionContext::new(d).unwrap()
    }

    #[test]
    fn circle_values() {
        let y0 = AngularFactor::zonal(ctx(2), 0).unwrap();
        for t in [0.0, 1.0, 4.0] {
            assert!((y0.eval(AngularPoint::new(t, 0.0)) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
        }
        let y1 = AngularFactor::new(ctx(2), 1, Variant::Cos).unwrap();
        assert_eq!(y1.eval(AngularPoint::north_pole()), 1.0 / PI.sqrt());
        assert!(AngularFactor::new(ctx(2), 0, Variant::Sin).is_err());
    }

    #[test]
    fn sphere_north_pole() {
        let y = AngularFactor::zonal(ctx(3), 1).unwrap();
        let want = (3.0 / (4.0 * PI)).sqrt();
        assert!((y.eval(AngularPoint::north_pole()) - want).abs() < 1e-16);
        assert!((want - 0.488_602_511_902_919_9).abs() < 1e-16);
    }

    #[test]
    fn legendre_small_cases() {
        let x = 0.3f64;
        assert!((assoc_legendre(2, 0, x) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-16);
        assert!((assoc_legendre(2, 1, x) - 3.0 * x * (1.0 - x * x).sqrt()).abs() < 1e-15);
        assert!((assoc_legendre(2, 2, x) - 3.0 * (1.0 - x * x)).abs() < 1e-15);
        assert_eq!(assoc_legendre(1, 2, x), 0.0);
    }

    #[test]
    fn gegenbauer_reduces_to_legendre() {
        for l in 0..6 {
            for t in [-0.7, 0.1, 0.9] {
                assert!((gegenbauer(l, 0.5, t) - assoc_legendre(l, 0, t)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn four_dimensional_zonal_norm() {
        // on S³ the zonal harmonic is (l+1)/sqrt(2π²) at the pole
        for l in 0..5 {
            let y = AngularFactor::zonal(ctx(4), l).unwrap();
            let want = (l as f64 + 1.0) / (2.0 * PI * PI).sqrt();
            assert!((y.eval(AngularPoint::north_pole()) - want).abs() < 1e-13, "l={l}");
        }
        assert!(AngularFactor::new(ctx(4), 1, Variant::Order(0)).is_err());
    }

    #[test]
    fn complex_and_real_agree() {
        let p = AngularPoint::new(0.8, 1.3);
        for l in 0..4u32 {
            for m in -(l as i32)..=(l as i32) {
                let c = complex_harmonic(l, m, p).unwrap();
                let r = AngularFactor::new(ctx(3), l, Variant::Order(m)).unwrap().eval(p);
                let sign = if m.unsigned_abs() % 2 == 1 { -1.0 } else { 1.0 };
                let want = match m.signum() {
                    1 => sign * std::f64::consts::SQRT_2 * c.re,
                    -1 => -std::f64::consts::SQRT_2 * c.im,
                    _ => c.re,
                };
                assert!((r - want).abs() < 1e-14, "l={l} m={m}");
            }
        }
    }
}
