//! Eigenfunctions `u(r, θ̂) = R_l(r) Y_l(θ̂)` and their sampling.

pub mod harmonics;

pub use harmonics::{complex_harmonic, AngularFactor, AngularPoint, Variant};

use crate::bessel::{DimensionContext, Kernel, MAX_DERIVATIVE};
use crate::error::{domain, Result};
use crate::spectrum::{Mode, ModeParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A radial function on `[0, radius]` with derivatives up to order 4.
pub trait RadialFunction: Sync {
    fn radius(&self) -> f64;

    /// `m`-th derivative at `r`.
    fn value(&self, r: f64, m: u32) -> Result<f64>;

    /// `d/dr (R(r)/r) = (rR' - R)/r²`.
    ///
    /// Implementations with a closed form should override this; the default
    /// loses digits to cancellation for small `r`.
    fn reduced_slope(&self, r: f64) -> Result<f64> {
        Ok((r * self.value(r, 1)? - self.value(r, 0)?) / (r * r))
    }
}

/// `R_l(r) = j_l(a r/R) + γ i_l(b r/R)` on `B(R)`, or `1` for the constant mode.
#[derive(Debug, Clone, Copy)]
pub struct RadialProfile {
    mode: Mode,
    radius: f64,
    kernel: Kernel,
}

pub fn radial_profile(mode: &Mode, radius: f64) -> Result<RadialProfile> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(domain(format!("radius must be positive, got {radius}")));
    }
    if let Mode::Bessel(p) = mode {
        if !(p.a > 0.0 && p.b > p.a && p.gamma_scaled.is_finite()) {
            return Err(domain(format!("invalid mode parameters {p:?}")));
        }
    }
    Ok(RadialProfile {
        mode: *mode,
        radius,
        kernel: Kernel::new(mode.dim()),
    })
}

impl RadialProfile {
    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn l(&self) -> u32 {
        self.mode.l()
    }

    /// `(j part, γ i part)` of the `m`-th derivative.
    pub fn parts(&self, r: f64, m: u32) -> Result<(f64, f64)> {
        if m > MAX_DERIVATIVE {
            return Err(domain(format!("derivative order {m} above {MAX_DERIVATIVE}")));
        }
        if !(0.0..=self.radius * (1.0 + 1e-12)).contains(&r) {
            return Err(domain(format!("r = {r} outside [0, {}]", self.radius)));
        }
        let p = match &self.mode {
            Mode::Constant { .. } => return Ok((if m == 0 { 1.0 } else { 0.0 }, 0.0)),
            Mode::Bessel(p) => p,
        };
        let l = p.l();
        let (sa, sb) = (p.a / self.radius, p.b / self.radius);
        let (x, y) = (sa * r, sb * r);
        let j = sa.powi(m as i32) * self.kernel.j_deriv(l, x, m)?;
        let i = p.gamma_scaled
            * (y - p.b).exp()
            * sb.powi(m as i32)
            * self.kernel.i_scaled(l, y, m)?;
        Ok((j, i))
    }
}

impl RadialFunction for RadialProfile {
    fn radius(&self) -> f64 {
        self.radius
    }

    fn value(&self, r: f64, m: u32) -> Result<f64> {
        let (j, i) = self.parts(r, m)?;
        Ok(j + i)
    }

    fn reduced_slope(&self, r: f64) -> Result<f64> {
        let p = match &self.mode {
            Mode::Constant { .. } => return Ok(-1.0 / (r * r)),
            Mode::Bessel(p) => p,
        };
        let l = p.l();
        let lf = l as f64;
        let (sa, sb) = (p.a / self.radius, p.b / self.radius);
        let (x, y) = (sa * r, sb * r);
        let k = &self.kernel;
        // x j_l' = l j_l - x j_{l+1} and y i_l' = l i_l + y i_{l+1}
        let jpart = ((lf - 1.0) * k.j(l, x)? - x * k.j(l + 1, x)?) / (x * x);
        let ipart =
            ((lf - 1.0) * k.i_scaled(l, y, 0)? + y * k.i_scaled(l + 1, y, 0)?) / (y * y);
        Ok(sa * sa * jpart + p.gamma_scaled * (y - p.b).exp() * sb * sb * ipart)
    }
}

/// `Σ c_n r^n` on `[0, radius]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialProfile {
    pub coeffs: Vec<f64>,
    pub radius: f64,
}

impl PolynomialProfile {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs, radius: 1.0 }
    }

    fn falling(n: usize, m: u32) -> f64 {
        (0..m as usize).map(|j| n as f64 - j as f64).product()
    }
}

impl RadialFunction for PolynomialProfile {
    fn radius(&self) -> f64 {
        self.radius
    }

    fn value(&self, r: f64, m: u32) -> Result<f64> {
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(n, _)| n >= m as usize)
            .map(|(n, c)| c * Self::falling(n, m) * r.powi((n - m as usize) as i32))
            .sum())
    }

    fn reduced_slope(&self, r: f64) -> Result<f64> {
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(n, _)| n != 1)
            .map(|(n, c)| c * (n as f64 - 1.0) * r.powi(n as i32 - 2))
            .sum())
    }
}

/// Resolution of a [`ModeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nr: usize,
    pub ntheta: usize,
    pub variant: Variant,
}

impl GridSpec {
    pub fn new(nr: usize, ntheta: usize) -> Self {
        Self {
            nr,
            ntheta,
            variant: Variant::Zonal,
        }
    }
}

/// `u` on a tensor grid: `values[i][j] = u(radii[i], angles[j])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGrid {
    pub radii: Vec<f64>,
    pub angles: Vec<AngularPoint>,
    pub values: Vec<Vec<f64>>,
    pub mode: Mode,
    pub radius: f64,
    pub factor: AngularFactor,
}

/// Radii `R i/(nr-1)`. Angles cover the circle as `2πj/nθ` in two
/// dimensions and the meridian `φ = 0` as `πj/(nθ-1)` otherwise.
pub fn sample_mode(mode: &Mode, radius: f64, spec: &GridSpec) -> Result<ModeGrid> {
    if spec.nr < 2 || spec.ntheta < 2 {
        return Err(domain(format!(
            "grid needs at least 2 points per axis, got {} x {}",
            spec.nr, spec.ntheta
        )));
    }
    let profile = radial_profile(mode, radius)?;
    let factor = AngularFactor::new(mode.dim(), mode.l(), spec.variant)?;

    let radii: Vec<f64> = (0..spec.nr)
        .map(|i| radius * i as f64 / (spec.nr - 1) as f64)
        .collect();
    let angles = angular_nodes(&mode.dim(), spec.ntheta);
    let ys: Vec<f64> = angles.iter().map(|&p| factor.eval(p)).collect();

    let values = radii
        .par_iter()
        .map(|&r| {
            let rv = profile.value(r.min(radius), 0)?;
            Ok(ys.iter().map(|y| rv * y).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    Ok(ModeGrid {
        radii,
        angles,
        values,
        mode: *mode,
        radius,
        factor,
    })
}

fn angular_nodes(dim: &DimensionContext, n: usize) -> Vec<AngularPoint> {
    (0..n)
        .map(|j| {
            let theta = if dim.dim() == 2 {
                2.0 * PI * j as f64 / n as f64
            } else {
                PI * j as f64 / (n - 1) as f64
            };
            AngularPoint::new(theta, 0.0)
        })
        .collect()
}

/// Profile of a Bessel mode given only its parameters.
pub fn bessel_profile(params: &ModeParams, radius: f64) -> Result<RadialProfile> {
    radial_profile(&Mode::Bessel(*params), radius)
}
