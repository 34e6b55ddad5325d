//! Ultraspherical Bessel functions of the first kind.
//!
//! For a ball in `d` dimensions the radial building blocks are
//!
//! ```text
//! j_l(z) = z^{-s} J_{s+l}(z),   i_l(z) = z^{-s} I_{s+l}(z),   s = (d-2)/2,
//! ```
//!
//! evaluated here from their ascending series
//!
//! ```text
//! j_l(z) = Σ_k (-1)^k 2^{1-d/2} / (k! Γ(k + d/2 + l)) (z/2)^{2k+l}
//! ```
//!
//! (and the same series with positive signs for `i_l`). Derivatives up to
//! order four come from differentiating the series term by term, so there
//! are no `1/z` factors and `z = 0` is an ordinary point. The alternating
//! series for `j_l` is summed in double-double arithmetic, which absorbs the
//! cancellation between the large intermediate terms for `z` up to the
//! unscaled range limit. The modified functions also have an exponentially
//! scaled form, `e^{-z} i_l^{(m)}(z)`, with no upper limit on `z`.

mod dd;
mod gamma;

pub use gamma::{factorial, gamma_half_integer, ln_gamma_half_integer};

use crate::error::{domain, PlateError, Result};
use dd::Dd;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Highest derivative order the kernel evaluates.
pub const MAX_DERIVATIVE: u32 = 4;

/// Dimension `d >= 2` of the ball and the Bessel order shift `s = (d-2)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct DimensionContext {
    d: u32,
}

impl DimensionContext {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(domain(format!("dimension must be at least 2, got {d}")));
        }
        Ok(Self { d })
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    /// `s = (d-2)/2`, exact since it is a multiple of one half.
    pub fn shift(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }

    pub fn half_dim(&self) -> f64 {
        self.d as f64 / 2.0
    }

    /// Separation constant `l(l+d-2)` of the degree-`l` spherical harmonics.
    pub fn separation(&self, l: u32) -> u64 {
        l as u64 * (l as u64 + self.d as u64 - 2)
    }

    /// Dimension of the space of degree-`l` spherical harmonics on `S^{d-1}`.
    pub fn harmonic_dimension(&self, l: u32) -> u64 {
        let d = self.d as u64;
        let l = l as u64;
        let top = binomial(l + d - 1, d - 1);
        if l >= 2 {
            top - binomial(l + d - 3, d - 1)
        } else {
            top
        }
    }
}

impl TryFrom<u32> for DimensionContext {
    type Error = PlateError;

    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<DimensionContext> for u32 {
    fn from(ctx: DimensionContext) -> u32 {
        ctx.d
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Angular order `l` together with its separation constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesselOrder {
    l: u32,
    k_sep: u64,
}

impl BesselOrder {
    pub fn new(l: u32, ctx: &DimensionContext) -> Self {
        Self {
            l,
            k_sep: ctx.separation(l),
        }
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn k_sep(&self) -> u64 {
        self.k_sep
    }

    /// Separation constant as a float.
    pub fn k(&self) -> f64 {
        self.k_sep as f64
    }
}

/// Truncation and range limits for the ascending series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    /// Stop once the next term is below `rel_tol` times the partial sum.
    pub rel_tol: f64,
    /// Term budget for the unscaled series. The scaled series adds `⌈z⌉`.
    pub max_terms: usize,
    /// Largest argument accepted by the unscaled functions.
    pub max_unscaled_z: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-18,
            max_terms: 200,
            max_unscaled_z: 60.0,
        }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-10) {
            return Err(domain(format!("rel_tol must lie in (0, 1e-10], got {}", self.rel_tol)));
        }
        if self.max_terms < 50 {
            return Err(domain(format!("max_terms must be at least 50, got {}", self.max_terms)));
        }
        Ok(())
    }
}

/// Terms whose size falls this far below the largest term cannot change a
/// double-double sum. Stops the loop at exact zeros of `j_l^{(m)}`.
const DD_FLOOR: f64 = 1e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    J,
    I,
}

impl Kind {
    fn sign(self) -> f64 {
        match self {
            Kind::J => -1.0,
            Kind::I => 1.0,
        }
    }
}

/// Leading surviving term `c_{k0} z^{2k0+l-m}` of a differentiated series.
struct Leading {
    k0: u32,
    negative: bool,
    ln_mag: f64,
    mag: f64,
}

fn falling_factorial(p: u32, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (p - i) as f64)
}

/// Evaluator for `j_l`, `i_l` and their derivatives in a fixed dimension.
///
/// Pure and `Sync`: the same inputs and policy give bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    ctx: DimensionContext,
    policy: SeriesPolicy,
}

impl Kernel {
    pub fn new(ctx: DimensionContext) -> Self {
        Self {
            ctx,
            policy: SeriesPolicy::default(),
        }
    }

    pub fn with_policy(ctx: DimensionContext, policy: SeriesPolicy) -> Result<Self> {
        policy.validate()?;
        Ok(Self { ctx, policy })
    }

    pub fn ctx(&self) -> &DimensionContext {
        &self.ctx
    }

    pub fn policy(&self) -> &SeriesPolicy {
        &self.policy
    }

    pub fn j(&self, l: u32, z: f64) -> Result<f64> {
        self.unscaled(Kind::J, l, z, 0)
    }

    pub fn i(&self, l: u32, z: f64) -> Result<f64> {
        self.unscaled(Kind::I, l, z, 0)
    }

    /// `m`-th derivative of `j_l` at `z`.
    pub fn j_deriv(&self, l: u32, z: f64, m: u32) -> Result<f64> {
        self.unscaled(Kind::J, l, z, m)
    }

    /// `m`-th derivative of `i_l` at `z`.
    pub fn i_deriv(&self, l: u32, z: f64, m: u32) -> Result<f64> {
        self.unscaled(Kind::I, l, z, m)
    }

    /// `e^{-z} i_l^{(m)}(z)`, safe for arguments far beyond the unscaled range.
    pub fn i_scaled(&self, l: u32, z: f64, m: u32) -> Result<f64> {
        self.check_args(l, z, m)?;
        let lead = self.leading(Kind::I, l, z, m);
        if z == 0.0 {
            return Ok(self.at_origin(&lead, l, m));
        }

        const RESCALE: f64 = 1e250;
        let ln_rescale = RESCALE.ln();
        let z2_4 = z * z / 4.0;
        let nu1 = self.ctx.half_dim() + l as f64;
        let min_terms = z.ceil() as usize + 10;
        let budget = self.policy.max_terms + z.ceil() as usize;

        let mut ln_scale = lead.ln_mag - z;
        let mut k = lead.k0;
        let mut t = 1.0;
        let mut sum = falling_factorial(2 * k + l, m);
        let mut n = 1;
        loop {
            k += 1;
            t *= z2_4 / (k as f64 * (k as f64 - 1.0 + nu1));
            let term = t * falling_factorial(2 * k + l, m);
            sum += term;
            n += 1;
            if n >= min_terms && term <= self.policy.rel_tol * sum {
                break;
            }
            if n > budget {
                return Err(self.range(l, z, "scaled series exceeded its term budget"));
            }
            if sum > RESCALE {
                sum /= RESCALE;
                t /= RESCALE;
                ln_scale += ln_rescale;
            }
        }
        Ok(sum * ln_scale.exp())
    }

    fn check_args(&self, l: u32, z: f64, m: u32) -> Result<()> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(domain(format!("argument must be finite and nonnegative, got z = {z}")));
        }
        if m > MAX_DERIVATIVE {
            return Err(domain(format!("derivative order {m} exceeds {MAX_DERIVATIVE}")));
        }
        if l > 1000 {
            return Err(self.range(l, z, "order too large"));
        }
        Ok(())
    }

    fn range(&self, l: u32, z: f64, reason: &'static str) -> PlateError {
        PlateError::Range {
            z,
            l,
            d: self.ctx.dim(),
            reason,
        }
    }

    fn leading(&self, kind: Kind, l: u32, z: f64, m: u32) -> Leading {
        let k0 = m.saturating_sub(l).div_ceil(2);
        let p0 = 2 * k0 + l;
        let e0 = (p0 - m) as i32;
        let half_dim = self.ctx.half_dim();
        let two_exp = 1.0 - half_dim - p0 as f64;
        let gamma_arg = k0 as f64 + half_dim + l as f64;

        let negative = kind == Kind::J && k0 % 2 == 1;
        let ln_coeff = two_exp * LN_2
            - ln_gamma_half_integer(k0 as f64 + 1.0)
            - ln_gamma_half_integer(gamma_arg);
        let ln_mag = if e0 == 0 {
            ln_coeff
        } else {
            ln_coeff + e0 as f64 * z.ln()
        };

        let direct = 2f64.powf(two_exp) / (factorial(k0) * gamma_half_integer(gamma_arg))
            * z.powi(e0);
        let mag = if direct.is_finite() && direct > 0.0 {
            direct
        } else {
            ln_mag.exp()
        };
        Leading {
            k0,
            negative,
            ln_mag,
            mag,
        }
    }

    fn at_origin(&self, lead: &Leading, l: u32, m: u32) -> f64 {
        // Only a z^0 leading term survives at the origin.
        if 2 * lead.k0 + l != m {
            return 0.0;
        }
        let v = lead.mag * falling_factorial(m, m);
        if lead.negative {
            -v
        } else {
            v
        }
    }

    fn unscaled(&self, kind: Kind, l: u32, z: f64, m: u32) -> Result<f64> {
        self.check_args(l, z, m)?;
        if z > self.policy.max_unscaled_z {
            return Err(self.range(l, z, "argument beyond the unscaled series range"));
        }
        let lead = self.leading(kind, l, z, m);
        if z == 0.0 {
            return Ok(self.at_origin(&lead, l, m));
        }

        let ratio = Dd::square(z).scale(0.25 * kind.sign());
        let nu1 = self.ctx.half_dim() + l as f64;
        let min_terms = z.ceil() as usize + 10;

        let mut k = lead.k0;
        let mut t = Dd::ONE;
        let mut sum = Dd::from_f64(falling_factorial(2 * k + l, m));
        let mut peak = sum.hi.abs();
        let mut n = 1;
        loop {
            k += 1;
            t = (t * ratio).div_f64(k as f64 * (k as f64 - 1.0 + nu1));
            let term = t.scale(falling_factorial(2 * k + l, m));
            sum += term;
            n += 1;
            let size = term.hi.abs();
            peak = peak.max(size);
            if n >= min_terms
                && (size <= self.policy.rel_tol * sum.abs().hi || size <= DD_FLOOR * peak)
            {
                break;
            }
            if n > self.policy.max_terms {
                return Err(self.range(l, z, "series exceeded its term budget"));
            }
        }
        let v = lead.mag * sum.to_f64();
        Ok(if lead.negative { -v } else { v })
    }
}

/// `j_l(z)` with the default series policy.
pub fn ultra_j(ctx: &DimensionContext, l: u32, z: f64) -> Result<f64> {
    Kernel::new(*ctx).j(l, z)
}

/// `i_l(z)` with the default series policy.
pub fn ultra_i(ctx: &DimensionContext, l: u32, z: f64) -> Result<f64> {
    Kernel::new(*ctx).i(l, z)
}

pub fn ultra_j_deriv(ctx: &DimensionContext, l: u32, z: f64, m: u32) -> Result<f64> {
    Kernel::new(*ctx).j_deriv(l, z, m)
}

pub fn ultra_i_deriv(ctx: &DimensionContext, l: u32, z: f64, m: u32) -> Result<f64> {
    Kernel::new(*ctx).i_deriv(l, z, m)
}

pub fn ultra_i_scaled(ctx: &DimensionContext, l: u32, z: f64, m: u32) -> Result<f64> {
    Kernel::new(*ctx).i_scaled(l, z, m)
}

/// Bisection width for [`p11`].
pub const P11_TOL: f64 = 1e-13;

/// First positive zero `p_{1,1}` of `j_1'`.
///
/// The zero is known to satisfy `d < p_{1,1}^2 < d + 2` for every `d >= 2`,
/// and `j_1'` is positive before it, so plain bisection on that bracket is
/// guaranteed to converge.
pub fn p11(ctx: &DimensionContext) -> Result<f64> {
    let kernel = Kernel::new(*ctx);
    let d = ctx.dim() as f64;
    let slope = |z: f64| kernel.j_deriv(1, z, 1);
    bisect_sign_change(slope, d.sqrt(), (d + 2.0).sqrt(), P11_TOL)?.ok_or_else(|| {
        PlateError::Internal(format!(
            "j_1' does not change sign on (sqrt({d}), sqrt({}))",
            d + 2.0
        ))
    })
}

/// Bisection on `[lo, hi]`; `None` when the endpoint signs agree.
pub fn bisect_sign_change<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    if f_hi == 0.0 {
        return Ok(Some(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Square-rooted classical bracket around `p_{l,1}`, the first zero of `j_l'`.
///
/// ```text
/// l(d+2l)(d+2l+2)/(d+4l+2) < p_{l,1}^2 < l(d+2l)      (d >= 3, l >= 1)
/// ```
///
/// In two dimensions only `l = 1` is covered, by `2 < p_{1,1}^2 < 4`.
pub fn pl1_bracket(ctx: &DimensionContext, l: u32) -> Result<(f64, f64)> {
    if l == 0 {
        return Err(domain("j_0' has no positive-order bracket; l must be at least 1"));
    }
    let d = ctx.dim() as f64;
    if ctx.dim() == 2 {
        if l == 1 {
            return Ok((d.sqrt(), (d + 2.0).sqrt()));
        }
        return Err(PlateError::Unsupported(format!(
            "zero bracket for l = {l} in d = 2 (only l = 1 is covered)"
        )));
    }
    let l = l as f64;
    let lo2 = l * (d + 2.0 * l) * (d + 2.0 * l + 2.0) / (d + 4.0 * l + 2.0);
    let hi2 = l * (d + 2.0 * l);
    Ok((lo2.sqrt(), hi2.sqrt()))
}

/// Coefficients of `j_1''(z) = Σ_{k>=1} (-1)^k d_k z^{2k-1}` and their ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    /// `d_1, d_2, ...`
    pub d: Vec<f64>,
    /// `c_k = d_{k+1} / d_k` for `k = 1, 2, ...`
    pub c: Vec<f64>,
}

impl SeriesCoefficients {
    /// `Σ_k sign^k d_k z^{2k-1}` over the stored coefficients.
    pub fn second_derivative(&self, z: f64, alternating: bool) -> f64 {
        self.d
            .iter()
            .enumerate()
            .map(|(idx, dk)| {
                let k = idx as i32 + 1;
                let sign = if alternating && k % 2 == 1 { -1.0 } else { 1.0 };
                sign * dk * z.powi(2 * k - 1)
            })
            .sum()
    }
}

pub fn series_coeffs(ctx: &DimensionContext, k_max: usize) -> Result<SeriesCoefficients> {
    if k_max < 3 {
        return Err(domain(format!("k_max must be at least 3, got {k_max}")));
    }
    let half_dim = ctx.half_dim();
    let d_dim = ctx.dim() as f64;
    let d = (1..=k_max)
        .map(|k| {
            let kf = k as f64;
            let ln = (1.0 - 2.0 * kf - half_dim) * LN_2
                - ln_gamma_half_integer(kf)
                - ln_gamma_half_integer(kf + 1.0 + half_dim);
            (2.0 * kf + 1.0) * ln.exp()
        })
        .collect();
    let c = (1..=k_max)
        .map(|k| {
            let kf = k as f64;
            (2.0 * kf + 3.0) / (2.0 * kf * (2.0 * kf + 1.0) * (2.0 * kf + d_dim + 2.0))
        })
        .collect();
    Ok(SeriesCoefficients { d, c })
}
