//! Eigenvalues of the free plate on a ball.
//!
//! A positive `ω` is an eigenvalue of `Δ²u - τΔu = ωu` on `B(R)` exactly
//! when, for some order `l`, the determinant
//!
//! ```text
//! W_l(a) = a² j_l''(a) (-a² b i_l'(b) + k (b i_l'(b) - i_l(b)))
//!        - b² i_l''(b) ( a b² j_l'(a) + k (a j_l'(a) - j_l(a)))
//! ```
//!
//! vanishes, with `k = l(l+d-2)`, `b² - a² = R²τ` and `ω = a²b²/R⁴`. Each
//! additive term is linear in the `i_l` factors, so the determinant is
//! evaluated with `e^{-b}`-scaled modified functions. That leaves its roots
//! and signs unchanged and keeps large tensions finite.

use crate::bessel::{bisect_sign_change, p11, BesselOrder, DimensionContext, Kernel};
use crate::error::{domain, PlateError, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Bisection tolerance on the wavenumber `a`.
pub const ROOT_TOL: f64 = 1e-12;

/// The unscaled `j_l` series is limited to this argument, which caps the scan.
pub const A_CEILING: f64 = 60.0;

/// Higher orders checked against the fundamental root.
pub const FUNDAMENTAL_L_GUARD: u32 = 6;

/// A ball `B(R)` in `d` dimensions under tension `τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateProblem {
    pub dim: DimensionContext,
    pub tau: f64,
    pub radius: f64,
}

impl PlateProblem {
    pub fn new(d: u32, tau: f64, radius: f64) -> Result<Self> {
        let dim = DimensionContext::new(d)?;
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(domain(format!("tension must satisfy tau > 0, got {tau}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(domain(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { dim, tau, radius })
    }

    /// Tension of the equivalent unit-ball problem, `R²τ`.
    pub fn unit_tension(&self) -> f64 {
        self.radius * self.radius * self.tau
    }

    pub fn kernel(&self) -> Kernel {
        Kernel::new(self.dim)
    }
}

/// One eigenvalue with its wavenumbers and coupling constant.
///
/// `a`, `b` and `gamma` describe the unit-ball profile
/// `j_l(a r/R) + γ i_l(b r/R)`; `omega` is the eigenvalue on `B(R)`.
/// `gamma_scaled = γ e^{b}` stays finite when `γ` itself underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    pub dim: DimensionContext,
    pub order: BesselOrder,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub gamma_scaled: f64,
    pub omega: f64,
}

impl ModeParams {
    /// Builds the unit-ball parameters for wavenumber `a` at unit tension
    /// `tau_unit`, with `γ` chosen so that `u_rr = 0` on the boundary.
    /// Does not check that `a` is a root of `W_l`.
    pub fn from_wavenumber(kernel: &Kernel, l: u32, a: f64, tau_unit: f64) -> Result<Self> {
        let b = (a * a + tau_unit).sqrt();
        let coupling = gamma_of(kernel, l, a, b)?;
        Ok(Self {
            dim: *kernel.ctx(),
            order: BesselOrder::new(l, kernel.ctx()),
            a,
            b,
            gamma: coupling.gamma,
            gamma_scaled: coupling.gamma_scaled,
            omega: omega_of(a, tau_unit)?,
        })
    }

    pub fn l(&self) -> u32 {
        self.order.l()
    }

    /// `b² - a²`, the tension of the unit-ball problem these parameters solve.
    pub fn unit_tension(&self) -> f64 {
        (self.b - self.a) * (self.b + self.a)
    }
}

/// Either the constant mode at `ω = 0` or a Bessel mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Constant { dim: DimensionContext },
    Bessel(ModeParams),
}

impl Mode {
    pub fn dim(&self) -> DimensionContext {
        match self {
            Mode::Constant { dim } => *dim,
            Mode::Bessel(p) => p.dim,
        }
    }

    pub fn l(&self) -> u32 {
        match self {
            Mode::Constant { .. } => 0,
            Mode::Bessel(p) => p.l(),
        }
    }

    pub fn omega(&self) -> f64 {
        match self {
            Mode::Constant { .. } => 0.0,
            Mode::Bessel(p) => p.omega,
        }
    }

    pub fn params(&self) -> Option<&ModeParams> {
        match self {
            Mode::Constant { .. } => None,
            Mode::Bessel(p) => Some(p),
        }
    }
}

/// Grid scan settings for the roots of `W_l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootScanConfig {
    pub a_max: f64,
    pub step: f64,
    pub root_tol: f64,
}

impl RootScanConfig {
    pub fn new(a_max: f64, step: f64, root_tol: f64) -> Result<Self> {
        let cfg = Self {
            a_max,
            step,
            root_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Scan up to `a_max` at the default spacing `min(0.05, p11/50)`.
    pub fn with_ceiling(ctx: &DimensionContext, a_max: f64) -> Result<Self> {
        let step = default_step(ctx)?.min(a_max / 50.0);
        Self::new(a_max, step, ROOT_TOL)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a_max > 0.0 && self.step > 0.0 && self.root_tol > 0.0) {
            return Err(domain("scan parameters must be positive"));
        }
        if self.step >= self.a_max {
            return Err(domain(format!(
                "scan step {} must be below the ceiling {}",
                self.step, self.a_max
            )));
        }
        if self.root_tol > 1e-10 * self.a_max {
            return Err(domain(format!(
                "root tolerance {} exceeds 1e-10 * a_max",
                self.root_tol
            )));
        }
        if self.a_max > A_CEILING {
            return Err(domain(format!(
                "scan ceiling {} exceeds the series range {A_CEILING}",
                self.a_max
            )));
        }
        Ok(())
    }
}

/// `min(0.05, p11/50)`.
pub fn default_step(ctx: &DimensionContext) -> Result<f64> {
    Ok((p11(ctx)? / 50.0).min(0.05))
}

/// Splits `ω` into wavenumbers with `b² - a² = τ`, `a²b² = ω`.
pub fn split_omega(tau: f64, omega: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0) || !(omega > 0.0) {
        return Err(domain(format!(
            "split needs tau > 0 and omega > 0, got tau = {tau}, omega = {omega}"
        )));
    }
    let half = 0.5 * tau;
    let root = half.hypot(omega.sqrt());
    let b2 = root + half;
    // a² = root - τ/2 without the cancellation when τ² ≫ ω
    let a2 = omega / b2;
    Ok((a2.sqrt(), b2.sqrt()))
}

/// `ω = a²(a² + τ)`, strictly increasing in `a`.
pub fn omega_of(a: f64, tau: f64) -> Result<f64> {
    if !(a > 0.0) || !(tau > 0.0) {
        return Err(domain(format!(
            "omega_of needs a > 0 and tau > 0, got a = {a}, tau = {tau}"
        )));
    }
    let a2 = a * a;
    Ok(a2 * (a2 + tau))
}

/// The coupling `γ = -a² j_l''(a) / (b² i_l''(b))` and `γ e^{b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub gamma: f64,
    pub gamma_scaled: f64,
}

pub fn gamma_of(kernel: &Kernel, l: u32, a: f64, b: f64) -> Result<Coupling> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(domain(format!("gamma needs a > 0 and b > 0, got a = {a}, b = {b}")));
    }
    let num = -a * a * kernel.j_deriv(l, a, 2)?;
    let den_scaled = b * b * kernel.i_scaled(l, b, 2)?;
    let gamma_scaled = num / den_scaled;
    Ok(Coupling {
        gamma: gamma_scaled * (-b).exp(),
        gamma_scaled,
    })
}

/// The two additive terms of `e^{-b} W_l(a)`.
///
/// The first is the `j_l''` row, the second the `i_l''` row.
pub fn determinant_terms(kernel: &Kernel, l: u32, tau: f64, a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !(tau > 0.0) {
        return Err(domain(format!(
            "determinant needs a > 0 and tau > 0, got a = {a}, tau = {tau}"
        )));
    }
    let b = (a * a + tau).sqrt();
    let i0 = kernel.i_scaled(l, b, 0)?;
    let i1 = kernel.i_scaled(l, b, 1)?;
    let i2 = kernel.i_scaled(l, b, 2)?;
    assemble(kernel, l, a, b, [i0, i1, i2])
}

fn assemble(kernel: &Kernel, l: u32, a: f64, b: f64, i: [f64; 3]) -> Result<(f64, f64)> {
    let k = kernel.ctx().separation(l) as f64;
    let j0 = kernel.j(l, a)?;
    let j1 = kernel.j_deriv(l, a, 1)?;
    let j2 = kernel.j_deriv(l, a, 2)?;
    let [i0, i1, i2] = i;
    let first = a * a * j2 * (-a * a * b * i1 + k * (b * i1 - i0));
    let second = -b * b * i2 * (a * b * b * j1 + k * (a * j1 - j0));
    Ok((first, second))
}

/// `e^{-b} W_l(a)` with `b = sqrt(a² + τ)`.
pub fn determinant(kernel: &Kernel, l: u32, tau: f64, a: f64) -> Result<f64> {
    let (first, second) = determinant_terms(kernel, l, tau, a)?;
    Ok(first + second)
}

/// `W_l(a)` with unscaled modified functions; limited to moderate `b`.
pub fn determinant_unscaled(kernel: &Kernel, l: u32, tau: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) || !(tau > 0.0) {
        return Err(domain("determinant needs a > 0 and tau > 0"));
    }
    let b = (a * a + tau).sqrt();
    let i = [
        kernel.i(l, b)?,
        kernel.i_deriv(l, b, 1)?,
        kernel.i_deriv(l, b, 2)?,
    ];
    let (first, second) = assemble(kernel, l, a, b, i)?;
    Ok(first + second)
}

/// `|W| / (|first| + |second|)`: how far `a` is from a root, scale-free.
pub fn determinant_residual(kernel: &Kernel, l: u32, tau: f64, a: f64) -> Result<f64> {
    let (first, second) = determinant_terms(kernel, l, tau, a)?;
    let scale = first.abs() + second.abs();
    Ok(if scale == 0.0 {
        0.0
    } else {
        (first + second).abs() / scale
    })
}

/// All sign-change roots of `a ↦ W_l(a)` on `(0, a_max]`, ascending.
///
/// Tangential roots, where `W_l` touches zero without changing sign, are
/// not detected.
pub fn scan_roots(kernel: &Kernel, l: u32, tau: f64, cfg: &RootScanConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let w = |a: f64| determinant(kernel, l, tau, a);
    let n = (cfg.a_max / cfg.step).floor() as usize;
    let mut grid: Vec<f64> = (1..=n).map(|i| i as f64 * cfg.step).collect();
    if grid.last().is_none_or(|&last| last < cfg.a_max) {
        grid.push(cfg.a_max);
    }

    let mut roots = Vec::new();
    let mut prev_a = grid[0];
    let mut prev_w = w(prev_a)?;
    if prev_w == 0.0 {
        roots.push(prev_a);
    }
    for &a in &grid[1..] {
        let wa = w(a)?;
        if wa == 0.0 {
            roots.push(a);
        } else if prev_w != 0.0 && prev_w.signum() != wa.signum() {
            if let Some(root) = bisect_sign_change(w, prev_a, a, cfg.root_tol)? {
                roots.push(root);
            }
        }
        prev_a = a;
        prev_w = wa;
    }
    Ok(roots)
}

/// First root of `W_l` on `(0, a_max]`, if any.
pub fn first_root(kernel: &Kernel, l: u32, tau: f64, a_max: f64) -> Result<Option<f64>> {
    let cfg = RootScanConfig::with_ceiling(kernel.ctx(), a_max)?;
    Ok(scan_roots(kernel, l, tau, &cfg)?.first().copied())
}

/// One row of a [`SpectrumTable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub omega: f64,
    pub l: u32,
    pub multiplicity: u64,
    pub mode: Mode,
    /// Scale-free determinant residual at the stored root (0 for the constant mode).
    pub w_residual: f64,
}

/// Sorted eigenvalues of one plate problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub entries: Vec<SpectrumEntry>,
    pub problem: PlateProblem,
    pub scan: RootScanConfig,
    pub l_max: u32,
    /// Every eigenvalue with `l <= l_max` below this value (on `B(R)`) is
    /// listed, up to tangential roots. Nothing is claimed above it.
    pub complete_below: f64,
    /// True when the scan ceiling hit [`A_CEILING`] before the heuristic
    /// margin was reached.
    pub ceiling_clamped: bool,
}

fn multiplicity(ctx: &DimensionContext, l: u32) -> u64 {
    ctx.harmonic_dimension(l)
}

fn collect_entries(problem: &PlateProblem, l_max: u32, cfg: &RootScanConfig) -> Result<Vec<SpectrumEntry>> {
    let kernel = problem.kernel();
    let tau_u = problem.unit_tension();
    let r4 = problem.radius.powi(4);

    let per_l: Vec<Vec<SpectrumEntry>> = (0..=l_max)
        .into_par_iter()
        .map(|l| -> Result<Vec<SpectrumEntry>> {
            scan_roots(&kernel, l, tau_u, cfg)?
                .into_iter()
                .map(|a| {
                    let mut params = ModeParams::from_wavenumber(&kernel, l, a, tau_u)?;
                    params.omega /= r4;
                    Ok(SpectrumEntry {
                        omega: params.omega,
                        l,
                        multiplicity: multiplicity(&problem.dim, l),
                        mode: Mode::Bessel(params),
                        w_residual: determinant_residual(&kernel, l, tau_u, a)?,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut entries = vec![SpectrumEntry {
        omega: 0.0,
        l: 0,
        multiplicity: 1,
        mode: Mode::Constant { dim: problem.dim },
        w_residual: 0.0,
    }];
    entries.extend(per_l.into_iter().flatten());
    entries.sort_by(|x, y| x.omega.total_cmp(&y.omega).then(x.l.cmp(&y.l)));
    Ok(entries)
}

/// The lowest `count` eigenvalues over orders `0..=l_max`, with `ω = 0` first.
///
/// The scan ceiling grows until `ω(a_max)` exceeds the `count`-th
/// eigenvalue found by `count` times the largest gap between the listed
/// eigenvalues. The ceiling actually used is recorded in the table.
pub fn eigenvalues(problem: &PlateProblem, l_max: u32, count: usize) -> Result<SpectrumTable> {
    if l_max < 1 || count < 1 {
        return Err(domain(format!(
            "need l_max >= 1 and count >= 1, got l_max = {l_max}, count = {count}"
        )));
    }
    let tau_u = problem.unit_tension();
    let mut a_max = (2.0 * p11(&problem.dim)?).min(A_CEILING);
    let mut clamped = false;

    loop {
        let cfg = RootScanConfig::with_ceiling(&problem.dim, a_max)?;
        let mut entries = collect_entries(problem, l_max, &cfg)?;
        let unit_ceiling = omega_of(a_max, tau_u)?;

        let target = (entries.len() >= count).then(|| {
            let listed: Vec<f64> = entries[..count].iter().map(|e| e.omega).collect();
            let gap = listed.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            (listed[count - 1] + count as f64 * gap) * problem.radius.powi(4)
        });

        let done = match target {
            Some(t) => unit_ceiling >= t,
            None => false,
        };
        if done || clamped {
            if entries.len() < count && clamped {
                return Err(PlateError::Domain(format!(
                    "only {} eigenvalues below the scan ceiling a = {A_CEILING}; raise l_max or lower count",
                    entries.len()
                )));
            }
            entries.truncate(count);
            return Ok(SpectrumTable {
                entries,
                problem: *problem,
                scan: cfg,
                l_max,
                complete_below: unit_ceiling / problem.radius.powi(4),
                ceiling_clamped: clamped && !done,
            });
        }

        let next = match target {
            Some(t) => split_omega(tau_u, t)?.0.max(a_max * 1.01),
            None => 2.0 * a_max,
        };
        if next >= A_CEILING {
            a_max = A_CEILING;
            clamped = true;
        } else {
            a_max = next;
        }
    }
}

/// Outcome of the checks that pin the fundamental tone to `l = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalChecks {
    /// First root of `W_1`, found in `(0, p11)`.
    pub first_l1_root: f64,
    pub p11: f64,
    /// Whether `W_0` has no root in `(0, first_l1_root]`.
    pub l0_clear: bool,
    /// `(l, clear)` for `l = 2..=l_guard`: no root of `W_l` at or below the `l = 1` root.
    pub higher_orders_clear: Vec<(u32, bool)>,
}

impl FundamentalChecks {
    pub fn all_pass(&self) -> bool {
        self.l0_clear && self.higher_orders_clear.iter().all(|&(_, ok)| ok)
    }
}

/// Fundamental tone and mode. Always of order `l = 1`.
pub fn fundamental(problem: &PlateProblem) -> Result<ModeParams> {
    fundamental_checked(problem).map(|(params, _)| params)
}

/// Like [`fundamental`], also returning the cross-check verdicts.
///
/// Errors with [`PlateError::InvariantViolation`] if any check fails.
pub fn fundamental_checked(problem: &PlateProblem) -> Result<(ModeParams, FundamentalChecks)> {
    let kernel = problem.kernel();
    let tau_u = problem.unit_tension();
    let p = p11(&problem.dim)?;

    let a1 = first_root(&kernel, 1, tau_u, p)?.ok_or_else(|| {
        PlateError::InvariantViolation(format!("W_1 has no root in (0, p11 = {p})"))
    })?;
    if a1 >= p {
        return Err(PlateError::InvariantViolation(format!(
            "first root of W_1 at {a1} is not below p11 = {p}"
        )));
    }

    let clear = |l: u32| -> Result<bool> { Ok(first_root(&kernel, l, tau_u, a1)?.is_none()) };
    let checks = FundamentalChecks {
        first_l1_root: a1,
        p11: p,
        l0_clear: clear(0)?,
        higher_orders_clear: (2..=FUNDAMENTAL_L_GUARD)
            .map(|l| Ok((l, clear(l)?)))
            .collect::<Result<_>>()?,
    };
    if !checks.all_pass() {
        return Err(PlateError::InvariantViolation(format!(
            "a lower root than the l = 1 root {a1} exists: {checks:?}"
        )));
    }

    let unit = ModeParams::from_wavenumber(&kernel, 1, a1, tau_u)?;
    Ok((rescale(&unit, problem)?, checks))
}

/// Carries a unit-ball solution at tension `R²τ` over to `B(R)`:
/// same `(l, a, b, γ)`, eigenvalue `a²b²/R⁴`.
pub fn rescale(unit_solution: &ModeParams, problem: &PlateProblem) -> Result<ModeParams> {
    let expected = problem.unit_tension();
    let actual = unit_solution.unit_tension();
    if (actual - expected).abs() > 1e-9 * expected {
        return Err(domain(format!(
            "unit solution has tension b² - a² = {actual}, problem needs R²τ = {expected}"
        )));
    }
    let a2b2 = (unit_solution.a * unit_solution.b).powi(2);
    Ok(ModeParams {
        omega: a2b2 / problem.radius.powi(4),
        ..*unit_solution
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(d: u32) -> Kernel {
        Kernel::new(DimensionContext::new(d).unwrap())
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_omega(3.0, 4.0).unwrap(), (1.0, 2.0));
        let (a, b) = split_omega(1e-12, 16.0).unwrap();
        assert!((a - 2.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
        assert!(split_omega(0.0, 1.0).is_err());
        assert!(split_omega(1.0, -1.0).is_err());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_of(1.0, 3.0).unwrap(), 4.0);
        assert_eq!(omega_of(2.0, 0.5).unwrap(), 18.0);
        assert!(omega_of(0.0, 1.0).is_err());
    }

    #[test]
    fn problem_validation() {
        assert!(PlateProblem::new(2, 0.0, 1.0).is_err());
        assert!(PlateProblem::new(2, -1.0, 1.0).is_err());
        assert!(PlateProblem::new(2, 1.0, 0.0).is_err());
        assert!(PlateProblem::new(1, 1.0, 1.0).is_err());
        assert_eq!(PlateProblem::new(3, 2.0, 3.0).unwrap().unit_tension(), 18.0);
    }

    #[test]
    fn scan_config_validation() {
        assert!(RootScanConfig::new(1.0, 2.0, 1e-12).is_err());
        assert!(RootScanConfig::new(1.0, 0.1, 1e-5).is_err());
        assert!(RootScanConfig::new(100.0, 0.1, 1e-12).is_err());
        assert!(RootScanConfig::new(2.0, 0.05, 1e-12).is_ok());
    }

    #[test]
    fn gamma_vanishes_with_numerator() {
        // a chosen at a zero of j_1'' gives γ = 0 exactly up to the root
        let k = kernel(2);
        let z = bisect_sign_change(|z| k.j_deriv(1, z, 2), 2.0, 5.0, 1e-14)
            .unwrap()
            .unwrap();
        let g = gamma_of(&k, 1, z, 3.0).unwrap();
        assert!(g.gamma.abs() < 1e-13);
        assert!(gamma_of(&k, 1, 1.0, 0.0).is_err());
    }

    #[test]
    fn gamma_reference_value() {
        let g = gamma_of(&kernel(2), 1, 1.5, 2.5).unwrap();
        assert!((g.gamma - 0.072_356_286_484_733_25).abs() < 1e-15);
        assert!((g.gamma_scaled * (-2.5f64).exp() - g.gamma).abs() < 1e-17);
    }

    #[test]
    fn gamma_positive_below_p11_in_two_dimensions() {
        let k = kernel(2);
        let p = p11(k.ctx()).unwrap();
        for i in 1..=20 {
            let a = p * i as f64 / 20.0;
            assert!(gamma_of(&k, 1, a, (a * a + 1.0).sqrt()).unwrap().gamma > 0.0);
        }
    }

    #[test]
    fn l0_determinant_reduces() {
        for d in [2, 3, 6] {
            let k = kernel(d);
            for (a, tau) in [(0.4, 1.0), (1.3, 10.0), (3.0, 0.2)] {
                let b = f64::sqrt(a * a + tau);
                let j1 = k.j(1, a).unwrap();
                let j1p = k.j_deriv(1, a, 1).unwrap();
                let i1 = k.i_scaled(1, b, 0).unwrap();
                let i1p = k.i_scaled(1, b, 1).unwrap();
                let reduced = a.powi(4) * b * j1p * i1 + a * b.powi(4) * i1p * j1;
                let w = determinant(&k, 0, tau, a).unwrap();
                assert!((w - reduced).abs() <= 1e-13 * reduced.abs().max(w.abs()), "d={d}");
            }
        }
    }

    #[test]
    fn scaled_and_unscaled_determinants_agree() {
        for d in [2, 3, 5] {
            let k = kernel(d);
            for l in 0..4 {
                for (a, tau) in [(0.7, 1.0), (2.2, 10.0), (4.1, 30.0)] {
                    let b = f64::sqrt(a * a + tau);
                    let s = determinant(&k, l, tau, a).unwrap();
                    let u = determinant_unscaled(&k, l, tau, a).unwrap();
                    let (t1, t2) = determinant_terms(&k, l, tau, a).unwrap();
                    let scale = (t1.abs() + t2.abs()) * b.exp();
                    assert!((s * b.exp() - u).abs() <= 1e-12 * scale, "d={d} l={l} a={a}");
                }
            }
        }
    }

    #[test]
    fn large_tension_stays_finite() {
        let k = kernel(3);
        let w = determinant(&k, 1, 1e6, 1.0).unwrap();
        assert!(w.is_finite());
        let problem = PlateProblem::new(2, 1e4, 1.0).unwrap();
        let f = fundamental(&problem).unwrap();
        assert!(f.omega.is_finite() && f.gamma_scaled.is_finite());
    }

    #[test]
    fn rescale_identity_and_mismatch() {
        let problem = PlateProblem::new(2, 1.0, 1.0).unwrap();
        let f = fundamental(&problem).unwrap();
        assert_eq!(rescale(&f, &problem).unwrap(), f);
        let other = PlateProblem::new(2, 2.0, 1.0).unwrap();
        assert!(rescale(&f, &other).is_err());
    }
}
