//! Checks of computed modes that do not go through the determinant.
//!
//! The Rayleigh quotient is integrated directly from the radial profile,
//! the boundary conditions are evaluated in their operator form, and the
//! plate equation is applied to the profile with series derivatives.

pub mod lemmas;

pub use lemmas::{lemma_suite, LemmaReport, LemmaVerdict};

use crate::bessel::{DimensionContext, Kernel};
use crate::error::{domain, PlateError, Result};
use crate::modes::{radial_profile, RadialFunction};
use crate::quadrature::QuadratureRule;
use crate::spectrum::{Mode, ModeParams, PlateProblem};
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

/// Nodes of the default radial rule.
pub const DEFAULT_RULE_ORDER: usize = 64;

/// Largest relative change allowed when the rule order doubles.
pub const REFINEMENT_TOL: f64 = 1e-6;

/// Below `r = SMALL_R * R` the numerator integrand switches to the form
/// written in `R/r` and its derivative, which has no `1/r⁴` cancellation.
pub const SMALL_R: f64 = 0.05;

/// Inner edge of the PDE residual grid, as a fraction of `R`.
pub const PDE_INNER: f64 = 0.05;

/// Relative floor in the PDE residual denominator, as a fraction of `sup |R|`.
pub const PDE_FLOOR: f64 = 1e-3;

/// Pass thresholds for a [`ResidualReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gates {
    pub boundary: f64,
    pub pde: f64,
    pub rayleigh: f64,
}

impl Default for Gates {
    fn default() -> Self {
        Self {
            boundary: 1e-8,
            pde: 1e-8,
            rayleigh: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub m_residual: f64,
    pub v_residual: f64,
    pub pde_residual: f64,
    pub rayleigh_gap: f64,
}

impl ResidualReport {
    pub fn passes(&self, gates: &Gates) -> bool {
        let finite = [self.m_residual, self.v_residual, self.pde_residual, self.rayleigh_gap]
            .iter()
            .all(|x| x.is_finite() && *x >= 0.0);
        finite
            && self.m_residual <= gates.boundary
            && self.v_residual <= gates.boundary
            && self.pde_residual <= gates.pde
            && self.rayleigh_gap <= gates.rayleigh
    }
}

fn numerator_integrand(f: &dyn RadialFunction, d: u32, l: u32, tau: f64, r: f64) -> Result<f64> {
    let df = d as f64;
    let k = (l as f64) * (l as f64 + df - 2.0);
    let r0 = f.value(r, 0)?;
    let r1 = f.value(r, 1)?;
    let r2 = f.value(r, 2)?;
    let body = if l == 0 {
        r2 * r2 + (df - 1.0) * r1 * r1 / (r * r) + tau * r1 * r1
    } else if r >= SMALL_R * f.radius() {
        let r4 = (r * r) * (r * r);
        let sq = r * r1 - 1.5 * r0;
        2.0 * k / r4 * sq * sq
            + k * (k - df - 0.5) / r4 * r0 * r0
            + tau * k * r0 * r0 / (r * r)
            + r2 * r2
            + (df - 1.0) / (r * r) * r1 * r1
            + tau * r1 * r1
    } else {
        let h = r0 / r;
        let hp = f.reduced_slope(r)?;
        let c = k - df + 1.0;
        r2 * r2 + c * (k - 1.0) * h * h / (r * r) - 2.0 * c * h * hp / r
            + (2.0 * k + df - 1.0) * hp * hp
            + tau * (r1 * r1 + k * h * h)
    };
    Ok(body * r.powi(d as i32 - 1))
}

/// `∫ body` with `rule` and with twice its order; errors when they disagree.
fn guarded<F>(rule: &QuadratureRule, hi: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let coarse = rule.integrate(0.0, hi, &f)?;
    let fine_rule = QuadratureRule::gauss_legendre(2 * rule.order())?;
    let fine = fine_rule.integrate(0.0, hi, &f)?;
    let scale = fine.abs().max(coarse.abs());
    if !fine.is_finite() || (scale > 0.0 && (fine - coarse).abs() > REFINEMENT_TOL * scale) {
        return Err(PlateError::Convergence {
            order: rule.order(),
            coarse,
            fine_order: fine_rule.order(),
            fine,
        });
    }
    Ok(fine)
}

/// Numerator of the Rayleigh quotient of `R(r) Y_l` over the ball, with
/// all dependence on `l` carried by `k = l(l+d-2)`.
pub fn rayleigh_numerator(
    profile: &dyn RadialFunction,
    ctx: &DimensionContext,
    l: u32,
    tau: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let d = ctx.dim();
    guarded(rule, profile.radius(), |r| numerator_integrand(profile, d, l, tau, r))
}

/// `∫ R² r^{d-1} dr`.
pub fn radial_mass(profile: &dyn RadialFunction, ctx: &DimensionContext, rule: &QuadratureRule) -> Result<f64> {
    let d = ctx.dim() as i32;
    guarded(rule, profile.radius(), |r| {
        let v = profile.value(r, 0)?;
        Ok(v * v * r.powi(d - 1))
    })
}

/// Rayleigh quotient of a mode on `B(R)`, integrated from its profile.
pub fn rayleigh_quotient(mode: &Mode, problem: &PlateProblem, rule: &QuadratureRule) -> Result<f64> {
    check_mode(mode, problem)?;
    if let Mode::Constant { .. } = mode {
        return Ok(0.0);
    }
    let profile = radial_profile(mode, problem.radius)?;
    let n = rayleigh_numerator(&profile, &problem.dim, mode.l(), problem.tau, rule)?;
    let m = radial_mass(&profile, &problem.dim, rule)?;
    Ok(n / m)
}

/// `N[R Y_l]` for each `l` in `ls`.
pub fn numerator_monotonicity(
    profile: &dyn RadialFunction,
    ctx: &DimensionContext,
    tau: f64,
    ls: RangeInclusive<u32>,
    rule: &QuadratureRule,
) -> Result<Vec<(u32, f64)>> {
    ls.map(|l| Ok((l, rayleigh_numerator(profile, ctx, l, tau, rule)?)))
        .collect()
}

pub fn strictly_increasing(values: &[(u32, f64)]) -> bool {
    values.windows(2).all(|w| w[0].1 < w[1].1)
}

fn rel_to_max(sum: f64, terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        0.0
    } else {
        sum.abs() / scale
    }
}

/// `(m_residual, v_residual)` of a Bessel mode, from the unit-ball parameters.
///
/// The third-order condition uses `Δ j_l(ar)Y = -a² j_l Y` and
/// `Δ i_l(br)Y = b² i_l Y` in place of third derivatives.
pub fn boundary_residuals(params: &ModeParams) -> Result<(f64, f64)> {
    let kernel = Kernel::new(params.dim);
    let l = params.l();
    let k = params.order.k();
    let (a, b) = (params.a, params.b);
    let g = params.gamma_scaled;
    let tau = params.unit_tension();

    let j0 = kernel.j(l, a)?;
    let j1 = kernel.j_deriv(l, a, 1)?;
    let j2 = kernel.j_deriv(l, a, 2)?;
    let i0 = g * kernel.i_scaled(l, b, 0)?;
    let i1 = g * kernel.i_scaled(l, b, 1)?;
    let i2 = g * kernel.i_scaled(l, b, 2)?;

    let m_terms = [a * a * j2, b * b * i2];
    let m_res = rel_to_max(m_terms[0] + m_terms[1], &m_terms);

    let v_terms = [
        tau * a * j1,
        k * a * j1,
        -k * j0,
        a * a * a * j1,
        tau * b * i1,
        k * b * i1,
        -k * i0,
        -b * b * b * i1,
    ];
    let v_res = rel_to_max(v_terms.iter().sum(), &v_terms);
    Ok((m_res, v_res))
}

/// `Δ_rad² R - τ Δ_rad R - ωR` at `r` from derivatives `R, ..., R''''`.
fn plate_operator(d: f64, k: f64, tau: f64, omega: f64, r: f64, v: [f64; 5]) -> f64 {
    let [r0, r1, r2, r3, r4] = v;
    let (r_2, r_3, r_4) = (r * r, r * r * r, r * r * r * r);
    let g = r2 + (d - 1.0) * r1 / r - k * r0 / r_2;
    let g1 = r3 + (d - 1.0) * (r2 / r - r1 / r_2) - k * (r1 / r_2 - 2.0 * r0 / r_3);
    let g2 = r4 + (d - 1.0) * (r3 / r - 2.0 * r2 / r_2 + 2.0 * r1 / r_3)
        - k * (r2 / r_2 - 4.0 * r1 / r_3 + 6.0 * r0 / r_4);
    let lg = g2 + (d - 1.0) * g1 / r - k * g / r_2;
    lg - tau * g - omega * r0
}

/// `PDE_INNER R ..= R` in `n` uniform steps.
pub fn pde_grid(radius: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| radius * (PDE_INNER + (1.0 - PDE_INNER) * i as f64 / (n - 1) as f64))
        .collect()
}

/// `sup |Δ_rad² R - τ Δ_rad R - ωR| / (ω (|R| + PDE_FLOOR sup|R|))` over `radii`.
pub fn pde_residual(mode: &Mode, problem: &PlateProblem, radii: &[f64]) -> Result<f64> {
    check_mode(mode, problem)?;
    let omega = mode.omega();
    if let Mode::Constant { .. } = mode {
        return Ok(0.0);
    }
    if radii.iter().any(|&r| !(r > 0.0 && r <= problem.radius)) {
        return Err(domain("PDE grid must lie in (0, R]"));
    }
    let profile = radial_profile(mode, problem.radius)?;
    let d = problem.dim.dim() as f64;
    let k = problem.dim.separation(mode.l()) as f64;

    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut v = [0.0; 5];
        for (m, slot) in v.iter_mut().enumerate() {
            *slot = profile.value(r, m as u32)?;
        }
        rows.push((v[0], plate_operator(d, k, problem.tau, omega, r, v)));
    }
    let sup = rows.iter().fold(0.0f64, |m, (v, _)| m.max(v.abs()));
    Ok(rows
        .iter()
        .map(|(v, res)| res.abs() / (omega * (v.abs() + PDE_FLOOR * sup)))
        .fold(0.0, f64::max))
}

fn check_mode(mode: &Mode, problem: &PlateProblem) -> Result<()> {
    if mode.dim() != problem.dim {
        return Err(domain("mode and problem have different dimensions"));
    }
    if let Mode::Bessel(p) = mode {
        let want = problem.unit_tension();
        if (p.unit_tension() - want).abs() > 1e-9 * want {
            return Err(domain(format!(
                "mode solves tension {}, problem has {}",
                p.unit_tension(),
                want
            )));
        }
    }
    Ok(())
}

/// Every check on one mode of `problem`.
pub fn verify_mode(mode: &Mode, problem: &PlateProblem) -> Result<ResidualReport> {
    let rule = QuadratureRule::gauss_legendre(DEFAULT_RULE_ORDER)?;
    let (m_residual, v_residual) = match mode {
        Mode::Constant { .. } => (0.0, 0.0),
        Mode::Bessel(p) => boundary_residuals(p)?,
    };
    let pde_residual = pde_residual(mode, problem, &pde_grid(problem.radius, 200))?;
    let q = rayleigh_quotient(mode, problem, &rule)?;
    let omega = mode.omega();
    let rayleigh_gap = if omega == 0.0 {
        q.abs()
    } else {
        (q - omega).abs() / omega
    };
    Ok(ResidualReport {
        m_residual,
        v_residual,
        pde_residual,
        rayleigh_gap,
    })
}
