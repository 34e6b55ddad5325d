//! Grid checks of the sign and bound facts behind the fundamental-mode
//! argument.
//!
//! Each strict inequality `f > 0` is reported through the margin `f / g`,
//! where `g > 0` is the matching modified-Bessel quantity. A check passes
//! when its worst margin exceeds [`STRICT_MARGIN`]. The polynomial bounds
//! on `j_1''` and `i_1''` hold with equality at `z = 0` and are checked
//! non-strictly, up to [`ROUNDING_SLACK`].

use crate::bessel::{p11, pl1_bracket, series_coeffs, DimensionContext, Kernel, MAX_DERIVATIVE};
use crate::error::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const GRID_POINTS: usize = 1000;
pub const STRICT_MARGIN: f64 = 1e-12;
pub const ROUNDING_SLACK: f64 = 1e-14;
pub const W0_TENSIONS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
/// Orders checked for positivity and for domination.
pub const MAX_ORDER: u32 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub name: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub worst_at: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub dim: DimensionContext,
    pub p11: f64,
    pub verdicts: Vec<LemmaVerdict>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

/// `GRID_POINTS` points in `(0, hi]`, or in `(0, hi)` when `open`.
fn grid(hi: f64, open: bool) -> Vec<f64> {
    let denom = if open { GRID_POINTS + 1 } else { GRID_POINTS } as f64;
    (1..=GRID_POINTS).map(|i| hi * i as f64 / denom).collect()
}

fn worst<F>(name: String, zs: &[f64], threshold: f64, margin: F) -> Result<LemmaVerdict>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut worst_margin = f64::INFINITY;
    let mut worst_at = f64::NAN;
    for &z in zs {
        let m = margin(z)?;
        if !(m >= worst_margin) {
            worst_margin = m;
            worst_at = z;
        }
    }
    Ok(LemmaVerdict {
        name,
        passed: worst_margin > threshold,
        worst_margin,
        worst_at,
        samples: zs.len(),
    })
}

#[derive(Debug, Clone, Copy)]
enum Check {
    Positive(u32),
    SlopeL1,
    SlopeL2,
    CurvatureL1,
    FourthL1,
    Domination,
    JBound,
    IBound,
    RatiosDecreasing,
    P11Bracket,
    OrderBracket(u32),
    W0Positive(f64),
    W1SignChange(f64),
}

/// `e^{-b}` times the free-boundary determinant built from the two
/// boundary operators.
fn boundary_determinant(kernel: &Kernel, l: u32, tau: f64, a: f64) -> Result<(f64, f64)> {
    let b = (a * a + tau).sqrt();
    let k = kernel.ctx().separation(l) as f64;
    let (j0, j1, j2) = (kernel.j(l, a)?, kernel.j_deriv(l, a, 1)?, kernel.j_deriv(l, a, 2)?);
    let (i0, i1, i2) = (
        kernel.i_scaled(l, b, 0)?,
        kernel.i_scaled(l, b, 1)?,
        kernel.i_scaled(l, b, 2)?,
    );
    let vj = tau * a * j1 + k * (a * j1 - j0) + a * a * a * j1;
    let vi = tau * b * i1 + k * (b * i1 - i0) - b * b * b * i1;
    let first = a * a * j2 * vi;
    let second = b * b * i2 * vj;
    Ok((first - second, first.abs() + second.abs()))
}

fn run(check: Check, kernel: &Kernel, p: f64) -> Result<Vec<LemmaVerdict>> {
    let k = kernel;
    let ctx = *k.ctx();
    let d = ctx.dim() as f64;
    let closed = grid(p, false);
    let open = grid(p, true);
    let v = match check {
        Check::Positive(l) => worst(format!("j_{l} > 0 on (0, p11]"), &closed, STRICT_MARGIN, |z| {
            Ok(k.j(l, z)? / k.i(l, z)?)
        })?,
        Check::SlopeL1 => worst("j_1' > 0 on (0, p11)".into(), &open, STRICT_MARGIN, |z| {
            Ok(k.j_deriv(1, z, 1)? / k.i_deriv(1, z, 1)?)
        })?,
        Check::SlopeL2 => worst("j_2' > 0 on (0, p11]".into(), &closed, STRICT_MARGIN, |z| {
            Ok(k.j_deriv(2, z, 1)? / k.i_deriv(2, z, 1)?)
        })?,
        Check::CurvatureL1 => worst("j_1'' < 0 on (0, p11]".into(), &closed, STRICT_MARGIN, |z| {
            Ok(-k.j_deriv(1, z, 2)? / k.i_deriv(1, z, 2)?)
        })?,
        Check::FourthL1 => worst("j_1'''' > 0 on (0, p11]".into(), &closed, STRICT_MARGIN, |z| {
            Ok(k.j_deriv(1, z, 4)? / k.i_deriv(1, z, 4)?)
        })?,
        Check::Domination => {
            let zs = grid(2.0 * p, false);
            return (0..=MAX_ORDER)
                .flat_map(|l| (0..=MAX_DERIVATIVE).map(move |m| (l, m)))
                .map(|(l, m)| {
                    worst(
                        format!("|j_{l}^({m})| < i_{l}^({m}) on (0, 2 p11]"),
                        &zs,
                        0.0,
                        |z| Ok(1.0 - k.j_deriv(l, z, m)?.abs() / k.i_deriv(l, z, m)?),
                    )
                })
                .collect();
        }
        Check::JBound | Check::IBound => {
            let s = series_coeffs(&ctx, 3)?;
            let (d1, d2) = (s.d[0], s.d[1]);
            if let Check::JBound = check {
                let hi = (3.0 * (d + 2.0) / (d + 5.0)).sqrt();
                worst(
                    "j_1''(z) <= -d_1 z + d_2 z^3 on [0, sqrt(3(d+2)/(d+5))]".into(),
                    &grid(hi, false),
                    -ROUNDING_SLACK,
                    |z| {
                        let bound = -d1 * z + d2 * z * z * z;
                        let scale = d1 * z + d2 * z * z * z;
                        Ok((bound - k.j_deriv(1, z, 2)?) / scale)
                    },
                )?
            } else {
                worst(
                    "i_1''(z) <= d_1 z + (6/5) d_2 z^3 on [0, sqrt(3)]".into(),
                    &grid(3f64.sqrt(), false),
                    -ROUNDING_SLACK,
                    |z| {
                        let bound = d1 * z + 1.2 * d2 * z * z * z;
                        Ok((bound - k.i_deriv(1, z, 2)?) / bound)
                    },
                )?
            }
        }
        Check::RatiosDecreasing => {
            let s = series_coeffs(&ctx, 40)?;
            let gaps: Vec<f64> = s.c.windows(2).map(|w| (w[0] - w[1]) / w[0]).collect();
            let (mut worst_margin, mut worst_at) = (f64::INFINITY, 0.0);
            for (idx, &g) in gaps.iter().enumerate() {
                if g < worst_margin {
                    worst_margin = g;
                    worst_at = idx as f64 + 1.0;
                }
            }
            LemmaVerdict {
                name: "c_k strictly decreasing, k = 1..39".into(),
                passed: worst_margin > STRICT_MARGIN,
                worst_margin,
                worst_at,
                samples: gaps.len(),
            }
        }
        Check::P11Bracket => {
            let p2 = p * p;
            let margin = (p2 - d).min(d + 2.0 - p2);
            LemmaVerdict {
                name: "d < p11^2 < d + 2".into(),
                passed: margin > STRICT_MARGIN,
                worst_margin: margin,
                worst_at: p,
                samples: 1,
            }
        }
        Check::OrderBracket(l) => {
            let (lo, hi) = pl1_bracket(&ctx, l)?;
            let before = worst(String::new(), &grid(lo, false), STRICT_MARGIN, |z| {
                Ok(k.j_deriv(l, z, 1)? / k.i_deriv(l, z, 1)?)
            })?;
            let after = -k.j_deriv(l, hi, 1)? / k.i_deriv(l, hi, 1)?;
            let (worst_margin, worst_at) = if after < before.worst_margin {
                (after, hi)
            } else {
                (before.worst_margin, before.worst_at)
            };
            LemmaVerdict {
                name: format!("first zero of j_{l}' inside its zero bracket"),
                passed: worst_margin > STRICT_MARGIN,
                worst_margin,
                worst_at,
                samples: before.samples + 1,
            }
        }
        Check::W0Positive(tau) => worst(
            format!("W_0 > 0 on (0, p11), tau = {tau}"),
            &open,
            STRICT_MARGIN,
            |a| {
                let (w, scale) = boundary_determinant(k, 0, tau, a)?;
                Ok(w / scale)
            },
        )?,
        Check::W1SignChange(tau) => {
            let (lo, lo_scale) = boundary_determinant(k, 1, tau, p / GRID_POINTS as f64)?;
            let (hi, hi_scale) = boundary_determinant(k, 1, tau, p)?;
            let (m_lo, m_hi) = (-lo / lo_scale, hi / hi_scale);
            LemmaVerdict {
                name: format!("W_1 < 0 near 0 and W_1(p11) > 0, tau = {tau}"),
                passed: m_lo > STRICT_MARGIN && m_hi > STRICT_MARGIN,
                worst_margin: m_lo.min(m_hi),
                worst_at: if m_lo < m_hi { p / GRID_POINTS as f64 } else { p },
                samples: 2,
            }
        }
    };
    Ok(vec![v])
}

/// Runs every check for one dimension. Failures are reported, not raised.
pub fn lemma_suite(ctx: &DimensionContext) -> Result<LemmaReport> {
    let kernel = Kernel::new(*ctx);
    let p = p11(ctx)?;
    let mut checks: Vec<Check> = (1..=MAX_ORDER).map(Check::Positive).collect();
    checks.extend([
        Check::SlopeL1,
        Check::SlopeL2,
        Check::CurvatureL1,
        Check::FourthL1,
        Check::Domination,
        Check::JBound,
        Check::IBound,
        Check::RatiosDecreasing,
        Check::P11Bracket,
    ]);
    if ctx.dim() >= 3 {
        checks.extend((1..=3).map(Check::OrderBracket));
    } else {
        checks.push(Check::OrderBracket(1));
    }
    checks.extend(W0_TENSIONS.map(Check::W0Positive));
    checks.extend(W0_TENSIONS.map(Check::W1SignChange));

    let verdicts: Vec<Vec<LemmaVerdict>> = checks
        .par_iter()
        .map(|&c| run(c, &kernel, p))
        .collect::<Result<_>>()?;
    Ok(LemmaReport {
        dim: *ctx,
        p11: p,
        verdicts: verdicts.into_iter().flatten().collect(),
    })
}
