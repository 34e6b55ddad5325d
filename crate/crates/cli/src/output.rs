//! Output envelope, payloads and their CSV forms.

use freeplate::bessel::SeriesPolicy;
use freeplate::modes::ModeGrid;
use freeplate::spectrum::{FundamentalChecks, Mode, ModeParams, SpectrumTable, ROOT_TOL};
use freeplate::verify::{
    Gates, LemmaReport, LemmaVerdict, ResidualReport, DEFAULT_RULE_ORDER, REFINEMENT_TOL,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: String,
    pub command: CommandEcho,
    pub problem: ProblemEcho,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemEcho {
    pub dim: u32,
    pub tau: Option<f64>,
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub root_tol: f64,
    pub series_rel_tol: f64,
    pub quadrature_order: usize,
    pub refinement_tol: f64,
    pub gates: Gates,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root_tol: ROOT_TOL,
            series_rel_tol: SeriesPolicy::default().rel_tol,
            quadrature_order: DEFAULT_RULE_ORDER,
            refinement_tol: REFINEMENT_TOL,
            gates: Gates::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Spectrum(SpectrumPayload),
    Fundamental(FundamentalPayload),
    ModeGrid(GridPayload),
    ModeReport(ReportPayload),
    Lemmas(LemmaPayload),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub omega: f64,
    pub l: u32,
    pub multiplicity: u64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_scaled: Option<f64>,
    pub w_residual: f64,
}

impl SpectrumRow {
    pub fn new(index: usize, omega: f64, l: u32, multiplicity: u64, mode: &Mode, w_residual: f64) -> Self {
        let p = mode.params();
        Self {
            index,
            omega,
            l,
            multiplicity,
            a: p.map(|p| p.a),
            b: p.map(|p| p.b),
            gamma: p.map(|p| p.gamma),
            gamma_scaled: p.map(|p| p.gamma_scaled),
            w_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPayload {
    pub l_max: u32,
    pub count: usize,
    pub scan_ceiling: f64,
    pub scan_step: f64,
    pub complete_below: f64,
    pub ceiling_clamped: bool,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumPayload {
    pub fn new(table: &SpectrumTable) -> Self {
        Self {
            l_max: table.l_max,
            count: table.entries.len(),
            scan_ceiling: table.scan.a_max,
            scan_step: table.scan.step,
            complete_below: table.complete_below,
            ceiling_clamped: table.ceiling_clamped,
            rows: table
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| SpectrumRow::new(i, e.omega, e.l, e.multiplicity, &e.mode, e.w_residual))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub l: u32,
    pub clear: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalPayload {
    pub l: u32,
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub gamma_scaled: f64,
    pub first_l1_root: f64,
    pub p11: f64,
    pub l0_clear: bool,
    pub higher_orders: Vec<OrderCheck>,
    pub checks_pass: bool,
}

impl FundamentalPayload {
    pub fn new(f: &ModeParams, checks: &FundamentalChecks) -> Self {
        Self {
            l: f.l(),
            omega: f.omega,
            a: f.a,
            b: f.b,
            gamma: f.gamma,
            gamma_scaled: f.gamma_scaled,
            first_l1_root: checks.first_l1_root,
            p11: checks.p11,
            l0_clear: checks.l0_clear,
            higher_orders: checks
                .higher_orders_clear
                .iter()
                .map(|&(l, clear)| OrderCheck { l, clear })
                .collect(),
            checks_pass: checks.all_pass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPayload {
    pub index: usize,
    pub l: u32,
    pub omega: f64,
    pub variant: String,
    pub normalization: f64,
    pub radii: Vec<f64>,
    pub thetas: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl GridPayload {
    pub fn new(index: usize, variant: String, grid: &ModeGrid) -> Self {
        Self {
            index,
            l: grid.mode.l(),
            omega: grid.mode.omega(),
            variant,
            normalization: grid.factor.normalization,
            radii: grid.radii.clone(),
            thetas: grid.angles.iter().map(|p| p.theta).collect(),
            values: grid.values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub index: usize,
    pub l: u32,
    pub omega: f64,
    pub report: ResidualReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaPayload {
    pub p11: f64,
    pub all_pass: bool,
    pub verdicts: Vec<LemmaVerdict>,
}

impl LemmaPayload {
    pub fn new(rep: &LemmaReport) -> Self {
        Self {
            p11: rep.p11,
            all_pass: rep.all_pass(),
            verdicts: rep.verdicts.clone(),
        }
    }
}

/// 17 significant digits, `.` as decimal separator.
fn num(x: f64) -> String {
    // no "-0" in the output
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn to_csv(payload: &Payload, g: &Gates) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(vec![]);
    match payload {
        Payload::Spectrum(p) => {
            w.write_record(["index", "omega", "l", "multiplicity", "a", "b", "gamma", "w_residual"])?;
            for r in &p.rows {
                w.write_record([
                    r.index.to_string(),
                    num(r.omega),
                    r.l.to_string(),
                    r.multiplicity.to_string(),
                    opt(r.a),
                    opt(r.b),
                    opt(r.gamma),
                    num(r.w_residual),
                ])?;
            }
        }
        Payload::Fundamental(p) => {
            w.write_record(["omega", "l", "a", "b", "gamma", "gamma_scaled", "p11", "checks_pass"])?;
            w.write_record([
                num(p.omega),
                p.l.to_string(),
                num(p.a),
                num(p.b),
                num(p.gamma),
                num(p.gamma_scaled),
                num(p.p11),
                p.checks_pass.to_string(),
            ])?;
        }
        Payload::ModeGrid(p) => {
            w.write_record(["r", "theta", "u"])?;
            for (r, row) in p.radii.iter().zip(&p.values) {
                for (t, u) in p.thetas.iter().zip(row) {
                    w.write_record([num(*r), num(*t), num(*u)])?;
                }
            }
        }
        Payload::ModeReport(p) => {
            w.write_record(["check", "value", "gate", "passed"])?;
            let rows = [
                ("m_residual", p.report.m_residual, g.boundary),
                ("v_residual", p.report.v_residual, g.boundary),
                ("pde_residual", p.report.pde_residual, g.pde),
                ("rayleigh_gap", p.report.rayleigh_gap, g.rayleigh),
            ];
            for (name, value, gate) in rows {
                w.write_record([name.to_string(), num(value), num(gate), (value <= gate).to_string()])?;
            }
        }
        Payload::Lemmas(p) => {
            w.write_record(["name", "passed", "worst_margin", "worst_at", "samples"])?;
            for v in &p.verdicts {
                w.write_record([
                    v.name.clone(),
                    v.passed.to_string(),
                    num(v.worst_margin),
                    num(v.worst_at),
                    v.samples.to_string(),
                ])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
