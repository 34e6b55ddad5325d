//! `freeplate`: spectra, fundamental tones, mode grids and verification
//! reports for free plates under tension on d-dimensional balls.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error, 3 a
//! verification gate failed.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freeplate::bessel::DimensionContext;
use freeplate::modes::{sample_mode, GridSpec, Variant};
use freeplate::spectrum::{eigenvalues, fundamental_checked, PlateProblem, SpectrumTable};
use freeplate::verify::{lemma_suite, verify_mode, Gates};
use output::{
    CommandEcho, Envelope, FundamentalPayload, GridPayload, LemmaPayload, Payload, ProblemEcho,
    ReportPayload, SpectrumPayload, Tolerances, SCHEMA_VERSION,
};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "freeplate", version, about = "Free plate eigenvalues on d-dimensional balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues over orders 0..=lmax.
    Spectrum {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 6)]
        lmax: u32,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fundamental tone with its cross-checks.
    Fundamental {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample one mode on a polar grid.
    ModeGrid {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 6)]
        lmax: u32,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        nr: u64,
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(2..))]
        ntheta: u64,
        /// cos, sin or zonal; an integer selects the azimuthal order in d = 3.
        #[arg(long, default_value = "zonal", value_parser = parse_variant, allow_hyphen_values = true)]
        variant: Variant,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residual report for one mode, or the sign and bound checks.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        dim: u32,
        #[arg(long, value_parser = parse_tension, allow_hyphen_values = true, required_unless_present = "lemmas")]
        tau: Option<f64>,
        #[arg(long, default_value_t = 1.0, value_parser = parse_positive, allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, conflicts_with = "lemmas", required_unless_present = "lemmas")]
        index: Option<usize>,
        #[arg(long, default_value_t = 6)]
        lmax: u32,
        #[arg(long)]
        lemmas: bool,
        /// Gate on the boundary residuals.
        #[arg(long, default_value_t = Gates::default().boundary, value_parser = parse_positive)]
        gate_boundary: f64,
        /// Gate on the PDE residual.
        #[arg(long, default_value_t = Gates::default().pde, value_parser = parse_positive)]
        gate_pde: f64,
        /// Gate on the relative Rayleigh quotient gap.
        #[arg(long, default_value_t = Gates::default().rayleigh, value_parser = parse_positive)]
        gate_rayleigh: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct ProblemArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    dim: u32,
    #[arg(long, value_parser = parse_tension, allow_hyphen_values = true)]
    tau: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive, allow_hyphen_values = true)]
    radius: f64,
}

#[derive(Args, Clone, Copy)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long)]
    reproducible: bool,
    /// Worker threads for the root scans.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn parse_tension(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(format!("tension must satisfy tau > 0 (got {s}); compression and tau = 0 are not supported"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(format!("value must be positive (got {s})"))
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "cos" => Ok(Variant::Cos),
        "sin" => Ok(Variant::Sin),
        "zonal" => Ok(Variant::Zonal),
        _ => s
            .parse::<i32>()
            .map(Variant::Order)
            .map_err(|_| format!("expected cos, sin, zonal or an integer order, got {s}")),
    }
}

fn variant_name(v: Variant) -> String {
    match v {
        Variant::Cos => "cos".into(),
        Variant::Sin => "sin".into(),
        Variant::Zonal => "zonal".into(),
        Variant::Order(m) => m.to_string(),
    }
}

/// A computation error, reported with exit code 1.
struct Failure(String);

impl From<freeplate::PlateError> for Failure {
    fn from(e: freeplate::PlateError) -> Self {
        Failure(e.to_string())
    }
}

fn problem(args: &ProblemArgs) -> Result<PlateProblem, Failure> {
    Ok(PlateProblem::new(args.dim, args.tau, args.radius)?)
}

fn table_with(problem: &PlateProblem, l_max: u32, index: usize) -> Result<SpectrumTable, Failure> {
    eigenvalues(problem, l_max, index + 1).map_err(|e| {
        Failure(format!("index {index} is out of range for lmax = {l_max}: {e}"))
    })
}

struct Run {
    name: &'static str,
    echo: ProblemEcho,
    gates: Gates,
    out: OutputArgs,
    payload: Payload,
    gate_failure: Option<String>,
}

fn execute(cmd: &Command) -> Result<Run, Failure> {
    let echo = |p: &ProblemArgs| ProblemEcho {
        dim: p.dim,
        tau: Some(p.tau),
        radius: Some(p.radius),
    };
    let run = match cmd {
        Command::Spectrum { problem: p, lmax, count, out } => {
            let table = eigenvalues(&problem(p)?, *lmax, *count as usize)?;
            Run {
                name: "spectrum",
                echo: echo(p),
                gates: Gates::default(),
                out: *out,
                payload: Payload::Spectrum(SpectrumPayload::new(&table)),
                gate_failure: None,
            }
        }
        Command::Fundamental { problem: p, out } => {
            let (f, checks) = fundamental_checked(&problem(p)?)?;
            Run {
                name: "fundamental",
                echo: echo(p),
                gates: Gates::default(),
                out: *out,
                payload: Payload::Fundamental(FundamentalPayload::new(&f, &checks)),
                gate_failure: None,
            }
        }
        Command::ModeGrid { problem: p, index, lmax, nr, ntheta, variant, out } => {
            let pr = problem(p)?;
            let table = table_with(&pr, *lmax, *index)?;
            let mode = table.entries[*index].mode;
            let spec = GridSpec {
                nr: *nr as usize,
                ntheta: *ntheta as usize,
                variant: *variant,
            };
            let grid = sample_mode(&mode, pr.radius, &spec)?;
            Run {
                name: "mode-grid",
                echo: echo(p),
                gates: Gates::default(),
                out: *out,
                payload: Payload::ModeGrid(GridPayload::new(*index, variant_name(*variant), &grid)),
                gate_failure: None,
            }
        }
        Command::Verify {
            dim,
            tau,
            radius,
            index,
            lmax,
            lemmas,
            gate_boundary,
            gate_pde,
            gate_rayleigh,
            out,
        } => {
            let gates = Gates {
                boundary: *gate_boundary,
                pde: *gate_pde,
                rayleigh: *gate_rayleigh,
            };
            if *lemmas {
                let rep = lemma_suite(&DimensionContext::new(*dim)?)?;
                let failed: Vec<&str> = rep.failures().map(|v| v.name.as_str()).collect();
                Run {
                    name: "verify",
                    echo: ProblemEcho {
                        dim: *dim,
                        tau: *tau,
                        radius: None,
                    },
                    gates,
                    out: *out,
                    payload: Payload::Lemmas(LemmaPayload::new(&rep)),
                    gate_failure: (!failed.is_empty()).then(|| failed.join("; ")),
                }
            } else {
                let (tau, index) = (tau.expect("clap requires tau"), index.expect("clap requires index"));
                let args = ProblemArgs { dim: *dim, tau, radius: *radius };
                let pr = problem(&args)?;
                let table = table_with(&pr, *lmax, index)?;
                let entry = &table.entries[index];
                let report = verify_mode(&entry.mode, &pr)?;
                let passed = report.passes(&gates);
                Run {
                    name: "verify",
                    echo: echo(&args),
                    gates,
                    out: *out,
                    payload: Payload::ModeReport(ReportPayload {
                        index,
                        l: entry.l,
                        omega: entry.omega,
                        report,
                        passed,
                    }),
                    gate_failure: (!passed).then(|| format!("mode {index} exceeds a residual gate")),
                }
            }
        }
    };
    Ok(run)
}

fn out_args(cmd: &Command) -> OutputArgs {
    match cmd {
        Command::Spectrum { out, .. }
        | Command::Fundamental { out, .. }
        | Command::ModeGrid { out, .. }
        | Command::Verify { out, .. } => *out,
    }
}

fn timestamp() -> Option<String> {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .ok()
}

fn render(run: Run, args: Vec<String>) -> Result<String, Failure> {
    let text = match run.out.format {
        Format::Csv => output::to_csv(&run.payload, &run.gates).map_err(|e| Failure(e.to_string()))?,
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION.into(),
                command: CommandEcho {
                    name: run.name.into(),
                    args,
                },
                problem: run.echo,
                tolerances: Tolerances {
                    gates: run.gates,
                    ..Tolerances::default()
                },
                generated_at: if run.out.reproducible { None } else { timestamp() },
                payload: run.payload,
            };
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| Failure(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    Ok(text)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let out = out_args(&cli.command);
    if let Some(n) = out.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }

    let result = execute(&cli.command).and_then(|run| {
        let gate = run.gate_failure.clone();
        render(run, argv[1..].to_vec()).map(|text| (text, gate))
    });
    match result {
        Ok((text, gate)) => {
            print!("{text}");
            match gate {
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
