//! `qtradeoff`: error trade-off analysis for two-parameter unitary models.
//!
//! Subcommands either analyze a model file (JSON with `rho0`, `X`, `Y`
//! matrices) or evaluate the built-in one-parameter qutrit family, emitting
//! JSON reports or CSV curves. All output is deterministic: fixed float
//! formatting (17 significant digits), no timestamps, and a seeded,
//! counter-based survey generator.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain or model error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use qtradeoff_core::closed_forms::{
    f_zeta, family_fisher_quantities, family_fisher_quantities_raw, root_u0, FamilyParams,
};
use qtradeoff_core::qfi::{Classification, UnitaryModel};
use qtradeoff_core::sampler::{run_survey, SampleConfig, CSV_HEADER};
use qtradeoff_core::Error as CoreError;
use serde_json::json;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Bisection tolerance used for every root evaluation the CLI performs.
const ROOT_TOL: f64 = 1e-14;

/// Grid cells where the hyperbola denominator `V11 - J_R^{11}` falls below
/// this are emitted empty rather than as spurious huge values.
const HYPERBOLA_DENOM_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "qtradeoff",
    version,
    about = "Decide whether a two-parameter unitary model admits a non-trivial error trade-off",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write primary output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a model file: δ, Δ, D-invariance, and intersection points.
    Analyze {
        /// Model JSON with fields `rho0`, `X`, `Y`.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
    /// Emit the RLD hyperbola and SLD lines of a model as CSV.
    Bounds {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        grid: Grid,
    },
    /// Evaluate the one-parameter family: ζ, F_ζ(u), Δ, Δ₁, Δ₂, u₀.
    ///
    /// Geometry comes either from generator vectors --x/--y or from --zeta
    /// directly; in the latter case the strengths are reported for unit
    /// geometry factors |ξ|² = |η|² = 1.
    Family {
        /// Perturbation strength, 0 < u < 1/3.
        #[arg(long)]
        u: f64,
        /// Geometric parameter in (0, 1/3]; mutually exclusive with --x/--y.
        #[arg(long, conflicts_with_all = ["x", "y"])]
        zeta: Option<f64>,
        #[arg(long, value_parser = parse_vec3, value_name = "A,B,C", requires = "y")]
        x: Option<[f64; 3]>,
        #[arg(long, value_parser = parse_vec3, value_name = "A,B,C", requires = "x")]
        y: Option<[f64; 3]>,
    },
    /// Tabulate the root u₀(ζ) over a ζ grid as CSV.
    RootCurve {
        #[command(flatten)]
        grid: Grid,
    },
    /// Tabulate the trade-off strengths Δ₁(u), Δ₂(u) over a u grid as CSV.
    StrengthCurve {
        #[arg(long, value_parser = parse_vec3, value_name = "A,B,C")]
        x: [f64; 3],
        #[arg(long, value_parser = parse_vec3, value_name = "A,B,C")]
        y: [f64; 3],
        #[command(flatten)]
        grid: Grid,
    },
    /// Run the seeded Monte Carlo survey; CSV records plus a summary footer.
    Sample {
        /// Number of samples to generate.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// RNG seed (required: there is no wall-clock default).
        #[arg(long)]
        seed: u64,
        /// Upper end of the uniform range for the off-diagonal strengths.
        #[arg(long = "u-max-range", default_value_t = SampleConfig::DEFAULT_U_MAX)]
        u_max_range: f64,
        #[arg(long, value_parser = parse_vec3, value_name = "A,B,C")]
        x: Option<[f64; 3]>,
        #[arg(long, value_parser = parse_vec3, value_name = "A,B,C")]
        y: Option<[f64; 3]>,
        /// Also write the summary JSON to FILE.
        #[arg(long = "summary-out", value_name = "FILE")]
        summary_out: Option<PathBuf>,
    },
}

/// Inclusive evaluation grid shared by the curve subcommands.
#[derive(Args)]
struct Grid {
    #[arg(long = "grid-min")]
    grid_min: f64,
    #[arg(long = "grid-max")]
    grid_max: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    points: u64,
}

impl Grid {
    fn validate(&self) -> Result<(), AppError> {
        if !(self.grid_min.is_finite() && self.grid_max.is_finite() && self.grid_min < self.grid_max)
        {
            return Err(AppError::Usage(format!(
                "invalid grid: need grid-min < grid-max, got [{}, {}]",
                self.grid_min, self.grid_max
            )));
        }
        Ok(())
    }

    fn value(&self, i: u64) -> f64 {
        self.grid_min
            + (self.grid_max - self.grid_min) * i as f64 / (self.points - 1) as f64
    }
}

fn parse_vec3(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{text}'"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad component '{part}': {e}"))?;
    }
    Ok(v)
}

enum AppError {
    /// Exit 1: bad flags or unparseable input.
    Usage(String),
    /// Exit 2: the model or parameters are outside the analyzable domain.
    Model(CoreError),
    /// Exit 2: a domain precondition stated by this tool, not the core.
    Domain(String),
    /// Exit 2: output could not be written.
    Io(io::Error),
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        AppError::Model(e)
    }
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn writer(out: Option<&PathBuf>) -> Result<Box<dyn Write>, AppError> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn load_model(path: &PathBuf) -> Result<UnitaryModel, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))?;
    UnitaryModel::from_json(&text).map_err(|e| match e {
        CoreError::Json(_) => AppError::Usage(format!("cannot parse {}: {e}", path.display())),
        other => AppError::Model(other),
    })
}

fn run(cli: Cli) -> Result<(), AppError> {
    let mut w = writer(cli.out.as_ref())?;
    match cli.cmd {
        Cmd::Analyze { model } => cmd_analyze(&mut w, &model),
        Cmd::Bounds { model, grid } => cmd_bounds(&mut w, &model, &grid),
        Cmd::Family { u, zeta, x, y } => cmd_family(&mut w, u, zeta, x, y),
        Cmd::RootCurve { grid } => cmd_root_curve(&mut w, &grid),
        Cmd::StrengthCurve { x, y, grid } => cmd_strength_curve(&mut w, x, y, &grid),
        Cmd::Sample {
            n,
            seed,
            u_max_range,
            x,
            y,
            summary_out,
        } => cmd_sample(&mut w, n, seed, u_max_range, x, y, summary_out.as_ref()),
    }?;
    w.flush()?;
    Ok(())
}

fn cmd_analyze(w: &mut dyn Write, model_path: &PathBuf) -> Result<(), AppError> {
    let report = load_model(model_path)?.classify()?;
    let text = serde_json::to_string_pretty(&report).expect("report is plain JSON data");
    writeln!(w, "{text}")?;
    Ok(())
}

fn cmd_bounds(w: &mut dyn Write, model_path: &PathBuf, grid: &Grid) -> Result<(), AppError> {
    grid.validate()?;
    let model = load_model(model_path)?;
    let report = model.classify()?;
    if report.classification == Classification::NoTradeoff {
        return Err(AppError::Domain(
            "the model has δ = 0 (no trade-off); bound curves are undefined".into(),
        ));
    }
    let sld_only = report.classification == Classification::SldDominant;
    if sld_only {
        eprintln!("note: SLD-dominant model, bounds do not intersect; emitting SLD lines only");
    }
    let fp = model.fisher_pair()?;

    writeln!(w, "# qtradeoff {VERSION} bounds")?;
    writeln!(w, "# model: {}", model_path.display())?;
    writeln!(
        w,
        "# grid_min: {:.16e} grid_max: {:.16e} points: {}",
        grid.grid_min, grid.grid_max, grid.points
    )?;
    writeln!(w, "V11,V22_rld,V22_sld_line,V11_sld_line")?;
    let im2 = fp.j_r_inv.m12.im * fp.j_r_inv.m12.im;
    for i in 0..grid.points {
        let v11 = grid.value(i);
        let den = v11 - fp.j_r_inv.m11;
        if !sld_only && den > HYPERBOLA_DENOM_TOL {
            let v22 = fp.j_r_inv.m22 + im2 / den;
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                v11, v22, fp.j_s_inv.m22, fp.j_s_inv.m11
            )?;
        } else {
            writeln!(
                w,
                "{:.16e},,{:.16e},{:.16e}",
                v11, fp.j_s_inv.m22, fp.j_s_inv.m11
            )?;
        }
    }
    let points = serde_json::to_string(&report.intersections).expect("pairs are plain JSON data");
    writeln!(w, "# intersections: {points}")?;
    Ok(())
}

fn cmd_family(
    w: &mut dyn Write,
    u: f64,
    zeta: Option<f64>,
    x: Option<[f64; 3]>,
    y: Option<[f64; 3]>,
) -> Result<(), AppError> {
    let value = match (zeta, x, y) {
        (Some(z), None, None) => {
            let f = f_zeta(z, u)?;
            let (cap, d1, d2) = family_fisher_quantities_raw(z, u, 1.0, 1.0)?;
            let u0 = root_u0(z, ROOT_TOL)?;
            json!({
                "zeta": z, "F": f, "Delta": cap, "Delta1": d1, "Delta2": d2, "u0": u0,
            })
        }
        (None, Some(x), Some(y)) => {
            let p = FamilyParams::new(u, x, y)?;
            let f = f_zeta(p.zeta, u)?;
            let (cap, d1, d2) = family_fisher_quantities(&p);
            let u0 = root_u0(p.zeta, ROOT_TOL)?;
            json!({
                "zeta": p.zeta, "F": f, "Delta": cap, "Delta1": d1, "Delta2": d2, "u0": u0,
            })
        }
        _ => {
            return Err(AppError::Usage(
                "family requires either --zeta or both --x and --y".into(),
            ))
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("values are plain JSON data");
    writeln!(w, "{text}")?;
    Ok(())
}

fn cmd_root_curve(w: &mut dyn Write, grid: &Grid) -> Result<(), AppError> {
    grid.validate()?;
    writeln!(w, "# qtradeoff {VERSION} root-curve")?;
    writeln!(
        w,
        "# grid_min: {:.16e} grid_max: {:.16e} points: {}",
        grid.grid_min, grid.grid_max, grid.points
    )?;
    writeln!(w, "zeta,u0")?;
    for i in 0..grid.points {
        let z = grid.value(i);
        let u0 = root_u0(z, ROOT_TOL)?;
        writeln!(w, "{z:.16e},{u0:.16e}")?;
    }
    Ok(())
}

fn cmd_strength_curve(
    w: &mut dyn Write,
    x: [f64; 3],
    y: [f64; 3],
    grid: &Grid,
) -> Result<(), AppError> {
    grid.validate()?;
    writeln!(w, "# qtradeoff {VERSION} strength-curve")?;
    writeln!(w, "# x: {x:?} y: {y:?}")?;
    writeln!(
        w,
        "# grid_min: {:.16e} grid_max: {:.16e} points: {}",
        grid.grid_min, grid.grid_max, grid.points
    )?;
    writeln!(w, "u,Delta1,Delta2")?;
    for i in 0..grid.points {
        let u = grid.value(i);
        let p = FamilyParams::new(u, x, y)?;
        let (_, d1, d2) = family_fisher_quantities(&p);
        writeln!(w, "{u:.16e},{d1:.16e},{d2:.16e}")?;
    }
    Ok(())
}

fn cmd_sample(
    w: &mut dyn Write,
    n: u64,
    seed: u64,
    u_max_range: f64,
    x: Option<[f64; 3]>,
    y: Option<[f64; 3]>,
    summary_out: Option<&PathBuf>,
) -> Result<(), AppError> {
    let cfg = SampleConfig {
        n_samples: n as usize,
        seed,
        u_range: (0.0, u_max_range),
        x: x.unwrap_or(SampleConfig::DEFAULT_X),
        y: y.unwrap_or(SampleConfig::DEFAULT_Y),
    };
    writeln!(w, "# qtradeoff {VERSION} sample")?;
    writeln!(
        w,
        "# n: {} seed: {} u_range: (0,{:.16e}) x: {:?} y: {:?}",
        cfg.n_samples, cfg.seed, cfg.u_range.1, cfg.x, cfg.y
    )?;
    writeln!(w, "{CSV_HEADER}")?;
    let mut write_error: Option<io::Error> = None;
    let summary = run_survey(&cfg, |record| {
        if write_error.is_none() {
            if let Err(e) = writeln!(w, "{}", record.csv_line()) {
                write_error = Some(e);
            }
        }
    })?;
    if let Some(e) = write_error {
        return Err(AppError::Io(e));
    }
    let summary_json = serde_json::to_string(&summary).expect("summary is plain JSON data");
    writeln!(w, "# summary: {summary_json}")?;
    if let Some(path) = summary_out {
        fs::write(path, format!("{summary_json}\n"))?;
    }
    Ok(())
}
