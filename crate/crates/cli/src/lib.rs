//! Command-line front end for the exterior-disk fiber solver.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bilap_core::reference::{fd_lambda, secular_lambda, ualpha_energy, ualpha_quotient};
use bilap_core::{
    domain::parse_domain, domain_from_support, ground_state, solve_fiber, sweep, verify_isoperimetric, Error,
    FiberParams, SolverControl, SweepGrid,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{Settings, CONFIG_ENV};

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_BOUND_STATE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bilap", version, about = "Negative eigenvalues of the Robin bi-Laplacian outside a disk")]
struct Cli {
    /// `key = value` config file
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
    /// initial truncation length
    #[arg(long = "t0", global = true)]
    t0: Option<f64>,
    /// elements per unit length
    #[arg(long = "n0", global = true)]
    n0: Option<f64>,
    /// highest angular mode scanned
    #[arg(long, global = true)]
    n_max: Option<u32>,
    /// support-function samples for domains
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    max_doublings: Option<usize>,
    /// write results here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Point {
    #[arg(long, allow_hyphen_values = true)]
    tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    radius: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ground state on the exterior of a disk (JSON)
    SolveDisk(Point),
    /// Ground states over a grid (CSV)
    Sweep {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        tau: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gamma: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        radius: Vec<f64>,
    },
    /// Transplanted quotient against the disk eigenvalue (JSON)
    Verify {
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        point: Point,
    },
    /// Energy of the trial family u_alpha (CSV)
    Ualpha {
        #[command(flatten)]
        point: Point,
        /// comma-separated alpha values
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
    },
    /// Cross-check against the secular equation and finite differences (JSON)
    Oracle {
        #[command(flatten)]
        point: Point,
        /// finite-difference step
        #[arg(long, default_value_t = 0.04)]
        fd_step: f64,
        /// finite-difference truncation length cap
        #[arg(long, default_value_t = 60.0)]
        fd_length: f64,
    },
    /// Converged radial profile at the mesh nodes (CSV)
    Profile {
        #[command(flatten)]
        point: Point,
        #[arg(long, default_value_t = 0)]
        mode: i32,
        /// drop nodes with t beyond this
        #[arg(long)]
        t_max: Option<f64>,
    },
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn no_bound_state(gamma: f64) -> Self {
        let message = if gamma >= 0.0 {
            "no negative bound state (gamma ≥ 0)".to_string()
        } else {
            "no negative bound state found".to_string()
        };
        Failure { code: EXIT_NO_BOUND_STATE, message }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Mode { source, .. } => exit_code(source),
        Error::Convergence { .. } | Error::Factorization { .. } | Error::Diagnostics(_) => EXIT_CONVERGENCE,
        _ => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::input(format!("csv: {e}"))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let mut out = Vec::new();
    let status = execute(&cli, &mut out);
    if !out.is_empty() {
        let written = match &cli.out {
            Some(path) => std::fs::write(path, &out).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => stdout.write_all(&out).map_err(|e| e.to_string()),
        };
        if let Err(msg) = written {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT;
        }
    }
    match status {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let base = match &cli.config {
        Some(path) => Settings::load(path).map_err(Failure::input)?,
        None => Settings::default(),
    };
    let flags = Settings {
        rtol: cli.rtol,
        t0: cli.t0,
        n0: cli.n0,
        n_max: cli.n_max,
        samples: cli.samples,
        max_doublings: cli.max_doublings,
    };
    Ok(base.overlay(&flags))
}

fn json<T: Serialize>(out: &mut Vec<u8>, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::input(format!("json: {e}")))?;
    out.push(b'\n');
    Ok(())
}

fn num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn execute(cli: &Cli, out: &mut Vec<u8>) -> Result<(), Failure> {
    let settings = settings(cli)?;
    let ctrl = settings.control();
    ctrl.validate()?;
    match &cli.command {
        Command::SolveDisk(p) => {
            let report = ground_state(p.tau, p.gamma, p.radius, &ctrl)?;
            json(out, &report)?;
            if report.lambda_min().is_none() {
                return Err(Failure::no_bound_state(p.gamma));
            }
        }
        Command::Sweep { tau, gamma, radius } => {
            let grid = SweepGrid { taus: tau.clone(), gammas: gamma.clone(), radii: radius.clone() };
            write_sweep(out, &grid, &ctrl)?;
        }
        Command::Verify { domain, point } => {
            let text = std::fs::read_to_string(domain)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", domain.display())))?;
            let (a0, terms) = parse_domain(&text)?;
            let d = domain_from_support(a0, &terms, settings.samples())?;
            let report = verify_isoperimetric(&d, point.tau, point.gamma, point.radius, &ctrl)?;
            json(out, &report)?;
        }
        Command::Ualpha { point, alpha } => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["alpha", "energy", "rayleigh_quotient"])?;
            for &a in alpha {
                let energy = ualpha_energy(a, point.tau, point.gamma, point.radius)?;
                let quotient = ualpha_quotient(a, point.tau, point.gamma, point.radius)?;
                w.write_record([a.to_string(), energy.to_string(), quotient.to_string()])?;
            }
            w.flush().map_err(|e| Failure::input(e.to_string()))?;
        }
        Command::Oracle { point, fd_step, fd_length } => {
            let report = oracle(point, *fd_step, *fd_length, &ctrl)?;
            json(out, &report)?;
        }
        Command::Profile { point, mode, t_max } => {
            let p = FiberParams::new(point.tau, point.gamma, point.radius, *mode)?;
            let Some(res) = solve_fiber(&p, &ctrl)? else {
                return Err(Failure::no_bound_state(point.gamma));
            };
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["t", "f", "df"])?;
            let c = res.profile.coefficients();
            for (i, &r) in res.profile.mesh().nodes().iter().enumerate() {
                let t = r - point.radius;
                if t_max.is_some_and(|m| t > m) {
                    break;
                }
                w.write_record([t.to_string(), c[2 * i].to_string(), c[2 * i + 1].to_string()])?;
            }
            w.flush().map_err(|e| Failure::input(e.to_string()))?;
        }
    }
    Ok(())
}

fn write_sweep(out: &mut Vec<u8>, grid: &SweepGrid, ctrl: &SolverControl) -> Result<(), Failure> {
    let rows = sweep(grid, ctrl);
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["tau", "gamma", "radius", "mode", "lambda", "classification", "T_final", "N_final", "residual"])?;
    for row in &rows {
        let head = [row.tau.to_string(), row.gamma.to_string(), row.radius.to_string()];
        match &row.outcome {
            Ok(report) => {
                for m in &report.modes {
                    let r = m.result.as_ref();
                    let mut rec = head.to_vec();
                    rec.extend([
                        m.mode.to_string(),
                        num(m.lambda),
                        report.classification.as_str().to_string(),
                        num(r.map(|r| r.final_length)),
                        r.map(|r| r.final_elements.to_string()).unwrap_or_default(),
                        num(r.map(|r| r.residual)),
                    ]);
                    w.write_record(&rec)?;
                }
            }
            Err(e) => {
                let mode = match e {
                    Error::Mode { mode, .. } => mode.to_string(),
                    _ => String::new(),
                };
                let mut rec = head.to_vec();
                rec.extend([mode, String::new(), "error".into(), String::new(), String::new(), String::new()]);
                w.write_record(&rec)?;
            }
        }
    }
    w.flush().map_err(|e| Failure::input(e.to_string()))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct OracleReport {
    tau: f64,
    gamma: f64,
    radius: f64,
    fem: Option<f64>,
    secular: Option<f64>,
    /// why the secular value is missing, if it is
    secular_note: Option<String>,
    secular_rel_diff: Option<f64>,
    fd: Option<f64>,
    fd_step: f64,
    fd_length: f64,
    fd_rel_diff: Option<f64>,
}

fn rel(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(((a - b) / a).abs()),
        _ => None,
    }
}

fn oracle(pt: &Point, fd_step: f64, fd_cap: f64, ctrl: &SolverControl) -> Result<OracleReport, Failure> {
    let p = FiberParams::new(pt.tau, pt.gamma, pt.radius, 0)?;
    let res = solve_fiber(&p, ctrl)?;
    let fem = res.as_ref().map(|r| r.lambda);
    let (secular, secular_note) = match secular_lambda(pt.tau, pt.gamma, pt.radius) {
        Ok(v) => (v, None),
        Err(Error::Unsupported(msg)) => (None, Some(msg)),
        Err(e) => return Err(e.into()),
    };
    let fd_length = res.as_ref().map_or(fd_cap, |r| r.final_length.min(fd_cap));
    let fd = fd_lambda(&p, fd_step, fd_length)?;
    Ok(OracleReport {
        tau: pt.tau,
        gamma: pt.gamma,
        radius: pt.radius,
        fem,
        secular,
        secular_note,
        secular_rel_diff: rel(fem, secular),
        fd,
        fd_step,
        fd_length,
        fd_rel_diff: rel(fem, fd),
    })
}
