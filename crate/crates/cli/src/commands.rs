//! The computational subcommands. Each reads a matrix, runs one operation,
//! writes the result where asked and emits a residual report.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use symlog::gen::{aiii_obstructed_unitary, nudge, random_gapped_sample, GapSpec};
use symlog::{
    aiii_index, floquet_hamiltonian, log_structured, residual, sqrt_structured_traced, CMatrix,
    Error, IterationMode, LogOptions, SqrtOptions, SymmetryClass, SymmetryContext,
};

use crate::metrics::{diag_metrics, log_metrics, pairing_err, realness_err, sqrt_metrics};
use crate::mtx::{self, MtxError};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OBSTRUCTION: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error(transparent)]
    Mtx(#[from] MtxError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => lib_exit_code(e),
            _ => EXIT_INVALID,
        }
    }
}

pub fn lib_exit_code(e: &Error) -> i32 {
    match e {
        Error::ObstructionDetected { .. } => EXIT_OBSTRUCTION,
        Error::MaxIterationsExceeded { .. } | Error::NoConvergence(_) | Error::SingularIteration | Error::Cancelled => {
            EXIT_CONVERGENCE
        }
        _ => EXIT_INVALID,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn parse_class(s: &str) -> Result<SymmetryClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Matrix Market, dense complex array
    #[default]
    Mtx,
}

/// Where results and reports go.
#[derive(Args, Clone, Debug, Default)]
pub struct OutputArgs {
    /// Write the result matrix to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the residual report to this file instead of stderr
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Suppress the report on stderr
    #[arg(long)]
    pub quiet: bool,
    /// Also print the result on stdout
    #[arg(long)]
    pub stdout: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

impl OutputArgs {
    fn write_matrix(&self, m: &CMatrix) -> Result<(), CliError> {
        if let Some(p) = &self.out {
            mtx::write(p, m)?;
        }
        if self.stdout {
            print_stdout(&mtx::to_string(m))?;
        }
        Ok(())
    }

    fn emit(&self, report: &Report) -> Result<(), CliError> {
        let path = self.report.as_deref();
        report.emit(path, self.quiet).map_err(|source| CliError::Io {
            path: path.map_or_else(|| "stderr".into(), |p| p.display().to_string()),
            source,
        })
    }
}

fn print_stdout(text: &str) -> Result<(), CliError> {
    std::io::stdout().lock().write_all(text.as_bytes()).map_err(io_err(Path::new("stdout")))
}

/// Input matrix and class, shared by the operations on a given unitary.
#[derive(Args, Clone, Debug)]
pub struct InputArgs {
    /// Matrix Market file holding the unitary
    pub input: PathBuf,
    /// Symmetry class: a, ai, aii or aiii
    #[arg(long, default_value = "a", value_parser = parse_class)]
    pub class: SymmetryClass,
}

impl InputArgs {
    fn load(&self) -> Result<(CMatrix, SymmetryContext), CliError> {
        let u = mtx::read(&self.input)?;
        let ctx = SymmetryContext::for_class(self.class, u.n())?;
        Ok((u, ctx))
    }
}

#[derive(Args, Clone, Debug)]
pub struct SqrtArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Relative change at which the iteration stops (default 10 n eps)
    #[arg(long)]
    pub tol: Option<f64>,
    /// On a convergence failure, perturb the input by a structured random
    /// Hermitian generator of this size and retry once
    #[arg(long)]
    pub nudge: Option<f64>,
    /// Run the bare coupled iteration without unitary and symmetry correction
    #[arg(long)]
    pub uncorrected: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Clone, Debug)]
pub struct LogArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub nudge: Option<f64>,
    /// Write the Floquet Hamiltonian (i/T) log U for this period instead of log U
    #[arg(long)]
    pub period: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Clone, Debug)]
pub struct DiagArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub nudge: Option<f64>,
    /// Write the eigenphases here, one per line (`--stdout` prints them)
    #[arg(long)]
    pub phases: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Clone, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Clone, Debug)]
pub struct IndexArgs {
    /// Matrix Market file holding a chiral unitary
    pub input: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Clone, Debug)]
pub struct GenArgs {
    #[arg(long, default_value = "a", value_parser = parse_class)]
    pub class: SymmetryClass,
    #[arg(long)]
    pub size: usize,
    /// Arc distance from -1 to the spectrum
    #[arg(long, default_value_t = 1e-2)]
    pub gap: f64,
    /// Eigenvalues placed exactly at the gap edge (default min(4, size))
    #[arg(long)]
    pub pinned: Option<usize>,
    #[arg(long, env = "SYMLOG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Build a root with half the phases and output its square
    #[arg(long)]
    pub squared: bool,
    /// Class aiii only: output a chiral unitary with nonzero index instead
    #[arg(long)]
    pub obstructed: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn sqrt_options(tol: Option<f64>) -> SqrtOptions {
    SqrtOptions { conv_tol: tol, ..Default::default() }
}

fn is_convergence_failure(e: &Error) -> bool {
    lib_exit_code(e) == EXIT_CONVERGENCE
}

// Runs `op` on `u`; on a convergence failure with `nudge` set, retries once
// on a perturbed copy. Returns the matrix actually used.
fn with_nudge<T>(
    u: &CMatrix,
    class: SymmetryClass,
    ctx: &SymmetryContext,
    eps: Option<f64>,
    report: &mut Report,
    op: impl Fn(&CMatrix) -> symlog::Result<T>,
) -> Result<(T, CMatrix), CliError> {
    match op(u) {
        Ok(t) => Ok((t, u.clone())),
        Err(e) if is_convergence_failure(&e) && eps.is_some() => {
            let eps = eps.unwrap();
            let v = nudge(u, class, ctx, eps, 0)?;
            report.metric("nudged", eps);
            Ok((op(&v)?, v))
        }
        Err(e) => Err(e.into()),
    }
}

fn push_metrics(report: &mut Report, metrics: &[(&'static str, f64)]) {
    for (k, v) in metrics {
        report.metric(k, *v);
    }
}

pub fn cmd_sqrt(args: &SqrtArgs) -> Result<Report, CliError> {
    let (u, ctx) = args.input.load()?;
    let class = args.input.class;
    let mut opts = sqrt_options(args.tol);
    if args.uncorrected {
        opts.mode = IterationMode::Uncorrected;
    }
    let mut report = Report::new();
    report.text("class", class).text("n", u.n());
    let (out, _) = with_nudge(&u, class, &ctx, args.nudge, &mut report, |m| {
        sqrt_structured_traced(m, class, &ctx, &opts)
    })?;
    report.text("iterations", out.iterations);
    push_metrics(&mut report, &sqrt_metrics(&u, &out.root, class, &ctx, None)?);
    args.output.write_matrix(&out.root)?;
    args.output.emit(&report)?;
    Ok(report)
}

pub fn cmd_log(args: &LogArgs) -> Result<Report, CliError> {
    let (u, ctx) = args.input.load()?;
    let class = args.input.class;
    let opts = LogOptions { sqrt: sqrt_options(args.tol), ..Default::default() };
    let mut report = Report::new();
    report.text("class", class).text("n", u.n());
    let (log, used) =
        with_nudge(&u, class, &ctx, args.nudge, &mut report, |m| log_structured(m, class, &ctx, &opts))?;
    let exp_h = log.exp()?;
    push_metrics(&mut report, &log_metrics(&u, &log.h_anti, &exp_h, class, &ctx, None)?);
    let result = match args.period {
        Some(t) => {
            report.metric("period", t);
            floquet_hamiltonian(&used, t, class, &ctx)?
        }
        None => log.h_anti,
    };
    args.output.write_matrix(&result)?;
    args.output.emit(&report)?;
    Ok(report)
}

pub fn cmd_diag(args: &DiagArgs) -> Result<Report, CliError> {
    let (u, ctx) = args.input.load()?;
    let class = args.input.class;
    let opts = LogOptions { sqrt: sqrt_options(args.tol), ..Default::default() };
    let mut report = Report::new();
    report.text("class", class).text("n", u.n());
    let (d, _) = with_nudge(&u, class, &ctx, args.nudge, &mut report, |m| {
        symlog::diag_structured_with(m, class, &ctx, &opts)
    })?;
    push_metrics(&mut report, &diag_metrics(&u, &d.q, &d.eigenvalues(), None));
    match class {
        SymmetryClass::SymmetricAI => {
            report.metric("realness_err", realness_err(&d.q));
        }
        SymmetryClass::ChiralAIII => {
            report.metric("pairing_err", pairing_err(&d.q, &d.phases));
        }
        _ => {}
    }
    let text: String = d.phases.iter().map(|a| format!("{a:.16e}\n")).collect();
    if let Some(p) = &args.phases {
        std::fs::write(p, &text).map_err(io_err(p))?;
    }
    if let Some(p) = &args.output.out {
        mtx::write(p, &d.q)?;
    }
    if args.output.stdout {
        print_stdout(&text)?;
    }
    args.output.emit(&report)?;
    Ok(report)
}

pub fn cmd_index(args: &IndexArgs) -> Result<Report, CliError> {
    let u = mtx::read(&args.input)?;
    let ctx = SymmetryContext::for_class(SymmetryClass::ChiralAIII, u.n())?;
    let rep = residual(&u, SymmetryClass::ChiralAIII, &ctx)?;
    let index = aiii_index(&u, &ctx)?;
    let mut report = Report::new();
    report.text("index", index).metric("unitarity_err", rep.unitarity).metric("symmetry_err", rep.symmetry);
    report.emit(args.report.as_deref(), args.quiet).map_err(io_err(Path::new("report")))?;
    Ok(report)
}

/// Residuals of the input against a class, plus the index for class AIII.
pub fn cmd_check(args: &CheckArgs) -> Result<Report, CliError> {
    let (u, ctx) = args.input.load()?;
    let rep = residual(&u, args.input.class, &ctx)?;
    let mut report = Report::new();
    report
        .text("class", args.input.class)
        .text("n", u.n())
        .metric("unitarity_err", rep.unitarity)
        .metric("symmetry_err", rep.symmetry);
    if args.input.class == SymmetryClass::ChiralAIII {
        if let Ok(index) = aiii_index(&u, &ctx) {
            report.text("index", index);
        }
    }
    report.emit(args.report.as_deref(), args.quiet).map_err(io_err(Path::new("report")))?;
    Ok(report)
}

pub fn default_pinned(n: usize) -> usize {
    if n >= 4 {
        4
    } else {
        2
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<Report, CliError> {
    let n = args.size;
    let class = args.class;
    let ctx = SymmetryContext::for_class(class, n)?;
    let mut report = Report::new();
    report.text("class", class).text("n", n).text("seed", args.seed);
    let u = if args.obstructed {
        if class != SymmetryClass::ChiralAIII {
            return Err(CliError::Usage("--obstructed requires --class aiii".into()));
        }
        aiii_obstructed_unitary(n, args.seed)?
    } else {
        let mut spec = GapSpec::new(args.gap).with_pinned(args.pinned.unwrap_or_else(|| default_pinned(n)));
        if args.squared {
            spec = spec.squared();
        }
        let s = random_gapped_sample(class, n, spec, args.seed)?;
        report.metric("gap", s.gap());
        s.u
    };
    let rep = residual(&u, class, &ctx)?;
    report.metric("unitarity_err", rep.unitarity).metric("symmetry_err", rep.symmetry);
    if class == SymmetryClass::ChiralAIII {
        report.text("index", aiii_index(&u, &ctx)?);
    }
    args.output.write_matrix(&u)?;
    args.output.emit(&report)?;
    Ok(report)
}
