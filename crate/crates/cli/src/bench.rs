//! Benchmark sweep over classes, sizes and gaps.
//!
//! Every `(class, n, gap, trial)` cell generates a gapped unitary with a
//! known eigendecomposition, runs the structured square root, logarithm and
//! diagonalization next to the backend's general eigensolver, and emits one
//! row per measurement. Metric names read `<op>.<method>.<name>`, where
//! `method` is `structured` or `baseline` and `name` is one of
//! [`METRIC_NAMES`] or `error_code`.
//!
//! Trial `k` draws from stream `k` of the master seed, so a cell's matrix is
//! the same whatever the thread count or the order cells run in.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::Args;
use symlog::baseline::{diag_general, log_general, sqrt_general, BASELINE_NAME};
use symlog::gen::{random_gapped_sample_with, seeded_rng, GapSpec, GappedSample};
use symlog::linalg::expm;
use symlog::{diag_structured, log_structured, sqrt_structured, LogOptions, SqrtOptions, SymmetryClass, SymmetryContext, C64};

use crate::commands::{default_pinned, lib_exit_code, parse_class, CliError, EXIT_INVALID};
use crate::metrics::{diag_metrics, log_metrics, pairing_err, realness_err, sqrt_metrics, Metrics, METRIC_NAMES};

pub const CSV_HEADER: [&str; 6] = ["class", "n", "gap", "trial", "metric", "value"];

#[derive(Args, Clone, Debug)]
pub struct BenchArgs {
    /// Comma-separated classes
    #[arg(long, value_delimiter = ',', default_value = "a,ai,aiii", value_parser = parse_class)]
    pub classes: Vec<SymmetryClass>,
    #[arg(long, value_delimiter = ',', default_value = "200")]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-6,1e-10,1e-15")]
    pub gaps: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, env = "SYMLOG_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Operations to run: any of sqrt, log, diag
    #[arg(long, value_delimiter = ',', default_value = "sqrt,log,diag")]
    pub ops: Vec<Op>,
    /// Worker threads; timings are only comparable with 1
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CSV output file
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Op {
    Sqrt,
    Log,
    Diag,
}

impl Op {
    fn tag(self) -> &'static str {
        match self {
            Op::Sqrt => "sqrt",
            Op::Log => "log",
            Op::Diag => "diag",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub class: SymmetryClass,
    pub n: usize,
    pub gap: f64,
    pub trial: usize,
    pub metric: String,
    pub value: f64,
}

impl BenchRow {
    fn record(&self) -> [String; 6] {
        [
            self.class.tag().to_owned(),
            self.n.to_string(),
            format!("{:e}", self.gap),
            self.trial.to_string(),
            self.metric.clone(),
            format!("{:e}", self.value),
        ]
    }
}

/// One cell of the sweep.
#[derive(Clone, Copy, Debug)]
pub struct Cell {
    pub class: SymmetryClass,
    pub n: usize,
    pub gap: f64,
    pub trial: usize,
}

impl BenchArgs {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Usage(m.to_owned()));
        if self.classes.is_empty() || self.sizes.is_empty() || self.gaps.is_empty() || self.ops.is_empty() {
            return bad("classes, sizes, gaps and ops must be non-empty");
        }
        if self.trials == 0 || self.jobs == 0 {
            return bad("trials and jobs must be at least 1");
        }
        for &class in &self.classes {
            for &n in &self.sizes {
                SymmetryContext::for_class(class, n)?;
                for &gap in &self.gaps {
                    GapSpec::new(gap).with_pinned(default_pinned(n)).validate(n)?;
                }
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &class in &self.classes {
            for &n in &self.sizes {
                for &gap in &self.gaps {
                    for trial in 0..self.trials {
                        cells.push(Cell { class, n, gap, trial });
                    }
                }
            }
        }
        cells
    }
}

/// Generates the cell's unitary from stream `trial` of `seed`.
pub fn cell_sample(cell: &Cell, seed: u64) -> symlog::Result<GappedSample> {
    let spec = GapSpec::new(cell.gap).with_pinned(default_pinned(cell.n));
    random_gapped_sample_with(cell.class, cell.n, spec, &mut seeded_rng(seed, cell.trial as u64))
}

struct RowBuilder<'a> {
    cell: &'a Cell,
    rows: Vec<BenchRow>,
}

impl RowBuilder<'_> {
    fn push(&mut self, metric: String, value: f64) {
        let c = self.cell;
        self.rows.push(BenchRow { class: c.class, n: c.n, gap: c.gap, trial: c.trial, metric, value });
    }

    fn error(&mut self, prefix: &str, code: i32) {
        self.push(format!("{prefix}.error_code"), code as f64);
    }

    // A non-finite measurement is reported as an error rather than a value.
    fn outcome(&mut self, prefix: &str, res: symlog::Result<Metrics>, seconds: f64) {
        match res {
            Ok(m) if m.iter().all(|(_, v)| v.is_finite()) => {
                for (k, v) in m {
                    debug_assert!(METRIC_NAMES.contains(&k));
                    self.push(format!("{prefix}.{k}"), v);
                }
                self.push(format!("{prefix}.wall_seconds"), seconds);
            }
            Ok(_) => self.error(prefix, EXIT_INVALID),
            Err(e) => self.error(prefix, lib_exit_code(&e)),
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let t = f();
    (t, start.elapsed().as_secs_f64())
}

/// Runs every requested operation on one cell.
pub fn run_cell(cell: &Cell, seed: u64, ops: &[Op]) -> Vec<BenchRow> {
    let mut b = RowBuilder { cell, rows: Vec::new() };
    let s = match cell_sample(cell, seed) {
        Ok(s) => s,
        Err(e) => {
            b.error("gen", lib_exit_code(&e));
            return b.rows;
        }
    };
    let (class, u) = (cell.class, &s.u);
    let ctx = SymmetryContext::new(cell.n);
    for &op in ops {
        let tag = op.tag();
        let structured = format!("{tag}.structured");
        let baseline = format!("{tag}.baseline");
        match op {
            Op::Sqrt => {
                let oracle = s.sqrt_oracle();
                let (r, t) = timed(|| sqrt_structured(u, class, &ctx, &SqrtOptions::default()));
                b.outcome(&structured, r.and_then(|v| sqrt_metrics(u, &v, class, &ctx, Some(&oracle))), t);
                let (r, t) = timed(|| sqrt_general(u));
                b.outcome(&baseline, r.and_then(|v| sqrt_metrics(u, &v, class, &ctx, Some(&oracle))), t);
            }
            Op::Log => {
                let oracle = s.log_oracle();
                let (r, t) = timed(|| log_structured(u, class, &ctx, &LogOptions::default()));
                let m = r.and_then(|l| log_metrics(u, &l.h_anti, &l.exp()?, class, &ctx, Some(&oracle)));
                b.outcome(&structured, m, t);
                let (r, t) = timed(|| log_general(u));
                let m = r.and_then(|h| log_metrics(u, &h, &expm(&h)?, class, &ctx, Some(&oracle)));
                b.outcome(&baseline, m, t);
            }
            Op::Diag => {
                let exact: Vec<C64> = s.phases.iter().map(|&a| C64::from_polar(1.0, a)).collect();
                let (r, t) = timed(|| diag_structured(u, class, &ctx));
                let m = r.map(|d| {
                    let mut m = diag_metrics(u, &d.q, &d.eigenvalues(), Some(&exact));
                    match class {
                        SymmetryClass::SymmetricAI => m.push(("realness_err", realness_err(&d.q))),
                        SymmetryClass::ChiralAIII => m.push(("pairing_err", pairing_err(&d.q, &d.phases))),
                        _ => {}
                    }
                    m
                });
                b.outcome(&structured, m, t);
                let (r, t) = timed(|| diag_general(u));
                b.outcome(&baseline, r.map(|g| diag_metrics(u, &g.vectors, &g.values, Some(&exact))), t);
            }
        }
    }
    b.rows
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BenchSummary {
    pub cells: usize,
    pub rows: usize,
    pub errors: usize,
}

/// Runs the sweep on `jobs` threads, handing each finished cell's rows to
/// `sink` under a lock.
pub fn run(
    args: &BenchArgs,
    sink: impl FnMut(&[BenchRow]) -> Result<(), CliError> + Send,
) -> Result<BenchSummary, CliError> {
    args.validate()?;
    let cells = args.cells();
    let next = AtomicUsize::new(0);
    let sink = Mutex::new((sink, BenchSummary { cells: cells.len(), ..Default::default() }));
    let failure: Mutex<Option<CliError>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.min(cells.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= cells.len() || failure.lock().unwrap().is_some() {
                    break;
                }
                let rows = run_cell(&cells[k], args.seed, &args.ops);
                let mut guard = sink.lock().unwrap();
                let (write, summary) = &mut *guard;
                summary.rows += rows.len();
                summary.errors += rows.iter().filter(|r| r.metric.ends_with(".error_code")).count();
                if let Err(e) = write(&rows) {
                    *failure.lock().unwrap() = Some(e);
                    break;
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(sink.into_inner().unwrap().1)
}

/// Runs the sweep and writes the CSV: a comment line naming the baseline,
/// the header, then rows flushed one at a time.
pub fn cmd_bench(args: &BenchArgs) -> Result<BenchSummary, CliError> {
    args.validate()?;
    let path = &args.out;
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let mut file = File::create(path).map_err(io)?;
    writeln!(file, "# baseline: {BASELINE_NAME}").map_err(io)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(CSV_HEADER)?;
    w.flush().map_err(io)?;
    let quiet = args.quiet;
    let summary = run(args, move |rows| {
        for r in rows {
            w.write_record(r.record())?;
            w.flush().map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        }
        if !quiet {
            if let Some(r) = rows.first() {
                eprintln!("{} n={} gap={:e} trial={}: {} rows", r.class.tag(), r.n, r.gap, r.trial, rows.len());
            }
        }
        Ok(())
    })?;
    Ok(summary)
}

/// Reads a CSV written by [`cmd_bench`].
pub fn read_csv(path: &std::path::Path) -> Result<Vec<BenchRow>, CliError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let bad = || CliError::Usage(format!("{}: malformed row {:?}", path.display(), rec));
        rows.push(BenchRow {
            class: parse_class(&rec[0]).map_err(|_| bad())?,
            n: rec[1].parse().map_err(|_| bad())?,
            gap: rec[2].parse().map_err(|_| bad())?,
            trial: rec[3].parse().map_err(|_| bad())?,
            metric: rec[4].to_owned(),
            value: rec[5].parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}
