use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlct_core::error::Error;
use qlct_core::gabor::{read_coefficients, write_coefficients, write_spectrogram_csv, write_spectrogram_pgm, FULL_STORAGE_LIMIT};
use qlct_core::signal::{export_csv, import_csv, load, make_window, save};
use qlct_core::suite::{run_suite, Family, SuiteConfig, SuiteName};
use qlct_core::{
    gabor_analyze, gabor_synthesize, qlct_forward, qlct_inverse, qlct2d, spectrogram, AnalyzeOptions, LCTParams, Method,
    QLCTParams, QSignal2D, Quaternion, SpectrogramSlice, WindowSpec,
};

/// Determinant tolerance for matrices given on the command line.
const CLI_UNIMODULAR_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "qlct", version, about = "Quaternion linear canonical transforms and their windowed analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward two-sided QLCT of a QSIG file.
    Forward(TransformArgs),
    /// Inverse QLCT back onto the signal grid.
    Inverse(InverseArgs),
    /// Windowed (Gabor) analysis, synthesis and spectrograms.
    #[command(subcommand)]
    Gabor(GaborCommand),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
    /// Write a test signal or window as QSIG.
    Generate(GenerateArgs),
    /// Convert `x1,x2,qw,qx,qy,qz` CSV to QSIG.
    ImportCsv(ConvertArgs),
    /// Convert QSIG to `x1,x2,qw,qx,qy,qz` CSV.
    ExportCsv(ConvertArgs),
}

#[derive(Args)]
struct MatrixArgs {
    /// First-axis matrix `a,b,c,d`.
    #[arg(long, allow_hyphen_values = true, default_value = "0,1,-1,0")]
    a1: String,
    /// Second-axis matrix `a,b,c,d`.
    #[arg(long, allow_hyphen_values = true, default_value = "0,1,-1,0")]
    a2: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fast,
    Direct,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fast => Method::Fast,
            MethodArg::Direct => Method::Direct,
        }
    }
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    matrices: MatrixArgs,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "fast")]
    method: MethodArg,
    /// Print the Plancherel ratio `‖Lf‖²/‖f‖²`.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct InverseArgs {
    #[command(flatten)]
    matrices: MatrixArgs,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "fast")]
    method: MethodArg,
    /// Reference signal: its grid is the target grid and the
    /// reconstruction error against it is printed.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GaborCommand {
    /// Write a coefficient directory (manifest.json plus one QSIG per translation).
    Analyze(AnalyzeArgs),
    /// Reconstruct a signal from a coefficient directory.
    Synthesize(SynthesizeArgs),
    /// Export a 2D cut of |G|² as PGM or CSV.
    Spectrogram(SpectrogramArgs),
}

#[derive(Args)]
struct WindowArgs {
    /// Window spec, e.g. `gaussian:sigma=1.0,1.0`.
    #[arg(long, default_value = "gaussian:sigma=1,1")]
    window: String,
    /// Window samples from a QSIG file; overrides `--window`.
    #[arg(long)]
    window_file: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    matrices: MatrixArgs,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(short, long)]
    input: PathBuf,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long, value_enum, default_value = "fast")]
    method: MethodArg,
    /// Allow stride-1 storage beyond the in-memory budget.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SynthesizeArgs {
    #[command(flatten)]
    window: WindowArgs,
    /// Coefficient directory or its manifest.json.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "fast")]
    method: MethodArg,
    /// Reference signal to report the reconstruction error against.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecFormat {
    Pgm,
    Csv,
}

#[derive(Args)]
struct SpectrogramArgs {
    /// Coefficient directory or its manifest.json.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// `fix_y:i,j`, `fix_omega:i,j`, `max_over_y` or `max_over_omega`.
    #[arg(long, default_value = "max_over_y")]
    slice: String,
    /// Defaults to the output extension (`.csv` selects CSV, anything else PGM).
    #[arg(long, value_enum)]
    format: Option<SpecFormat>,
}

#[derive(Args)]
struct GridArgs {
    /// Grid size `N1xN2`.
    #[arg(long, default_value = "32x32")]
    grid: String,
    /// Sample spacing; defaults to `√(2π/N)` per axis.
    #[arg(long)]
    dx: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// plancherel, gabor-plancherel, heisenberg, log, lemma-log, lieb, young,
    /// hausdorff-young, concentration, eps-concentration, moment-concentration or all.
    name: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON array of reports; a CSV summary is written next to it.
    #[arg(long)]
    report: Option<PathBuf>,
    /// CSV summary path (defaults to the report path with `.csv`).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Suppress PASS lines; failures and INFO lines are still printed.
    #[arg(long)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gaussian,
    Dilated,
    Chirp,
    Random,
    Impulse,
    Window,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(short, long)]
    output: PathBuf,
    /// Dilation factor for `dilated`.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Impulse cell `k1,k2`; defaults to the grid center.
    #[arg(long)]
    at: Option<String>,
    /// Window spec for `window`.
    #[arg(long, default_value = "gaussian:sigma=1,1")]
    window: String,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

/// Failure with the stage that produced it and the exit code to report.
struct Failure {
    code: u8,
    stage: String,
    msg: String,
}

type CliResult<T> = Result<T, Failure>;

fn code_of(e: &Error) -> u8 {
    match e {
        Error::NonFiniteSample { .. }
        | Error::DegenerateB
        | Error::NonDegenerateB
        | Error::UnmatchedSampling { .. }
        | Error::OffGridScale { .. }
        | Error::Hypothesis(_) => 3,
        _ => 2,
    }
}

trait Stage<T> {
    fn stage(self, stage: &str) -> CliResult<T>;
}

impl<T> Stage<T> for qlct_core::Result<T> {
    fn stage(self, stage: &str) -> CliResult<T> {
        self.map_err(|e| Failure { code: code_of(&e), stage: stage.to_string(), msg: e.to_string() })
    }
}

fn usage(stage: &str, msg: impl Into<String>) -> Failure {
    Failure { code: 2, stage: stage.to_string(), msg: msg.into() }
}

fn parse_matrix(s: &str, name: &str) -> CliResult<LCTParams<f64>> {
    let stage = format!("parse {name}");
    let p: LCTParams<f64> = s.parse().stage(&stage)?;
    LCTParams::with_tolerance(p.a, p.b, p.c, p.d, CLI_UNIMODULAR_TOL, name).stage(&stage)
}

fn parse_params(m: &MatrixArgs) -> CliResult<QLCTParams<f64>> {
    Ok(QLCTParams { a1: parse_matrix(&m.a1, "A1")?, a2: parse_matrix(&m.a2, "A2")? })
}

fn parse_pair(s: &str, sep: char, what: &str) -> CliResult<(usize, usize)> {
    let bad = || usage("parse", format!("{what}: expected two integers separated by '{sep}', got '{s}'"));
    let (a, b) = s.split_once(sep).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_grid(g: &GridArgs) -> CliResult<qlct_core::Grid2D<f64>> {
    let (n1, n2) = parse_pair(&g.grid, 'x', "--grid")?;
    SuiteConfig { n1, n2, dx: g.dx, trials: 1, seed: 0 }.grid().stage("parse --grid")
}

fn ensure_distinct(input: &Path, output: &Path) -> CliResult<()> {
    if input == output {
        return Err(usage("arguments", format!("input and output are the same path: {}", input.display())));
    }
    Ok(())
}

fn ensure_finite(s: &QSignal2D<f64>, stage: &str) -> CliResult<()> {
    if !s.is_finite() {
        return Err(Failure { code: 3, stage: stage.to_string(), msg: "output contains non-finite samples".into() });
    }
    Ok(())
}

fn load_signal(path: &Path) -> CliResult<QSignal2D<f64>> {
    load(path).stage(&format!("read {}", path.display()))
}

fn load_window(w: &WindowArgs, grid: &qlct_core::Grid2D<f64>) -> CliResult<QSignal2D<f64>> {
    match &w.window_file {
        Some(p) => load_signal(p),
        None => {
            let spec: WindowSpec<f64> = w.window.parse().stage("parse --window")?;
            make_window(&spec, grid).stage("sample window")
        }
    }
}

fn manifest_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join("manifest.json")
    } else {
        p.to_path_buf()
    }
}

fn cmd_forward(a: TransformArgs) -> CliResult<()> {
    ensure_distinct(&a.input, &a.output)?;
    let p = parse_params(&a.matrices)?;
    let f = load_signal(&a.input)?;
    let big = qlct_forward(&f, &p, a.method.into()).stage("forward transform")?;
    ensure_finite(&big, "forward transform")?;
    save(&a.output, &big).stage("write output")?;
    if a.check {
        let ratio = big.norm_sqr() / f.norm_sqr();
        println!("plancherel ratio {ratio:.15}");
    }
    Ok(())
}

fn cmd_inverse(a: InverseArgs) -> CliResult<()> {
    ensure_distinct(&a.input, &a.output)?;
    let p = parse_params(&a.matrices)?;
    let big = load_signal(&a.input)?;
    let reference = a.reference.as_deref().map(load_signal).transpose()?;
    let grid = match &reference {
        Some(r) => *r.grid(),
        None => {
            let back = QLCTParams { a1: p.a1.inverse(), a2: p.a2.inverse() };
            qlct2d::conjugate_grid(&back, big.grid()).stage("signal grid")?
        }
    };
    let f = qlct_inverse(&big, &p, &grid, a.method.into()).stage("inverse transform")?;
    ensure_finite(&f, "inverse transform")?;
    save(&a.output, &f).stage("write output")?;
    if let Some(r) = reference {
        println!("relative L2 error {:.6e}", f.rel_l2_error(&r));
    }
    Ok(())
}

fn cmd_gabor(c: GaborCommand) -> CliResult<()> {
    match c {
        GaborCommand::Analyze(a) => {
            let p = parse_params(&a.matrices)?;
            let f = load_signal(&a.input)?;
            let phi = load_window(&a.window, f.grid())?;
            let opts = AnalyzeOptions { stride: a.stride, method: a.method.into(), allow_large: a.force };
            let g = gabor_analyze(&f, &phi, &p, opts).map_err(|e| match e {
                Error::MemoryBudget { n1, n2 } => usage(
                    "gabor analyze",
                    format!("stride-1 analysis of {n1}x{n2} exceeds {FULL_STORAGE_LIMIT} samples; pass --force or --stride > 1"),
                ),
                e => Failure { code: code_of(&e), stage: "gabor analyze".into(), msg: e.to_string() },
            })?;
            if !g.coeffs().iter().all(|q| q.is_finite()) {
                return Err(Failure { code: 3, stage: "gabor analyze".into(), msg: "non-finite coefficients".into() });
            }
            let m = write_coefficients(&g, &a.output).stage("write coefficients")?;
            println!("wrote {} slices, manifest {}", g.y_grid().len(), m.display());
        }
        GaborCommand::Synthesize(a) => {
            ensure_distinct(&a.input, &a.output)?;
            let g = read_coefficients::<f64>(manifest_path(&a.input)).stage("read coefficients")?;
            let phi = load_window(&a.window, g.signal_grid())?;
            let f = gabor_synthesize(&g, &phi, a.method.into()).stage("gabor synthesize")?;
            ensure_finite(&f, "gabor synthesize")?;
            save(&a.output, &f).stage("write output")?;
            if let Some(r) = a.reference {
                println!("relative L2 error {:.6e}", f.rel_l2_error(&load_signal(&r)?));
            }
        }
        GaborCommand::Spectrogram(a) => {
            let g = read_coefficients::<f64>(manifest_path(&a.input)).stage("read coefficients")?;
            let slice: SpectrogramSlice = a.slice.parse().stage("parse --slice")?;
            let s = spectrogram(&g, slice).stage("spectrogram")?;
            let csv = match a.format {
                Some(SpecFormat::Csv) => true,
                Some(SpecFormat::Pgm) => false,
                None => a.output.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")),
            };
            if csv {
                write_spectrogram_csv(&s, &a.output).stage("write spectrogram")?;
            } else {
                write_spectrogram_pgm(&s, &a.output).stage("write spectrogram")?;
            }
            let (idx, v) = s.argmax();
            println!("peak {v:.6e} at cell ({}, {})", idx / s.axes.n2, idx % s.axes.n2);
        }
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CliResult<()> {
    let name: SuiteName = a.name.parse().stage("parse suite name")?;
    let (n1, n2) = parse_pair(&a.grid.grid, 'x', "--grid")?;
    let cfg = SuiteConfig { n1, n2, dx: a.grid.dx, trials: a.trials, seed: a.seed };
    let out = run_suite(name, &cfg).stage(&format!("verify {name}"))?;
    if let Some(path) = &a.report {
        out.write_json(path).stage("write report")?;
        let csv = a.csv.clone().unwrap_or_else(|| path.with_extension("csv"));
        out.write_csv(&csv).stage("write csv summary")?;
    } else if let Some(csv) = &a.csv {
        out.write_csv(csv).stage("write csv summary")?;
    }
    for line in out.lines() {
        if !(a.quiet && line.starts_with("PASS")) {
            println!("{line}");
        }
    }
    let total = out.assertions.len();
    let failed = out.failures().count();
    println!("{name}: {} reports, {} of {total} assertions passed", out.reports.len(), total - failed);
    if failed > 0 {
        for f in out.failures() {
            eprintln!("FAIL {} {}: {}", f.suite, f.label, f.detail);
            if let Some(r) = f.report.and_then(|i| out.reports.get(i)) {
                eprintln!("{}", serde_json::to_string_pretty(r).unwrap_or_default());
            }
        }
        return Err(Failure { code: 1, stage: format!("verify {name}"), msg: format!("{failed} invariant(s) violated") });
    }
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> CliResult<()> {
    let grid = parse_grid(&a.grid)?;
    let s = match a.kind {
        Kind::Gaussian => Family::Gaussian.signal(&grid),
        Kind::Dilated => Family::Dilated(a.t).signal(&grid),
        Kind::Chirp => Family::Chirp.signal(&grid),
        Kind::Random => Family::RandomSmooth(a.seed).signal(&grid),
        Kind::Window => {
            let spec: WindowSpec<f64> = a.window.parse().stage("parse --window")?;
            make_window(&spec, &grid)
        }
        Kind::Impulse => {
            let (k1, k2) = match &a.at {
                Some(s) => parse_pair(s, ',', "--at")?,
                None => (grid.n1 / 2, grid.n2 / 2),
            };
            if k1 >= grid.n1 || k2 >= grid.n2 {
                return Err(usage("generate", format!("impulse cell ({k1}, {k2}) is outside the {}x{} grid", grid.n1, grid.n2)));
            }
            let mut v = vec![Quaternion::zero(); grid.len()];
            v[grid.index(k1, k2)] = Quaternion::one();
            QSignal2D::new(grid, v)
        }
    }
    .stage("generate")?;
    save(&a.output, &s).stage("write output")
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Forward(a) => cmd_forward(a),
        Command::Inverse(a) => cmd_inverse(a),
        Command::Gabor(c) => cmd_gabor(c),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(a) => cmd_generate(a),
        Command::ImportCsv(a) => {
            ensure_distinct(&a.input, &a.output)?;
            let s: QSignal2D<f64> = import_csv(&a.input).stage("import csv")?;
            save(&a.output, &s).stage("write output")
        }
        Command::ExportCsv(a) => {
            ensure_distinct(&a.input, &a.output)?;
            export_csv(&a.output, &load_signal(&a.input)?).stage("export csv")
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("QLCT_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| usage("QLCT_THREADS", format!("expected a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage("QLCT_THREADS", e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qlct: {}: {}", f.stage, f.msg);
            ExitCode::from(f.code)
        }
    }
}
