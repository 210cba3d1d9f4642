//! `giep`: build real matrices with a prescribed spectrum and graph.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use giep::apps::{solve_instance, tridiagonalize, verify, VerifyTolerances};
use giep::batch::{map, BatchSummary, Execution};
use giep::graph::{parse_graph, Graph};
use giep::instance::{random_instance, Instance, DEFAULT_SEED};
use giep::model::io::{parse_csv, write_csv, write_matrix_market};
use giep::model::Spectrum;
use giep::solver::{Mode, SolveConfig, SolveReport};
use giep::{Error, ErrorKind};
use log::{info, LevelFilter};
use serde::Serialize;

const EXIT_BAD_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

const SPECTRUM_SUFFIX: &str = ".spectrum.json";
const GRAPH_SUFFIX: &str = ".graph";

#[derive(Parser)]
#[command(name = "giep", version, about = "Real matrices with prescribed eigenvalues and prescribed graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matrix with the given spectrum whose graph is the given graph.
    Solve(SolveArgs),
    /// Replace a matrix with distinct eigenvalues by a similar irreducible tridiagonal one.
    Tridiagonalize(TridiagonalizeArgs),
    /// Check a matrix against a spectrum and a graph.
    Verify(VerifyArgs),
    /// Write a random feasible instance (spectrum and graph files).
    RandomInstance(RandomArgs),
}

#[derive(Args)]
struct SolverFlags {
    /// Slot magnitude as a multiple of the disc radius.
    #[arg(long, default_value_t = 0.1)]
    fill_scale: f64,
    /// Final spectrum tolerance relative to 1 + max |eigenvalue|.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    #[arg(long, default_value_t = 1e-6)]
    step_min: f64,
    /// Seed for randomized tie-breaks (none are used by default).
    #[arg(long)]
    rng_seed: Option<u64>,
}

impl SolverFlags {
    fn config(&self) -> Result<SolveConfig, Failure> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Failure::bad_input(format!("--{name} must be positive and finite, got {v}")))
            }
        };
        Ok(SolveConfig {
            fill_scale: positive("fill-scale", self.fill_scale)?,
            final_rtol: positive("tol", self.tol)?,
            max_steps: self.max_steps,
            step_min: positive("step-min", self.step_min)?,
            rng_seed: self.rng_seed,
            ..SolveConfig::default()
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Spectrum JSON file: {"pairs": [[re, im], ...], "reals": [...]}.
    #[arg(long, required_unless_present = "batch")]
    spectrum: Option<PathBuf>,
    /// Edge-list file.
    #[arg(long, required_unless_present = "batch")]
    graph: Option<PathBuf>,
    /// Output CSV (or output directory with --batch).
    #[arg(long, required_unless_present = "batch")]
    out: Option<PathBuf>,
    #[arg(long, default_value = "generic")]
    mode: Mode,
    /// Run report (JSON).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write the matrix in Matrix Market coordinate format.
    #[arg(long)]
    matrix_market: Option<PathBuf>,
    /// Solve every `<name>.spectrum.json` + `<name>.graph` pair in a directory.
    #[arg(long, conflicts_with_all = ["spectrum", "graph", "report", "matrix_market"])]
    batch: Option<PathBuf>,
    /// Worker threads for --batch (default: all cores).
    #[arg(long, requires = "batch")]
    jobs: Option<usize>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct TridiagonalizeArgs {
    /// Input matrix CSV.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    spectrum: PathBuf,
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    /// Number of conjugate pairs; the rest of the spectrum is real.
    #[arg(long)]
    k: usize,
    /// Probability of each edge beyond the planted matching.
    #[arg(long)]
    edge_prob: f64,
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Files are written as `<prefix>.spectrum.json` and `<prefix>.graph`.
    #[arg(long)]
    out_prefix: PathBuf,
    /// Draw each direction of the extra edges independently.
    #[arg(long)]
    directed: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn bad_input(message: String) -> Self {
        Failure {
            code: EXIT_BAD_INPUT,
            message,
        }
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::BadInput => EXIT_BAD_INPUT,
        ErrorKind::Infeasible => EXIT_INFEASIBLE,
        ErrorKind::Numerical => EXIT_NUMERICAL,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(e.kind()),
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::bad_input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::bad_input(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("value serializes") + "\n"
}

fn load_spectrum(path: &Path) -> Result<Spectrum, Failure> {
    Spectrum::from_json(&read(path)?)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn write_solution(rep: &SolveReport, out: &Path, report: Option<&Path>, mm: Option<&Path>) -> Result<(), Failure> {
    write(out, &write_csv(&rep.matrix))?;
    if let Some(path) = report {
        write(path, &to_json(rep))?;
    }
    if let Some(path) = mm {
        write(path, &write_matrix_market(&rep.matrix))?;
    }
    info!(
        "solved: residual {:.3e}, {} steps ({} rejected), {} Newton iterations",
        rep.residual, rep.steps, rep.rejected_steps, rep.newton_iterations_total
    );
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let cfg = args.solver.config()?;
    if let Some(dir) = &args.batch {
        return cmd_solve_batch(dir, args.out.as_deref().unwrap_or(dir), args.mode, &cfg, args.jobs);
    }
    let (spectrum, graph, out) = match (&args.spectrum, &args.graph, &args.out) {
        (Some(s), Some(g), Some(o)) => (s, g, o),
        _ => return Err(Failure::bad_input("--spectrum, --graph and --out are required".into())),
    };
    let s = load_spectrum(spectrum)?;
    let g = load_graph(graph)?;
    let rep = solve_instance(&s, &g, args.mode, &cfg)?;
    write_solution(&rep, out, args.report.as_deref(), args.matrix_market.as_deref())
}

#[derive(Serialize)]
struct BatchEntry {
    name: String,
    exit_code: u8,
    message: Option<String>,
    residual: Option<f64>,
    steps: Option<usize>,
}

#[derive(Serialize)]
struct BatchFile {
    summary: BatchSummary,
    instances: Vec<BatchEntry>,
}

fn batch_names(dir: &Path) -> Result<Vec<String>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::bad_input(format!("cannot list {}: {e}", dir.display())))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().map(str::to_owned))
        .filter_map(|f| f.strip_suffix(SPECTRUM_SUFFIX).map(str::to_owned))
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(Failure::bad_input(format!("no *{SPECTRUM_SUFFIX} files in {}", dir.display())));
    }
    Ok(names)
}

fn cmd_solve_batch(dir: &Path, out: &Path, mode: Mode, cfg: &SolveConfig, jobs: Option<usize>) -> Result<(), Failure> {
    let names = batch_names(dir)?;
    fs::create_dir_all(out).map_err(|e| Failure::bad_input(format!("cannot create {}: {e}", out.display())))?;
    let exec = jobs.map_or(Execution::Parallel, Execution::Threads);
    info!("solving {} instances from {}", names.len(), dir.display());

    let results = map(&names, exec, |name| -> Result<(SolveReport, bool), Failure> {
        let s = load_spectrum(&dir.join(format!("{name}{SPECTRUM_SUFFIX}")))?;
        let g = load_graph(&dir.join(format!("{name}{GRAPH_SUFFIX}")))?;
        let rep = solve_instance(&s, &g, mode, cfg)?;
        write_solution(&rep, &out.join(format!("{name}.csv")), Some(&out.join(format!("{name}.report.json"))), None)?;
        let passed = verify(&rep.matrix, &s, &g, &VerifyTolerances::for_spectrum(&s)).passed;
        Ok((rep, passed))
    });

    let mut summary = BatchSummary {
        total: names.len(),
        ..Default::default()
    };
    let mut worst = 0;
    let instances: Vec<BatchEntry> = names
        .iter()
        .zip(&results)
        .map(|(name, r)| match r {
            Ok((rep, passed)) => {
                summary.succeeded += 1;
                summary.verified += usize::from(*passed);
                BatchEntry {
                    name: name.clone(),
                    exit_code: 0,
                    message: None,
                    residual: Some(rep.residual),
                    steps: Some(rep.steps),
                }
            }
            Err(f) => {
                match f.code {
                    EXIT_INFEASIBLE => summary.infeasible += 1,
                    EXIT_NUMERICAL => summary.numerical += 1,
                    _ => summary.bad_input += 1,
                }
                worst = worst.max(f.code);
                eprintln!("{name}: {}", f.message);
                BatchEntry {
                    name: name.clone(),
                    exit_code: f.code,
                    message: Some(f.message.clone()),
                    residual: None,
                    steps: None,
                }
            }
        })
        .collect();
    write(&out.join("summary.json"), &to_json(&BatchFile { summary: summary.clone(), instances }))?;
    println!(
        "{} of {} instances solved, {} verified ({} infeasible, {} numerical failures, {} bad input)",
        summary.succeeded, summary.total, summary.verified, summary.infeasible, summary.numerical, summary.bad_input
    );
    if worst == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: worst,
            message: format!("{} of {} instances failed", summary.total - summary.succeeded, summary.total),
        })
    }
}

fn cmd_tridiagonalize(args: &TridiagonalizeArgs) -> Result<(), Failure> {
    let cfg = args.solver.config()?;
    let text = read(&args.matrix)?;
    let m = parse_csv(&text).map_err(|e| Failure::bad_input(format!("{}: {e}", args.matrix.display())))?;
    if !m.is_square() {
        return Err(Failure::bad_input(format!(
            "{}: matrix is {}x{}, expected square",
            args.matrix.display(),
            m.rows(),
            m.cols()
        )));
    }
    let rep = tridiagonalize(&m, &cfg)?;
    write_solution(&rep, &args.out, args.report.as_deref(), None)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let m = parse_csv(&read(&args.matrix)?)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", args.matrix.display())))?;
    let s = load_spectrum(&args.spectrum)?;
    let g = load_graph(&args.graph)?;
    let r = verify(&m, &s, &g, &VerifyTolerances::for_spectrum(&s));
    print!("{}", to_json(&r));
    if !r.dimensions_ok {
        return Err(Failure::bad_input(r.notes.join("; ")));
    }
    if r.passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: format!(
                "verification failed: {} pattern violations, spectrum {}",
                r.pattern_violations.len(),
                if r.spectrum_ok { "ok" } else { "mismatch" }
            ),
        })
    }
}

fn cmd_random_instance(args: &RandomArgs) -> Result<(), Failure> {
    let seed = args.rng_seed.unwrap_or_else(|| {
        eprintln!("using default seed {DEFAULT_SEED}");
        DEFAULT_SEED
    });
    let Instance { spectrum, graph } =
        random_instance(args.n, args.k, args.edge_prob, seed, args.directed).map_err(Failure::from)?;
    let prefix = args.out_prefix.display().to_string();
    let spath = PathBuf::from(format!("{prefix}{SPECTRUM_SUFFIX}"));
    let gpath = PathBuf::from(format!("{prefix}{GRAPH_SUFFIX}"));
    write(&spath, &(spectrum.to_json() + "\n"))?;
    write(&gpath, &graph.to_edge_list())?;
    println!("wrote {} and {}", spath.display(), gpath.display());
    Ok(())
}

fn init_logging() {
    let level = match std::env::var("GIEP_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("trace") => LevelFilter::Trace,
        Ok("info") | Err(_) => LevelFilter::Info,
        Ok(other) => {
            eprintln!("GIEP_LOG={other} not recognized (quiet|info|trace), using info");
            LevelFilter::Info
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_BAD_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    init_logging();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Tridiagonalize(a) => cmd_tridiagonalize(a),
        Command::Verify(a) => cmd_verify(a),
        Command::RandomInstance(a) => cmd_random_instance(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
