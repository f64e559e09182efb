//! `pfsim`: run, verify, generate and render pattern-formation scenarios.

use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pf_core::format::{emit_scenario, parse_scenario};
use pf_core::generate::generate;
use pf_core::render::render_trace;
use pf_core::simulator::{run, ExecutionTrace, Outcome, Scenario, SchedulerKind};
use pf_core::verifier::{check_trace, CheckOptions, TransitionGraph};
use pf_core::{Error, Tolerance};

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATIONS: u8 = 5;

#[derive(Parser)]
#[command(name = "pfsim", version, about = "Pattern formation by asynchronous oblivious robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write its JSONL trace.
    ///
    /// Exit status: 0 formed, 1 bad input, 2 unsolvable, 3 needs a delegated
    /// solver, 4 event limit or stall.
    Run(RunArgs),
    /// Check a trace against the transition graph and print a violations report.
    ///
    /// Exit status: 0 clean, 1 malformed input, 5 violations found.
    Verify {
        trace: PathBuf,
        scenario: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write the observed transition graph as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Generate a random solvable scenario.
    Gen {
        #[arg(short)]
        n: usize,
        /// Symmetricity of the pattern.
        #[arg(long = "rho")]
        rho: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Permit ρ(F) = 1, which needs a leader-election solver to run.
        #[arg(long)]
        allow_delegated: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write one SVG per Look event of a trace.
    Render {
        trace: PathBuf,
        scenario: PathBuf,
        #[arg(short, long, default_value = "frames")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file, or several with --batch.
    #[arg(required = true)]
    scenarios: Vec<PathBuf>,
    /// Trace file (a directory with --batch).
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// fsync, ssync, sasync or async.
    #[arg(long, value_parser = parse_kind)]
    scheduler: Option<SchedulerKind>,
    /// Never stop a robot before the end of its trajectory.
    #[arg(long)]
    rigid: bool,
    #[arg(long)]
    max_events: Option<usize>,
    /// Length and angle tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Run every scenario given, on all cores.
    #[arg(long)]
    batch: bool,
}

fn parse_kind(s: &str) -> Result<SchedulerKind, String> {
    SchedulerKind::parse(s).ok_or_else(|| format!("unknown scheduler {s:?} (fsync, ssync, sasync, async)"))
}

fn fail(path: &Path, e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {}: {e}", path.display());
    EXIT_INPUT
}

fn load_scenario(path: &Path) -> Result<Scenario, u8> {
    let text = fs::read_to_string(path).map_err(|e| fail(path, e))?;
    parse_scenario(&text).map_err(|e| fail(path, e))
}

fn load_trace(path: &Path) -> Result<ExecutionTrace, u8> {
    let file = fs::File::open(path).map_err(|e| fail(path, e))?;
    ExecutionTrace::read_jsonl(BufReader::new(file)).map_err(|e| fail(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), u8> {
    fs::write(path, contents).map_err(|e| fail(path, e))
}

// Runs one scenario and returns its exit status.
fn run_one(args: &RunArgs, path: &Path, out: &Path) -> u8 {
    let mut s = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Some(seed) = args.seed {
        s.scheduler.seed = seed;
    }
    if let Some(kind) = args.scheduler {
        s.scheduler.kind = kind;
    }
    if args.rigid {
        s.scheduler.rigid = true;
    }
    if let Some(m) = args.max_events {
        s.limits.max_events = m;
    }
    if let Some(t) = args.tolerance {
        match Tolerance::new(t, t) {
            Ok(t) => s.tolerance = t,
            Err(e) => return fail(path, e),
        }
    }
    let result = match run(&s) {
        Ok(r) => r,
        Err(e) => return fail(path, e),
    };
    let written = fs::File::create(out)
        .map_err(Error::from)
        .and_then(|f| {
            let mut w = BufWriter::new(f);
            result.trace.write_jsonl(&mut w)?;
            w.flush().map_err(Error::from)
        });
    if let Err(e) = written {
        return fail(out, e);
    }
    let class = result.trace.looks().last().and_then(|r| r.task).map_or("-".to_string(), |t| t.to_string());
    let events = result.trace.records.len();
    match result.outcome {
        Outcome::UnsolvableInput => {
            println!("{}: unsolvable-input (ρ(R) does not divide ρ(F)), 0 events", path.display());
        }
        o => println!("{}: {} after {events} events, final class {class}", path.display(), serde_json::to_value(o).unwrap_or_default().as_str().unwrap_or("?")),
    }
    result.outcome.exit_code() as u8
}

fn cmd_run(args: &RunArgs) -> u8 {
    if !args.batch {
        if args.scenarios.len() != 1 {
            eprintln!("error: several scenarios need --batch");
            return EXIT_INPUT;
        }
        let out = args.out.clone().unwrap_or_else(|| PathBuf::from("trace.jsonl"));
        return run_one(args, &args.scenarios[0], &out);
    }
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("traces"));
    if let Err(e) = fs::create_dir_all(&dir) {
        return fail(&dir, e);
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(args.scenarios.len());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let codes: Vec<u8> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut codes = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(path) = args.scenarios.get(i) else { break };
                        let stem = path.file_stem().map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
                        codes.push(run_one(args, path, &dir.join(format!("{stem}.jsonl"))));
                    }
                    codes
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap_or_default()).collect()
    });
    codes.into_iter().max().unwrap_or(0)
}

fn cmd_verify(trace: &Path, scenario: &Path, out: Option<&Path>, dot: Option<&Path>) -> Result<u8, u8> {
    let s = load_scenario(scenario)?;
    let (r, f) = s.prepare().map_err(|e| fail(scenario, e))?;
    let t = load_trace(trace)?;
    let expected = TransitionGraph::expected();
    let report = check_trace(&t, &f, &expected, CheckOptions::for_run(r.len(), s.scheduler.nu)).map_err(|e| fail(trace, e))?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match out {
        Some(p) => write_file(p, &json)?,
        None => print!("{json}"),
    }
    if let Some(p) = dot {
        write_file(p, &report.observed.to_dot(Some(&expected)))?;
    }
    eprintln!("{}: {} looks, {} violations", trace.display(), report.looks, report.violations.len());
    Ok(if report.is_clean() { 0 } else { EXIT_VIOLATIONS })
}

fn cmd_render(trace: &Path, scenario: &Path, out: &Path) -> Result<u8, u8> {
    let s = load_scenario(scenario)?;
    let (_, f) = s.prepare().map_err(|e| fail(scenario, e))?;
    let t = load_trace(trace)?;
    let frames = render_trace(&t, &f).map_err(|e| fail(trace, e))?;
    fs::create_dir_all(out).map_err(|e| fail(out, e))?;
    for (name, svg) in &frames {
        write_file(&out.join(name), svg)?;
    }
    eprintln!("wrote {} frames to {}", frames.len(), out.display());
    Ok(0)
}

fn main() -> ExitCode {
    // Usage errors share status 1 with bad input files; 2 means unsolvable.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let code = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify { trace, scenario, out, dot } => cmd_verify(trace, scenario, out.as_deref(), dot.as_deref()).unwrap_or_else(|c| c),
        Command::Gen { n, rho, seed, allow_delegated, out } => match generate(*n, *rho, *seed, *allow_delegated) {
            Ok(s) => {
                let json = emit_scenario(&s);
                match out {
                    Some(p) => write_file(p, &json).err().unwrap_or(0),
                    None => {
                        let _ = io::stdout().write_all(json.as_bytes());
                        0
                    }
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        },
        Command::Render { trace, scenario, out } => cmd_render(trace, scenario, out).unwrap_or_else(|c| c),
    };
    ExitCode::from(code)
}
