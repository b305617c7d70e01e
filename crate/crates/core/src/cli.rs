//! The `grovemaze` command line. Exit codes: 0 success, 1 verification
//! failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigBuilder, MazeSource, OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::fitness::FitnessFormula;
use crate::grover::{dynamics, write_dynamics_csv, GroverGeometry};
use crate::maze::{Cell, Maze};
use crate::resources::{check_asymptotics, measure, predict, render_table, ScalingSweep};
use crate::search::{run_adaptive, SearchOutcome};
use crate::verify::{run_all, VerifyLimits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "grovemaze", version, about = "Grover-style adaptive search over maze paths, simulated exactly")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a perfect maze and write it in the text format.
    Generate(GenerateArgs),
    /// Run the adaptive-cutoff search; writes the round trace.
    Solve(SolveArgs),
    /// Marked probability per iteration: closed form against simulation.
    Dynamics(DynamicsArgs),
    /// Exhaustive circuit-against-reference checks.
    Verify(VerifyArgs),
    /// Predicted and measured qubit and gate budgets.
    Resources(ResourcesArgs),
    /// Many independent solves with seeds split from one master seed.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `row,col`
    #[arg(long)]
    start: Option<String>,
    /// `row,col`
    #[arg(long)]
    goal: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchFlags {
    /// Flat key = value file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    maze: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    maze_seed: Option<String>,
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    goal: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    cutoff0: Option<String>,
    #[arg(long)]
    rounds: Option<String>,
    /// `auto` or shots per round.
    #[arg(long)]
    samples: Option<String>,
    /// wall-aware | bounds | blind
    #[arg(long)]
    mode: Option<String>,
    /// maintext | appendix
    #[arg(long)]
    formula: Option<String>,
    /// known-k | guessed-k
    #[arg(long)]
    policy: Option<String>,
    /// strict | ge-at-max
    #[arg(long)]
    strictness: Option<String>,
    /// Keep running rounds after the optimum is sampled.
    #[arg(long)]
    no_stop: bool,
    #[arg(long)]
    out: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

impl SearchFlags {
    fn into_config(self) -> Result<RunConfig> {
        let mut b = match &self.config {
            Some(p) => ConfigBuilder::load(p)?,
            None => ConfigBuilder::new(),
        };
        let pairs = [
            ("maze", self.maze),
            ("m", self.m),
            ("maze_seed", self.maze_seed),
            ("start", self.start),
            ("goal", self.goal),
            ("n", self.n),
            ("seed", self.seed),
            ("epsilon", self.epsilon),
            ("cutoff0", self.cutoff0),
            ("rounds", self.rounds),
            ("samples", self.samples),
            ("mode", self.mode),
            ("formula", self.formula),
            ("policy", self.policy),
            ("strictness", self.strictness),
            ("out", self.out),
            ("format", self.format),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                b.set(k, &v)?;
            }
        }
        if self.no_stop {
            b.set("stop_at_optimum", "false")?;
        }
        b.build()
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    flags: SearchFlags,
}

#[derive(Debug, Args)]
struct DynamicsArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u64,
    /// Defaults to 3·r* (at least 1).
    #[arg(long)]
    r_max: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[arg(long, default_value_t = 4)]
    m_max: usize,
    /// Largest comparator width checked exhaustively.
    #[arg(long, default_value_t = 6)]
    width: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print the report as JSON instead of one line per suite.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct ResourcesArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value = "maintext")]
    formula: String,
    /// csv | json; a table when absent.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    flags: SearchFlags,
    #[arg(long, default_value_t = 50)]
    runs: u64,
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a.flags.into_config()?),
        Command::Dynamics(a) => cmd_dynamics(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Resources(a) => cmd_resources(a),
        Command::Sweep(a) => cmd_sweep(a.flags.into_config()?, a.runs),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn parse_cell(s: &str) -> Result<Cell> {
    let (r, c) = s.split_once(',').ok_or_else(|| Error::invalid(format!("expected row,col, got {s:?}")))?;
    let p = |v: &str| v.trim().parse::<i32>().map_err(|_| Error::invalid(format!("bad coordinate {v:?}")));
    Ok(Cell::new(p(r)?, p(c)?))
}

fn cmd_generate(a: GenerateArgs) -> Result<i32> {
    let mut maze = Maze::generate(a.m, a.seed)?;
    if a.start.is_some() || a.goal.is_some() {
        let s = a.start.as_deref().map(parse_cell).transpose()?.unwrap_or(maze.start());
        let g = a.goal.as_deref().map(parse_cell).transpose()?.unwrap_or(maze.goal());
        maze = maze.with_endpoints(s, g)?;
    }
    emit(a.out.as_deref(), maze.serialize().as_bytes())?;
    Ok(EXIT_OK)
}

/// Trace bytes for a solve: CSV rows or the full JSON outcome.
pub fn render_outcome(outcome: &SearchOutcome, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            outcome.trace.write_csv(&mut buf)?;
            Ok(buf)
        }
        OutputFormat::Json => {
            let mut s = outcome.to_json()?;
            s.push('\n');
            Ok(s.into_bytes())
        }
    }
}

pub fn summary(outcome: &SearchOutcome) -> String {
    let best = match &outcome.best {
        Some(b) => format!("{} ({}), fitness {}", b.letters, b.bits, b.fitness),
        None => "none".to_string(),
    };
    format!(
        "status: {}\nbest path: {best}\nf_max: {}\nrounds used: {} of {}\nsuccess: {}\n",
        outcome.trace.status.name(),
        outcome.f_max,
        outcome.rounds_used(),
        outcome.round_cap,
        outcome.success
    )
}

fn solve_once(cfg: &RunConfig) -> Result<SearchOutcome> {
    let maze = cfg.load_maze()?;
    let spec = cfg.fitness_spec(&maze)?;
    run_adaptive(&maze, cfg.n, &spec, &cfg.search)
}

fn cmd_solve(cfg: RunConfig) -> Result<i32> {
    let outcome = solve_once(&cfg)?;
    emit(cfg.out.as_deref(), &render_outcome(&outcome, cfg.format)?)?;
    eprint!("{}", summary(&outcome));
    Ok(EXIT_OK)
}

fn cmd_dynamics(a: DynamicsArgs) -> Result<i32> {
    let g = GroverGeometry::new(a.n, a.k)?;
    if a.k == 0 {
        return Err(Error::invalid("k must be ≥ 1"));
    }
    let r_max = a.r_max.unwrap_or_else(|| (3 * g.optimal_rounds().unwrap_or(0)).max(1));
    let rows = dynamics(a.n, a.k, r_max)?;
    let mut buf = Vec::new();
    write_dynamics_csv(&rows, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let format: Option<OutputFormat> = a.format.as_deref().map(str::parse).transpose()?;
    let limits = VerifyLimits { n_max: a.n_max, m_max: a.m_max, comparator_width: a.width, seed: a.seed };
    let report = run_all(&limits)?;
    if format == Some(OutputFormat::Json) {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for s in &report.suites {
            println!("{}", s.line());
        }
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_resources(a: ResourcesArgs) -> Result<i32> {
    let formula: FitnessFormula = a.formula.parse()?;
    let format: Option<OutputFormat> = a.format.as_deref().map(str::parse).transpose()?;
    let predicted = predict(a.n, a.m, formula)?;
    let measured = measure(a.n, a.m, formula)?;
    let sweep = ScalingSweep { m: a.m, ..Default::default() };
    let scaling = check_asymptotics(&sweep)?;
    match format {
        Some(OutputFormat::Json) => {
            #[derive(Serialize)]
            struct Out<'a> {
                predicted: &'a crate::resources::ResourceReport,
                measured: &'a crate::resources::ResourceReport,
                scaling: &'a [crate::resources::ScalingCheck],
            }
            let out = Out { predicted: &predicted, measured: &measured, scaling: &scaling };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Some(OutputFormat::Csv) => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["quantity", "predicted", "measured"])?;
            let rows = [
                ("path_qubits", predicted.widths.path, measured.widths.path),
                ("position_qubits", predicted.widths.position, measured.widths.position),
                ("distance_qubits", predicted.widths.distance, measured.widths.distance),
                ("fitness_qubits", predicted.widths.fitness, measured.widths.fitness),
                ("ancilla_qubits", predicted.widths.ancilla, measured.widths.ancilla),
                ("total_qubits", predicted.total_qubits, measured.total_qubits),
                ("path_sim_toffoli", predicted.path_simulation.toffoli, measured.path_simulation.toffoli),
                ("comparator_toffoli", predicted.comparator.toffoli, measured.comparator.toffoli),
                ("oracle_toffoli", predicted.oracle.toffoli, measured.oracle.toffoli),
                ("oracle_cnot", predicted.oracle.cnot, measured.oracle.cnot),
                ("oracle_not", predicted.oracle.not, measured.oracle.not),
            ];
            for (q, p, m) in rows {
                w.write_record([q.to_string(), p.to_string(), m.to_string()])?;
            }
            w.flush()?;
        }
        None => {
            print!("{}", render_table(&predicted, &measured));
            for c in &scaling {
                println!(
                    "{} {}: slope {:.3}, intercept {:.3}, residual ratio {:.4}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.claim,
                    c.fit.slope,
                    c.fit.intercept,
                    c.fit.residual_ratio
                );
            }
        }
    }
    Ok(EXIT_OK)
}

/// Seeds for run `j` of a sweep: two draws from `ChaCha8Rng(master)` on
/// stream `j`, the first for the maze and the second for the search.
pub fn split_seed(master: u64, j: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(j);
    (rng.next_u64(), rng.next_u64())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub run: u64,
    pub maze_seed: Option<u64>,
    pub search_seed: u64,
    pub status: String,
    pub best_path: String,
    pub best_fitness: Option<i64>,
    pub f_max: i64,
    pub rounds: usize,
    pub strict_increases: usize,
    pub success: bool,
}

pub fn sweep(cfg: &RunConfig, runs: u64) -> Result<Vec<SweepRow>> {
    (0..runs)
        .into_par_iter()
        .map(|j| {
            let (maze_seed, search_seed) = split_seed(cfg.search.seed, j);
            let mut c = cfg.clone();
            c.search.seed = search_seed;
            let maze_seed = match &mut c.maze {
                MazeSource::Generated { seed, .. } => {
                    *seed = maze_seed;
                    Some(maze_seed)
                }
                MazeSource::File(_) => None,
            };
            let o = solve_once(&c)?;
            Ok(SweepRow {
                run: j,
                maze_seed,
                search_seed,
                status: o.trace.status.name().to_string(),
                best_path: o.best.as_ref().map_or(String::new(), |b| b.letters.clone()),
                best_fitness: o.best.as_ref().map(|b| b.fitness),
                f_max: o.f_max,
                rounds: o.rounds_used(),
                strict_increases: o.trace.strict_increases(),
                success: o.success,
            })
        })
        .collect()
}

fn cmd_sweep(cfg: RunConfig, runs: u64) -> Result<i32> {
    if runs == 0 {
        return Err(Error::invalid("runs must be ≥ 1"));
    }
    let rows = sweep(&cfg, runs)?;
    let bytes = match cfg.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows)?;
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))?
        }
    };
    emit(cfg.out.as_deref(), &bytes)?;
    let ok = rows.iter().filter(|r| r.success).count();
    eprintln!("success: {ok}/{runs} = {:.4} (target ≥ {:.4})", ok as f64 / runs as f64, 1.0 - cfg.search.epsilon);
    Ok(EXIT_OK)
}
