use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use gridpolicy::bench::{default_suite, parse_suite, run_suite, write_csv};
use gridpolicy::dsl::parse;
use gridpolicy::pipeline::{default_limits, run_pipeline, Outcome};
use gridpolicy::reachtree::{build_tree, tree_to_dot, Limits};
use gridpolicy::runtime::{dump_trajectory, first_illegal_move, run, RunStatus};
use gridpolicy::svg::{parse_trajectory, render_svg};
use gridpolicy::world::{build_subdivision, export_prism, generate_random, load, save, GenerateOptions, Gridworld};

const EXIT_USAGE: u8 = 1;
const EXIT_UNWINNABLE: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "gridpolicy", version, about = "Synthesize and check subgoal policies for polygonal gridworlds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random world cut by straight chords.
    Generate(GenerateArgs),
    /// Build the backward tree and synthesize a policy.
    Synthesize(SynthesizeArgs),
    /// Run a policy and check that it reaches the target with legal moves.
    Verify(VerifyArgs),
    /// Export a world as PRISM, SVG or a DOT tree.
    Export(ExportArgs),
    /// Run a benchmark suite and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Grid side.
    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    /// Number of chords.
    #[arg(short = 'p', long = "predicates", value_parser = clap::value_parser!(u32).range(1..))]
    predicates: u32,
    #[arg(long, env = "GRIDPOLICY_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    #[arg(long)]
    allow_empty_cones: bool,
    #[arg(long)]
    interior_initial: bool,
}

#[derive(Args)]
struct SynthesizeArgs {
    world: PathBuf,
    /// Policy output; stdout when absent.
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Coordinate denominator width at which a chain is abandoned; 0 for no limit.
    #[arg(long)]
    max_bits: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    world: PathBuf,
    policy: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    max_moves: usize,
    /// Write the trajectory, one point per line.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("format").required(true).args(["prism", "svg", "dot"])))]
struct ExportArgs {
    world: PathBuf,
    /// PRISM model at this many lattice steps per unit.
    #[arg(long, value_name = "RES", value_parser = clap::value_parser!(u32).range(1..))]
    prism: Option<u32>,
    /// SVG picture, with an optional trajectory file drawn on top.
    #[arg(long, value_name = "TRAJECTORY", num_args = 0..=1, default_missing_value = "")]
    svg: Option<String>,
    /// Backward tree in DOT.
    #[arg(long)]
    dot: bool,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite file; the built-in suite when absent.
    #[arg(long)]
    suite: Option<PathBuf>,
    /// Offset for the built-in suite's seeds.
    #[arg(long, env = "GRIDPOLICY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    /// Run instances one at a time.
    #[arg(long)]
    sequential: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_world(path: &Path) -> Result<Gridworld, Failure> {
    let text = read(path)?;
    let world = load(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if let Some(v) = world.validate().first() {
        return Err(Failure::usage(format!("{}: invalid world: {v}", path.display())));
    }
    Ok(world)
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let opts = GenerateOptions { allow_empty_cones: a.allow_empty_cones, interior_initial: a.interior_initial };
    let world = generate_random(a.n, a.predicates, a.seed, &opts);
    emit(a.out.as_deref(), &save(&world))?;
    eprintln!("{} regions", world.regions.len());
    Ok(())
}

fn cmd_synthesize(a: SynthesizeArgs) -> CmdResult {
    let world = load_world(&a.world)?;
    let mut limits = default_limits(&world);
    if let Some(d) = a.max_depth {
        limits.max_depth = d;
    }
    if let Some(n) = a.max_nodes {
        limits.max_nodes = n;
    }
    if let Some(b) = a.max_bits {
        limits.max_bits = (b > 0).then_some(b);
    }
    let run = run_pipeline(&world, &limits).map_err(|e| Failure::usage(e.to_string()))?;
    let nodes = run.tree.node_count();
    match (run.outcome, run.program, run.branch) {
        (Outcome::Synthesized, Some(program), Some(branch)) => {
            let size = program.size();
            emit(a.out.as_deref(), &program.to_string())?;
            eprintln!("tree nodes {nodes}, p {}, instructions {}, bytes {}", branch.p(), size.instructions, size.bytes);
            Ok(())
        }
        (Outcome::Truncated, ..) => Err(Failure { code: EXIT_TRUNCATED, message: format!("truncated after {nodes} tree nodes") }),
        _ => Err(Failure { code: EXIT_UNWINNABLE, message: format!("unwinnable: initial state not reached by {nodes} tree nodes") }),
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let world = load_world(&a.world)?;
    let text = read(&a.policy)?;
    let program = parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.policy.display())))?;
    let r = run(&world, &program, &world.initial, a.max_moves);
    if let Some(path) = &a.trajectory {
        emit(Some(path), &dump_trajectory(&r.points))?;
    }
    if let Some(k) = first_illegal_move(&world, &r) {
        return Err(Failure { code: EXIT_VERIFY, message: format!("illegal move {} from {} to {}", k + 1, r.points[k], r.points[k + 1]) });
    }
    let moves = r.moves();
    match r.status {
        RunStatus::Reached => {
            println!("Reached in {moves} moves");
            Ok(())
        }
        RunStatus::Stuck { at, block } => {
            Err(Failure { code: EXIT_VERIFY, message: format!("Stuck at {at} in block {block} after {moves} moves") })
        }
        RunStatus::Truncated => Err(Failure { code: EXIT_VERIFY, message: format!("Truncated after {moves} moves") }),
    }
}

fn cmd_export(a: ExportArgs) -> CmdResult {
    let world = load_world(&a.world)?;
    let text = if let Some(res) = a.prism {
        export_prism(&world, res)
    } else if let Some(traj) = &a.svg {
        let points = if traj.is_empty() {
            None
        } else {
            Some(parse_trajectory(&read(Path::new(traj))?).map_err(|e| Failure::usage(format!("{traj}: {e}")))?)
        };
        render_svg(&world, points.as_deref())
    } else {
        let sub = build_subdivision(&world).map_err(|e| Failure::usage(e.to_string()))?;
        tree_to_dot(&build_tree(&world, &sub, &Limits::for_world(&world)))
    };
    emit(a.out.as_deref(), &text)
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let entries = match &a.suite {
        Some(p) => parse_suite(&read(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        None => default_suite(a.seed),
    };
    let results = run_suite(&entries, !a.sequential);
    let records: Vec<_> = results.into_iter().map(|r| r.record).collect();
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).map_err(|e| Failure::usage(e.to_string()))?;
    emit(a.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Synthesize(a) => cmd_synthesize(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Export(a) => cmd_export(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
