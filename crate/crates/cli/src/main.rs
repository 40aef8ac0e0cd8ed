//! `otw`: solve, verify, decompose, generate and benchmark orienteering
//! instances with time windows.
//!
//! Exit codes: 0 on success, 1 on usage or precondition errors, 2 when the
//! instance admits no feasible walk.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orient_tw::algorithms::{Algorithm, SolverContext};
use orient_tw::bench::{run_bench, BenchSpec};
use orient_tw::brute::brute_force_opt;
use orient_tw::decomposition::{
    dyadic_family, five_split, length_bands, three_split_ceil, three_split_floor, RestrictedFamily,
};
use orient_tw::generate::{generate_instance, Family, GenSpec};
use orient_tw::io::{read_instance, serialize_instance};
use orient_tw::modular::DpMode;
use orient_tw::oracles::{
    DeadlineOracle, ExactDeadline, ExactOrienteering, GreedyOrienteering, LayeredDeadline, OrienteeringOracle,
};
use orient_tw::rational::{format_rational, parse_rational};
use orient_tw::{Error, Rational, TwInstance, WaitPolicy};

#[derive(Parser)]
#[command(name = "otw", version, about = "Orienteering with time windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an approximation algorithm.
    Solve(SolveArgs),
    /// Solve exactly by exhaustive search.
    Exact(ExactArgs),
    /// Print the restricted versions of a split.
    Decompose(DecomposeArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Compare algorithms with the exact optimum on generated instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct WaitFlags {
    /// Allow waiting (overrides the file).
    #[arg(long, conflicts_with = "no_wait")]
    wait: bool,
    /// Forbid waiting (overrides the file).
    #[arg(long)]
    no_wait: bool,
}

impl WaitFlags {
    fn apply(&self, x: &mut TwInstance) {
        if self.wait {
            x.wait = WaitPolicy::Wait;
        } else if self.no_wait {
            x.wait = WaitPolicy::NoWait;
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    IntegerEndpoints,
    L2,
    General,
    FreeL2,
    FreeGeneral,
    Auto,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Algorithm {
        match a {
            AlgorithmArg::IntegerEndpoints => Algorithm::IntegerEndpoints,
            AlgorithmArg::L2 => Algorithm::LLe2,
            AlgorithmArg::General => Algorithm::General,
            AlgorithmArg::FreeL2 => Algorithm::FreeLLe2,
            AlgorithmArg::FreeGeneral => Algorithm::FreeGeneral,
            AlgorithmArg::Auto => Algorithm::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeadlineArg {
    Exact,
    Layered,
}

#[derive(Clone, Copy, ValueEnum)]
enum DpArg {
    Reward,
    Time,
    Pareto,
}

#[derive(Args)]
struct OracleFlags {
    /// Orienteering oracle used inside blocks.
    #[arg(long, value_enum, default_value = "exact")]
    oracle: OracleArg,
    /// Deadline oracle used for release groups.
    #[arg(long, value_enum, default_value = "exact")]
    deadline_oracle: DeadlineArg,
    /// Modular composition.
    #[arg(long, value_enum, default_value = "reward")]
    dp: DpArg,
}

impl OracleFlags {
    fn context(&self) -> SolverContext {
        let oracle: Arc<dyn OrienteeringOracle> = match self.oracle {
            OracleArg::Exact => Arc::new(ExactOrienteering),
            OracleArg::Greedy => Arc::new(GreedyOrienteering),
        };
        let deadline: Arc<dyn DeadlineOracle> = match self.deadline_oracle {
            DeadlineArg::Exact => Arc::new(ExactDeadline),
            DeadlineArg::Layered => Arc::new(LayeredDeadline::new(oracle.clone())),
        };
        let mode = match self.dp {
            DpArg::Reward => DpMode::RewardIndexed,
            DpArg::Time => DpMode::TimeIndexed,
            DpArg::Pareto => DpMode::ExactPareto,
        };
        SolverContext { oracle, deadline, mode }
    }

    fn name(&self) -> String {
        let ctx = self.context();
        format!("{}+{}", ctx.oracle.spec().name, ctx.deadline.spec().name)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "auto")]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    oracles: OracleFlags,
    #[command(flatten)]
    wait: WaitFlags,
    instance: PathBuf,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    wait: WaitFlags,
    instance: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Dyadic,
    Floor,
    Ceil,
    Five,
    Bands,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_enum, default_value = "dyadic")]
    split: SplitArg,
    instance: PathBuf,
}

#[derive(Args)]
struct GenerateFlags {
    /// Shortest window length.
    #[arg(long, default_value = "1")]
    l_lo: String,
    /// Longest window length.
    #[arg(long, default_value = "4")]
    l_hi: String,
    /// Windows end by this time.
    #[arg(long, default_value = "8")]
    horizon: String,
    /// Lengths and releases are multiples of 1/grain.
    #[arg(long, default_value_t = 1)]
    grain: i128,
    #[arg(long, default_value_t = 1)]
    max_reward: i128,
    /// No start or end anchor.
    #[arg(long)]
    free: bool,
}

impl GenerateFlags {
    fn template(&self, family: Family, n: usize, seed: u64) -> Result<GenSpec, Error> {
        Ok(GenSpec {
            family,
            n,
            l_lo: number(&self.l_lo)?,
            l_hi: number(&self.l_hi)?,
            horizon: number(&self.horizon)?,
            grain: self.grain,
            max_reward: self.max_reward,
            anchored: !self.free,
            seed,
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    shape: GenerateFlags,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated families; empty for none.
    #[arg(long, default_value = "line")]
    families: String,
    /// Comma-separated instance sizes.
    #[arg(long, default_value = "6")]
    sizes: String,
    /// Seeds as `a..b` or a comma-separated list.
    #[arg(long, default_value = "0..10")]
    seeds: String,
    /// Comma-separated algorithm names.
    #[arg(long, default_value = "general")]
    algorithms: String,
    #[command(flatten)]
    shape: GenerateFlags,
    #[command(flatten)]
    oracles: OracleFlags,
    /// Add wall-clock times to the rows.
    #[arg(long)]
    timings: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn number(text: &str) -> Result<Rational, Error> {
    parse_rational(text, 6)
}

fn list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn seeds(text: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Argument(format!("cannot read seeds {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    list(text).map(|s| s.parse().map_err(|_| bad())).collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, wait: &WaitFlags) -> Result<TwInstance, Error> {
    let mut x = read_instance(path)?;
    wait.apply(&mut x);
    Ok(x)
}

fn describe(family: &RestrictedFamily) -> String {
    let mut out = format!("beta: {}\nscale: {}\n", family.beta(), format_rational(&family.scale));
    for (label, v) in &family.versions {
        out.push_str(&format!("{label}:"));
        for u in v.active() {
            out.push_str(&format!(" {u}{}", v.windows[u]));
        }
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve(a) => {
            let x = load(&a.instance, &a.wait)?;
            let report = Algorithm::from(a.algorithm).run(&x, &a.oracles.context())?;
            print!("{}", report.render());
            eprintln!("elapsed: {} ms", report.elapsed.as_millis());
        }
        Command::Exact(a) => {
            let x = load(&a.instance, &a.wait)?;
            let sol = brute_force_opt(&x)?;
            println!("reward: {}", format_rational(&sol.reward));
            println!("walk: {sol}");
        }
        Command::Decompose(a) => {
            let x = read_instance(&a.instance)?;
            let family = match a.split {
                SplitArg::Dyadic => dyadic_family(&x)?,
                SplitArg::Floor => three_split_floor(&x)?,
                SplitArg::Ceil => three_split_ceil(&x)?,
                SplitArg::Five => five_split(&x)?,
                SplitArg::Bands => length_bands(&x)?,
            };
            family.verify()?;
            print!("{}", describe(&family));
        }
        Command::Gen(a) => {
            let family: Family = a.family.parse()?;
            let x = generate_instance(&a.shape.template(family, a.n, a.seed)?)?;
            emit(&a.out, &serialize_instance(&x))?;
        }
        Command::Bench(a) => {
            let families = list(&a.families).map(str::parse).collect::<Result<Vec<Family>, _>>()?;
            let sizes = list(&a.sizes)
                .map(|s| s.parse().map_err(|_| Error::Argument(format!("bad size {s:?}"))))
                .collect::<Result<Vec<usize>, _>>()?;
            let algorithms = list(&a.algorithms)
                .map(|s| Algorithm::parse(s).ok_or_else(|| Error::Argument(format!("unknown algorithm {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = BenchSpec {
                families,
                sizes,
                seeds: seeds(&a.seeds)?,
                algorithms,
                template: a.shape.template(Family::Line, 1, 0)?,
                oracle: a.oracles.name(),
                timings: a.timings,
            };
            let out = run_bench(&spec, &a.oracles.context())?;
            emit(&a.out, &out.csv)?;
            eprintln!("{}", out.summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_infeasible() { 2 } else { 1 })
        }
    }
}
