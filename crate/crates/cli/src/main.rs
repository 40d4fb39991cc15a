//! `compind`: generate forests, solve and play games, run the verifiers.
//!
//! Exit status: 0 when everything ran and every check passed, 1 when a
//! verifier reported failures (the report is still written), 2 on usage or
//! I/O errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use compind::engine::play_game;
use compind::forest::parse_graphs;
use compind::generators::{
    enumerate_forests, enumerate_trees, path, random_forest, random_tree, spider_sk, tree_tk, TkLayout,
};
use compind::strategies::{parse_strategy, Greedy};
use compind::verifier::appendix::verify_appendix_grid;
use compind::verifier::bounds::{
    forest_corpus, random_ensemble, sweep_lower_bound, sweep_tk, tree_corpus, LowerBoundOptions,
};
use compind::verifier::lemmas::sweep_lemmas;
use compind::verifier::rounds::sweep_rounds;
use compind::verifier::scans::{scan_conjecture_id, scan_ratio};
use compind::{
    CanonMode, Forest, GameState, Jobs, Mover, SolveConfig, Solver, StrategyParams, TieBreak,
};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "compind", version, about = "Competition-independence game on forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a forest (or a stream of forests) in the text graph format.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Exact game value and the optimal first moves.
    Solve(SolveArgs),
    /// Play one game between two strategies and print its trace.
    Play(PlayArgs),
    /// Run a verifier and write its report.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Family {
    /// Path on n vertices.
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Spider with three-vertex legs, S_k.
    Sk {
        #[arg(long)]
        k: usize,
    },
    /// Two copies of S_k with their centers joined, T_k.
    Tk {
        #[arg(long)]
        k: usize,
    },
    /// Uniform labelled tree from a seeded Prüfer sequence.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random forest with exactly c components.
    Forest {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every tree (or forest) on n vertices up to isomorphism.
    Enum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forests: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Sweller,
    Diminisher,
}

impl From<Start> for Mover {
    fn from(s: Start) -> Mover {
        match s {
            Start::Sweller => Mover::Sweller,
            Start::Diminisher => Mover::Diminisher,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Canon {
    Raw,
    Iso,
}

impl From<Canon> for CanonMode {
    fn from(c: Canon) -> CanonMode {
        match c {
            Canon::Raw => CanonMode::Raw,
            Canon::Iso => CanonMode::Iso,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Weights {
    #[arg(long, default_value_t = 3)]
    alpha_eighths: i64,
    #[arg(long, default_value_t = 13)]
    beta_eighths: i64,
}

impl Weights {
    fn params(&self, tie_break: TieBreak) -> StrategyParams {
        StrategyParams {
            alpha_eighths: self.alpha_eighths,
            beta_eighths: self.beta_eighths,
            tie_break,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file, `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    start: Start,
    #[arg(long, value_enum, default_value = "iso")]
    canon: Canon,
    #[arg(long, default_value_t = compind::solver::DEFAULT_MEMO_LIMIT)]
    memo_limit: usize,
    /// Threads for the root's moves.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Visit moves in a seeded shuffled order.
    #[arg(long)]
    shuffle_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlayArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "sweller")]
    start: Start,
    /// greedy, lowest, optimal, random:<seed>
    #[arg(long, default_value = "greedy")]
    sweller: String,
    /// greedy, lowest, optimal, tk, random:<seed>
    #[arg(long, default_value = "optimal")]
    diminisher: String,
    #[command(flatten)]
    weights: Weights,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    check: Check,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Check {
    /// Existence lemmas for every (wS, wD) pair on small trees.
    Lemmas {
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        /// Sweep all forests instead of trees.
        #[arg(long)]
        forests: bool,
    },
    /// Per-round potential bound on greedy-Sweller games.
    Rounds {
        /// Graph file; a seeded random ensemble when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 60)]
        max_n: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// lowest, optimal, random:<seed>
        #[arg(long, default_value = "lowest")]
        diminisher: String,
        #[command(flatten)]
        weights: Weights,
    },
    /// Case table for the per-round bound.
    Appendix {
        #[arg(long, default_value_t = 200)]
        l_max: i64,
        #[arg(long, default_value_t = 200)]
        p_max: i64,
    },
    /// ceil((5n + 3C)/13) lower bound.
    LowerBound {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// All forests instead of trees.
        #[arg(long)]
        forests: bool,
        /// Use this many seeded random forests with n <= max-n instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Skip the full solve (greedy against optimal only).
        #[arg(long)]
        no_exact: bool,
    },
    /// Upper bound certificate for T_k.
    Tk {
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 31)]
        k_max: usize,
        /// Also solve the full game up to this k.
        #[arg(long, default_value_t = 3)]
        exact_max_k: usize,
        /// Closed-form check up to this k.
        #[arg(long, default_value_t = 100)]
        closed_max_k: usize,
    },
    /// Smallest I_s / n over all trees of each order.
    Ratio {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// I_d <= 3n/4 over all trees.
    IdConjecture {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
}

/// Usage or I/O failure, reported with exit status 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Run = Result<bool, Fatal>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Gen { family, out } => gen(family, out.as_deref()),
        Command::Solve(args) => solve(args),
        Command::Play(args) => play(args),
        Command::Verify(args) => verify(args),
    }
}

fn read_input(path: &Path) -> Result<String, Fatal> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
    }
}

fn read_forest(path: &Path) -> Result<Forest, Fatal> {
    Ok(Forest::from_text(&read_input(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fatal> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fatal(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn gen(family: Family, out: Option<&Path>) -> Run {
    let text = match family {
        Family::Path { n } => path(n).to_text(),
        Family::Sk { k } => spider_sk(k).to_text(),
        Family::Tk { k } => tree_tk(k).0.to_text(),
        Family::Random { n, seed } => random_tree(n, seed).to_text(),
        Family::Forest { n, c, seed } => random_forest(n, c, seed)?.to_text(),
        Family::Enum { n, forests } => {
            let all = if forests {
                enumerate_forests(n)?
            } else {
                enumerate_trees(n)?
            };
            let mut s = String::new();
            for (i, f) in all.iter().enumerate() {
                s.push_str(&format!("# {i}\n"));
                s.push_str(&f.to_text());
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(true)
}

fn solve(args: SolveArgs) -> Run {
    let forest = read_forest(&args.input)?;
    let config = SolveConfig {
        canon: args.canon.into(),
        memo_limit: args.memo_limit,
        shuffle_seed: args.shuffle_seed,
        jobs: Jobs::from_count(args.jobs),
    };
    let state = GameState::new(&forest)?;
    let result = Solver::new(config).solve(&state, args.start.into())?;
    emit(args.out.as_deref(), &(serde_json::to_string_pretty(&result)? + "\n"))?;
    Ok(true)
}

fn play(args: PlayArgs) -> Run {
    let forest = read_forest(&args.input)?;
    let layout: Option<TkLayout> = TkLayout::recognize(&forest).ok();
    let params = args.weights.params(TieBreak::LowestId);
    let sweller = parse_strategy(&args.sweller, Mover::Sweller, params, layout.as_ref())?;
    let diminisher = parse_strategy(&args.diminisher, Mover::Diminisher, params, layout.as_ref())?;
    let trace = play_game(&forest, args.start.into(), sweller.as_ref(), diminisher.as_ref())?;
    emit(args.out.as_deref(), &(serde_json::to_string_pretty(&trace.export())? + "\n"))?;
    Ok(true)
}

fn verify(args: VerifyArgs) -> Run {
    let jobs = Jobs::from_count(args.jobs);
    let (report, ok) = match args.check {
        Check::Lemmas { max_n, forests } => {
            let corpus = if forests {
                forest_corpus(max_n)?
            } else {
                tree_corpus(max_n)?
            };
            let r = sweep_lemmas(&corpus, jobs)?;
            (serde_json::to_value(&r)?, r.is_ok())
        }
        Check::Rounds {
            input,
            count,
            max_n,
            seed,
            diminisher,
            weights,
        } => {
            let forests = match input {
                Some(p) => parse_graphs(&read_input(&p)?)?,
                None => random_ensemble(count, max_n, seed)?,
            };
            let params = weights.params(TieBreak::LowestId);
            let greedy = Greedy::new(params);
            let opponent = parse_strategy(&diminisher, Mover::Diminisher, params, None)?;
            let r = sweep_rounds(&forests, &greedy, opponent.as_ref(), &params, jobs)?;
            (serde_json::to_value(&r)?, r.is_ok())
        }
        Check::Appendix { l_max, p_max } => {
            let r = verify_appendix_grid(l_max, p_max);
            (serde_json::to_value(&r)?, r.is_ok())
        }
        Check::LowerBound {
            max_n,
            forests,
            random,
            seed,
            no_exact,
        } => {
            let corpus = match (random, forests) {
                (Some(count), _) => random_ensemble(count, max_n, seed)?,
                (None, true) => forest_corpus(max_n)?,
                (None, false) => tree_corpus(max_n)?,
            };
            let opts = LowerBoundOptions {
                exact: !no_exact,
                jobs,
                ..Default::default()
            };
            let r = sweep_lower_bound(&corpus, opts)?;
            (serde_json::to_value(&r)?, r.is_ok())
        }
        Check::Tk {
            k_min,
            k_max,
            exact_max_k,
            closed_max_k,
        } => {
            if k_min == 0 || k_min > k_max {
                return Err(Fatal(format!("need 1 <= --k-min <= --k-max, got {k_min}..{k_max}")));
            }
            let ks: Vec<usize> = (k_min..=k_max).collect();
            let r = sweep_tk(&ks, exact_max_k, closed_max_k, jobs)?;
            (serde_json::to_value(&r)?, r.is_ok())
        }
        Check::Ratio { max_n } => {
            let r = scan_ratio(max_n, jobs)?;
            (serde_json::to_value(&r)?, r.failures.is_empty())
        }
        Check::IdConjecture { max_n } => {
            let r = scan_conjecture_id(max_n, jobs)?;
            (serde_json::to_value(&r)?, r.failures.is_empty())
        }
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => to_csv(&report)?,
    };
    emit(args.out.as_deref(), &text)?;
    Ok(ok)
}

/// Flattens a report to `field,value` rows with dotted paths, in the same
/// order as the JSON document.
fn to_csv(report: &Value) -> Result<String, Fatal> {
    let mut rows = Vec::new();
    flatten(String::new(), report, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Fatal(e.to_string()))?)?)
}

fn flatten(prefix: String, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(join(k), x, rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, x) in items.iter().enumerate() {
                flatten(join(&i.to_string()), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        other => rows.push((prefix, other.to_string())),
    }
}
