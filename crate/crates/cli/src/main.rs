//! `dtq`: decision-tree measures, weight programs and certificate checks.
//!
//! Exit status is 0 on success, 1 when a verification fails, and 2 when the
//! input cannot be used.

mod commands;
mod game;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "dtq", version, about = "Decision-tree rank, optimal weights and quantum query certificates")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the parallel checks.
    #[arg(long, global = true, default_value_t = 1, value_name = "K")]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tree document.
    Gen {
        /// or-list, and-chain, parity, complete, spine or random.
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Node budget for random trees.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Rank and guessing complexity of a tree.
    Rank {
        /// Tree document, or `-` for standard input.
        tree: String,
        /// Also minimize over every coloring (at most 16 internal nodes).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Optimum of the weight program, by the recurrence.
    Opt { tree: String },
    /// Closed-form weights as a weight document.
    Weights {
        tree: String,
        #[arg(long, value_enum, default_value_t = Scheme::Canonical)]
        scheme: Scheme,
    },
    /// Numeric optimum of the weight program by restarted coordinate search.
    Oracle {
        tree: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Check a span program or dual adversary solution built from weights.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// All measures and checks for one tree.
    Report {
        tree: String,
        /// Include the numeric optimum.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// The complete AND-OR tree of a given depth.
    Andor {
        #[arg(long)]
        depth: usize,
        #[arg(value_enum)]
        what: AndorView,
    },
    /// Play the Prover-Delayer game on the complete AND-OR tree.
    Game {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Policy::Paper)]
        prover: Policy,
        #[arg(long, value_enum, default_value_t = Policy::Paper)]
        delayer: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print every round.
        #[arg(long)]
        trace: bool,
        /// Read human moves from this file instead of the terminal.
        #[arg(long, value_name = "FILE")]
        moves: Option<String>,
    },
    /// Rank and game value of a function given as a hex truth table.
    FuncRank {
        #[arg(long)]
        n: usize,
        /// Bit i of the number is f at input index i.
        #[arg(long)]
        table: String,
    },
    /// Convert a tree with 0/1 outputs into a formula.
    Formula {
        tree: String,
        /// Check the size bound and agreement on every input.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum Verify {
    Span {
        tree: String,
        weights: String,
        /// Check a single input, e.g. 0110.
        #[arg(long, conflicts_with = "all")]
        input: Option<String>,
        /// Check every input (the default).
        #[arg(long)]
        all: bool,
    },
    Dual {
        tree: String,
        weights: String,
        #[arg(long, default_value_t = dtq_core::dualadv::DEFAULT_MAX_PAIR_N)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Canonical,
    AppendixB,
}

#[derive(Clone, Copy, ValueEnum)]
enum AndorView {
    Measures,
    Rank,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Paper,
    Random,
    Human,
    Exhaustive,
}

/// How a command finished when it did not hit an error.
pub enum Outcome {
    Pass,
    Fail,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use dtq_core::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::MissingWeight(_) | Error::NonPositiveWeight { .. }) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let json = cli.json;
    let result = match cli.command {
        Command::Gen {
            kind,
            n,
            depth,
            seed,
            budget,
        } => commands::gen(&kind, n, depth, seed, budget),
        Command::Rank { tree, exhaustive } => commands::rank(&tree, exhaustive, json),
        Command::Opt { tree } => commands::opt(&tree, json),
        Command::Weights { tree, scheme } => commands::weights(&tree, matches!(scheme, Scheme::AppendixB)),
        Command::Oracle { tree, seed, tol } => commands::oracle(&tree, seed, tol, json),
        Command::Verify {
            what: Verify::Span {
                tree,
                weights,
                input,
                all: _,
            },
        } => commands::verify_span(&tree, &weights, input.as_deref(), json),
        Command::Verify {
            what: Verify::Dual { tree, weights, max_n },
        } => commands::verify_dual(&tree, &weights, max_n, json),
        Command::Report { tree, oracle, seed, tol } => commands::report(&tree, oracle.then_some((seed, tol)), json),
        Command::Andor { depth, what } => match what {
            AndorView::Measures => commands::andor_measures(depth, json),
            AndorView::Rank => commands::andor_rank(depth, json),
        },
        Command::Game {
            depth,
            prover,
            delayer,
            seed,
            trace,
            moves,
        } => game::run(depth, prover, delayer, seed, trace, moves.as_deref(), json),
        Command::FuncRank { n, table } => commands::func_rank(n, &table, json),
        Command::Formula { tree, check } => commands::formula(&tree, check, json),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
