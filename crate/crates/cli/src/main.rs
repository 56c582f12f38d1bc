mod commands;
mod report;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Report;

/// Prenex first-order Gödel logics: evaluation, proving, value-set
/// classification and the finite-validity translation.
#[derive(Parser, Debug)]
#[command(name = "goedelkit", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; values above 1 enable the parallel paths.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Formula text; omit when using --file.
    formula: Option<String>,
    /// File with one formula per line ('#' comments).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ProverArgs {
    /// Truth-value set, e.g. "[0,1]", "Vm(4)", "cantor".
    #[arg(long, default_value = "[0,1]")]
    vset: String,
    #[arg(long, default_value_t = 8)]
    budget_level: usize,
    #[arg(long, default_value_t = 200_000)]
    budget_nodes: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of a closed formula under an interpretation file.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Interpretation in JSON.
        #[arg(long)]
        interp: PathBuf,
    },
    /// Semantic-tree proof search with a checked certificate.
    Prove {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        prover: ProverArgs,
    },
    /// Herbrand form and the first terms, atoms and instances of its expansion.
    Herbrand {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Countermodel search over V_m, m = 2..=max-m.
    Counter {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
    },
    /// Countability class and axiomatizability of a truth-value set.
    Classify { vset: String },
    /// Points of a dense suborder of an uncountable truth-value set.
    Witness {
        vset: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Translation of a classical relational sentence into a prenex Gödel formula.
    Translate {
        #[command(flatten)]
        input: Input,
        /// Largest classical structure searched for a countermodel.
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        /// Random interpretations sampled when no countermodel is found.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Also print the prenex form.
        #[arg(long)]
        prenex: bool,
    },
    /// Runs the bundled formula lists through the prover and brute force.
    Corpus {
        #[command(flatten)]
        prover: ProverArgs,
        #[arg(long, default_value_t = 5)]
        max_m: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
    },
}

fn styled() -> bool {
    std::env::var("GOEDELKIT_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.jobs > 1 {
        commands::init_pool(cli.jobs);
    }
    let exec = goedelkit::Execution::from_jobs(cli.jobs);
    let ctx = commands::Context { exec, seed: cli.seed };
    match commands::run(&cli.command, &ctx) {
        Ok(report) => {
            print!("{}", if cli.json { report.to_json_text() } else { report.to_text(styled()) });
            ExitCode::from(report.exit)
        }
        Err(e) => {
            if cli.json {
                print!("{}", Report::usage_error(cli.command.name(), &format!("{e:#}")).to_json_text());
            }
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Prove { .. } => "prove",
            Command::Herbrand { .. } => "herbrand",
            Command::Counter { .. } => "counter",
            Command::Classify { .. } => "classify",
            Command::Witness { .. } => "witness",
            Command::Translate { .. } => "translate",
            Command::Corpus { .. } => "corpus",
        }
    }
}
