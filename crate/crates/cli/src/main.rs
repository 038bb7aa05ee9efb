use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ndgraph::engine::{Strategy, STEP_LIMIT};
use ndgraph::lambda::Direction;
use ndgraph::rules::Mode;
use ndgraph_cli::commands::{self, Format, ReduceOptions};
use ndgraph_cli::input::Kind;
use ndgraph_cli::CliError;

/// Port-graph rewriting for natural deduction proofs and linear λ-terms.
///
/// Inputs are read by extension: .nd/.prf proofs, .lam terms, .json graphs.
#[derive(Parser, Debug)]
#[command(name = "ndgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a proof, term or graph and print what it proves or types as.
    Check {
        file: PathBuf,
        #[arg(long)]
        kind: Option<Kind>,
    },
    /// Print the port graph of a proof or term.
    Translate {
        file: PathBuf,
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reduce to normal form and report the number of steps.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        kind: Option<Kind>,
        /// innermost, outermost, or exhaustive:<rule prefixes>
        #[arg(long, default_value = "outermost")]
        strategy: Strategy,
        /// global or small-step
        #[arg(long, default_value = "global")]
        mode: Mode,
        #[arg(long, default_value_t = STEP_LIMIT)]
        limit: usize,
        /// Write the trace of the reduction here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the final graph here.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Rename between implicational logic graphs and λ graphs.
    Rename {
        file: PathBuf,
        #[arg(long)]
        kind: Option<Kind>,
        /// Target side; by default the side the graph is not on.
        #[arg(long, value_enum)]
        to: Option<Side>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Serve the HTTP session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Side {
    Logic,
    Lambda,
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Check { file, kind } => commands::check(&file, kind),
        Command::Translate { file, kind, format } => commands::translate(&file, kind, format),
        Command::Reduce { file, kind, strategy, mode, limit, trace, output, format } => {
            let opts = ReduceOptions {
                strategy,
                mode,
                limit,
                trace: trace.as_deref(),
                output: output.as_deref().map(|p| (p, format)),
            };
            commands::reduce(&file, kind, &opts)
        }
        Command::Rename { file, kind, to, format } => {
            let to = to.map(|s| match s {
                Side::Logic => Direction::LambdaToLogic,
                Side::Lambda => Direction::LogicToLambda,
            });
            commands::rename(&file, kind, to, format)
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Internal(e.to_string()))?;
            rt.block_on(ndgraph_cli::serve::serve(port)).map_err(|e| CliError::User(format!("port {port}: {e}")))?;
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ndgraph: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
