use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ncergo::cli::{self, HermanStates, SetChoice};

#[derive(Parser)]
#[command(
    name = "ncergo",
    version,
    about = "Ergodic averaging and optimization over block matrix algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a system file is well-formed and its generators satisfy
    /// the declared group relations.
    Validate { path: PathBuf },
    /// Ergodic-average norms of a positive observable: per-window CSV plus
    /// the limit comparison.
    Gauge {
        path: PathBuf,
        #[arg(long)]
        observable: String,
        #[arg(long, default_value_t = cli::DEFAULT_KMAX)]
        kmax: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize an observable over a set of invariant states.
    Maximize {
        path: PathBuf,
        #[arg(long)]
        observable: String,
        /// SG (invariant states), TG (invariant tracial states), or ann
        /// (invariant states vanishing on the file's ideal).
        #[arg(long)]
        set: String,
    },
    /// Fixed-algebra structure, unique and strict ergodicity.
    Analyze { path: PathBuf },
    /// Value interval of the limit states versus seminorm convergence.
    Herman {
        path: PathBuf,
        #[arg(long)]
        observable: String,
        #[arg(long)]
        lambda: Option<f64>,
        /// State names from the file, or "all" for the full state space.
        #[arg(long, num_args = 1.., default_values_t = [String::from("all")])]
        states: Vec<String>,
        #[arg(long, default_value_t = cli::DEFAULT_KMAX)]
        kmax: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { path } => cli::cmd_validate(&path),
        Command::Gauge {
            path,
            observable,
            kmax,
            out,
        } => cli::cmd_gauge(&path, &observable, kmax, &out),
        Command::Maximize {
            path,
            observable,
            set,
        } => match SetChoice::parse(&set) {
            Ok(choice) => cli::cmd_maximize(&path, &observable, choice),
            Err(e) => cli::CmdOutcome {
                exit_code: e.exit_code(),
                report: format!("{}\nerror: {e}\n", cli::REPORT_HEADER),
            },
        },
        Command::Analyze { path } => cli::cmd_analyze(&path),
        Command::Herman {
            path,
            observable,
            lambda,
            states,
            kmax,
        } => {
            let states = if states.len() == 1 && states[0] == "all" {
                HermanStates::All
            } else {
                HermanStates::Named(states)
            };
            cli::cmd_herman(&path, &observable, lambda, &states, kmax)
        }
    };
    print!("{}", outcome.report);
    std::process::exit(outcome.exit_code);
}
