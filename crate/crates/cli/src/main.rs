mod commands;
mod error;
mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbqpe::polyring::OrderKind;
use serde_json::Value;

use commands::{QpeArgs, ScalingMode, SolveArgs};
use error::CliError;
use input::{load_ideal, load_matrix, parse_state, read_input, split_names, OrderArgs};

/// Groebner-basis root finding and simulated phase estimation.
#[derive(Parser)]
#[command(name = "gbqpe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// write JSON here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Degrevlex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    Identity,
    Gershgorin,
}

#[derive(Args)]
struct OrderFlags {
    /// monomial order; defaults to the input's, else lex
    #[arg(long)]
    order: Option<Order>,
    /// variable precedence, largest first, e.g. `x,y,e`
    #[arg(long)]
    vars: Option<String>,
}

impl OrderFlags {
    fn args(&self) -> OrderArgs {
        OrderArgs {
            kind: self.order.map(|o| match o {
                Order::Lex => OrderKind::Lex,
                Order::Degrevlex => OrderKind::Degrevlex,
            }),
            vars: self.vars.as_deref().map(split_names),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Groebner basis of an ideal file (`-` reads stdin)
    Groebner {
        input: PathBuf,
        #[command(flatten)]
        order: OrderFlags,
    },
    /// All roots of a zero-dimensional ideal
    Solve {
        input: PathBuf,
        #[command(flatten)]
        order: OrderFlags,
        /// keep only real roots
        #[arg(long)]
        real_only: bool,
        /// imaginary-part bound for a real root
        #[arg(long)]
        real_tol: Option<f64>,
        /// variable whose matrix is decomposed first
        #[arg(long)]
        decompose: Option<String>,
    },
    /// Hartree-Fock model ideals
    Hf {
        #[command(subcommand)]
        command: HfCommand,
    },
    /// Phase estimation on a matrix (`--matrix`) or on every multiplication
    /// matrix of an ideal
    Qpe {
        #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
        input: Option<PathBuf>,
        /// JSON matrix file
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        order: OrderFlags,
        /// phase bits per register
        #[arg(long, default_value_t = 8)]
        bits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// filter the random initial state toward these eigenvalues
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        shifts: Vec<f64>,
        /// variable whose matrix the shifts refer to; default the last
        #[arg(long)]
        shift_var: Option<String>,
        /// explicit initial amplitudes, comma separated
        #[arg(long, allow_hyphen_values = true)]
        state: Option<String>,
        /// restrict evolution to the real-eigenvalue subspace
        #[arg(long)]
        real_guard: bool,
        /// default: identity for matrices, gershgorin for ideals
        #[arg(long)]
        scaling: Option<Scaling>,
        /// inverse-power iterations per shift
        #[arg(long, default_value_t = 20)]
        iterations: usize,
        /// rotation angles at or below this are dropped from the circuit
        #[arg(long, default_value_t = 1e-12)]
        prune_tol: f64,
    },
    /// Solve a binary model given as JSON and compare with enumeration
    Qubo { input: PathBuf },
}

#[derive(Subcommand)]
enum HfCommand {
    /// Stationarity ideal of a fixture objective
    BuildIdeal {
        /// `heh`, `toy`, or a path to an objective listing
        #[arg(long, default_value = "heh")]
        fixture: String,
        /// pin and eliminate R, e.g. `146/100`
        #[arg(long = "fix-R")]
        fix_r: Option<String>,
    },
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive, got {v}")))
    }
}

fn run(cli: Cli) -> Result<Value, CliError> {
    match cli.command {
        Command::Groebner { input, order } => {
            let loaded = load_ideal(&read_input(&input)?, &order.args())?;
            commands::groebner(&loaded)
        }
        Command::Solve {
            input,
            order,
            real_only,
            real_tol,
            decompose,
        } => {
            let loaded = load_ideal(&read_input(&input)?, &order.args())?;
            let args = SolveArgs {
                real_only,
                real_tol: real_tol.map(|t| positive("--real-tol", t)).transpose()?,
                decompose,
            };
            commands::solve(&loaded, &args)
        }
        Command::Hf {
            command: HfCommand::BuildIdeal { fixture, fix_r },
        } => commands::hf_build_ideal(&fixture, fix_r.as_deref()),
        Command::Qpe {
            input,
            matrix,
            order,
            bits,
            seed,
            shifts,
            shift_var,
            state,
            real_guard,
            scaling,
            iterations,
            prune_tol,
        } => {
            let args = QpeArgs {
                bits,
                seed,
                shifts,
                shift_var,
                state: state.as_deref().map(parse_state).transpose()?,
                real_guard,
                scaling: scaling.map(|s| match s {
                    Scaling::Identity => ScalingMode::Identity,
                    Scaling::Gershgorin => ScalingMode::Gershgorin,
                }),
                iterations,
                prune_tol: positive("--prune-tol", prune_tol)?,
            };
            match (input, matrix) {
                (_, Some(m)) => commands::qpe_matrix(&load_matrix(&read_input(&m)?)?, &args),
                (Some(i), None) => commands::qpe_ideal(&load_ideal(&read_input(&i)?, &order.args())?, &args),
                (None, None) => Err(CliError::Usage("qpe needs an ideal file or --matrix".into())),
            }
        }
        Command::Qubo { input } => commands::qubo(&read_input(&input)?),
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let res = match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| CliError::Resource(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli).and_then(|v| emit(&v, out.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gbqpe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
