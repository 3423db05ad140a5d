//! `markov-ui`: unique information for Gaussian and discrete inputs, the
//! canonical gate examples, and the verification suites.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use markov_ui::discrete_ui::{CanonicalExample, SolveMode};
use markov_ui::{Definition, InfoUnit};

#[derive(Debug, Parser)]
#[command(name = "markov-ui", version, about = "Markov-chain based unique information")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input distribution (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = DefinitionArg::Tmxy)]
    definition: DefinitionArg,

    #[arg(long, global = true, value_enum, default_value_t = UnitArg::Bits)]
    unit: UnitArg,

    /// Extractor alphabet size for discrete inputs, or `auto` for |source| + 1.
    #[arg(long = "t-card", global = true, default_value = "auto", value_parser = parse_t_card)]
    t_card: TCard,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,

    /// Trials per randomized suite; each suite has its own default.
    #[arg(long, global = true)]
    trials: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Threshold for flagging a value increase at t_card + 1.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Table)]
    output: OutputArg,
}

#[derive(Debug, Clone, Copy, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Closed-form Gaussian unique information and decomposition terms.
    Gaussian,
    /// Exact (or sampled) discrete unique information and decomposition terms.
    Discrete,
    /// The four two-bit gates under both definitions.
    Examples {
        #[arg(value_enum)]
        name: ExampleArg,
    },
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DefinitionArg {
    Tmxy,
    Myxt,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum UnitArg {
    Bits,
    Nats,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exact,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutputArg {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ExampleArg {
    Rdn,
    Unq,
    Xor,
    And,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    Nonneg,
    Symmetry,
    Detstep,
    Sums,
    Closedform,
    Lemmab1,
    Extractor,
    Duality,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TCard {
    Auto,
    Fixed(usize),
}

impl Serialize for TCard {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TCard::Auto => s.serialize_str("auto"),
            TCard::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

fn parse_t_card(s: &str) -> Result<TCard, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TCard::Auto);
    }
    match s.parse::<usize>() {
        Ok(0) => Err("t-card must be at least 1".into()),
        Ok(n) => Ok(TCard::Fixed(n)),
        Err(_) => Err(format!("expected a positive integer or `auto`, got {s:?}")),
    }
}

/// Resolved settings, echoed into every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    command: Command,
    input_path: Option<PathBuf>,
    definition: Definition,
    unit: InfoUnit,
    t_card: TCard,
    mode: SolveMode,
    trials: Option<usize>,
    seed: u64,
    tol: f64,
    output: OutputArg,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> Self {
        Self {
            command: cli.command,
            input_path: cli.input.clone(),
            definition: match cli.definition {
                DefinitionArg::Tmxy => Definition::Tmxy,
                DefinitionArg::Myxt => Definition::Myxt,
            },
            unit: match cli.unit {
                UnitArg::Bits => InfoUnit::Bits,
                UnitArg::Nats => InfoUnit::Nats,
            },
            t_card: cli.t_card,
            mode: match cli.mode {
                ModeArg::Exact => SolveMode::Exact,
                ModeArg::Sample => SolveMode::Sample,
            },
            trials: cli.trials,
            seed: cli.seed,
            tol: cli.tol,
            output: cli.output,
        }
    }
}

impl ExampleArg {
    fn examples(self) -> Vec<CanonicalExample> {
        match self {
            ExampleArg::Rdn => vec![CanonicalExample::Rdn],
            ExampleArg::Unq => vec![CanonicalExample::Unq],
            ExampleArg::Xor => vec![CanonicalExample::Xor],
            ExampleArg::And => vec![CanonicalExample::And],
            ExampleArg::All => CanonicalExample::ALL.to_vec(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig::from(&cli);
    let outcome = match cli.command {
        Command::Gaussian => commands::gaussian(&cfg),
        Command::Discrete => commands::discrete(&cfg),
        Command::Examples { name } => commands::examples(&cfg, &name.examples()),
        Command::Verify { suite } => commands::verify(&cfg, suite),
    };
    match outcome {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
