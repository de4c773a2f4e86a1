mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Args, CommandFactory, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "loopalg",
    version,
    about = "Mod-p homology and Bockstein spectral sequences of double loop spaces of Moore spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the algebra generators within the degree and weight cutoffs
    Gens,
    /// Homology of the weight-j summand
    Dj,
    /// Poincaré series of the generator table
    Poincare,
    /// Run a staged Bockstein spectral sequence on a model
    Bss,
    /// Check that the classes tau_k and sigma_k survive to page r+1
    Survivor,
    /// The weight-2 module at p = 2 and its splittings
    D2,
    /// The equivariant chain identity behind the top Bockstein at p = 2
    Chain,
    /// Torsion family degrees and orders
    Families,
    /// Brute-force cross-checks
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gens => "gens",
            Command::Dj => "dj",
            Command::Poincare => "poincare",
            Command::Bss => "bss",
            Command::Survivor => "survivor",
            Command::D2 => "d2",
            Command::Chain => "chain",
            Command::Families => "families",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, value_parser = value_parser!(u32).range(1..))]
    pub r: Option<u32>,
    #[arg(long, global = true, value_parser = value_parser!(u32).range(2..))]
    pub n: Option<u32>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true, value_parser = value_parser!(u32).range(1..))]
    pub j: Option<u32>,
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<u32>,
    #[arg(long = "max-deg", global = true)]
    pub max_deg: Option<u32>,
    #[arg(long = "max-weight", global = true, value_parser = value_parser!(u32).range(1..))]
    pub max_weight: Option<u32>,
    #[arg(long, global = true, value_parser = value_parser!(u32).range(1..))]
    pub pages: Option<u32>,
    #[arg(long, global = true)]
    pub weight: Option<u32>,
    #[arg(long, global = true, value_parser = ["omega2", "tensor", "fibre"])]
    pub model: Option<String>,
    /// Emit JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (families only)
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write output to a file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines presetting any of the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

fn usage_for(command: Command) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    match cmd.find_subcommand_mut(command.name()) {
        Some(sub) => sub.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<loopalg::Error>() {
        Some(e) if e.is_invariant_violation() => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = match config::merged(&cli) {
        Ok(opts) => opts,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<commands::MissingFlag>().is_some() {
                eprintln!("{}", usage_for(cli.command));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
