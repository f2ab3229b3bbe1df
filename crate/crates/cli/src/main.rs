use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use contract_menu::error::exit;
use contract_menu::{
    cmd_simulate, cmd_solve, cmd_sweep, cmd_verify, exec, load_config, CliError, VerifyOverrides,
};
use contract_menu_core::AgentType;

/// Optimal linear contract menus for a two-type principal-agent model.
///
/// Worker threads for sweeps and Monte Carlo default to the number of
/// cores and can be set with CONTRACT_MENU_WORKERS.
#[derive(Debug, Parser)]
#[command(name = "contract-menu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TypeArg {
    H,
    L,
}

impl From<TypeArg> for AgentType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::H => AgentType::High,
            TypeArg::L => AgentType::Low,
        }
    }
}

#[derive(Debug, clap::Args)]
struct McArgs {
    /// Monte Carlo paths (overrides verify.n_paths).
    #[arg(long)]
    paths: Option<usize>,
    /// Time steps for simulation and DP (overrides verify.n_steps).
    #[arg(long)]
    steps: Option<usize>,
    /// Random seed (overrides verify.seed).
    #[arg(long)]
    seed: Option<u64>,
}

impl McArgs {
    fn overrides(&self) -> VerifyOverrides {
        VerifyOverrides {
            paths: self.paths,
            steps: self.steps,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the optimal menu.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve over the grid in the config's sweep section and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit the solved menu against Monte Carlo and dynamic programming.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        mc: McArgs,
        /// Audit the menu stored in this solve report instead of solving.
        #[arg(long)]
        menu: Option<PathBuf>,
        /// Write the JSON audit report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo certainty equivalent of one type on one contract.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "type", value_enum, ignore_case = true)]
        agent: TypeArg,
        #[arg(long, value_enum, ignore_case = true)]
        contract: TypeArg,
        /// Constant effort to simulate; defaults to the best response.
        #[arg(long)]
        effort: Option<f64>,
        #[command(flatten)]
        mc: McArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve { config, out: file } => {
            cmd_solve(&load_config(&config)?, file.as_deref(), &mut out)?;
        }
        Command::Sweep { config, out: file } => {
            cmd_sweep(&load_config(&config)?, &file, &mut out)?;
        }
        Command::Verify {
            config,
            mc,
            menu,
            out: file,
        } => {
            cmd_verify(
                &load_config(&config)?,
                &mc.overrides(),
                menu.as_deref(),
                file.as_deref(),
                &mut out,
            )?;
        }
        Command::Simulate {
            config,
            agent,
            contract,
            effort,
            mc,
        } => {
            cmd_simulate(
                &load_config(&config)?,
                &mc.overrides(),
                agent.into(),
                contract.into(),
                effort,
                &mut out,
            )?;
        }
    }
    let _ = out.flush();
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::CONFIG as u8
            } else {
                exit::SUCCESS as u8
            });
        }
    };
    match exec::with_pool(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
