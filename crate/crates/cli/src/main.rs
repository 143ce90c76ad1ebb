use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinengine_cli::config::{self, Mode, Settings};

#[derive(Parser)]
#[command(name = "spinengine", version, about = "Finite-time spin-1/2 Carnot-like engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one cycle and print its step ledger as CSV
    Cycle(Flags),
    /// Efficiency at maximum Omega-dot against Carnot efficiency
    Fig2(Flags),
    /// Efficiency at maximum Omega-dot on the positive ratio branch
    Fig3(Flags),
    /// Efficiency at maximum Omega-dot on the negative ratio branch
    Fig4(Flags),
    /// Run the internal consistency checks
    Validate(Flags),
}

#[derive(Args, Debug)]
struct Flags {
    /// `key = value` config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    gap_a: Option<f64>,
    #[arg(long)]
    gap_b: Option<f64>,
    #[arg(long)]
    beta_h: Option<f64>,
    #[arg(long)]
    beta_c: Option<f64>,
    /// Subdivisions per isothermal stroke
    #[arg(long)]
    n: Option<usize>,
    /// Carnot efficiency; repeat or comma-separate for several curves
    #[arg(long = "eta-c", value_delimiter = ',')]
    eta_c: Vec<f64>,
    /// Explicit ratio list (fig2)
    #[arg(long = "r", value_delimiter = ',', allow_negative_numbers = true)]
    r_list: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<f64>,
    #[arg(long)]
    r_steps: Option<usize>,
    /// Relative half-width of the masked zone around each pole (fig4)
    #[arg(long)]
    pole_eps: Option<f64>,
    /// Flip the sign of every cold-stroke step (negative control)
    #[arg(long, hide = true)]
    corrupt_cold_sign: bool,
}

impl Flags {
    fn settings(&self) -> Settings {
        Settings {
            gap_a: self.gap_a,
            gap_b: self.gap_b,
            beta_h: self.beta_h,
            beta_c: self.beta_c,
            n: self.n,
            eta_c: self.eta_c.clone(),
            r_list: self.r_list.clone(),
            r_min: self.r_min,
            r_max: self.r_max,
            r_steps: self.r_steps,
            pole_eps: self.pole_eps,
            out: self.out.clone(),
            corrupt_cold_sign: self.corrupt_cold_sign,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, flags) = match &cli.command {
        Command::Cycle(f) => (Mode::Cycle, f),
        Command::Fig2(f) => (Mode::Fig2, f),
        Command::Fig3(f) => (Mode::Fig3, f),
        Command::Fig4(f) => (Mode::Fig4, f),
        Command::Validate(f) => (Mode::Validate, f),
    };
    let file = match &flags.config {
        Some(path) => match config::load_config(path, mode) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: config: {e}");
                return ExitCode::from(1);
            }
        },
        None => Settings::default(),
    };
    let cfg = match config::resolve(mode, file.overlay(flags.settings())) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: config: {e}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match spinengine_cli::execute(&cfg, &mut stdout) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: validation failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
