use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wrist_cli::{
    run_fit, run_gripper, run_sweep, run_trace, run_validate, CliError, GripperArgs, Outcome,
    SweepArgs, TraceArgs,
};

#[derive(Parser)]
#[command(name = "wrist", version, about = "Continuum wrist experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Antagonistic bend sweep with hysteresis on one axis.
    Sweep {
        /// Design file, or `paper-default`.
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        axis: u8,
        #[arg(long, default_value_t = 90.0)]
        target_deg: f64,
        /// Command increment; a whole number of actuator steps.
        #[arg(long, default_value_t = 0.1)]
        step_mm: f64,
        /// Overrides the design file's play radius.
        #[arg(long)]
        play_mm: Option<f64>,
        /// Gaussian angle-measurement noise (standard deviation).
        #[arg(long, default_value_t = 0.0)]
        noise_deg: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        svg: bool,
    },
    /// Circular trace with coordinated tendon actuation.
    Trace {
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Constant bend angle of the trace.
        #[arg(long, default_value_t = 90.0)]
        target_deg: f64,
        #[arg(long, default_value_t = 36)]
        steps: usize,
    },
    /// Fit the play model to a `displacement_mm,angle_deg` loop file.
    Fit {
        loop_csv: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Jaw gap against central tendon pull.
    Gripper {
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        max_pull_mm: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Check a design file and optionally export it as JSON.
    Validate {
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Sweep {
            design,
            out,
            axis,
            target_deg,
            step_mm,
            play_mm,
            noise_deg,
            seed,
            svg,
        } => run_sweep(&SweepArgs {
            design,
            out,
            axis,
            target_deg,
            step_mm,
            play_mm,
            noise_deg,
            seed,
            svg,
        }),
        Command::Trace {
            design,
            out,
            target_deg,
            steps,
        } => run_trace(&TraceArgs {
            design,
            out,
            bend_deg: target_deg,
            steps,
        }),
        Command::Fit { loop_csv, out } => run_fit(&loop_csv, &out),
        Command::Gripper {
            design,
            out,
            max_pull_mm,
            steps,
        } => run_gripper(&GripperArgs {
            design,
            out,
            max_pull_mm,
            steps,
        }),
        Command::Validate { design, json } => run_validate(design.as_deref(), json.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
