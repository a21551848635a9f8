use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbweb::cli::{cmd_eigs, cmd_forward, cmd_invert, cmd_roundtrip, RunConfig};
use orbweb::Error;

#[derive(Parser)]
#[command(name = "orbweb", version, about = "Orb-web vibrations and impact load recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `[output] dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Noise seed (overrides `[forward] seed`).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and eigenfunctions of the configured web.
    Eigs(Common),
    /// Synthetic ring measurement of the configured impact.
    Forward(Common),
    /// Reconstruct the load from a measurement file.
    Invert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        measurement: PathBuf,
    },
    /// Forward then inverse, with error metrics.
    Roundtrip {
        #[command(flatten)]
        common: Common,
        /// Repeat the inversion at several noise levels.
        #[arg(long)]
        noise_sweep: bool,
    },
}

fn load(c: &Common) -> Result<(RunConfig, PathBuf), Error> {
    let cfg = RunConfig::from_path(&c.config)?.with_seed(c.seed);
    let out = cfg.output_dir(c.out.as_deref());
    Ok((cfg, out))
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Eigs(c) => {
            let (cfg, out) = load(&c)?;
            let r = cmd_eigs(&cfg, &out)?;
            Ok(format!("{} modes, J = {:.6}, written to {}", r.modes.len(), r.j, out.display()))
        }
        Command::Forward(c) => {
            let (cfg, out) = load(&c)?;
            let r = cmd_forward(&cfg, &out)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            Ok(format!(
                "{} steps of dt = {:.3e}, peak |u| = {:.3e}, written to {}",
                r.steps,
                r.dt,
                r.peak_displacement,
                out.display()
            ))
        }
        Command::Invert { common, measurement } => {
            let (cfg, out) = load(&common)?;
            let r = cmd_invert(&cfg, &measurement, &out)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            let peak = r.result.localization.peak.as_ref().map(|p| format!("({:.4}, {:.4})", p.rho, p.theta));
            Ok(format!("peak at {}, written to {}", peak.unwrap_or_else(|| "none (zero field)".into()), out.display()))
        }
        Command::Roundtrip { common, noise_sweep } => {
            let (cfg, out) = load(&common)?;
            let r = cmd_roundtrip(&cfg, &out, noise_sweep)?;
            let mut s = format!(
                "coefficient error {:.3e}, field error {:.3e}, within one cell: {}",
                r.coefficient_error, r.field_error, r.localization.within_one_cell
            );
            for row in &r.noise_sweep {
                s += &format!("\n  noise {:.0e}: coefficient error {:.3e}", row.level, row.coefficient_error);
            }
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
