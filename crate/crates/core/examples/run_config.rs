//! Drive the four commands from a config file, as the `orbweb` binary does.
//!
//! cargo run --example run_config -- configs/demo.toml out/example

use std::path::PathBuf;

use orbweb::cli::{cmd_eigs, cmd_forward, cmd_invert, cmd_roundtrip, RunConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let config = PathBuf::from(args.next().unwrap_or_else(|| "configs/demo.toml".into()));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/example".into()));
    if let Err(e) = run(&config, &out) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(config: &std::path::Path, out: &std::path::Path) -> Result<(), orbweb::Error> {
    let cfg = RunConfig::from_path(config)?;
    let eigs = cmd_eigs(&cfg, &out.join("eigs"))?;
    println!("eigs: {} modes, J = {:.4}", eigs.modes.len(), eigs.j);
    let fwd = cmd_forward(&cfg, &out.join("forward"))?;
    println!("forward: {} samples, peak {:.3e}", fwd.steps, fwd.peak_displacement);
    let inv = cmd_invert(&cfg, &out.join("forward/measurement.csv"), &out.join("invert"))?;
    println!("invert: max condition {:.3}", inv.result.max_condition);
    let rt = cmd_roundtrip(&cfg, &out.join("roundtrip"), true)?;
    println!(
        "roundtrip: coefficient error {:.2e}, within one cell: {}",
        rt.coefficient_error, rt.localization.within_one_cell
    );
    Ok(())
}
