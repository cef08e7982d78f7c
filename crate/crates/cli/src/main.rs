use std::process::ExitCode;

use clap::Parser;

use fbl_cli::{append_summary, run, Command, Options, RunConfig};

#[derive(Parser)]
#[command(
    name = "fbl",
    version,
    about = "Certified norm bounds in free Banach lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Subcommand)]
enum Sub {
    /// Certified bracket on the norm of one expression
    Norm(Options),
    /// Bracket and lower bounds for a combination of point evaluations
    DualNorm(Options),
    /// Admissibility verdict for a tuple of dual vectors
    Admissible(Options),
    /// Octahedrality witness search over a family of unit expressions
    Octa(Options),
    /// Diameter lower bound for a convex combination of slices
    SliceDiam(Options),
    /// Roughness quotients at a list of scales
    Rough(Options),
    /// Cube-sphere representation sandwich for l1 spaces
    ReprCheck(Options),
}

fn main() -> ExitCode {
    let (command, options) = match Cli::parse().command {
        Sub::Norm(o) => (Command::Norm, o),
        Sub::DualNorm(o) => (Command::DualNorm, o),
        Sub::Admissible(o) => (Command::Admissible, o),
        Sub::Octa(o) => (Command::Octa, o),
        Sub::SliceDiam(o) => (Command::SliceDiam, o),
        Sub::Rough(o) => (Command::Rough, o),
        Sub::ReprCheck(o) => (Command::ReprCheck, o),
    };
    if let Some(threads) = std::env::var("FBL_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
    {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let config = RunConfig { command, options };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fbl {}: {e}", command.name());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &config.options.out {
        Some(path) => std::fs::write(path, format!("{}\n", report.text)),
        None => {
            println!("{}", report.text);
            Ok(())
        }
    };
    let written = written.and_then(|_| match &config.options.csv {
        Some(path) => append_summary(path, &report.summary),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("fbl {}: cannot write output: {e}", command.name());
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
