use std::path::PathBuf;
use std::process::ExitCode;

use bosepair::config::{self, MassMethodName, RunConfig, OUT_DIR_ENV};
use bosepair::error::{CliError, Result};
use bosepair::{dm_lab, ingest, invert, mass, output, sweep, verify};
use bosepair_core::SystemParams;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bosepair", version, about = "Pair-correlation thermodynamics of a Bose liquid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct System {
    /// Particle mass in amu (default: 4He preset)
    #[arg(long, requires = "density")]
    mass: Option<f64>,
    /// Number density in 1/Å³
    #[arg(long, requires = "mass")]
    density: Option<f64>,
}

impl System {
    fn params(&self, t: f64) -> Result<SystemParams> {
        Ok(match (self.mass, self.density) {
            (Some(m), Some(d)) => SystemParams::new(m, d, t)?,
            _ => SystemParams::helium4(t)?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Thermodynamics and S(q) over the configured temperatures
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config file)
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Invert a structure factor into ν_q and the excitation spectrum
    Invert {
        #[arg(long)]
        sq: PathBuf,
        #[arg(long, env = OUT_DIR_ENV)]
        out: PathBuf,
        #[command(flatten)]
        system: System,
    },
    /// Effective mass from a structure factor at a list of temperatures
    Mass {
        #[arg(long)]
        sq: PathBuf,
        /// zero_t, classical, sewed or self_consistent
        #[arg(long)]
        method: String,
        /// Comma-separated temperatures in K
        #[arg(long)]
        temps: String,
        /// Crossover temperature for the sewed method (default: ideal-gas T_c)
        #[arg(long)]
        t_ref: Option<f64>,
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        system: System,
    },
    /// Finite-box density matrix on seeded configuration pairs
    DmLab {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write its JSON report
    Verify {
        /// limits, consistency, density-matrix or mass
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out: PathBuf,
    },
}

fn report(files: &[PathBuf]) {
    for f in files {
        eprintln!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let (outcome, files) = sweep::run_sweep(&cfg, &dir)?;
            report(&files);
            let unstable = outcome.instabilities();
            if !unstable.is_empty() {
                eprintln!("pair approximation unstable at T = {unstable:?} K");
                return Ok(ExitCode::from(2));
            }
            if outcome.verification_failed() {
                eprintln!("verification failed");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Invert { sq, out, system } => {
            let s = ingest::ingest_sq(&sq)?;
            let (inv, files) = invert::run_invert(&s, &sq, &system.params(0.0)?, &out)?;
            report(&files);
            match inv.roton_minimum {
                Some(r) => eprintln!("roton minimum: q = {} 1/A, E = {:.4} K", r.q, r.energy),
                None => eprintln!("no roton minimum in the inverted spectrum"),
            }
        }
        Command::Mass {
            sq,
            method,
            temps,
            t_ref,
            out,
            system,
        } => {
            let method = MassMethodName::parse(&method)?;
            if method == MassMethodName::Bare {
                return Err(CliError::validation("`bare` is not a structure-factor method"));
            }
            let ts = config::parse_temperatures(&temps)?;
            let s = ingest::ingest_sq(&sq)?;
            let (rows, path) = mass::run_mass(&s, &system.params(ts[0])?, method, &ts, t_ref, &out)?;
            report(&[path]);
            if rows.iter().any(|r| !r.converged) {
                eprintln!("self-consistent solve did not converge");
                return Ok(ExitCode::from(2));
            }
        }
        Command::DmLab { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let (_, files) = dm_lab::run_dm_lab(&cfg, &dir)?;
            report(&files);
        }
        Command::Verify { suite, seed, out } => {
            let r = verify::run_suite(&suite, seed)?;
            let path = output::write_json(&out, &verify::report_file_name(&suite), &r)?;
            for c in &r.checks {
                println!(
                    "{} {} measured={:e} tolerance={:e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance
                );
            }
            report(&[path]);
            if !r.passed {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
