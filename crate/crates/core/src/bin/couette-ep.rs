use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use couette_ep::params::Species;
use couette_ep::runner::{
    cmd_simulate, cmd_sweep, cmd_verify, parse_values, resolve_threads, RunConfig,
};
use couette_ep::Result;

#[derive(Parser)]
#[command(
    name = "couette-ep",
    version,
    about = "Linearized Euler-Poisson dynamics near Couette flow"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate every grid mode and write norms.csv, modes.csv and meta.json.
    Simulate(Common),
    /// Run the check suite and write report.json; exit status 1 on failure.
    Verify(Common),
    /// Repeat the check suite over values of one parameter; write sweep.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// t_plus, t_minus, m_plus, m_minus, e_charge or seed.
        #[arg(long)]
        axis: String,
        /// Comma-separated values (may be empty).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        values: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_species)]
    species: Option<Species>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 = all cores. Falls back to COUETTE_EP_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    /// `section.key=value` override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn parse_species(s: &str) -> std::result::Result<Species, String> {
    Species::parse(s).ok_or_else(|| format!("unknown species '{s}' (ion or electron)"))
}

impl Common {
    fn load(&self) -> Result<(RunConfig, usize)> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        for o in &self.overrides {
            cfg.apply_override(o)?;
        }
        if let Some(s) = self.species {
            cfg.run.species = s;
        }
        if let Some(s) = self.seed {
            cfg.run.seed = s;
        }
        if let Some(d) = &self.out {
            cfg.output.dir = d.clone();
        }
        let threads = resolve_threads(self.threads, cfg.run.threads)?;
        cfg.run.threads = threads;
        Ok((cfg, threads))
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(c) => {
            let (cfg, threads) = c.load()?;
            let s = cmd_simulate(&cfg, threads)?;
            for f in &s.files {
                eprintln!("wrote {}", f.display());
            }
            eprintln!(
                "{} active modes, {} steps, {:.1} s",
                s.output.active_modes, s.output.accepted_steps, s.wall_time_s
            );
            Ok(true)
        }
        Command::Verify(c) => {
            let (cfg, threads) = c.load()?;
            let v = cmd_verify(&cfg, threads)?;
            for r in &v.reports {
                let status = if r.degenerate {
                    "DEGENERATE"
                } else if r.pass {
                    "pass"
                } else {
                    "FAIL"
                };
                eprintln!(
                    "{status:>10}  {:<28} margin {:+.4e}  {}",
                    r.name, r.margin, r.species
                );
            }
            eprintln!("wrote {}", v.path.display());
            Ok(v.success)
        }
        Command::Sweep {
            common,
            axis,
            values,
        } => {
            let (cfg, threads) = common.load()?;
            let values = parse_values(&values)?;
            let path = cmd_sweep(&cfg, &axis, &values, threads)?;
            eprintln!("wrote {}", path.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
