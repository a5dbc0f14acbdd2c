//! `lifshitz`: permittivities, free energies, Nernst audits and packaged scenario
//! runs from the command line.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure, 4 expectation
//! mismatch, 5 out-of-scope request.

mod commands;
mod config;
mod fail;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{FileConfig, Format, RunConfig, Tolerances};
use fail::CliError;
use lifshitz::reflection::ReflectionPolicy;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "lifshitz", version, about = "Casimir and Casimir-Polder free energies from Lifshitz theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Material file (first plate, or the wall).
    #[arg(long, global = true)]
    material: Option<PathBuf>,
    /// Material file of the second plate or the sphere; defaults to --material.
    #[arg(long, global = true)]
    material2: Option<PathBuf>,
    /// Atom for atom-wall runs: `rubidium` or `ALPHA0_AU:OMEGA_EV`.
    #[arg(long, global = true)]
    atom: Option<String>,
    /// Separation a in metres.
    #[arg(long, global = true)]
    a: Option<f64>,
    /// Temperature in kelvin.
    #[arg(long = "T", global = true)]
    temperature: Option<f64>,
    /// Sphere radius in metres; reports the proximity-force sphere-plate force.
    #[arg(long = "R", global = true)]
    radius: Option<f64>,
    /// standard | dc | screened | static-screened | plasma | ideal
    #[arg(long, global = true)]
    policy: Option<ReflectionPolicy>,
    /// start:stop:points[:log]
    #[arg(long, global = true)]
    sweep: Option<String>,
    /// Output file (a directory for `scenario`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Omit run-dependent header fields so reruns are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    term_cutoff: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate ε(iξ) of a material.
    Eps,
    /// Free energy per unit area (plates), free energy (atom-wall) or PFA force.
    FreeEnergy {
        /// Swept variable.
        #[arg(long, default_value = "a", value_parser = ["a", "T"])]
        sweep_var: String,
    },
    /// Low-temperature entropy fit and Nernst-theorem verdict.
    Audit {
        /// Model class; inferred from --material and --policy when absent.
        #[arg(long)]
        class: Option<String>,
        /// tau_min:tau_max:points in units of the effective temperature.
        #[arg(long)]
        grid: Option<String>,
        /// satisfied | violated
        #[arg(long)]
        expect: Option<String>,
    },
    /// Run a packaged scenario spec.
    Scenario { spec: PathBuf },
}

fn resolve(cli: &Cli) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let c = &cli.common;
    let file = match &c.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let flags = Tolerances {
        relative_tolerance: c.rel_tol,
        term_cutoff_ratio: c.term_cutoff,
        ..Default::default()
    };
    let command = match &cli.command {
        Command::Eps => "eps",
        Command::FreeEnergy { .. } => "free-energy",
        Command::Audit { .. } => "audit",
        Command::Scenario { .. } => "scenario",
    };
    let extra = match &cli.command {
        Command::FreeEnergy { sweep_var } => serde_json::json!({ "sweep_var": sweep_var }),
        Command::Audit { class, grid, expect } => serde_json::json!({ "class": class, "grid": grid, "expect": expect }),
        Command::Scenario { spec } => serde_json::json!({ "spec": spec }),
        Command::Eps => serde_json::Value::Null,
    };
    let cfg = RunConfig {
        command: command.into(),
        material: c.material.clone().or(file.material),
        material2: c.material2.clone().or(file.material2),
        atom: c.atom.clone().or(file.atom),
        a: c.a.or(file.a).unwrap_or(1e-6),
        temperature: c.temperature.or(file.temperature).unwrap_or(300.0),
        radius: c.radius.or(file.radius),
        policy: c.policy.or(file.policy).unwrap_or_default(),
        sweep: c.sweep.clone().or(file.sweep),
        format: c.format.or(file.format).unwrap_or_default(),
        deterministic: c.deterministic || file.deterministic.unwrap_or(false),
        threads: c.threads.or(file.threads),
        numerics: flags.or(file.tolerances).numerics()?,
        extra,
    };
    Ok((cfg, c.out.clone()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, out) = resolve(&cli)?;
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Eps => commands::eps(&cfg, out.as_deref()),
        Command::FreeEnergy { sweep_var } => commands::free_energy(&cfg, &sweep_var, out.as_deref()),
        Command::Audit { class, grid, expect } => {
            commands::audit(&cfg, class.as_deref(), grid.as_deref(), expect.as_deref(), out.as_deref())
        }
        Command::Scenario { spec } => commands::scenario(&cfg, &spec, out.as_deref()),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("lifshitz: {e}");
        std::process::exit(e.exit_code());
    }
}
