//! Command line front end for the slab scattering and geometric phase
//! library.
//!
//! Numeric flag values accept small arithmetic expressions (`pi`,
//! `sqrt(10)*pi`, `1e-3/2`). Values resolve in layers: explicit flags
//! beat config-file entries, which beat preset defaults. Exit codes:
//! 0 clean, 2 invalid input, 3 domain error, 4 numerical failure; a
//! sweep with failed rows emits NaN markers and exits with the worst
//! row class.

mod app;
mod commands;
mod expr;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use app::{CliError, Settings};
use table::Format;

#[derive(Parser)]
#[command(
    name = "spinslab",
    version,
    about = "Spin-dependent slab scattering and geometric phases",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Geometric phase per winding turn at a transparency lattice point
    ResonantGp(Shared),
    /// Geometric phase accumulated in front of the barrier, per cycle
    PrebarrierGp(Shared),
    /// Geometric phase of a tunneling traversal
    TunnelGp(Shared),
    /// Polarization trace across one spatial region
    Trajectory(Shared),
    /// Convert between mode ratio, beam speed, and field strength
    Units(Shared),
    /// Transparency lattice points for a thickness or thickness range
    Resonances(Shared),
    /// Grid sweep over one variable of one evaluator
    Sweep(Shared),
}

/// Flags are shared across subcommands; each reads the ones it needs.
#[derive(Args)]
struct Shared {
    /// Barrier-to-energy ratio V0/E
    #[arg(long)]
    epsilon: Option<String>,
    /// Dimensionless thickness kL (expression, e.g. "sqrt(10)*pi")
    #[arg(long)]
    kl: Option<String>,
    /// Well-channel depth kappa- L, the natural thickness handle when
    /// tunneling
    #[arg(long = "kminus-l")]
    kminus_l: Option<String>,
    /// Spin polar angle theta in [0, pi]
    #[arg(long)]
    theta: Option<String>,
    /// Spin azimuth phi (default 0)
    #[arg(long)]
    phi: Option<String>,
    /// Lower mode count n+ (with --n-minus)
    #[arg(long = "n-plus")]
    n_plus: Option<String>,
    /// Upper mode count n- (with --n-plus)
    #[arg(long = "n-minus")]
    n_minus: Option<String>,
    /// Mode ratio n-/n+ > 1, resolved to the smallest valid pair
    #[arg(long)]
    q: Option<String>,
    /// Sweep grid start:stop:steps (start/stop may be expressions,
    /// steps is the point count; resonances uses only the range)
    #[arg(long)]
    grid: Option<String>,
    /// Quadrature relative tolerance (default 1e-10)
    #[arg(long)]
    tol: Option<String>,
    /// Output format: csv, json, or svg (default csv)
    #[arg(long)]
    format: Option<String>,
    /// Output file path (default stdout)
    #[arg(long)]
    out: Option<String>,
    /// Parameter preset: fig2, fig3, fig4, or fig5
    #[arg(long)]
    preset: Option<String>,
    /// Flat key=value config file (flags override it; it overrides
    /// presets)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Polygonal-chain mesh for tunnel-gp cross-checks (default 10000)
    #[arg(long)]
    mesh: Option<String>,
    /// Trajectory sample count (default 501)
    #[arg(long)]
    samples: Option<String>,
    /// Trajectory region: incident, interior, or transmitted
    #[arg(long)]
    region: Option<String>,
    /// Include field-free lattice points (n+ = n-)
    #[arg(long = "include-trivial")]
    include_trivial: bool,
    /// Beam speed in m/s (units)
    #[arg(long)]
    speed: Option<String>,
    /// Field strength in tesla (units)
    #[arg(long)]
    field: Option<String>,
    /// Magnetic moment override in J/T (units)
    #[arg(long)]
    moment: Option<String>,
    /// Slab thickness in metres; adds physical columns to resonances
    #[arg(long)]
    length: Option<String>,
    /// Sweep evaluator: prebarrier, tunnel, or resonant
    #[arg(long)]
    evaluator: Option<String>,
    /// Sweep variable: epsilon, theta, kl, or kminus-l
    #[arg(long)]
    var: Option<String>,
}

impl Shared {
    fn settings(&self) -> Result<Settings, CliError> {
        let flags = vec![
            ("epsilon", self.epsilon.clone()),
            ("kl", self.kl.clone()),
            ("kminus-l", self.kminus_l.clone()),
            ("theta", self.theta.clone()),
            ("phi", self.phi.clone()),
            ("n-plus", self.n_plus.clone()),
            ("n-minus", self.n_minus.clone()),
            ("q", self.q.clone()),
            ("grid", self.grid.clone()),
            ("tol", self.tol.clone()),
            ("format", self.format.clone()),
            ("out", self.out.clone()),
            ("preset", self.preset.clone()),
            ("mesh", self.mesh.clone()),
            ("samples", self.samples.clone()),
            ("region", self.region.clone()),
            (
                "include-trivial",
                self.include_trivial.then(|| "true".to_string()),
            ),
            ("speed", self.speed.clone()),
            ("field", self.field.clone()),
            ("moment", self.moment.clone()),
            ("length", self.length.clone()),
            ("evaluator", self.evaluator.clone()),
            ("var", self.var.clone()),
        ];
        Settings::build(flags, self.config.as_deref())
    }
}

fn emit(tbl: &table::Table, s: &Settings) -> Result<(), CliError> {
    let format: Format = s
        .get("format")
        .unwrap_or("csv")
        .parse()
        .map_err(CliError::invalid)?;
    match s.get("out") {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| CliError::invalid(format!("cannot create {path}: {e}")))?;
            tbl.write(format, &mut file)
                .and_then(|()| file.flush())
                .map_err(|e| CliError::invalid(format!("cannot write {path}: {e}")))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match tbl.write(format, &mut lock) {
                // a closed pipe downstream (| head) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
                other => {
                    other.map_err(|e| CliError::invalid(format!("cannot write output: {e}")))
                }
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let shared = match &cli.cmd {
        Cmd::ResonantGp(s)
        | Cmd::PrebarrierGp(s)
        | Cmd::TunnelGp(s)
        | Cmd::Trajectory(s)
        | Cmd::Units(s)
        | Cmd::Resonances(s)
        | Cmd::Sweep(s) => s,
    };
    let settings = shared.settings()?;
    let (table, worst) = match &cli.cmd {
        Cmd::ResonantGp(_) => commands::run_resonant(&settings)?,
        Cmd::PrebarrierGp(_) => commands::run_prebarrier(&settings)?,
        Cmd::TunnelGp(_) => commands::run_tunnel(&settings)?,
        Cmd::Trajectory(_) => commands::run_trajectory(&settings)?,
        Cmd::Units(_) => commands::run_units(&settings)?,
        Cmd::Resonances(_) => commands::run_resonances(&settings)?,
        Cmd::Sweep(_) => commands::run_sweep(&settings)?,
    };
    emit(&table, &settings)?;
    Ok(worst)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
