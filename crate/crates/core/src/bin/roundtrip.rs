use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use roundtrip_core::sweep::{
    emit_gnuplot_script, run_sweep, StateFamily, SweepAxis, SweepError, SweepOverrides,
};

/// Phase-error sweeps for the single-mode round-trip interferometer.
#[derive(Debug, Parser)]
#[command(name = "roundtrip", version)]
struct Cli {
    /// Probe state: optimal, mm, no or noon.
    #[arg(long)]
    family: Option<StateFamily>,
    /// Swept variable: n or eta.
    #[arg(long)]
    axis: Option<SweepAxis>,
    /// Transmissivity held fixed on the n axis.
    #[arg(long)]
    eta: Option<f64>,
    /// Mean photon number held fixed on the eta axis.
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    n_min: Option<f64>,
    #[arg(long)]
    n_max: Option<f64>,
    #[arg(long)]
    n_step: Option<f64>,
    #[arg(long)]
    eta_min: Option<f64>,
    #[arg(long)]
    eta_max: Option<f64>,
    #[arg(long)]
    eta_step: Option<f64>,
    /// M′ of the M&M state (M = 2N − M′).
    #[arg(long)]
    m_prime: Option<usize>,
    /// Number of φ grid points before refinement.
    #[arg(long)]
    phi_grid: Option<usize>,
    /// Round trips per measurement.
    #[arg(long)]
    rounds: Option<usize>,
    /// Check the closed forms against the Kraus oracle before sweeping.
    #[arg(long)]
    validate: bool,
    /// Two-column CSV of comparison data for the `external` column.
    #[arg(long)]
    external: Option<PathBuf>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File of `key=value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    emit_plot: bool,
}

impl Cli {
    fn overrides(&self) -> SweepOverrides {
        SweepOverrides {
            family: self.family,
            axis: self.axis,
            eta: self.eta,
            n: self.n,
            n_min: self.n_min,
            n_max: self.n_max,
            n_step: self.n_step,
            eta_min: self.eta_min,
            eta_max: self.eta_max,
            eta_step: self.eta_step,
            m_prime: self.m_prime,
            phi_grid: self.phi_grid,
            rounds: self.rounds,
            validate: self.validate.then_some(true),
            external: self.external.clone(),
            out: self.out.clone(),
            emit_plot: self.emit_plot.then_some(true),
        }
    }
}

fn run(cli: Cli) -> Result<(), SweepError> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| SweepError::io(path, e))?;
            SweepOverrides::parse_config(&text)?
        }
        None => SweepOverrides::default(),
    };
    let cfg = cli.overrides().over(file).resolve()?;
    let output = run_sweep(&cfg)?;

    println!(
        "wrote {} rows to {}",
        output.rows.len(),
        cfg.output_path.display()
    );
    if let Some(report) = &output.validation {
        println!("validation passed, max deviation {:e}", report.max_dev());
    }
    if cfg.external_comparison_file.is_some() {
        let matched = output.rows.iter().filter(|r| r.external.is_some()).count();
        println!("external values matched: {matched}");
    }
    if cfg.emit_plot {
        let script = emit_gnuplot_script(&cfg.output_path)?;
        println!("plot script: {}", script.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
