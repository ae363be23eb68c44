use std::collections::{BTreeSet, HashMap};
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{StateFamily, SweepConfig};
use super::external::read_comparison;
use super::format::fmt_sig;
use super::SweepError;
use crate::estimation::{
    baselines, circular_rms_about_mean, holevo_variance, mm_error, noon_error_brute_force,
    noon_error_closed, scan_phase, Baselines, PhaseProfile,
};
use crate::fock::{apply_phase, DensityMatrix};
use crate::protocol::{
    closed_form_rho, output_phase_sign, roundtrip_oracle, validate_closed_forms, ClosedFormSigma,
    RoundTripConfig, ValidationReport,
};
use crate::states::{mm_state, optimal_phase_state, MmStateSpec};

/// Column header of every sweep CSV.
pub const CSV_HEADER: [&str; 10] = [
    "sweep",
    "min_rms",
    "argmin_phi",
    "avg_rms",
    "holevo",
    "mm_error",
    "shot_noise",
    "heisenberg",
    "noon",
    "external",
];

/// Largest M used when cross-checking closed forms before a sweep.
pub const VALIDATION_MAX_M: usize = 8;
/// Phases used when cross-checking closed forms before a sweep.
pub const VALIDATION_PHIS: [f64; 3] = [0.0, 0.3, 1.2];
/// Largest N for which the NOON closed form is checked by brute force.
pub const NOON_BRUTE_FORCE_MAX_N: usize = 6;
/// Agreement required between the NOON closed form and its brute force.
pub const NOON_TOLERANCE: f64 = 1e-8;

/// One CSV row. `None` marks a column that does not apply to the family.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub sweep_value: f64,
    pub min_rms: Option<f64>,
    pub argmin_phi: Option<f64>,
    pub avg_rms: Option<f64>,
    pub holevo: Option<f64>,
    pub mm_error_min: Option<f64>,
    pub shot_noise: f64,
    pub heisenberg: f64,
    pub noon_baseline: f64,
    pub external: Option<f64>,
    /// RMS about the circular mean at `argmin_phi`; diagnostic only, not written.
    pub rms_about_mean: Option<f64>,
}

impl CurvePoint {
    fn baseline_only(sweep_value: f64, b: Baselines) -> Self {
        Self {
            sweep_value,
            min_rms: None,
            argmin_phi: None,
            avg_rms: None,
            holevo: None,
            mm_error_min: None,
            shot_noise: b.shot_noise,
            heisenberg: b.heisenberg,
            noon_baseline: b.noon_error,
            external: None,
            rms_about_mean: None,
        }
    }

    pub fn csv_fields(&self) -> [String; 10] {
        let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
        [
            fmt_sig(self.sweep_value),
            opt(self.min_rms),
            opt(self.argmin_phi),
            opt(self.avg_rms),
            opt(self.holevo),
            opt(self.mm_error_min),
            fmt_sig(self.shot_noise),
            fmt_sig(self.heisenberg),
            fmt_sig(self.noon_baseline),
            opt(self.external),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<CurvePoint>,
    pub validation: Option<ValidationReport>,
}

impl SweepOutput {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.csv_fields()).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

/// Worker-count cap from `INTERF_THREADS`; `None` means automatic.
pub fn thread_cap() -> Result<Option<usize>, SweepError> {
    match std::env::var("INTERF_THREADS") {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(SweepError::Usage(format!(
                "INTERF_THREADS must be an integer, got `{v}`"
            ))),
        },
    }
}

/// Computes every row of the sweep. Nothing is written to disk.
pub fn compute_sweep(cfg: &SweepConfig) -> Result<SweepOutput, SweepError> {
    cfg.check()?;
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_cap()? {
            builder = builder.num_threads(n);
        }
        builder
            .build()
            .map_err(|e| SweepError::Compute(crate::Error::Numerical(e.to_string())))?
    };
    pool.install(|| {
        let validation = if cfg.validate {
            Some(validate(cfg)?)
        } else {
            None
        };
        let external = match &cfg.external_comparison_file {
            Some(path) => Some(read_comparison(path)?),
            None => None,
        };
        let mut rows = cfg
            .grid()
            .into_par_iter()
            .map(|(n, eta)| compute_row(cfg, n, eta))
            .collect::<Result<Vec<_>, _>>()?;
        for row in &rows {
            if row.heisenberg > row.shot_noise {
                return Err(SweepError::Invariant(format!(
                    "Heisenberg limit {} above shot noise {} at sweep value {}",
                    row.heisenberg, row.shot_noise, row.sweep_value
                )));
            }
        }
        if let Some(table) = external {
            fill_external(&mut rows, &table);
        }
        Ok(SweepOutput { rows, validation })
    })
}

/// Runs the sweep and writes the CSV to `cfg.output_path`. With validation
/// enabled the report is written next to the CSV, and the CSV only when the
/// report passes.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, SweepError> {
    let output = compute_sweep(cfg)?;
    if let Some(report) = &output.validation {
        let (table, kv) = validation_paths(&cfg.output_path);
        report
            .write(&table, &kv)
            .map_err(|e| SweepError::io(&table, e))?;
        if !report.passed() {
            return Err(SweepError::Validation {
                report_path: kv,
                summary: format!(
                    "closed forms deviate from the oracle by {:e}",
                    report.max_dev()
                ),
            });
        }
    }
    fs::write(&cfg.output_path, output.to_csv())
        .map_err(|e| SweepError::io(&cfg.output_path, e))?;
    Ok(output)
}

/// `(table, key/value)` report paths derived from the CSV path.
pub fn validation_paths(csv_path: &Path) -> (PathBuf, PathBuf) {
    let mut table = csv_path.as_os_str().to_owned();
    table.push(".validation.txt");
    let mut kv = csv_path.as_os_str().to_owned();
    kv.push(".validation.kv");
    (PathBuf::from(table), PathBuf::from(kv))
}

fn validate(cfg: &SweepConfig) -> Result<ValidationReport, SweepError> {
    let grid = cfg.grid();
    let etas: Vec<f64> = grid
        .iter()
        .map(|(_, eta)| eta.to_bits())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(f64::from_bits)
        .collect();
    if cfg.state_family == StateFamily::NoonBaseline {
        return Ok(validate_noon(&grid, cfg.phi_grid_points));
    }
    let largest_m = grid
        .iter()
        .map(|(n, _)| cfg.fock_parameters(*n).map(|(m, _)| m))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(1);
    Ok(validate_closed_forms(
        largest_m.min(VALIDATION_MAX_M),
        &etas,
        &VALIDATION_PHIS,
    ))
}

/// NOON closed form against brute force for the integer `N ≤ 6` on the grid,
/// packaged in the same report shape as the closed-form check.
fn validate_noon(grid: &[(f64, f64)], phi_grid: usize) -> ValidationReport {
    use crate::protocol::{ClosedForm, ValidationCell};
    let cells = grid
        .iter()
        .filter(|(n, _)| n.fract() == 0.0 && *n <= NOON_BRUTE_FORCE_MAX_N as f64)
        .map(|&(n, eta)| {
            let closed = noon_error_closed(n, eta);
            let (max_dev, error) = match noon_error_brute_force(n as usize, eta, phi_grid) {
                Ok(min) => ((min.value - closed).abs() / closed, None),
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            };
            ValidationCell {
                form: ClosedForm::Noon,
                m: n as usize,
                eta,
                phi: 0.0,
                max_dev,
                worst_element: (0, 0),
                error,
            }
        })
        .collect();
    ValidationReport {
        cells,
        tolerance: NOON_TOLERANCE,
    }
}

fn compute_row(cfg: &SweepConfig, n: f64, eta: f64) -> Result<CurvePoint, SweepError> {
    let sweep_value = match cfg.sweep_axis {
        super::config::SweepAxis::N => n,
        super::config::SweepAxis::Eta => eta,
    };
    let mut row = CurvePoint::baseline_only(sweep_value, baselines(n, eta)?);
    match cfg.state_family {
        StateFamily::NoonBaseline => {}
        StateFamily::Optimal => {
            let (m, _) = cfg.fock_parameters(n)?;
            let rho0 = optimal_output_at_zero(m, eta, cfg.rounds)?;
            let profile = PhaseProfile::new(&rho0, m, output_phase_sign(cfg.rounds))?;
            // a shift by one outcome spacing only relabels the outcomes
            let scan = scan_phase(
                |phi| profile.rms(phi).unwrap_or(f64::NAN),
                TAU / (m + 1) as f64,
                cfg.phi_grid_points,
            )?;
            row.min_rms = Some(scan.minimum.value);
            row.argmin_phi = Some(scan.minimum.phi);
            row.avg_rms = Some(scan.average.mean);
            row.holevo = Some(holevo_variance(&rho0));
            row.rms_about_mean = Some(circular_rms_about_mean(
                &profile.distribution(scan.minimum.phi)?,
            ));
        }
        StateFamily::Mm | StateFamily::No => {
            let (m, m_prime) = cfg.fock_parameters(n)?;
            let spec = MmStateSpec::new(m, m_prime)?;
            if spec.delta() <= m_prime {
                log::warn!(
                    "N = {n}: δ = {} ≤ M′ = {m_prime}, the components of A overlap",
                    spec.delta()
                );
            }
            let sigma0 = mm_output_at_zero(spec, eta, cfg.rounds)?;
            let sign = output_phase_sign(cfg.rounds);
            let error_at = |phi: f64| {
                apply_phase(&sigma0, sign * phi)
                    .and_then(|sigma| mm_error(&sigma, &spec))
                    .unwrap_or(f64::NAN)
            };
            match scan_phase(error_at, TAU / spec.delta() as f64, cfg.phi_grid_points) {
                Ok(scan) => {
                    row.mm_error_min = Some(scan.minimum.value);
                    row.argmin_phi = Some(scan.minimum.phi);
                }
                // φ has dropped out of the state (even round counts)
                Err(crate::Error::Numerical(_)) => row.mm_error_min = Some(f64::INFINITY),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(row)
}

fn optimal_output_at_zero(m: usize, eta: f64, rounds: usize) -> crate::Result<DensityMatrix> {
    if rounds == 1 {
        closed_form_rho(m, eta, 0.0)
    } else {
        let cfg = RoundTripConfig::symmetric(m, eta, 0.0).with_rounds(rounds);
        roundtrip_oracle(&optimal_phase_state(m)?, &cfg)
    }
}

fn mm_output_at_zero(spec: MmStateSpec, eta: f64, rounds: usize) -> crate::Result<DensityMatrix> {
    if rounds == 1 {
        ClosedFormSigma::new(spec, eta)?.density(0.0)
    } else {
        let cfg = RoundTripConfig::symmetric(spec.m(), eta, 0.0).with_rounds(rounds);
        roundtrip_oracle(&mm_state(spec)?, &cfg)
    }
}

/// Matches comparison rows to sweep rows by their formatted sweep value.
/// Returns the number of filled cells.
pub(crate) fn fill_external(rows: &mut [CurvePoint], table: &HashMap<String, f64>) -> usize {
    let mut matched = 0;
    for row in rows.iter_mut() {
        if let Some(v) = table.get(&fmt_sig(row.sweep_value)) {
            row.external = Some(*v);
            matched += 1;
        }
    }
    if matched == 0 && !table.is_empty() {
        log::warn!("no comparison value matched any sweep value");
    }
    matched
}
