use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::format::fmt_sig;
use super::SweepError;

/// Input-state family of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    /// Sine-amplitude optimal phase state, measured with the Pegg-Barnett POVM.
    Optimal,
    /// `(|M⟩+|M′⟩)/√2` with `M = 2N − M′`.
    Mm,
    /// `(|2N⟩+|0⟩)/√2`.
    No,
    /// Reference curves only.
    NoonBaseline,
}

impl FromStr for StateFamily {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimal" => Ok(Self::Optimal),
            "mm" => Ok(Self::Mm),
            "no" => Ok(Self::No),
            "noon" | "noon-baseline" => Ok(Self::NoonBaseline),
            other => Err(SweepError::Usage(format!(
                "unknown family `{other}` (expected optimal, mm, no or noon)"
            ))),
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Optimal => "optimal",
            Self::Mm => "mm",
            Self::No => "no",
            Self::NoonBaseline => "noon",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Mean photon number N at fixed η.
    N,
    /// Transmissivity η at fixed N.
    Eta,
}

impl FromStr for SweepAxis {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "n" | "N" => Ok(Self::N),
            "eta" => Ok(Self::Eta),
            other => Err(SweepError::Usage(format!(
                "unknown axis `{other}` (expected n or eta)"
            ))),
        }
    }
}

/// Inclusive range `min, min+step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self, SweepError> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(SweepError::Usage("range bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(SweepError::Usage(format!(
                "range step must be positive, got {step}"
            )));
        }
        if max < min {
            return Err(SweepError::Usage(format!(
                "empty range: max {max} < min {min}"
            )));
        }
        Ok(Self { min, max, step })
    }

    /// Grid values, each rounded to the 12 significant digits used in the CSV.
    pub fn values(&self) -> Vec<f64> {
        let slack = 1e-9 * self.step;
        (0..)
            .map(|i| self.min + i as f64 * self.step)
            .take_while(|v| *v <= self.max + slack)
            .map(|v| fmt_sig(v).parse().expect("formatted float parses"))
            .collect()
    }
}

/// A fully resolved sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub state_family: StateFamily,
    pub sweep_axis: SweepAxis,
    pub fixed_eta: f64,
    pub fixed_n: f64,
    pub n_range: SweepRange,
    pub eta_range: SweepRange,
    /// `M′` for the M&M family; `None` picks the per-axis default.
    pub mm_m_prime: Option<usize>,
    pub phi_grid_points: usize,
    pub rounds: usize,
    pub validate: bool,
    pub external_comparison_file: Option<PathBuf>,
    pub output_path: PathBuf,
    pub emit_plot: bool,
}

/// `M′` used by the M&M family on the N axis (`M = 2N − 3`).
pub const DEFAULT_M_PRIME_N_AXIS: usize = 3;
/// `M′` used by the M&M family on the η axis (N = 20 gives M = 30).
pub const DEFAULT_M_PRIME_ETA_AXIS: usize = 10;

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            state_family: StateFamily::Optimal,
            sweep_axis: SweepAxis::N,
            fixed_eta: 0.9,
            fixed_n: 20.0,
            n_range: SweepRange {
                min: 2.0,
                max: 30.0,
                step: 1.0,
            },
            eta_range: SweepRange {
                min: 0.5,
                max: 1.0,
                step: 0.05,
            },
            mm_m_prime: None,
            phi_grid_points: 720,
            rounds: 1,
            validate: false,
            external_comparison_file: None,
            output_path: PathBuf::from("sweep.csv"),
            emit_plot: false,
        }
    }
}

impl SweepConfig {
    pub fn m_prime(&self) -> usize {
        self.mm_m_prime.unwrap_or(match self.sweep_axis {
            SweepAxis::N => DEFAULT_M_PRIME_N_AXIS,
            SweepAxis::Eta => DEFAULT_M_PRIME_ETA_AXIS,
        })
    }

    /// `(N, η)` for every row, ascending in the swept variable.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        match self.sweep_axis {
            SweepAxis::N => self
                .n_range
                .values()
                .into_iter()
                .map(|n| (n, self.fixed_eta))
                .collect(),
            SweepAxis::Eta => self
                .eta_range
                .values()
                .into_iter()
                .map(|eta| (self.fixed_n, eta))
                .collect(),
        }
    }

    /// Fock parameters `(M, M′)` of the probe state for mean photon number `n`.
    pub fn fock_parameters(&self, n: f64) -> Result<(usize, usize), SweepError> {
        let m_prime = match self.state_family {
            StateFamily::Mm => self.m_prime(),
            _ => 0,
        };
        let m = 2.0 * n - m_prime as f64;
        let rounded = m.round();
        if (m - rounded).abs() > 1e-9 || rounded < 1.0 {
            return Err(SweepError::Usage(format!(
                "N = {n} gives M = {m}, which is not a positive integer for family {}",
                self.state_family
            )));
        }
        let m = rounded as usize;
        if self.state_family == StateFamily::Mm && m <= m_prime {
            return Err(SweepError::Usage(format!(
                "N = {n} with M′ = {m_prime} gives M = {m} ≤ M′"
            )));
        }
        Ok((m, m_prime))
    }

    pub fn check(&self) -> Result<(), SweepError> {
        if self.phi_grid_points < 2 {
            return Err(SweepError::Usage("phi-grid needs at least 2 points".into()));
        }
        if self.rounds < 1 {
            return Err(SweepError::Usage("rounds must be at least 1".into()));
        }
        if self.mm_m_prime.is_some() && self.state_family != StateFamily::Mm {
            return Err(SweepError::Usage(
                "--m-prime only applies to --family mm".into(),
            ));
        }
        let grid = self.grid();
        if grid.is_empty() {
            return Err(SweepError::Usage("sweep range is empty".into()));
        }
        for (n, eta) in grid {
            if n.is_nan() || n < 1.0 {
                return Err(SweepError::Usage(format!("N must be at least 1, got {n}")));
            }
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(SweepError::Usage(format!(
                    "eta must lie in (0, 1], got {eta}"
                )));
            }
            if self.state_family != StateFamily::NoonBaseline {
                self.fock_parameters(n)?;
            }
        }
        Ok(())
    }
}

/// Partially specified configuration from one source (flags or a file).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOverrides {
    pub family: Option<StateFamily>,
    pub axis: Option<SweepAxis>,
    pub eta: Option<f64>,
    pub n: Option<f64>,
    pub n_min: Option<f64>,
    pub n_max: Option<f64>,
    pub n_step: Option<f64>,
    pub eta_min: Option<f64>,
    pub eta_max: Option<f64>,
    pub eta_step: Option<f64>,
    pub m_prime: Option<usize>,
    pub phi_grid: Option<usize>,
    pub rounds: Option<usize>,
    pub validate: Option<bool>,
    pub external: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub emit_plot: Option<bool>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, SweepError> {
    value
        .parse()
        .map_err(|_| SweepError::Usage(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, SweepError> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(SweepError::Usage(format!(
            "invalid boolean `{value}` for `{key}`"
        ))),
    }
}

impl SweepOverrides {
    /// Parses `key=value` lines; blank lines and `#` comments are ignored.
    /// Keys are the long flag names without dashes prefix (`n-min`, `phi-grid`, …).
    pub fn parse_config(text: &str) -> Result<Self, SweepError> {
        let mut o = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                SweepError::Usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "family" => o.family = Some(value.parse()?),
                "axis" => o.axis = Some(value.parse()?),
                "eta" => o.eta = Some(parse_value(&key, value)?),
                "n" => o.n = Some(parse_value(&key, value)?),
                "n-min" => o.n_min = Some(parse_value(&key, value)?),
                "n-max" => o.n_max = Some(parse_value(&key, value)?),
                "n-step" => o.n_step = Some(parse_value(&key, value)?),
                "eta-min" => o.eta_min = Some(parse_value(&key, value)?),
                "eta-max" => o.eta_max = Some(parse_value(&key, value)?),
                "eta-step" => o.eta_step = Some(parse_value(&key, value)?),
                "m-prime" => o.m_prime = Some(parse_value(&key, value)?),
                "phi-grid" => o.phi_grid = Some(parse_value(&key, value)?),
                "rounds" => o.rounds = Some(parse_value(&key, value)?),
                "validate" => o.validate = Some(parse_bool(&key, value)?),
                "external" => o.external = Some(PathBuf::from(value)),
                "out" => o.out = Some(PathBuf::from(value)),
                "emit-plot" => o.emit_plot = Some(parse_bool(&key, value)?),
                other => {
                    return Err(SweepError::Usage(format!(
                        "config line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: SweepOverrides) -> SweepOverrides {
        SweepOverrides {
            family: self.family.or(lower.family),
            axis: self.axis.or(lower.axis),
            eta: self.eta.or(lower.eta),
            n: self.n.or(lower.n),
            n_min: self.n_min.or(lower.n_min),
            n_max: self.n_max.or(lower.n_max),
            n_step: self.n_step.or(lower.n_step),
            eta_min: self.eta_min.or(lower.eta_min),
            eta_max: self.eta_max.or(lower.eta_max),
            eta_step: self.eta_step.or(lower.eta_step),
            m_prime: self.m_prime.or(lower.m_prime),
            phi_grid: self.phi_grid.or(lower.phi_grid),
            rounds: self.rounds.or(lower.rounds),
            validate: self.validate.or(lower.validate),
            external: self.external.or(lower.external),
            out: self.out.or(lower.out),
            emit_plot: self.emit_plot.or(lower.emit_plot),
        }
    }

    /// Fills unset fields from [`SweepConfig::default`] and checks the result.
    pub fn resolve(self) -> Result<SweepConfig, SweepError> {
        let d = SweepConfig::default();
        let family = self.family.unwrap_or(d.state_family);
        let axis = self.axis.unwrap_or(d.sweep_axis);
        // smallest integer N whose δ = M − M′ = 2N − 2M′ exceeds M′, so the
        // two components of A do not overlap
        let n_min_default = match family {
            StateFamily::Mm => {
                let probe = SweepConfig {
                    sweep_axis: axis,
                    mm_m_prime: self.m_prime,
                    ..SweepConfig::default()
                };
                (3 * probe.m_prime() / 2 + 1) as f64
            }
            _ => d.n_range.min,
        };
        let cfg = SweepConfig {
            state_family: family,
            sweep_axis: axis,
            fixed_eta: self.eta.unwrap_or(d.fixed_eta),
            fixed_n: self.n.unwrap_or(d.fixed_n),
            n_range: SweepRange::new(
                self.n_min.unwrap_or(n_min_default),
                self.n_max.unwrap_or(d.n_range.max),
                self.n_step.unwrap_or(d.n_range.step),
            )?,
            eta_range: SweepRange::new(
                self.eta_min.unwrap_or(d.eta_range.min),
                self.eta_max.unwrap_or(d.eta_range.max),
                self.eta_step.unwrap_or(d.eta_range.step),
            )?,
            mm_m_prime: self.m_prime,
            phi_grid_points: self.phi_grid.unwrap_or(d.phi_grid_points),
            rounds: self.rounds.unwrap_or(d.rounds),
            validate: self.validate.unwrap_or(d.validate),
            external_comparison_file: self.external,
            output_path: self.out.unwrap_or(d.output_path),
            emit_plot: self.emit_plot.unwrap_or(d.emit_plot),
        };
        cfg.check()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_values_are_clean() {
        let r = SweepRange::new(0.5, 1.0, 0.05).unwrap();
        let v = r.values();
        assert_eq!(v.len(), 11);
        assert_eq!(v[4], 0.7);
        assert_eq!(*v.last().unwrap(), 1.0);
        assert_eq!(SweepRange::new(2.0, 30.0, 1.0).unwrap().values().len(), 29);
    }

    #[test]
    fn bad_ranges_rejected() {
        assert!(SweepRange::new(1.0, 0.5, 0.1).is_err());
        assert!(SweepRange::new(0.5, 1.0, 0.0).is_err());
        assert!(SweepRange::new(0.5, 1.0, -0.1).is_err());
    }

    #[test]
    fn config_file_parsing_and_precedence() {
        let file = SweepOverrides::parse_config(
            "# eta sweep at N = 20\nfamily = mm\naxis=eta\nn=20\nm_prime=10\nout=from_file.csv\n",
        )
        .unwrap();
        let flags = SweepOverrides {
            out: Some(PathBuf::from("from_flag.csv")),
            ..Default::default()
        };
        let cfg = flags.over(file).resolve().unwrap();
        assert_eq!(cfg.state_family, StateFamily::Mm);
        assert_eq!(cfg.sweep_axis, SweepAxis::Eta);
        assert_eq!(cfg.m_prime(), 10);
        assert_eq!(cfg.fock_parameters(20.0).unwrap(), (30, 10));
        assert_eq!(cfg.output_path, PathBuf::from("from_flag.csv"));
        assert_eq!(cfg.phi_grid_points, 720);
    }

    #[test]
    fn config_file_errors() {
        assert!(SweepOverrides::parse_config("family").is_err());
        assert!(SweepOverrides::parse_config("colour=blue").is_err());
        assert!(SweepOverrides::parse_config("eta=high").is_err());
        assert!(SweepOverrides::parse_config("family=squeezed").is_err());
        assert!(SweepOverrides::parse_config("validate=maybe").is_err());
    }

    #[test]
    fn default_mm_rule_on_n_axis() {
        let cfg = SweepOverrides {
            family: Some(StateFamily::Mm),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(cfg.n_range.min, 5.0);
        assert_eq!(cfg.fock_parameters(5.0).unwrap(), (7, 3));
        assert_eq!(cfg.fock_parameters(12.0).unwrap(), (21, 3));
    }

    #[test]
    fn inconsistent_configs_rejected() {
        // M = 2·2 − 3 = 1 ≤ M′
        let mm_small = SweepOverrides {
            family: Some(StateFamily::Mm),
            n_min: Some(2.0),
            ..Default::default()
        };
        assert!(mm_small.resolve().is_err());
        let m_prime_on_optimal = SweepOverrides {
            m_prime: Some(2),
            ..Default::default()
        };
        assert!(m_prime_on_optimal.resolve().is_err());
        let half_integer_mm = SweepOverrides {
            family: Some(StateFamily::Mm),
            n_min: Some(4.25),
            n_max: Some(5.0),
            ..Default::default()
        };
        assert!(half_integer_mm.resolve().is_err());
        let bad_eta = SweepOverrides {
            eta: Some(1.2),
            ..Default::default()
        };
        assert!(bad_eta.resolve().is_err());
        let no_grid = SweepOverrides {
            phi_grid: Some(1),
            ..Default::default()
        };
        assert!(no_grid.resolve().is_err());
    }

    #[test]
    fn half_integer_n_allowed_for_optimal() {
        let cfg = SweepOverrides {
            n_min: Some(1.5),
            n_max: Some(3.0),
            n_step: Some(0.5),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(cfg.fock_parameters(1.5).unwrap(), (3, 0));
    }
}
