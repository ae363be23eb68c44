//! Parameter sweeps over N or η that tabulate estimation errors next to the
//! shot-noise, Heisenberg and NOON reference curves.

mod config;
mod external;
mod format;
mod plot;
mod run;

use std::io;
use std::path::{Path, PathBuf};

pub use config::{
    StateFamily, SweepAxis, SweepConfig, SweepOverrides, SweepRange, DEFAULT_M_PRIME_ETA_AXIS,
    DEFAULT_M_PRIME_N_AXIS,
};
pub use external::{merge_external, merge_external_text, parse_comparison, read_comparison};
pub use format::fmt_sig;
pub use plot::{emit_gnuplot_script, gnuplot_script};
pub use run::{
    compute_sweep, run_sweep, thread_cap, validation_paths, CurvePoint, SweepOutput, CSV_HEADER,
    NOON_BRUTE_FORCE_MAX_N, NOON_TOLERANCE, VALIDATION_MAX_M, VALIDATION_PHIS,
};

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed ({summary}); report at {}", report_path.display())]
    Validation {
        report_path: PathBuf,
        summary: String,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
}

impl SweepError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit status: 1 usage, 2 validation or invariant failure, 3 I/O
    /// or unreadable input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Compute(crate::Error::InvalidParameter { .. }) => 1,
            Self::Validation { .. } | Self::Invariant(_) | Self::Compute(_) => 2,
            Self::Io { .. } | Self::Malformed(_) => 3,
        }
    }
}
