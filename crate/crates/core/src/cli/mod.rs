//! Experiment runner: configuration parsing, named experiments and their
//! output files.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{parse_config, Experiment, MapGrid, OracleMass, SimConfig};
pub use experiments::{run_experiment, Check, Manifest, RunReport, TimeRecord};
pub use output::{emit_spacetime_csv, GridValues, SpacetimeGrid};

use crate::error::Error;

/// Process exit status for a failed command: 2 for configuration and
/// tolerance failures, 1 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter { .. }
        | Error::Parse { .. }
        | Error::Unresolvable { .. }
        | Error::Superluminal { .. } => 2,
        _ => 1,
    }
}

/// Worker cap from a `QWHYDRO_THREADS` value; unset, empty or zero means
/// no cap.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, String> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(format!("QWHYDRO_THREADS must be a non-negative integer, got `{v}`")),
        },
    }
}
