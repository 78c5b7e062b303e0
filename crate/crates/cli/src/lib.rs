//! Scenario files, sweeps and figure presets for the `overage` binary.

pub mod evaluate;
pub mod presets;
pub mod scenario_file;

use std::fmt;

pub use evaluate::{evaluate_point, evaluate_points, to_csv_string, write_csv, ResultRow, Settings, CSV_HEADER};
pub use presets::{preset, Preset, GAMMA_SHAPES, PRESET_NAMES};
pub use scenario_file::{Overrides, ScenarioFile};

/// Malformed or schema-violating input (exit code 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        Self(message.into())
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

/// Maps an error to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<InputError>().is_some() {
            return EXIT_INPUT;
        }
        if let Some(e) = cause.downcast_ref::<overage::Error>() {
            return match e {
                overage::Error::Convergence { .. } | overage::Error::UndefinedEstimate(_) => EXIT_CONVERGENCE,
                _ => EXIT_DOMAIN,
            };
        }
    }
    1
}

/// Base scenario plus, for `sweep`, one scenario per sweep value in
/// ascending order. Every point is validated.
pub fn sweep_points(file: &ScenarioFile) -> anyhow::Result<Vec<overage::Scenario>> {
    let Some(sweep) = &file.sweep else {
        return Err(InputError::new("scenario has no `sweep` block").into());
    };
    if sweep.values.is_empty() {
        return Err(InputError::new("sweep.values is empty").into());
    }
    let mut values = sweep.values.clone();
    values.sort_by(f64::total_cmp);
    values
        .into_iter()
        .map(|v| file.at(sweep.parameter, v)?.scenario())
        .collect()
}
