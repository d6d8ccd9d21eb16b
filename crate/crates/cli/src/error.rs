use std::fmt;

use serde::Serialize;
use tropheight_core::doubling::DoublingError;
use tropheight_core::evaluator::UnknownEvaluator;
use tropheight_core::geometry::GeometryError;
use tropheight_core::ledger::LedgerError;
use tropheight_core::measure::MeasureError;
use tropheight_core::metric::MetricError;
use tropheight_core::pl::PlError;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Refinement(String),
    Budget(String),
    Io(String),
}

#[derive(Serialize)]
pub struct ErrorDocument<'a> {
    pub code: &'a str,
    pub exit: i32,
    pub message: String,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse-error",
            CliError::Validation(_) => "validation-failed",
            CliError::Refinement(_) => "unsupported-refinement",
            CliError::Budget(_) => "budget-exceeded",
            CliError::Io(_) => "io-error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Refinement(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Parse(_) => 5,
            CliError::Io(_) => 1,
        }
    }

    pub fn document(&self) -> ErrorDocument<'_> {
        ErrorDocument { code: self.code(), exit: self.exit_code(), message: self.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m)
            | CliError::Validation(m)
            | CliError::Refinement(m)
            | CliError::Budget(m)
            | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<PlError> for CliError {
    fn from(e: PlError) -> Self {
        match e {
            PlError::RefinementUnsupported { .. } => CliError::Refinement(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<DoublingError> for CliError {
    fn from(e: DoublingError) -> Self {
        match e {
            DoublingError::OrbitBudgetExceeded { .. } => CliError::Budget(e.to_string()),
            DoublingError::Pl(p) => p.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::OrbitBudgetExceeded { .. } => CliError::Budget(e.to_string()),
            MetricError::RefinementUnsupported(_) => CliError::Refinement(e.to_string()),
            MetricError::Doubling(d) => d.into(),
            MetricError::Pl(p) => p.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Pl(p) => p.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<LedgerError> for CliError {
    fn from(e: LedgerError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<UnknownEvaluator> for CliError {
    fn from(e: UnknownEvaluator) -> Self {
        CliError::Parse(e.to_string())
    }
}
