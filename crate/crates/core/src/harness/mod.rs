//! Scenario configuration, execution, comparison, fitting and output.

mod compare;
mod config;
mod emit;
mod fit;
mod scan;
mod scenario;
mod validate;

pub use compare::{compare, ComparisonReport, Deviation};
pub use config::{ObservableSet, OutputSpec, ScenarioConfig, TimeGridSpec, PRESETS};
pub use emit::{emit_run, read_csv, write_csv, write_svg, CSV_HEADER};
pub use fit::{fit_collapse, fit_collapse_values, fit_power_law, CollapseFit, PowerLawFit, MIN_EXTREMA};
pub use scan::{hbar_scan, ScanPoint, ScanReport};
pub use scenario::{run_scenario, time_grid, Observable, Provenance, ScenarioRun, TimeSeries};
pub use validate::{run_validation, ValidationReport, VALIDATE_B_R, VALIDATE_N_MAX, VALIDATE_TOLERANCE};
