//! Experiment driver for the disconnection game: sweeps with reproducible
//! seeds, CSV and SVG output, theorem-instance checks and privacy reports.

pub mod error;
pub mod output;
pub mod plot;
pub mod privacy_report;
pub mod source;
pub mod spec;
pub mod sweep;
pub mod theorem_check;

pub use error::{CliError, Result};
pub use output::{emit_csv, emit_summary_csv, read_rows, PointFilter};
pub use plot::{emit_plot, AxesSpec};
pub use privacy_report::{privacy_report, MeasuredXi, PrivacyInputs, PrivacyReport};
pub use source::GraphSource;
pub use spec::{preset, Preset, SweepOptions, SweepSpec, PRESETS};
pub use sweep::{run_sweep, run_sweep_with_threads, SweepOutput, SweepRow};
pub use theorem_check::{run_theorem_check, TheoremReport};
