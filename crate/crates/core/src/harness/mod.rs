//! Batch front end: file formats, the certification pipeline, Poisson
//! bootstrap, β-sweeps and the simulator that produces fixtures.

mod bootstrap;
mod certify;
mod formats;
mod simulate;
mod sweep;

pub use bootstrap::{bootstrap, poisson_resample, DEFAULT_RESAMPLES};
pub use certify::{
    certify, parse_evidence, BootstrapDiagnostics, CertificateReport, CertifyOptions, Diagnostics, Estimate, Evidence,
    GapDoc, ReportInputs, GAP_SCHEMA, REPORT_SCHEMA,
};
pub use formats::{
    correlation_json, counts_json, load_correlation, load_correlation_with_tolerance, load_counts, parse_correlation,
    parse_counts, read_file, sha256_hex, to_json_string, write_file, CorrelationDoc, CountEntry, CountTable, CountsDoc,
    Loaded, ProbabilityEntry, CORRELATION_SCHEMA, COUNTS_SCHEMA,
};
pub use simulate::{sample_counts, simulate_exact, MeasurementSpec, StateSpec};
pub use sweep::{beta_grid, canonical_evidence, positive_from, sweep_beta, sweep_table, SweepRow};
