//! Dense quantum states, local measurements and correlation tables.

mod config;
mod correlation;
mod dims;
mod measurement;
mod state;

pub use config::{LocalSetting, MeasurementConfig, PauliAxisName, MEASUREMENT_SCHEMA};
pub use correlation::{correlation_from_state, Correlation, NoSignalingWarning, DEFAULT_NORMALIZATION_TOL, DEFAULT_NO_SIGNALING_WARN};
pub use dims::{DimensionVector, Radix, MAX_TOTAL_DIM};
pub use measurement::{cglmp_projectors, computational_basis, pauli_measurement, MeasurementSet, PauliAxis};
pub use state::{make_ghz3, make_phi_beta, partial_trace, DensityMatrix, PureState};
