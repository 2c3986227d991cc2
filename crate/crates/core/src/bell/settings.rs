//! Canonical measurement settings shipped as configuration.

use crate::error::{Error, Result};
use crate::quantum::{MeasurementConfig, MeasurementSet};

const CGLMP3: &str = include_str!("../../data/measurements/cglmp3.json");
const TAILORED3: &str = include_str!("../../data/measurements/tailored3.json");
const GHZ_XY: &str = include_str!("../../data/measurements/ghz_xy.json");

fn builtin(text: &str) -> MeasurementSet {
    MeasurementConfig::from_json(text)
        .and_then(|c| c.build())
        .expect("shipped measurement configuration is valid")
}

/// Qutrit phases maximising the CGLMP Bell-operator eigenvalue; the
/// maximally entangled state reaches ≈ 2.8729 with them.
pub fn cglmp3_settings() -> MeasurementSet {
    builtin(CGLMP3)
}

/// Qutrit phases at which the maximally entangled state attains the quantum
/// bound of the tailored functional.
pub fn tailored3_settings() -> MeasurementSet {
    builtin(TAILORED3)
}

/// Pauli X (input 0) and Y (input 1) for three qubits.
pub fn ghz_xy_settings() -> MeasurementSet {
    builtin(GHZ_XY)
}

pub fn canonical_settings(functional: &str) -> Result<MeasurementSet> {
    match functional {
        "cglmp3" => Ok(cglmp3_settings()),
        "tailored3" => Ok(tailored3_settings()),
        "mabk3" => Ok(ghz_xy_settings()),
        other => Err(Error::domain(format!("no canonical settings for {other:?}"))),
    }
}
