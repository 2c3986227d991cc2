//! Bell functionals, their classical and quantum bounds, Bell operators and
//! the see-saw optimiser used to certify quantum bounds numerically.

mod config;
mod functional;
mod seesaw;
mod settings;

use std::sync::OnceLock;

pub use config::{CoefficientEntry, FunctionalConfig, FUNCTIONAL_SCHEMA};
pub use functional::{
    bell_operator, classical_bound_bruteforce, evaluate, spectral_gap, BellFunctional, ClassicalBound, QuantumBound,
    SpectralGap, STRATEGY_LIMIT,
};
pub(crate) use seesaw::{ascend, Bases};
pub use seesaw::{see_saw, see_saw_from, SeeSawOptions, SeeSawResult};
pub use settings::{canonical_settings, cglmp3_settings, ghz_xy_settings, tailored3_settings};

use crate::error::{Error, Result};
use crate::quantum::DimensionVector;

/// Tolerances for checking declared bounds against the brute-force and
/// see-saw oracles.
#[derive(Debug, Clone)]
pub struct ValidationOptions {
    pub classical_tol: f64,
    pub quantum_tol: f64,
    pub seesaw: SeeSawOptions,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { classical_tol: 1e-6, quantum_tol: 1e-3, seesaw: SeeSawOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    pub classical: f64,
    pub quantum: f64,
}

/// Recompute `C_l` by enumeration and `C_q` by see-saw and compare them with
/// the declared values.
pub fn validate_functional(f: &BellFunctional, opts: &ValidationOptions) -> Result<Validation> {
    let classical = classical_bound_bruteforce(f)?;
    if (classical - f.classical_bound().value).abs() > opts.classical_tol {
        return Err(Error::ConfigValidation(format!(
            "{}: declared classical bound {} but enumeration gives {classical}",
            f.name(),
            f.classical_bound().value
        )));
    }
    let dims = DimensionVector::new(f.quantum_bound().dims.clone())?;
    let quantum = see_saw(f, &dims, &opts.seesaw)?.value;
    if (quantum - f.quantum_bound().value).abs() > opts.quantum_tol {
        return Err(Error::ConfigValidation(format!(
            "{}: declared quantum bound {} but see-saw reaches {quantum}",
            f.name(),
            f.quantum_bound().value
        )));
    }
    Ok(Validation { classical, quantum })
}

/// `P(A_x - B_y ≡ k mod 3)` added with weight `w` to a 2-input qutrit table.
fn add_difference(coeffs: &mut [f64], x: usize, y: usize, k: i64, w: f64) {
    let s = x * 2 + y;
    for a in 0..3i64 {
        let b = (a - k).rem_euclid(3);
        coeffs[s * 9 + (a * 3 + b) as usize] += w;
    }
}

/// CGLMP functional for two qutrits:
///
/// `[P(A1=B1) + P(B1=A2+1) + P(A2=B2) + P(B2=A1)]
///  - [P(A1=B1-1) + P(B1=A2) + P(A2=B2-1) + P(B2=A1-1)]`
///
/// with `P(A=B+k)` the probability that `a - b ≡ k (mod 3)`.
pub fn cglmp3() -> BellFunctional {
    let mut c = vec![0.0; 36];
    // positive terms
    add_difference(&mut c, 0, 0, 0, 1.0);
    add_difference(&mut c, 1, 0, -1, 1.0);
    add_difference(&mut c, 1, 1, 0, 1.0);
    add_difference(&mut c, 0, 1, 0, 1.0);
    // negative terms
    add_difference(&mut c, 0, 0, -1, -1.0);
    add_difference(&mut c, 1, 0, 0, -1.0);
    add_difference(&mut c, 1, 1, -1, -1.0);
    add_difference(&mut c, 0, 1, 1, -1.0);
    BellFunctional::new(
        "cglmp3",
        vec![2, 2],
        vec![3, 3],
        c,
        ClassicalBound { value: 2.0, provenance: "exhaustive enumeration of 81 deterministic strategies".into() },
        QuantumBound {
            value: 1.0 + (11.0f64 / 3.0).sqrt(),
            dims: vec![3, 3],
            provenance: "see-saw optimum over qutrit projective measurements (50 restarts); equals 1 + sqrt(11/3)".into(),
        },
        "probability form, unit weights on the 8 terms",
    )
    .expect("cglmp3 definition is consistent")
}

/// Three-party MABK functional `(E(XXY) + E(XYX) + E(YXX) - E(YYY)) / 2`
/// with `E` the ±1 correlator (input 0 = X, input 1 = Y; outcome 1 ↔ +1).
pub fn mabk3() -> BellFunctional {
    let mut c = vec![0.0; 64];
    let terms: [([usize; 3], f64); 4] = [([0, 0, 1], 0.5), ([0, 1, 0], 0.5), ([1, 0, 0], 0.5), ([1, 1, 1], -0.5)];
    for (x, w) in terms {
        let s = x[0] * 4 + x[1] * 2 + x[2];
        for o in 0..8 {
            let ones = (o as u32).count_ones();
            // product of ±1 outcomes: -1 for each outcome label 0
            let parity = if (3 - ones).is_multiple_of(2) { 1.0 } else { -1.0 };
            c[s * 8 + o] = w * parity;
        }
    }
    BellFunctional::new(
        "mabk3",
        vec![2, 2, 2],
        vec![2, 2, 2],
        c,
        ClassicalBound { value: 1.0, provenance: "exhaustive enumeration of 64 deterministic strategies".into() },
        QuantumBound {
            value: 2.0,
            dims: vec![2, 2, 2],
            provenance: "largest Bell-operator eigenvalue at X/Y settings; see-saw agrees".into(),
        },
        "half the sum of four +-1 correlators",
    )
    .expect("mabk3 definition is consistent")
}

const TAILORED3_CONFIG: &str = include_str!("../../data/functionals/tailored3.json");

static TAILORED3: OnceLock<std::result::Result<BellFunctional, String>> = OnceLock::new();

/// Two-qutrit functional whose maximal violation is attained by the
/// maximally entangled state, loaded from the shipped configuration and
/// validated against the enumeration and see-saw oracles on first use.
pub fn tailored3() -> Result<BellFunctional> {
    TAILORED3
        .get_or_init(|| {
            let f = FunctionalConfig::from_json(TAILORED3_CONFIG)
                .and_then(|c| c.to_functional())
                .map_err(|e| e.to_string())?;
            validate_functional(&f, &ValidationOptions::default()).map_err(|e| e.to_string())?;
            Ok(f)
        })
        .clone()
        .map_err(Error::ConfigValidation)
}

/// Built-in functional by name.
pub fn functional_by_name(name: &str) -> Result<BellFunctional> {
    match name {
        "cglmp3" => Ok(cglmp3()),
        "mabk3" => Ok(mabk3()),
        "tailored3" => tailored3(),
        other => Err(Error::domain(format!("unknown functional {other:?} (expected cglmp3, mabk3 or tailored3)"))),
    }
}
