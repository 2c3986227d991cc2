//! Semi-device-independent entanglement quantification.
//!
//! Given a Bell correlation table `p(a|x)` and the declared local dimensions,
//! this crate certifies lower bounds on the largest eigenvalue of the unknown
//! state, an upper bound on its overlap with product states, and from those
//! lower bounds on the geometric measure of entanglement, coherent
//! information and relative entropy of entanglement.
//!
//! Module map:
//!
//! * [`quantum`]: dense states, measurements and correlation generation.
//! * [`bell`]: Bell functionals, classical/quantum bounds, Bell operators.
//! * [`fidelity`]: the product-state fidelity bound `F̂` (SVD / SHOPM).
//! * [`purity`]: certified lower bounds on the top eigenvalue `a1`.
//! * [`bounds`]: entanglement lower bounds from `(a1, F̂)`.
//! * [`harness`]: file formats, the certification pipeline, Poisson
//!   bootstrap, β-sweeps and simulation.

pub mod bell;
pub mod bounds;
pub mod error;
pub mod fidelity;
pub mod harness;
pub mod linalg;
pub mod purity;
pub mod quantum;
pub mod random;

pub use error::{Error, Result};
