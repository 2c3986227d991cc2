//! Certified lower bounds `a1` on the largest eigenvalue of the unknown
//! state.
//!
//! Write `ρ = Σ_i a_i |ψ_i><ψ_i|` with `a_1 ≥ a_2 ≥ ...`. Two kinds of
//! evidence are supported:
//!
//! * a non-degeneracy profile of the Bell functional (semi-device
//!   independent): with `ε₁ = C_q - I_obs`, any row whose threshold covers
//!   `ε₁` gives `a1 ≥ 1 - ε₁/ε₂`;
//! * the spectral gap `(λ1, λ2)` of the Bell operator for known
//!   measurements: `I = Σ a_i <ψ_i|B|ψ_i> ≤ a_1 λ1 + (1 - a_1) λ2`, since
//!   for weights sorted in decreasing order the weighted sum of diagonal
//!   entries in any orthonormal basis is dominated by the weighted sum of
//!   sorted eigenvalues.

mod profile;
mod search;

use serde::{Deserialize, Serialize};

pub use profile::{NondegeneracyProfile, ProfileRow, PROFILE_SCHEMA};
pub use search::{profile_search, ProfileSearchOptions, RejectedRow, SearchOutcome};

use crate::bell::SpectralGap;
use crate::error::{Error, Result};

/// Slack allowed above `C_q` / `λ1` before data are declared inconsistent.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PurityMode {
    Profile,
    Spectral,
}

impl std::str::FromStr for PurityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "profile" => Ok(PurityMode::Profile),
            "spectral" => Ok(PurityMode::Spectral),
            other => Err(Error::domain(format!("unknown mode {other:?} (expected profile or spectral)"))),
        }
    }
}

impl std::fmt::Display for PurityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PurityMode::Profile => "profile",
            PurityMode::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PurityEvidence {
    Profile { row: ProfileRow },
    Spectral { lambda1: f64, lambda2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityCertificate {
    pub a1: f64,
    pub mode: PurityMode,
    pub evidence: PurityEvidence,
    pub observed: f64,
}

impl PurityCertificate {
    /// No information beyond the trivial `a1 ≥ 0`.
    pub fn is_vacuous(&self) -> bool {
        self.a1 <= 0.0
    }
}

/// Profile-mode certificate, or `None` when no row covers the observed
/// deficit.
pub fn a1_from_profile(observed: f64, profile: &NondegeneracyProfile) -> Result<Option<PurityCertificate>> {
    if !observed.is_finite() {
        return Err(Error::domain(format!("observed Bell value {observed}")));
    }
    if observed > profile.c_q + BOUND_SLACK {
        return Err(Error::InconsistentData { value: observed, bound: profile.c_q, slack: BOUND_SLACK });
    }
    let eps1 = (profile.c_q - observed).max(0.0);
    let best = profile
        .rows
        .iter()
        .filter(|r| r.eps1 >= eps1)
        .map(|r| (1.0 - eps1 / r.eps2, r))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    Ok(best.map(|(a1, row)| PurityCertificate {
        a1: a1.clamp(0.0, 1.0),
        mode: PurityMode::Profile,
        evidence: PurityEvidence::Profile { row: row.clone() },
        observed,
    }))
}

/// Spectral-mode certificate `a1 = (I - λ2)/(λ1 - λ2)` clamped to `[0, 1]`.
pub fn a1_from_spectrum(observed: f64, gap: SpectralGap) -> Result<PurityCertificate> {
    if !observed.is_finite() {
        return Err(Error::domain(format!("observed Bell value {observed}")));
    }
    let width = gap.lambda1 - gap.lambda2;
    if width <= 1e-12 {
        return Err(Error::DegenerateGap(width));
    }
    if observed > gap.lambda1 + BOUND_SLACK {
        return Err(Error::InconsistentData { value: observed, bound: gap.lambda1, slack: BOUND_SLACK });
    }
    let a1 = ((observed - gap.lambda2) / width).clamp(0.0, 1.0);
    Ok(PurityCertificate {
        a1,
        mode: PurityMode::Spectral,
        evidence: PurityEvidence::Spectral { lambda1: gap.lambda1, lambda2: gap.lambda2 },
        observed,
    })
}
