use serde::{Deserialize, Serialize};

use crate::bell::SpectralGap;
use crate::error::{Error, Result};

pub const PROFILE_SCHEMA: &str = "entcert.profile/1";

/// One non-degeneracy statement: any pure state reaching `C_q - eps1`
/// forces every orthogonal pure state to at most `C_q - eps2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRow {
    pub eps1: f64,
    pub eps2: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NondegeneracyProfile {
    pub schema: String,
    pub functional: String,
    pub dims: Vec<usize>,
    pub c_q: f64,
    pub provenance: String,
    pub rows: Vec<ProfileRow>,
}

impl NondegeneracyProfile {
    /// Validates the rows and sorts them by `eps1`.
    pub fn new(
        functional: impl Into<String>,
        dims: Vec<usize>,
        c_q: f64,
        provenance: impl Into<String>,
        mut rows: Vec<ProfileRow>,
    ) -> Result<Self> {
        rows.sort_by(|a, b| a.eps1.total_cmp(&b.eps1));
        let p = NondegeneracyProfile {
            schema: PROFILE_SCHEMA.into(),
            functional: functional.into(),
            dims,
            c_q,
            provenance: provenance.into(),
            rows,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != PROFILE_SCHEMA {
            return Err(Error::Schema(format!("unsupported profile schema {:?}", self.schema)));
        }
        if !self.c_q.is_finite() {
            return Err(Error::ConfigValidation("non-finite C_q".into()));
        }
        for (i, r) in self.rows.iter().enumerate() {
            // eps1 == eps2 is allowed: such a row still yields a1 >= 0 on its
            // whole range and arises from linear (spectral) structure.
            let ok = r.eps1.is_finite() && r.eps2.is_finite() && 0.0 <= r.eps1 && r.eps1 <= r.eps2 && r.eps2 > 0.0 && r.eps2 <= self.c_q + 1e-12;
            if !ok {
                return Err(Error::ConfigValidation(format!(
                    "profile row {i}: need 0 <= eps1 <= eps2 <= C_q, got ({}, {}) with C_q = {}",
                    r.eps1, r.eps2, self.c_q
                )));
            }
        }
        if self.rows.windows(2).any(|w| w[0].eps1 > w[1].eps1) {
            return Err(Error::ConfigValidation("profile rows must be sorted by eps1".into()));
        }
        Ok(())
    }

    /// Rows implied by a Bell-operator gap at fixed measurements whose top
    /// eigenvalue does not exceed `C_q`: if `<α|B|α> ≥ C_q - e` then every
    /// `β ⊥ α` has `<β|B|β> ≤ λ1 + λ2 - C_q + e`, i.e.
    /// `eps2 = 2 C_q - λ1 - λ2 - e`.
    pub fn from_spectral_gap(functional: &str, dims: Vec<usize>, c_q: f64, gap: SpectralGap, grid: &[f64]) -> Result<Self> {
        let rows = grid
            .iter()
            .filter_map(|&e| {
                let eps2 = (2.0 * c_q - gap.lambda1 - gap.lambda2 - e).min(c_q);
                (e >= 0.0 && eps2 > e).then(|| ProfileRow {
                    eps1: e,
                    eps2,
                    provenance: format!("spectral gap ({}, {})", gap.lambda1, gap.lambda2),
                })
            })
            .collect();
        Self::new(functional, dims, c_q, "derived from a Bell-operator spectral gap", rows)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: NondegeneracyProfile = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("profile serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> NondegeneracyProfile {
        NondegeneracyProfile::new(
            "mabk3",
            vec![2, 2, 2],
            2.0,
            "test",
            vec![
                ProfileRow { eps1: 0.3, eps2: 1.1, provenance: "b".into() },
                ProfileRow { eps1: 0.1, eps2: 1.7, provenance: "a".into() },
            ],
        )
        .unwrap()
    }

    #[test]
    fn sorted_on_construction() {
        assert_eq!(sample().rows[0].eps1, 0.1);
    }

    #[test]
    fn round_trip() {
        let p = sample();
        let text = p.to_json();
        let back = NondegeneracyProfile::from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn invalid_rows() {
        let bad = |e1: f64, e2: f64| NondegeneracyProfile::new("f", vec![2, 2], 2.0, "", vec![ProfileRow { eps1: e1, eps2: e2, provenance: String::new() }]);
        assert!(bad(0.5, 0.4).is_err());
        assert!(bad(-0.1, 0.4).is_err());
        assert!(bad(0.1, 2.5).is_err());
        assert!(bad(0.1, f64::NAN).is_err());
        assert!(bad(2.0, 2.0).is_ok());
    }

    #[test]
    fn spectral_rows() {
        let p = NondegeneracyProfile::from_spectral_gap("mabk3", vec![2, 2, 2], 2.0, SpectralGap { lambda1: 2.0, lambda2: 0.0 }, &[0.0, 0.5, 0.99, 1.0, 1.5]).unwrap();
        assert_eq!(p.rows.len(), 3);
        assert_eq!(p.rows[0].eps2, 2.0);
        assert_eq!(p.rows[1].eps2, 1.5);
    }
}
