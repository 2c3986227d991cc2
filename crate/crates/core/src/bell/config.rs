use serde::{Deserialize, Serialize};

use super::functional::{BellFunctional, ClassicalBound, QuantumBound};
use crate::error::{Error, Result};
use crate::quantum::Radix;

pub const FUNCTIONAL_SCHEMA: &str = "entcert.functional/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub x: Vec<usize>,
    pub a: Vec<usize>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundEntry {
    pub value: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumBoundEntry {
    pub value: f64,
    pub dims: Vec<usize>,
    pub provenance: String,
}

/// On-disk form of a [`BellFunctional`]. Only nonzero coefficients are
/// listed; omitted entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalConfig {
    pub schema: String,
    pub name: String,
    pub inputs: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub normalization: String,
    pub classical_bound: BoundEntry,
    pub quantum_bound: QuantumBoundEntry,
    pub coefficients: Vec<CoefficientEntry>,
}

impl FunctionalConfig {
    pub fn from_functional(f: &BellFunctional) -> Self {
        let sr = Radix::new(f.inputs().to_vec());
        let or = Radix::new(f.outcomes().to_vec());
        let mut coefficients = Vec::new();
        for s in 0..sr.len() {
            for (o, &c) in f.coefficient_row(s).iter().enumerate() {
                if c != 0.0 {
                    coefficients.push(CoefficientEntry { x: sr.decode(s), a: or.decode(o), c });
                }
            }
        }
        FunctionalConfig {
            schema: FUNCTIONAL_SCHEMA.into(),
            name: f.name().into(),
            inputs: f.inputs().to_vec(),
            outcomes: f.outcomes().to_vec(),
            normalization: f.normalization().into(),
            classical_bound: BoundEntry {
                value: f.classical_bound().value,
                provenance: f.classical_bound().provenance.clone(),
            },
            quantum_bound: QuantumBoundEntry {
                value: f.quantum_bound().value,
                dims: f.quantum_bound().dims.clone(),
                provenance: f.quantum_bound().provenance.clone(),
            },
            coefficients,
        }
    }

    pub fn to_functional(&self) -> Result<BellFunctional> {
        if self.schema != FUNCTIONAL_SCHEMA {
            return Err(Error::Schema(format!("unsupported functional schema {:?}", self.schema)));
        }
        if self.inputs.len() != self.outcomes.len() || self.inputs.iter().chain(&self.outcomes).any(|&k| k == 0) {
            return Err(Error::Schema(format!("bad arities {:?} / {:?}", self.inputs, self.outcomes)));
        }
        let sr = Radix::new(self.inputs.clone());
        let or = Radix::new(self.outcomes.clone());
        let mut coeffs = vec![0.0; sr.len() * or.len()];
        let mut seen = vec![false; coeffs.len()];
        for e in &self.coefficients {
            let in_range = |v: &[usize], bases: &[usize]| v.len() == bases.len() && v.iter().zip(bases).all(|(a, b)| a < b);
            if !in_range(&e.x, &self.inputs) || !in_range(&e.a, &self.outcomes) {
                return Err(Error::Schema(format!("coefficient entry x={:?} a={:?} out of range", e.x, e.a)));
            }
            if !e.c.is_finite() {
                return Err(Error::Schema(format!("non-finite coefficient at x={:?} a={:?}", e.x, e.a)));
            }
            let k = sr.encode(&e.x) * or.len() + or.encode(&e.a);
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::Schema(format!("duplicate coefficient entry x={:?} a={:?}", e.x, e.a)));
            }
            coeffs[k] = e.c;
        }
        BellFunctional::new(
            self.name.clone(),
            self.inputs.clone(),
            self.outcomes.clone(),
            coeffs,
            ClassicalBound { value: self.classical_bound.value, provenance: self.classical_bound.provenance.clone() },
            QuantumBound {
                value: self.quantum_bound.value,
                dims: self.quantum_bound.dims.clone(),
                provenance: self.quantum_bound.provenance.clone(),
            },
            self.normalization.clone(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("functional config serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{cglmp3, mabk3};

    #[test]
    fn round_trip_is_bit_exact() {
        for f in [cglmp3(), mabk3()] {
            let text = FunctionalConfig::from_functional(&f).to_json();
            let back = FunctionalConfig::from_json(&text).unwrap();
            assert_eq!(back.to_json(), text);
            let g = back.to_functional().unwrap();
            assert_eq!(g, f);
            for (a, b) in g.coefficients().iter().zip(f.coefficients()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn shipped_tailored_file_is_canonical() {
        let text = include_str!("../../data/functionals/tailored3.json");
        let cfg = FunctionalConfig::from_json(text).unwrap();
        assert_eq!(cfg.to_json(), text);
    }

    #[test]
    fn duplicate_entry_rejected() {
        let mut cfg = FunctionalConfig::from_functional(&cglmp3());
        let first = cfg.coefficients[0].clone();
        cfg.coefficients.push(first);
        assert!(matches!(cfg.to_functional(), Err(Error::Schema(_))));
    }

    #[test]
    fn classical_above_quantum_rejected() {
        let mut cfg = FunctionalConfig::from_functional(&cglmp3());
        cfg.classical_bound.value = 3.5;
        assert!(matches!(cfg.to_functional(), Err(Error::ConfigValidation(_))));
    }
}
