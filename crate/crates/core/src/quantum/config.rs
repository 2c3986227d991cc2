use serde::{Deserialize, Serialize};

use super::dims::DimensionVector;
use super::measurement::{cglmp_projectors, computational_basis, pauli_measurement, MeasurementSet, PauliAxis};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

pub const MEASUREMENT_SCHEMA: &str = "entcert.measurements/1";

/// One local measurement in a measurement file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalSetting {
    /// Qutrit projectors `|o(k)>` with phases `(alpha1, alpha2)`; outcome
    /// `a` is assigned the projector `o(order[a])`.
    CglmpPhases {
        alpha1: f64,
        alpha2: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<Vec<usize>>,
    },
    Pauli { axis: PauliAxisName },
    Computational,
    /// Rank-one projectors onto the given kets, each `[[re, im], ...]`.
    Kets { kets: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxisName {
    X,
    Y,
    Z,
}

impl From<PauliAxisName> for PauliAxis {
    fn from(a: PauliAxisName) -> Self {
        match a {
            PauliAxisName::X => PauliAxis::X,
            PauliAxisName::Y => PauliAxis::Y,
            PauliAxisName::Z => PauliAxis::Z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementConfig {
    pub schema: String,
    pub dims: Vec<usize>,
    /// `parties[i][x]`.
    pub parties: Vec<Vec<LocalSetting>>,
}

impl LocalSetting {
    fn operators(&self, d: usize) -> Result<Vec<CMatrix>> {
        match self {
            LocalSetting::CglmpPhases { alpha1, alpha2, order } => {
                if d != 3 {
                    return Err(Error::Schema(format!("cglmp_phases needs a qutrit, local dimension is {d}")));
                }
                let ops = cglmp_projectors(*alpha1, *alpha2);
                match order {
                    None => Ok(ops),
                    Some(order) => {
                        let mut seen = [false; 3];
                        if order.len() != 3 || order.iter().any(|&k| k >= 3 || std::mem::replace(&mut seen[k], true)) {
                            return Err(Error::Schema(format!("order {order:?} is not a permutation of 0..3")));
                        }
                        Ok(order.iter().map(|&k| ops[k].clone()).collect())
                    }
                }
            }
            LocalSetting::Pauli { axis } => {
                if d != 2 {
                    return Err(Error::Schema(format!("pauli setting needs a qubit, local dimension is {d}")));
                }
                Ok(pauli_measurement((*axis).into()))
            }
            LocalSetting::Computational => Ok(computational_basis(d)),
            LocalSetting::Kets { kets } => kets
                .iter()
                .map(|k| {
                    if k.len() != d {
                        return Err(Error::Schema(format!("ket of length {} in dimension {d}", k.len())));
                    }
                    let v = CVector::from_iterator(d, k.iter().map(|[re, im]| linalg::c(*re, *im)));
                    let n = v.norm();
                    if n == 0.0 {
                        return Err(Error::Schema("zero ket".into()));
                    }
                    Ok(linalg::projector(&(v / linalg::c(n, 0.0))))
                })
                .collect(),
        }
    }
}

impl MeasurementConfig {
    pub fn build(&self) -> Result<MeasurementSet> {
        if self.schema != MEASUREMENT_SCHEMA {
            return Err(Error::Schema(format!("unsupported measurement schema {:?}", self.schema)));
        }
        let dims = DimensionVector::new(self.dims.clone())?;
        if self.parties.len() != dims.parties() {
            return Err(Error::Schema(format!("{} parties listed for dims {dims}", self.parties.len())));
        }
        let ops = self
            .parties
            .iter()
            .zip(dims.dims())
            .map(|(inputs, &d)| inputs.iter().map(|s| s.operators(d)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MeasurementSet::new(dims, ops)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measurement config serialises")
    }
}
