use std::f64::consts::PI;

use num_complex::Complex64;

use super::dims::DimensionVector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

const POVM_TOL: f64 = 1e-10;
const PROJECTIVE_TOL: f64 = 1e-8;

/// Local measurements: `operators[party][input][outcome]`, each `d_i x d_i`.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    dims: DimensionVector,
    operators: Vec<Vec<Vec<CMatrix>>>,
}

impl MeasurementSet {
    pub fn new(dims: DimensionVector, operators: Vec<Vec<Vec<CMatrix>>>) -> Result<Self> {
        if operators.len() != dims.parties() {
            return Err(Error::DimensionMismatch(format!(
                "{} parties of measurements for dimensions {dims}",
                operators.len()
            )));
        }
        for (party, (inputs, &d)) in operators.iter().zip(dims.dims()).enumerate() {
            if inputs.is_empty() {
                return Err(Error::InvalidMeasurement(format!("party {party} has no inputs")));
            }
            let outcomes = inputs[0].len();
            for (x, ops) in inputs.iter().enumerate() {
                if ops.len() != outcomes || outcomes == 0 {
                    return Err(Error::InvalidMeasurement(format!(
                        "party {party}: every input needs the same nonzero outcome count"
                    )));
                }
                let mut sum = CMatrix::zeros(d, d);
                for (a, op) in ops.iter().enumerate() {
                    if op.nrows() != d || op.ncols() != d {
                        return Err(Error::DimensionMismatch(format!(
                            "party {party} input {x} outcome {a}: {}x{} operator, local dimension {d}",
                            op.nrows(),
                            op.ncols()
                        )));
                    }
                    if linalg::hermitian_deviation(op) > POVM_TOL {
                        return Err(Error::InvalidMeasurement(format!(
                            "party {party} input {x} outcome {a}: not Hermitian"
                        )));
                    }
                    let min = linalg::eigvals_hermitian(op).last().copied().unwrap_or(0.0);
                    if min < -POVM_TOL {
                        return Err(Error::InvalidMeasurement(format!(
                            "party {party} input {x} outcome {a}: eigenvalue {min:.3e} < 0"
                        )));
                    }
                    sum += op;
                }
                let dev = linalg::max_abs(&(sum - linalg::identity(d)));
                if dev > POVM_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "party {party} input {x}: operators sum to identity only within {dev:.3e}"
                    )));
                }
            }
        }
        Ok(MeasurementSet { dims, operators })
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.operators.len()
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.operators.iter().map(Vec::len).collect()
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.operators.iter().map(|p| p[0].len()).collect()
    }

    pub fn operator(&self, party: usize, input: usize, outcome: usize) -> &CMatrix {
        &self.operators[party][input][outcome]
    }

    pub fn party(&self, party: usize) -> &[Vec<CMatrix>] {
        &self.operators[party]
    }

    pub fn operators(&self) -> &[Vec<Vec<CMatrix>>] {
        &self.operators
    }

    /// Replace one party/input measurement. No validation; callers keep
    /// projectivity themselves (see-saw updates).
    pub(crate) fn set_unchecked(&mut self, party: usize, input: usize, ops: Vec<CMatrix>) {
        self.operators[party][input] = ops;
    }

    pub fn is_projective(&self) -> bool {
        self.operators.iter().flatten().flatten().all(|op| {
            let sq = op * op;
            linalg::max_abs(&(sq - op)) <= PROJECTIVE_TOL
        })
    }

    /// `⊗_i M_{x_i}^{a_i}`.
    pub fn joint_operator(&self, inputs: &[usize], outcomes: &[usize]) -> CMatrix {
        linalg::kron_all(
            self.operators
                .iter()
                .zip(inputs.iter().zip(outcomes))
                .map(|(p, (&x, &a))| &p[x][a]),
        )
    }
}

/// The three rank-one qutrit projectors onto
/// `|o(k)> = (|0> + e^{i(α1 + 2πk/3)}|1> + e^{i(α2 + 4πk/3)}|2>) / √3`.
pub fn cglmp_projectors(alpha1: f64, alpha2: f64) -> Vec<CMatrix> {
    let a1 = alpha1.rem_euclid(2.0 * PI);
    let a2 = alpha2.rem_euclid(2.0 * PI);
    let s = 1.0 / 3f64.sqrt();
    (0..3)
        .map(|k| {
            let k = k as f64;
            let v = CVector::from_vec(vec![
                Complex64::new(s, 0.0),
                Complex64::from_polar(s, a1 + 2.0 * PI * k / 3.0),
                Complex64::from_polar(s, a2 + 4.0 * PI * k / 3.0),
            ]);
            linalg::projector(&v)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn matrix(self) -> CMatrix {
        let (z, o, i) = (linalg::ZERO, linalg::ONE, linalg::I);
        match self {
            PauliAxis::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            PauliAxis::Y => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            PauliAxis::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }
}

/// Eigenprojectors of a Pauli operator: outcome 0 is eigenvalue −1, outcome 1
/// is eigenvalue +1.
pub fn pauli_measurement(axis: PauliAxis) -> Vec<CMatrix> {
    let id = linalg::identity(2);
    let p = axis.matrix();
    let half = Complex64::from(0.5);
    vec![(&id - &p) * half, (&id + &p) * half]
}

pub fn computational_basis(d: usize) -> Vec<CMatrix> {
    (0..d)
        .map(|k| {
            let mut m = CMatrix::zeros(d, d);
            m[(k, k)] = linalg::ONE;
            m
        })
        .collect()
}
