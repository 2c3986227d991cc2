use num_complex::Complex64;

use super::dims::{DimensionVector, Radix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

const DENSITY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// Unit-norm state vector over a dimension vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: DimensionVector,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(dims: DimensionVector, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dimensions {dims}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Normalises `amplitudes` before validating.
    pub fn normalized(dims: DimensionVector, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite amplitude vector".into()));
        }
        Self::new(dims, amplitudes / Complex64::from(norm))
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: &[usize]) -> Complex64 {
        self.amplitudes[self.dims.radix().encode(index)]
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: linalg::projector(&self.amplitudes),
        }
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: DimensionVector,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(dims: DimensionVector, matrix: CMatrix) -> Result<Self> {
        let d = dims.total();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dimensions {dims}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > DENSITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:.3e})")));
        }
        let tr = linalg::trace(&matrix);
        if (tr - Complex64::from(1.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = linalg::eigvals_hermitian(&matrix).last().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    pub fn maximally_mixed(dims: DimensionVector) -> Self {
        let d = dims.total();
        DensityMatrix {
            matrix: linalg::identity(d) / Complex64::from(d as f64),
            dims,
        }
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("mixing {} with {}", self.dims, other.dims)));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::domain(format!("mixing weight {w} outside [0,1]")));
        }
        Ok(DensityMatrix {
            dims: self.dims.clone(),
            matrix: &self.matrix * Complex64::from(w) + &other.matrix * Complex64::from(1.0 - w),
        })
    }

    /// `v * self + (1 - v) * I/D`.
    pub fn with_white_noise(&self, visibility: f64) -> Result<Self> {
        self.mix(&DensityMatrix::maximally_mixed(self.dims.clone()), visibility)
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvals_hermitian(&self.matrix)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn entropy_bits(&self) -> f64 {
        linalg::shannon_bits(self.eigenvalues())
    }

    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        // Tr(op * rho) without forming the product
        let n = self.matrix.nrows();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += op[(i, j)] * self.matrix[(j, i)];
            }
        }
        acc
    }
}

/// Reduced state on the parties listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.dims.parties();
    if keep.is_empty() {
        return Err(Error::domain("partial_trace: empty keep set"));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= n) {
        return Err(Error::domain(format!("partial_trace: invalid party set {keep:?} for {n} parties")));
    }
    let full = rho.dims.radix();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| rho.dims.dims()[k]).collect();
    let traced: Vec<usize> = (0..n).filter(|k| !keep_sorted.contains(k)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| rho.dims.dims()[k]).collect();
    let kept_radix = Radix::new(kept_dims.clone());
    let traced_radix = Radix::new(traced_dims);

    // bucket full indices by their traced-out digits
    let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_radix.len()];
    for idx in 0..full.len() {
        let digits = full.decode(idx);
        let kd: Vec<usize> = keep_sorted.iter().map(|&k| digits[k]).collect();
        let td: Vec<usize> = traced.iter().map(|&k| digits[k]).collect();
        buckets[traced_radix.encode(&td)].push((kept_radix.encode(&kd), idx));
    }
    let dk = kept_radix.len();
    let mut out = CMatrix::zeros(dk, dk);
    for bucket in &buckets {
        for &(k1, i) in bucket {
            for &(k2, j) in bucket {
                out[(k1, k2)] += rho.matrix[(i, j)];
            }
        }
    }
    Ok(DensityMatrix {
        dims: DimensionVector::subsystem(kept_dims)?,
        matrix: out,
    })
}

/// `(|00> + β|11> + |22>) / sqrt(2 + β²)` on two qutrits.
pub fn make_phi_beta(beta: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::domain(format!("beta = {beta} outside [0, 1]")));
    }
    let dims = DimensionVector::new(vec![3, 3])?;
    let norm = (2.0 + beta * beta).sqrt();
    let mut amps = CVector::zeros(9);
    amps[0] = Complex64::from(1.0 / norm);
    amps[4] = Complex64::from(beta / norm);
    amps[8] = Complex64::from(1.0 / norm);
    PureState::new(dims, amps)
}

/// `(|000> + i|111>) / sqrt(2)`.
pub fn make_ghz3() -> PureState {
    let dims = DimensionVector::new(vec![2, 2, 2]).expect("valid dims");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = CVector::zeros(8);
    amps[0] = Complex64::new(s, 0.0);
    amps[7] = Complex64::new(0.0, s);
    PureState::new(dims, amps).expect("unit norm")
}
