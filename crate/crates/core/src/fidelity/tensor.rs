use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quantum::Radix;

/// Nonnegative tensor `T(a) = √p(a|x)` for one input combination `x`,
/// stored row-major with the first index slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingTensor {
    shape: Vec<usize>,
    entries: Vec<f64>,
}

impl SettingTensor {
    /// Any nonnegative tensor (no normalisation requirement).
    pub fn new(shape: Vec<usize>, entries: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::DimensionMismatch(format!("bad tensor shape {shape:?}")));
        }
        let len: usize = shape.iter().product();
        if entries.len() != len {
            return Err(Error::DimensionMismatch(format!("{} entries for shape {shape:?}", entries.len())));
        }
        if let Some((i, v)) = entries.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::domain(format!("tensor entry {i} is {v}; entries must be finite and nonnegative")));
        }
        Ok(SettingTensor { shape, entries })
    }

    /// `√p` for a distribution over outcome tuples; `Σ p` must be 1 within `tol`.
    pub fn from_probabilities(shape: Vec<usize>, probs: &[f64], tol: f64) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::domain(format!("probabilities sum to {sum}")));
        }
        Self::new(shape, probs.iter().map(|p| p.max(0.0).sqrt()).collect())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    /// Order-2 view as a `d_1 x d_2` matrix.
    pub fn as_matrix(&self) -> Option<DMatrix<f64>> {
        (self.order() == 2).then(|| DMatrix::from_row_slice(self.shape[0], self.shape[1], &self.entries))
    }

    /// Append a trivial axis of length one.
    pub fn pad(&self) -> SettingTensor {
        let mut shape = self.shape.clone();
        shape.push(1);
        SettingTensor { shape, entries: self.entries.clone() }
    }

    /// `T(u_1, ..., u_n)`.
    pub fn multilinear(&self, factors: &[Vec<f64>]) -> f64 {
        let radix = Radix::new(self.shape.clone());
        let mut total = 0.0;
        for (idx, &t) in self.entries.iter().enumerate() {
            if t == 0.0 {
                continue;
            }
            let mut prod = t;
            for (k, u) in factors.iter().enumerate() {
                prod *= u[radix.digit(idx, k)];
            }
            total += prod;
        }
        total
    }

    /// `T` contracted with every factor except `skip`; a vector over axis `skip`.
    pub fn contract_except(&self, factors: &[Vec<f64>], skip: usize) -> Vec<f64> {
        let radix = Radix::new(self.shape.clone());
        let mut out = vec![0.0; self.shape[skip]];
        for (idx, &t) in self.entries.iter().enumerate() {
            if t == 0.0 {
                continue;
            }
            let mut prod = t;
            for (k, u) in factors.iter().enumerate() {
                if k != skip {
                    prod *= u[radix.digit(idx, k)];
                }
            }
            out[radix.digit(idx, skip)] += prod;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_consistent_with_multilinear() {
        let t = SettingTensor::new(vec![2, 3, 2], (0..12).map(|k| k as f64 * 0.1).collect()).unwrap();
        let f = vec![vec![0.3, 0.7], vec![0.1, 0.5, 0.2], vec![0.6, 0.4]];
        let full = t.multilinear(&f);
        for skip in 0..3 {
            let g = t.contract_except(&f, skip);
            let v: f64 = g.iter().zip(&f[skip]).map(|(a, b)| a * b).sum();
            assert!((v - full).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_negative() {
        assert!(SettingTensor::new(vec![2, 2], vec![0.5, -0.1, 0.5, 0.5]).is_err());
        assert!(SettingTensor::new(vec![2, 2], vec![0.5, f64::NAN, 0.5, 0.5]).is_err());
    }
}
