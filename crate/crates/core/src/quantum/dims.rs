use crate::error::{Error, Result};

/// Largest total Hilbert-space dimension handled with dense storage.
pub const MAX_TOTAL_DIM: usize = 4096;

/// Local dimensions `(d_1, ..., d_n)`, party 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimensionVector(Vec<usize>);

impl DimensionVector {
    /// A multipartite system: at least two parties, each of dimension >= 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::domain(format!("need at least two parties, got {dims:?}")));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::domain(format!("local dimension {d} < 2 in {dims:?}")));
        }
        Self::check_total(&dims)?;
        Ok(DimensionVector(dims))
    }

    /// Dimensions of a subsystem (e.g. a reduced state). One party is allowed.
    pub fn subsystem(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::domain(format!("invalid subsystem dimensions {dims:?}")));
        }
        Self::check_total(&dims)?;
        Ok(DimensionVector(dims))
    }

    fn check_total(dims: &[usize]) -> Result<()> {
        let mut total: usize = 1;
        for &d in dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_TOTAL_DIM)
                .ok_or_else(|| Error::domain(format!("total dimension of {dims:?} exceeds {MAX_TOTAL_DIM}")))?;
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn radix(&self) -> Radix {
        Radix::new(self.0.clone())
    }
}

impl std::fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Mixed-radix index codec, first digit slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radix {
    bases: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Radix {
    pub fn new(bases: Vec<usize>) -> Self {
        let mut strides = vec![1; bases.len()];
        for i in (0..bases.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * bases[i + 1];
        }
        let len = bases.iter().product();
        Radix { bases, strides, len }
    }

    pub fn bases(&self) -> &[usize] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stride(&self, digit: usize) -> usize {
        self.strides[digit]
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let d = index / s;
                index %= s;
                d
            })
            .collect()
    }

    /// Digit `k` of `index`.
    pub fn digit(&self, index: usize, k: usize) -> usize {
        (index / self.strides[k]) % self.bases[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len).map(move |i| self.decode(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims() {
        assert!(DimensionVector::new(vec![3]).is_err());
        assert!(DimensionVector::new(vec![3, 1]).is_err());
        assert!(DimensionVector::new(vec![64, 65]).is_err());
        assert!(DimensionVector::new(vec![64, 64]).is_ok());
    }

    #[test]
    fn radix_roundtrip() {
        let r = Radix::new(vec![2, 3, 4]);
        assert_eq!(r.len(), 24);
        for i in 0..24 {
            assert_eq!(r.encode(&r.decode(i)), i);
        }
        assert_eq!(r.decode(5), vec![0, 1, 1]);
        assert_eq!(r.digit(23, 0), 1);
    }
}
