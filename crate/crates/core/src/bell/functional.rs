use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{Correlation, MeasurementSet, Radix};

/// Largest number of local deterministic strategies enumerated exactly.
pub const STRATEGY_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalBound {
    pub value: f64,
    pub provenance: String,
}

/// Dimension-constrained quantum bound `C_q(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumBound {
    pub value: f64,
    pub dims: Vec<usize>,
    pub provenance: String,
}

/// `I = Σ c_x^a p(a|x)` with its classical and quantum bounds.
///
/// Coefficients share the storage layout of [`Correlation`]: setting-major,
/// mixed-radix over parties with party 1 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct BellFunctional {
    pub(crate) name: String,
    pub(crate) inputs: Vec<usize>,
    pub(crate) outcomes: Vec<usize>,
    pub(crate) coefficients: Vec<f64>,
    pub(crate) classical_bound: ClassicalBound,
    pub(crate) quantum_bound: QuantumBound,
    pub(crate) normalization: String,
}

/// Top two eigenvalues of a Bell operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGap {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl BellFunctional {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<usize>,
        outcomes: Vec<usize>,
        coefficients: Vec<f64>,
        classical_bound: ClassicalBound,
        quantum_bound: QuantumBound,
        normalization: impl Into<String>,
    ) -> Result<Self> {
        if inputs.len() != outcomes.len() || inputs.is_empty() {
            return Err(Error::ArityMismatch(format!("inputs {inputs:?} vs outcomes {outcomes:?}")));
        }
        let ns: usize = inputs.iter().product();
        let no: usize = outcomes.iter().product();
        if coefficients.len() != ns * no {
            return Err(Error::ArityMismatch(format!(
                "{} coefficients for {ns} settings x {no} outcomes",
                coefficients.len()
            )));
        }
        if quantum_bound.dims.len() != inputs.len() {
            return Err(Error::ArityMismatch(format!(
                "quantum bound certified for {:?} but functional has {} parties",
                quantum_bound.dims,
                inputs.len()
            )));
        }
        if classical_bound.value > quantum_bound.value + 1e-9 {
            return Err(Error::ConfigValidation(format!(
                "classical bound {} exceeds quantum bound {}",
                classical_bound.value, quantum_bound.value
            )));
        }
        Ok(BellFunctional {
            name: name.into(),
            inputs,
            outcomes,
            coefficients,
            classical_bound,
            quantum_bound,
            normalization: normalization.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, inputs: &[usize], outcomes: &[usize]) -> f64 {
        let s = Radix::new(self.inputs.clone()).encode(inputs);
        let o = Radix::new(self.outcomes.clone()).encode(outcomes);
        self.coefficients[s * self.n_outcomes() + o]
    }

    pub fn classical_bound(&self) -> &ClassicalBound {
        &self.classical_bound
    }

    pub fn quantum_bound(&self) -> &QuantumBound {
        &self.quantum_bound
    }

    pub fn normalization(&self) -> &str {
        &self.normalization
    }

    pub fn n_settings(&self) -> usize {
        self.inputs.iter().product()
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.iter().product()
    }

    pub(crate) fn coefficient_row(&self, s: usize) -> &[f64] {
        let no = self.n_outcomes();
        &self.coefficients[s * no..(s + 1) * no]
    }

    fn check_correlation(&self, c: &Correlation) -> Result<()> {
        if c.inputs() != self.inputs.as_slice() || c.outcomes() != self.outcomes.as_slice() {
            return Err(Error::ArityMismatch(format!(
                "{} expects inputs {:?} / outcomes {:?}, correlation has {:?} / {:?}",
                self.name,
                self.inputs,
                self.outcomes,
                c.inputs(),
                c.outcomes()
            )));
        }
        Ok(())
    }

    fn check_measurements(&self, m: &MeasurementSet) -> Result<()> {
        if m.inputs() != self.inputs || m.outcomes() != self.outcomes {
            return Err(Error::ArityMismatch(format!(
                "{} expects inputs {:?} / outcomes {:?}, measurements have {:?} / {:?}",
                self.name,
                self.inputs,
                self.outcomes,
                m.inputs(),
                m.outcomes()
            )));
        }
        Ok(())
    }
}

/// `Σ c_x^a p(a|x)`.
pub fn evaluate(f: &BellFunctional, c: &Correlation) -> Result<f64> {
    f.check_correlation(c)?;
    Ok(f.coefficients.iter().zip(c.probs()).map(|(k, p)| k * p).sum())
}

/// Exact maximum of the functional over local deterministic strategies.
pub fn classical_bound_bruteforce(f: &BellFunctional) -> Result<f64> {
    // one "digit" per (party, input), valued in that party's outcomes
    let mut slots: Vec<(usize, usize)> = Vec::new();
    let mut count: u128 = 1;
    for (party, (&m, &k)) in f.inputs.iter().zip(&f.outcomes).enumerate() {
        for x in 0..m {
            slots.push((party, x));
            count = count.saturating_mul(k as u128);
        }
    }
    if count > STRATEGY_LIMIT {
        return Err(Error::SearchSpace { count, limit: STRATEGY_LIMIT });
    }
    let sr = Radix::new(f.inputs.clone());
    let or = Radix::new(f.outcomes.clone());
    let settings: Vec<Vec<usize>> = sr.iter().collect();
    // offset of slot (party, x) in the digit vector
    let mut offset = vec![0usize; f.parties()];
    for p in 1..f.parties() {
        offset[p] = offset[p - 1] + f.inputs[p - 1];
    }
    let mut digits = vec![0usize; slots.len()];
    let mut best = f64::NEG_INFINITY;
    let mut outcome = vec![0usize; f.parties()];
    loop {
        let mut value = 0.0;
        for (s, x) in settings.iter().enumerate() {
            for (p, &xp) in x.iter().enumerate() {
                outcome[p] = digits[offset[p] + xp];
            }
            value += f.coefficient_row(s)[or.encode(&outcome)];
        }
        best = best.max(value);
        // odometer increment
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(best);
            }
            digits[k] += 1;
            if digits[k] < f.outcomes[slots[k].0] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// `B = Σ c_x^a ⊗_i M_{x_i}^{a_i}`; `Tr(B ρ)` is the Bell value of `ρ`.
pub fn bell_operator(f: &BellFunctional, m: &MeasurementSet) -> Result<CMatrix> {
    f.check_measurements(m)?;
    let d = m.dims().total();
    let sr = Radix::new(f.inputs.clone());
    let or = Radix::new(f.outcomes.clone());
    let mut b = CMatrix::zeros(d, d);
    for s in 0..sr.len() {
        let x = sr.decode(s);
        for (o, &coef) in f.coefficient_row(s).iter().enumerate() {
            if coef != 0.0 {
                b += m.joint_operator(&x, &or.decode(o)) * num_complex::Complex64::from(coef);
            }
        }
    }
    Ok(b)
}

pub fn spectral_gap(f: &BellFunctional, m: &MeasurementSet) -> Result<SpectralGap> {
    let vals = linalg::eigvals_hermitian(&bell_operator(f, m)?);
    Ok(SpectralGap {
        lambda1: vals[0],
        lambda2: vals.get(1).copied().unwrap_or(vals[0]),
    })
}
