use super::dims::{DimensionVector, Radix};
use super::measurement::MeasurementSet;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Default tolerance on `Σ_a p(a|x) = 1`.
pub const DEFAULT_NORMALIZATION_TOL: f64 = 1e-6;
/// Default no-signaling deviation above which a warning is raised.
pub const DEFAULT_NO_SIGNALING_WARN: f64 = 1e-2;

/// Probability table `p(a|x)` over party-wise inputs and outcomes.
///
/// Entries are stored setting-major: `probs[s * n_outcomes + o]` where `s` and
/// `o` are mixed-radix codes (party 1 slowest) of the input and outcome tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    dims: DimensionVector,
    inputs: Vec<usize>,
    outcomes: Vec<usize>,
    probs: Vec<f64>,
}

/// Largest marginal discrepancy found by [`Correlation::no_signaling_deviation`].
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignalingWarning {
    pub max_deviation: f64,
    pub threshold: f64,
}

impl Correlation {
    pub fn new(dims: DimensionVector, inputs: Vec<usize>, outcomes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(dims, inputs, outcomes, probs, DEFAULT_NORMALIZATION_TOL)
    }

    pub fn with_tolerance(
        dims: DimensionVector,
        inputs: Vec<usize>,
        outcomes: Vec<usize>,
        probs: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        let n = dims.parties();
        if inputs.len() != n || outcomes.len() != n {
            return Err(Error::ArityMismatch(format!(
                "{n} parties but {} input and {} outcome arities",
                inputs.len(),
                outcomes.len()
            )));
        }
        if inputs.iter().chain(&outcomes).any(|&k| k == 0) {
            return Err(Error::ArityMismatch("arities must be positive".into()));
        }
        let c = Correlation { dims, inputs, outcomes, probs };
        if c.probs.len() != c.setting_radix().len() * c.outcome_radix().len() {
            return Err(Error::ArityMismatch(format!(
                "{} probabilities for {} settings x {} outcomes",
                c.probs.len(),
                c.setting_radix().len(),
                c.outcome_radix().len()
            )));
        }
        c.validate(tolerance)?;
        Ok(c)
    }

    fn validate(&self, tolerance: f64) -> Result<()> {
        let sr = self.setting_radix();
        let or = self.outcome_radix();
        for s in 0..sr.len() {
            let row = self.setting(s);
            for (o, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::NegativeEntry {
                        setting: sr.decode(s),
                        outcome: or.decode(o),
                        value: p,
                    });
                }
                if p > 1.0 + tolerance {
                    return Err(Error::Normalization { setting: sr.decode(s), sum: p, tolerance });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tolerance {
                return Err(Error::Normalization { setting: sr.decode(s), sum, tolerance });
            }
        }
        Ok(())
    }

    /// The uniform distribution over every setting.
    pub fn uniform(dims: DimensionVector, inputs: Vec<usize>, outcomes: Vec<usize>) -> Result<Self> {
        let ns: usize = inputs.iter().product();
        let no: usize = outcomes.iter().product();
        Self::new(dims, inputs, outcomes, vec![1.0 / no as f64; ns * no])
    }

    /// Correlation of a local deterministic strategy: `strategy[i][x]` is the
    /// outcome party `i` returns on input `x`.
    pub fn deterministic(dims: DimensionVector, outcomes: Vec<usize>, strategy: &[Vec<usize>]) -> Result<Self> {
        let inputs: Vec<usize> = strategy.iter().map(Vec::len).collect();
        let sr = Radix::new(inputs.clone());
        let or = Radix::new(outcomes.clone());
        let mut probs = vec![0.0; sr.len() * or.len()];
        for s in 0..sr.len() {
            let x = sr.decode(s);
            let a: Vec<usize> = x.iter().enumerate().map(|(i, &xi)| strategy[i][xi]).collect();
            probs[s * or.len() + or.encode(&a)] = 1.0;
        }
        Self::new(dims, inputs, outcomes, probs)
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn setting_radix(&self) -> Radix {
        Radix::new(self.inputs.clone())
    }

    pub fn outcome_radix(&self) -> Radix {
        Radix::new(self.outcomes.clone())
    }

    pub fn n_settings(&self) -> usize {
        self.inputs.iter().product()
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.iter().product()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Distribution for setting code `s`.
    pub fn setting(&self, s: usize) -> &[f64] {
        let no = self.n_outcomes();
        &self.probs[s * no..(s + 1) * no]
    }

    pub fn prob(&self, inputs: &[usize], outcomes: &[usize]) -> f64 {
        let s = self.setting_radix().encode(inputs);
        self.setting(s)[self.outcome_radix().encode(outcomes)]
    }

    pub fn same_shape(&self, other: &Correlation) -> bool {
        self.inputs == other.inputs && self.outcomes == other.outcomes
    }

    /// `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Correlation, w: f64) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::ArityMismatch("mixing correlations of different shape".into()));
        }
        let probs = self.probs.iter().zip(&other.probs).map(|(p, q)| w * p + (1.0 - w) * q).collect();
        Self::new(self.dims.clone(), self.inputs.clone(), self.outcomes.clone(), probs)
    }

    /// Largest difference between the marginal distribution of any single
    /// party computed under two different input choices of the others.
    pub fn no_signaling_deviation(&self) -> f64 {
        let sr = self.setting_radix();
        let or = self.outcome_radix();
        let n = self.parties();
        let mut worst = 0.0_f64;
        for party in 0..n {
            // marginal[party input][outcome] under each full setting
            let k = self.outcomes[party];
            let mut first: Vec<Option<Vec<f64>>> = vec![None; self.inputs[party]];
            for s in 0..sr.len() {
                let xi = sr.digit(s, party);
                let mut marg = vec![0.0; k];
                for (o, &p) in self.setting(s).iter().enumerate() {
                    marg[or.digit(o, party)] += p;
                }
                match &first[xi] {
                    None => first[xi] = Some(marg),
                    Some(reference) => {
                        for (a, b) in reference.iter().zip(&marg) {
                            worst = worst.max((a - b).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn no_signaling_check(&self, threshold: f64) -> Option<NoSignalingWarning> {
        let max_deviation = self.no_signaling_deviation();
        (max_deviation > threshold).then_some(NoSignalingWarning { max_deviation, threshold })
    }
}

/// `p(a|x) = Tr((⊗_i M_{x_i}^{a_i}) ρ)` for every setting.
pub fn correlation_from_state(rho: &DensityMatrix, m: &MeasurementSet) -> Result<Correlation> {
    if rho.dims() != m.dims() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {} vs measurement dims {}",
            rho.dims(),
            m.dims()
        )));
    }
    let inputs = m.inputs();
    let outcomes = m.outcomes();
    let sr = Radix::new(inputs.clone());
    let or = Radix::new(outcomes.clone());
    let mut probs = Vec::with_capacity(sr.len() * or.len());
    for s in 0..sr.len() {
        let x = sr.decode(s);
        let mut row: Vec<f64> = (0..or.len())
            .map(|o| rho.expectation(&m.joint_operator(&x, &or.decode(o))).re)
            .collect();
        // strip round-off negatives
        for p in row.iter_mut() {
            if *p < 0.0 && *p > -1e-12 {
                *p = 0.0;
            }
        }
        probs.extend(row);
    }
    Correlation::new(rho.dims().clone(), inputs, outcomes, probs)
}
