//! Schema-versioned JSON documents for correlations and count tables.
//!
//! Entries are keyed by explicit input and outcome tuples. Outcomes missing
//! from a listed setting are zero; a setting with no entries at all is an
//! error.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quantum::{Correlation, DimensionVector, NoSignalingWarning, Radix, DEFAULT_NORMALIZATION_TOL, DEFAULT_NO_SIGNALING_WARN};

pub const CORRELATION_SCHEMA: &str = "entcert.correlation/1";
pub const COUNTS_SCHEMA: &str = "entcert.counts/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityEntry {
    pub x: Vec<usize>,
    pub a: Vec<usize>,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationDoc {
    pub schema: String,
    pub dims: Vec<usize>,
    pub inputs: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub entries: Vec<ProbabilityEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountEntry {
    pub x: Vec<usize>,
    pub a: Vec<usize>,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsDoc {
    pub schema: String,
    pub dims: Vec<usize>,
    pub inputs: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub entries: Vec<CountEntry>,
}

/// Event counts per `(x, a)`, same layout as [`Correlation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    dims: DimensionVector,
    inputs: Vec<usize>,
    outcomes: Vec<usize>,
    counts: Vec<u64>,
}

impl CountTable {
    pub fn new(dims: DimensionVector, inputs: Vec<usize>, outcomes: Vec<usize>, counts: Vec<u64>) -> Result<Self> {
        check_arity(&dims, &inputs, &outcomes)?;
        let ns: usize = inputs.iter().product();
        let no: usize = outcomes.iter().product();
        if counts.len() != ns * no {
            return Err(Error::ArityMismatch(format!("{} counts for {ns} settings x {no} outcomes", counts.len())));
        }
        let t = CountTable { dims, inputs, outcomes, counts };
        for s in 0..ns {
            if t.total(s) == 0 {
                return Err(Error::EmptySetting(Radix::new(t.inputs.clone()).decode(s)));
            }
        }
        Ok(t)
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_settings(&self) -> usize {
        self.inputs.iter().product()
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.iter().product()
    }

    pub fn setting(&self, s: usize) -> &[u64] {
        let no = self.n_outcomes();
        &self.counts[s * no..(s + 1) * no]
    }

    pub fn total(&self, s: usize) -> u64 {
        self.setting(s).iter().sum()
    }

    pub fn totals(&self) -> Vec<u64> {
        (0..self.n_settings()).map(|s| self.total(s)).collect()
    }

    /// Relative frequencies per setting.
    pub fn to_correlation(&self) -> Result<Correlation> {
        let no = self.n_outcomes();
        let mut probs = Vec::with_capacity(self.counts.len());
        for s in 0..self.n_settings() {
            let total = self.total(s) as f64;
            probs.extend(self.counts[s * no..(s + 1) * no].iter().map(|&n| n as f64 / total));
        }
        Correlation::new(self.dims.clone(), self.inputs.clone(), self.outcomes.clone(), probs)
    }

    /// Same shape with new counts (used by resampling).
    pub fn with_counts(&self, counts: Vec<u64>) -> Result<Self> {
        CountTable::new(self.dims.clone(), self.inputs.clone(), self.outcomes.clone(), counts)
    }
}

fn check_arity(dims: &DimensionVector, inputs: &[usize], outcomes: &[usize]) -> Result<()> {
    if inputs.len() != dims.parties() || outcomes.len() != dims.parties() {
        return Err(Error::ArityMismatch(format!(
            "{} parties declared, inputs {inputs:?}, outcomes {outcomes:?}",
            dims.parties()
        )));
    }
    if inputs.iter().chain(outcomes).any(|&k| k == 0) {
        return Err(Error::ArityMismatch("zero inputs or outcomes".into()));
    }
    Ok(())
}

/// Scatter keyed entries into a dense setting-major table.
fn densify<T: Copy + Default>(
    inputs: &[usize],
    outcomes: &[usize],
    entries: impl Iterator<Item = (Vec<usize>, Vec<usize>, T)>,
) -> Result<Vec<T>> {
    let sr = Radix::new(inputs.to_vec());
    let or = Radix::new(outcomes.to_vec());
    let mut out = vec![T::default(); sr.len() * or.len()];
    let mut seen = vec![false; out.len()];
    let mut setting_seen = vec![false; sr.len()];
    let in_range = |v: &[usize], bases: &[usize]| v.len() == bases.len() && v.iter().zip(bases).all(|(a, b)| a < b);
    for (x, a, v) in entries {
        if !in_range(&x, inputs) || !in_range(&a, outcomes) {
            return Err(Error::Schema(format!("entry x={x:?} a={a:?} outside inputs {inputs:?} / outcomes {outcomes:?}")));
        }
        let s = sr.encode(&x);
        let k = s * or.len() + or.encode(&a);
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::Schema(format!("duplicate entry x={x:?} a={a:?}")));
        }
        setting_seen[s] = true;
        out[k] = v;
    }
    if let Some(s) = setting_seen.iter().position(|b| !b) {
        return Err(Error::EmptySetting(sr.decode(s)));
    }
    Ok(out)
}

impl CorrelationDoc {
    pub fn from_correlation(c: &Correlation) -> Self {
        let sr = c.setting_radix();
        let or = c.outcome_radix();
        let mut entries = Vec::with_capacity(c.probs().len());
        for s in 0..c.n_settings() {
            for (o, &p) in c.setting(s).iter().enumerate() {
                entries.push(ProbabilityEntry { x: sr.decode(s), a: or.decode(o), p });
            }
        }
        CorrelationDoc {
            schema: CORRELATION_SCHEMA.into(),
            dims: c.dims().dims().to_vec(),
            inputs: c.inputs().to_vec(),
            outcomes: c.outcomes().to_vec(),
            entries,
        }
    }

    pub fn to_correlation(&self, tolerance: f64) -> Result<Correlation> {
        if self.schema != CORRELATION_SCHEMA {
            return Err(Error::Schema(format!("unsupported correlation schema {:?}", self.schema)));
        }
        let dims = DimensionVector::new(self.dims.clone())?;
        check_arity(&dims, &self.inputs, &self.outcomes)?;
        let probs = densify(&self.inputs, &self.outcomes, self.entries.iter().map(|e| (e.x.clone(), e.a.clone(), e.p)))?;
        Correlation::with_tolerance(dims, self.inputs.clone(), self.outcomes.clone(), probs, tolerance)
    }
}

impl CountsDoc {
    pub fn from_counts(t: &CountTable) -> Self {
        let sr = Radix::new(t.inputs.clone());
        let or = Radix::new(t.outcomes.clone());
        let mut entries = Vec::with_capacity(t.counts.len());
        for s in 0..t.n_settings() {
            for (o, &n) in t.setting(s).iter().enumerate() {
                entries.push(CountEntry { x: sr.decode(s), a: or.decode(o), n });
            }
        }
        CountsDoc {
            schema: COUNTS_SCHEMA.into(),
            dims: t.dims.dims().to_vec(),
            inputs: t.inputs.clone(),
            outcomes: t.outcomes.clone(),
            entries,
        }
    }

    pub fn to_counts(&self) -> Result<CountTable> {
        if self.schema != COUNTS_SCHEMA {
            return Err(Error::Schema(format!("unsupported counts schema {:?}", self.schema)));
        }
        let dims = DimensionVector::new(self.dims.clone())?;
        check_arity(&dims, &self.inputs, &self.outcomes)?;
        let counts = densify(&self.inputs, &self.outcomes, self.entries.iter().map(|e| (e.x.clone(), e.a.clone(), e.n)))?;
        CountTable::new(dims, self.inputs.clone(), self.outcomes.clone(), counts)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serialises");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// A validated document together with the digest of its source bytes.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub sha256: String,
    pub warning: Option<NoSignalingWarning>,
}

pub fn parse_correlation(bytes: &[u8], tolerance: f64) -> Result<Loaded<Correlation>> {
    let doc: CorrelationDoc = serde_json::from_slice(bytes)?;
    let c = doc.to_correlation(tolerance)?;
    Ok(Loaded { warning: c.no_signaling_check(DEFAULT_NO_SIGNALING_WARN), value: c, sha256: sha256_hex(bytes) })
}

pub fn parse_counts(bytes: &[u8]) -> Result<Loaded<CountTable>> {
    let doc: CountsDoc = serde_json::from_slice(bytes)?;
    let t = doc.to_counts()?;
    let warning = t.to_correlation()?.no_signaling_check(DEFAULT_NO_SIGNALING_WARN);
    Ok(Loaded { value: t, sha256: sha256_hex(bytes), warning })
}

pub fn load_correlation(path: &Path) -> Result<Loaded<Correlation>> {
    load_correlation_with_tolerance(path, DEFAULT_NORMALIZATION_TOL)
}

pub fn load_correlation_with_tolerance(path: &Path, tolerance: f64) -> Result<Loaded<Correlation>> {
    parse_correlation(&read_file(path)?, tolerance)
}

pub fn load_counts(path: &Path) -> Result<Loaded<CountTable>> {
    parse_counts(&read_file(path)?)
}

pub fn correlation_json(c: &Correlation) -> String {
    to_json_string(&CorrelationDoc::from_correlation(c))
}

pub fn counts_json(t: &CountTable) -> String {
    to_json_string(&CountsDoc::from_counts(t))
}
