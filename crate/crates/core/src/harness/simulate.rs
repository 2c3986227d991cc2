use std::fmt;
use std::str::FromStr;

use rand_distr::{Binomial, Distribution};

use super::formats::CountTable;
use crate::bell::canonical_settings;
use crate::error::{Error, Result};
use crate::quantum::{correlation_from_state, make_ghz3, make_phi_beta, Correlation, DensityMatrix, MeasurementConfig, MeasurementSet};
use crate::random::{derive_seed, seeded, SeededRng};

/// States the simulator knows by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    /// `phi-beta:β`
    PhiBeta(f64),
    /// `ghz3`
    Ghz3,
    /// `ghz3-noisy:v`, GHZ mixed with white noise at visibility `v`.
    Ghz3Noisy(f64),
}

impl StateSpec {
    pub fn density(&self) -> Result<DensityMatrix> {
        match *self {
            StateSpec::PhiBeta(b) => Ok(make_phi_beta(b)?.to_density()),
            StateSpec::Ghz3 => Ok(make_ghz3().to_density()),
            StateSpec::Ghz3Noisy(v) => make_ghz3().to_density().with_white_noise(v),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::domain(format!("state {name:?} needs a parameter")))?
                .parse::<f64>()
                .map_err(|e| Error::domain(format!("bad parameter in {s:?}: {e}")))
        };
        match name {
            "phi-beta" => Ok(StateSpec::PhiBeta(number(arg)?)),
            "ghz3" if arg.is_none() => Ok(StateSpec::Ghz3),
            "ghz3-noisy" => Ok(StateSpec::Ghz3Noisy(number(arg)?)),
            _ => Err(Error::domain(format!("unknown state {s:?} (expected phi-beta:β, ghz3 or ghz3-noisy:v)"))),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::PhiBeta(b) => write!(f, "phi-beta:{b}"),
            StateSpec::Ghz3 => write!(f, "ghz3"),
            StateSpec::Ghz3Noisy(v) => write!(f, "ghz3-noisy:{v}"),
        }
    }
}

/// Measurements given either as a canonical set name (`cglmp3`,
/// `tailored3`, `mabk3`) or as a parsed measurement file.
#[derive(Debug, Clone)]
pub enum MeasurementSpec {
    Canonical(String),
    Config(MeasurementConfig),
}

impl MeasurementSpec {
    pub fn build(&self) -> Result<MeasurementSet> {
        match self {
            MeasurementSpec::Canonical(name) => canonical_settings(name),
            MeasurementSpec::Config(c) => c.build(),
        }
    }
}

pub fn simulate_exact(state: &StateSpec, m: &MeasurementSpec) -> Result<Correlation> {
    correlation_from_state(&state.density()?, &m.build()?)
}

/// Multinomial draw by successive binomials.
fn multinomial(n: u64, probs: &[f64], rng: &mut SeededRng) -> Vec<u64> {
    let mut left = n;
    let mut mass = 1.0;
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        let k = if i + 1 == probs.len() {
            left
        } else if left == 0 || p <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("probability in [0, 1]").sample(rng)
        };
        out.push(k);
        left -= k;
        mass -= p;
    }
    out
}

/// `shots` samples per setting from the exact distribution. Setting `s`
/// uses its own stream derived from `seed`.
pub fn sample_counts(c: &Correlation, shots: u64, seed: u64) -> Result<CountTable> {
    if shots == 0 {
        return Err(Error::domain("shots must be positive"));
    }
    let mut counts = Vec::with_capacity(c.probs().len());
    for s in 0..c.n_settings() {
        let mut rng = seeded(derive_seed(seed, s as u64));
        counts.extend(multinomial(shots, c.setting(s), &mut rng));
    }
    CountTable::new(c.dims().clone(), c.inputs().to_vec(), c.outcomes().to_vec(), counts)
}
