//! Upper bound `F̂` on the fidelity between the unknown state and any pure
//! fully-product state, from the correlation table alone.
//!
//! For one input combination `x` and a product state measured with the same
//! devices, the outcome distribution `q` is a product distribution, and the
//! quantum fidelity is bounded by the classical one `Σ_a √(q(a) p(a|x))`.
//! Maximising over product `q` is a rank-one problem for the tensor `√p`.
//! Taking the minimum over every available `x` gives `F̂`.

mod shopm;
mod tensor;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use shopm::{setting_bound_shopm, shopm_shift, ShopmOptions, ShopmResult};
pub use tensor::SettingTensor;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quantum::Correlation;
use crate::random::derive_seed;

/// Largest singular value of the matrix `√p(ab|xy)`.
pub fn setting_bound_bipartite(t: &SettingTensor) -> Result<f64> {
    let m = t
        .as_matrix()
        .ok_or_else(|| Error::domain(format!("bipartite bound needs an order-2 tensor, got order {}", t.order())))?;
    Ok(linalg::top_singular_value(&m))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SettingScope {
    All,
    Listed(Vec<Vec<usize>>),
}

#[derive(Debug, Clone)]
pub struct FidelityOptions {
    pub shopm: ShopmOptions,
    pub scope: SettingScope,
    pub seed: u64,
}

impl Default for FidelityOptions {
    fn default() -> Self {
        FidelityOptions { shopm: ShopmOptions::default(), scope: SettingScope::All, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    SingularValue,
    Shopm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingBound {
    pub inputs: Vec<usize>,
    pub value: f64,
    pub method: BoundMethod,
    pub restarts: usize,
    pub iterations: usize,
    pub converged: bool,
    pub monotonicity_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityBound {
    pub value: f64,
    pub per_setting: Vec<SettingBound>,
    pub argmin: Vec<usize>,
    /// Every higher-order setting converged on at least one restart.
    pub converged: bool,
}

/// `F̂ = min_x max_q Σ_a √(q(a) p(a|x))`, clamped to `[0, 1]`.
pub fn fhat(c: &Correlation, opts: &FidelityOptions) -> Result<FidelityBound> {
    let sr = c.setting_radix();
    let settings: Vec<usize> = match &opts.scope {
        SettingScope::All => (0..c.n_settings()).collect(),
        SettingScope::Listed(list) => {
            if list.is_empty() {
                return Err(Error::domain("empty setting list for the fidelity bound"));
            }
            list.iter()
                .map(|x| {
                    if x.len() != c.parties() || x.iter().zip(c.inputs()).any(|(a, b)| a >= b) {
                        Err(Error::ArityMismatch(format!("setting {x:?} outside inputs {:?}", c.inputs())))
                    } else {
                        Ok(sr.encode(x))
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    let shape = c.outcomes().to_vec();
    let per_setting: Vec<SettingBound> = settings
        .par_iter()
        .map(|&s| {
            let t = SettingTensor::from_probabilities(shape.clone(), c.setting(s), 1e-3)?;
            let inputs = sr.decode(s);
            if t.order() == 2 {
                Ok(SettingBound {
                    inputs,
                    value: setting_bound_bipartite(&t)?.min(1.0),
                    method: BoundMethod::SingularValue,
                    restarts: 0,
                    iterations: 0,
                    converged: true,
                    monotonicity_violations: 0,
                })
            } else {
                let mut o = opts.shopm.clone();
                o.seed = derive_seed(opts.seed, s as u64);
                let r = setting_bound_shopm(&t, &o);
                Ok(SettingBound {
                    inputs,
                    value: r.value.min(1.0),
                    method: BoundMethod::Shopm,
                    restarts: r.restarts,
                    iterations: r.iterations,
                    converged: r.converged,
                    monotonicity_violations: r.monotonicity_violations,
                })
            }
        })
        .collect::<Result<_>>()?;
    let best = per_setting
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("at least one setting");
    Ok(FidelityBound {
        value: per_setting[best].value.clamp(0.0, 1.0),
        argmin: per_setting[best].inputs.clone(),
        converged: per_setting.iter().all(|b| b.converged),
        per_setting,
    })
}
