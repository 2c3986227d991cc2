//! Numerical estimation of non-degeneracy rows.
//!
//! For fixed measurements with Bell-operator eigenvalues `λ1 ≥ λ2`, a pair
//! `α ⊥ β` with `<α|B|α> ≥ t` exists iff `λ1 ≥ t`, and then the largest
//! reachable `<β|B|β>` is `min(λ1, λ1 + λ2 - t)`. The search maximises that
//! quantity over measurements by following the ascent of
//! `(1 + μ) λ1 + λ2` for a decreasing schedule of `μ`, recording every
//! visited `(λ1, λ2)` pair.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{NondegeneracyProfile, ProfileRow};
use crate::bell::{ascend, BellFunctional, Bases};
use crate::error::{Error, Result};
use crate::quantum::DimensionVector;
use crate::random::{derive_seed, random_measurement_set, seeded};

#[derive(Debug, Clone)]
pub struct ProfileSearchOptions {
    pub restarts: usize,
    /// `ε₂` is reported as `safety * (C_q - best)`.
    pub safety: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Weights on `λ1` relative to `λ2`; `None` maximises `λ1` alone.
    pub schedule: Vec<Option<f64>>,
}

impl Default for ProfileSearchOptions {
    fn default() -> Self {
        ProfileSearchOptions {
            restarts: 200,
            safety: 0.99,
            max_iter: 400,
            seed: 0,
            schedule: vec![None, Some(8.0), Some(4.0), Some(2.0), Some(1.0), Some(0.5), Some(0.25), Some(0.0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedRow {
    pub eps1: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub profile: NondegeneracyProfile,
    pub rejected: Vec<RejectedRow>,
    /// Restarts whose ascent hit the iteration budget in some stage.
    pub unconverged_restarts: usize,
}

/// `(λ1, λ2)` pairs from one restart's schedule, and whether every stage
/// converged.
type RestartPairs = (Vec<(f64, f64)>, bool);

/// Estimate `(ε₁, ε₂)` rows for `f` in dimensions `dims`.
pub fn profile_search(f: &BellFunctional, dims: &DimensionVector, eps1_grid: &[f64], opts: &ProfileSearchOptions) -> Result<SearchOutcome> {
    if dims.total() > 81 {
        return Err(Error::domain(format!("profile search is limited to total dimension 81, got {}", dims.total())));
    }
    if dims.dims() != f.quantum_bound().dims.as_slice() {
        return Err(Error::DimensionMismatch(format!(
            "{} has a quantum bound for {:?}, search requested for {dims}",
            f.name(),
            f.quantum_bound().dims
        )));
    }
    if opts.restarts == 0 || !(0.0..=1.0).contains(&opts.safety) {
        return Err(Error::domain("profile search needs restarts > 0 and safety in [0, 1]"));
    }
    let c_q = f.quantum_bound().value;
    let c_l = f.classical_bound().value;
    let runs: Vec<Result<RestartPairs>> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded(derive_seed(opts.seed, k as u64));
            let m = random_measurement_set(dims, f.inputs(), &mut rng);
            let mut bases = Bases::from_measurements(&m)?;
            let mut pairs = Vec::new();
            let mut converged = true;
            for mu in &opts.schedule {
                let weights = match mu {
                    None => vec![1.0],
                    Some(mu) => vec![1.0 + mu, 1.0],
                };
                let run = ascend(f, &mut bases, &weights, opts.max_iter, 1e-12)?;
                converged &= run.converged;
                pairs.push((run.eigenvalues[0], run.eigenvalues.get(1).copied().unwrap_or(f64::NEG_INFINITY)));
            }
            Ok((pairs, converged))
        })
        .collect();
    let mut pairs = Vec::new();
    let mut unconverged = 0;
    for r in runs {
        let (p, ok) = r?;
        pairs.extend(p);
        unconverged += usize::from(!ok);
    }
    let mut rows = Vec::new();
    let mut rejected = Vec::new();
    for &eps1 in eps1_grid {
        if eps1.is_nan() || eps1 < 0.0 || eps1 > c_q - c_l {
            rejected.push(RejectedRow { eps1, reason: format!("outside [0, C_q - C_l] = [0, {}]", c_q - c_l) });
            continue;
        }
        let t = c_q - eps1;
        let best = pairs
            .iter()
            .filter(|(l1, _)| *l1 >= t - 1e-9)
            .map(|&(l1, l2)| l1.min(l1 + l2 - t))
            .fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            rejected.push(RejectedRow { eps1, reason: "no restart reached C_q - eps1".into() });
            continue;
        }
        let eps2 = (opts.safety * (c_q - best)).min(c_q);
        if eps2 <= eps1 {
            rejected.push(RejectedRow { eps1, reason: format!("estimated eps2 {eps2} does not exceed eps1") });
            continue;
        }
        rows.push(ProfileRow { eps1, eps2, provenance: format!("search: best orthogonal value {best}") });
    }
    let provenance = format!(
        "numerical search: {} restarts, {} ascent stages, safety {}, seed {}",
        opts.restarts,
        opts.schedule.len(),
        opts.safety,
        opts.seed
    );
    let profile = NondegeneracyProfile::new(f.name(), dims.dims().to_vec(), c_q, provenance, rows)?;
    Ok(SearchOutcome { profile, rejected, unconverged_restarts: unconverged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::mabk3;

    #[test]
    fn mabk_zero_row() {
        let f = mabk3();
        let dims = DimensionVector::new(vec![2, 2, 2]).unwrap();
        let opts = ProfileSearchOptions { restarts: 24, safety: 1.0, ..Default::default() };
        let out = profile_search(&f, &dims, &[0.0, 0.5, 1.5], &opts).unwrap();
        let row0 = &out.profile.rows[0];
        assert_eq!(row0.eps1, 0.0);
        assert!((row0.eps2 - 2.0).abs() < 1e-4, "{}", row0.eps2);
        assert_eq!(out.rejected.len(), 1);
        assert_eq!(out.rejected[0].eps1, 1.5);
    }
}
