use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::certify::{build_report, run_pipeline, BootstrapDiagnostics, CertificateReport, CertifyOptions, Evidence, PointEstimate};
use super::formats::CountTable;
use crate::bell::BellFunctional;
use crate::error::{Error, Result};
use crate::random::{derive_seed, seeded, SeededRng};

pub const DEFAULT_RESAMPLES: usize = 100;

/// Every count redrawn from a Poisson law with the observed count as mean.
pub fn poisson_resample(t: &CountTable, rng: &mut SeededRng) -> Result<CountTable> {
    let counts = t
        .counts()
        .iter()
        .map(|&n| {
            if n == 0 {
                0
            } else {
                Poisson::new(n as f64).expect("positive mean").sample(rng) as u64
            }
        })
        .collect();
    t.with_counts(counts)
}

fn sample_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    Some((values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt())
}

/// Point estimate on the observed counts plus standard deviations over
/// `resamples` Poisson resamples, each renormalised per setting and run
/// through the full pipeline. Failed resamples are dropped and counted.
pub fn bootstrap(
    counts: &CountTable,
    f: &BellFunctional,
    evidence: &Evidence,
    opts: &CertifyOptions,
    resamples: usize,
    seed: u64,
) -> Result<CertificateReport> {
    if resamples < 2 {
        return Err(Error::domain(format!("bootstrap needs at least 2 resamples, got {resamples}")));
    }
    let observed = counts.to_correlation()?;
    let central = run_pipeline(&observed, f, evidence, opts)?;
    let runs: Vec<Result<PointEstimate>> = (0..resamples)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded(derive_seed(seed, k as u64));
            let t = poisson_resample(counts, &mut rng)?;
            run_pipeline(&t.to_correlation()?, f, evidence, opts)
        })
        .collect();
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for (k, r) in runs.into_iter().enumerate() {
        match r {
            Ok(p) => ok.push(p),
            Err(e) => errors.push(format!("resample {k}: {e}")),
        }
    }
    let sigma = |get: &dyn Fn(&PointEstimate) -> Option<f64>| -> Option<f64> {
        let v: Vec<f64> = ok.iter().filter_map(get).collect();
        sample_std(&v)
    };
    let s_bell = sigma(&|p| Some(p.bell));
    let s_a1 = sigma(&|p| Some(p.a1));
    let s_fhat = sigma(&|p| Some(p.fhat));
    let s_gme = sigma(&|p| Some(p.bounds.gme_lower));
    let s_s = sigma(&|p| Some(p.bounds.s_upper));
    let s_sa = sigma(&|p| p.bounds.s_a_lower);
    let s_ic = sigma(&|p| p.bounds.ic_lower);
    let s_ree = sigma(&|p| Some(p.bounds.ree_lower));

    let mut report = build_report(&observed, f, evidence, opts, central);
    report.inputs.resamples = Some(resamples);
    report.bell_value.sigma = s_bell;
    report.a1.sigma = s_a1;
    report.fhat.sigma = s_fhat;
    report.gme_lower.sigma = s_gme;
    report.s_upper.sigma = s_s;
    if let Some(e) = report.s_a_lower.as_mut() {
        e.sigma = s_sa;
    }
    if let Some(e) = report.ic_lower.as_mut() {
        e.sigma = s_ic;
    }
    report.ree_lower.sigma = s_ree;
    report.diagnostics.bootstrap = Some(BootstrapDiagnostics { requested: resamples, used: ok.len(), dropped: errors.len(), errors });
    Ok(report)
}
