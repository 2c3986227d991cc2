use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certify::{run_pipeline, CertifyOptions, Evidence};
use crate::bell::{canonical_settings, spectral_gap, BellFunctional};
use crate::error::{Error, Result};
use crate::quantum::{correlation_from_state, make_phi_beta};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub bell: f64,
    pub a1: f64,
    pub fhat: f64,
    pub ic_lower: f64,
    pub gme_lower: f64,
    pub ree_lower: f64,
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn beta_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::domain(format!("bad β grid [{lo}, {hi}] with {n} points")));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// Spectral evidence from `f`'s Bell operator at its canonical settings.
pub fn canonical_evidence(f: &BellFunctional) -> Result<Evidence> {
    Ok(Evidence::Spectral(spectral_gap(f, &canonical_settings(f.name())?)?))
}

/// Ideal data from `|Φ(β)⟩` at the canonical settings of `f`, pushed
/// through the full pipeline for every grid point. Rows come back in grid
/// order.
pub fn sweep_beta(grid: &[f64], f: &BellFunctional, evidence: &Evidence, opts: &CertifyOptions) -> Result<Vec<SweepRow>> {
    if let Some(b) = grid.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(Error::domain(format!("β = {b} outside [0, 1]")));
    }
    let settings = canonical_settings(f.name())?;
    grid.par_iter()
        .map(|&beta| {
            let rho = make_phi_beta(beta)?.to_density();
            let c = correlation_from_state(&rho, &settings)?;
            let p = run_pipeline(&c, f, evidence, opts)?;
            Ok(SweepRow {
                beta,
                bell: p.bell,
                a1: p.a1,
                fhat: p.fhat,
                ic_lower: p.bounds.ic_lower.unwrap_or(f64::NAN),
                gme_lower: p.bounds.gme_lower,
                ree_lower: p.bounds.ree_lower,
            })
        })
        .collect()
}

/// Tab-separated table with a header line.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::from("beta\tbell\ta1\tfhat\tic_lower\tgme_lower\tree_lower\n");
    for r in rows {
        out.push_str(&format!(
            "{:.6}\t{:.12}\t{:.12}\t{:.12}\t{:.12}\t{:.12}\t{:.12}\n",
            r.beta, r.bell, r.a1, r.fhat, r.ic_lower, r.gme_lower, r.ree_lower
        ));
    }
    out
}

/// Smallest grid β from which `pick` stays positive up to the end of the
/// grid, if any.
pub fn positive_from(rows: &[SweepRow], pick: impl Fn(&SweepRow) -> f64) -> Option<f64> {
    let last_bad = rows.iter().rposition(|r| pick(r).is_nan() || pick(r) <= 0.0);
    match last_bad {
        None => rows.first().map(|r| r.beta),
        Some(i) => rows.get(i + 1).map(|r| r.beta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::cglmp3;

    #[test]
    fn grid_endpoints() {
        let g = beta_grid(0.3, 1.0, 71).unwrap();
        assert_eq!(g.len(), 71);
        assert!((g[1] - 0.31).abs() < 1e-12);
        assert_eq!(g[70], 1.0);
        assert!(beta_grid(0.5, 1.2, 3).is_err());
    }

    #[test]
    fn mes_row() {
        let f = cglmp3();
        let ev = canonical_evidence(&f).unwrap();
        let rows = sweep_beta(&[1.0], &f, &ev, &CertifyOptions::default()).unwrap();
        assert!((rows[0].bell - 2.872_934).abs() < 1e-5);
        assert!(rows[0].a1 > 0.9);
        let t = sweep_table(&rows);
        assert_eq!(t.lines().count(), 2);
    }

    #[test]
    fn crossing() {
        let row = |beta, v| SweepRow { beta, bell: 0.0, a1: 0.0, fhat: 0.0, ic_lower: v, gme_lower: 0.0, ree_lower: 0.0 };
        let rows = [row(0.1, -1.0), row(0.2, 0.5), row(0.3, -0.1), row(0.4, 0.2), row(0.5, 0.3)];
        assert_eq!(positive_from(&rows, |r| r.ic_lower), Some(0.4));
        assert_eq!(positive_from(&rows[..3], |r| r.ic_lower), None);
    }
}
