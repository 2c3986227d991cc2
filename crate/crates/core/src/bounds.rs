//! Entanglement lower bounds from a purity certificate `a1` and the
//! product-fidelity bound `F̂`.
//!
//! Marginal entropy. Every pure product `|φ>` has `<φ|ρ|φ> ≤ F̂²`, and
//! `ρ ≥ a1 |ψ1><ψ1|`, so the largest Schmidt weight of `ψ1` is at most
//! `μ = F̂²/a1`. Among Schmidt spectra with largest weight at most `μ` and
//! rank at most `r`, the least entropy belongs to `(μ, ..., μ, 1 - kμ)`
//! with `k = ⌊1/μ⌋`, since it majorizes all others. Concavity of the
//! entropy then gives `S(ρ_A) ≥ a1 S(ψ1_A) ≥ a1 H(μ, ..., μ, 1 - kμ)`.
//! The cruder `a1 (-log₂ μ)` follows from `H ≥ -log₂ max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::DimensionVector;

const GRID_POINTS: usize = 2001;
const GOLDEN_TOL: f64 = 1e-10;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::domain(format!("{name} = {v} is not finite")));
    }
    Ok(())
}

/// Binary entropy in bits with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

fn gme_objective(a1: f64, fhat: f64, c: f64) -> f64 {
    let c2 = c * c;
    let ratio = if a1 >= 1.0 { 1.0 } else { ((a1 - c2) / (1.0 - c2)).max(0.0) };
    let s = fhat / a1.sqrt();
    let overlap = s * c + (1.0 - s * s).max(0.0).sqrt() * (1.0 - c2).max(0.0).sqrt();
    ratio * (1.0 - overlap * overlap)
}

/// Lower bound on the geometric measure of entanglement,
/// `max_{c ∈ [F̂/√a1, √a1]} (a1 - c²)/(1 - c²) · (1 - (F̂c/√a1 + √(1 - F̂²/a1)√(1 - c²))²)`,
/// or 0 when `F̂ > a1`.
pub fn gme_lower(a1: f64, fhat: f64) -> Result<f64> {
    check_unit("a1", a1)?;
    check_unit("fhat", fhat)?;
    if !(a1 > 0.0 && a1 <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("a1 = {a1} outside (0, 1]")));
    }
    if fhat < 0.0 {
        return Err(Error::domain(format!("fhat = {fhat} is negative")));
    }
    let a1 = a1.min(1.0);
    if fhat > a1 {
        return Ok(0.0);
    }
    if a1 == 1.0 {
        // the maximum sits at the c = 1 endpoint
        return Ok((1.0 - fhat * fhat).max(0.0));
    }
    let lo = fhat / a1.sqrt();
    let hi = a1.sqrt();
    let g = |c: f64| gme_objective(a1, fhat, c);
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..GRID_POINTS {
        let v = g(lo + step * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    Ok(best.max(golden_max(g, a, b)).max(0.0))
}

fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > GOLDEN_TOL {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd).max(g(0.5 * (a + b)))
}

/// Largest entropy (bits) of a spectrum on `D` levels whose top weight is
/// `a1`: `h(a1) + (1 - a1) log₂(D - 1)`.
pub fn entropy_upper(a1: f64, total_dim: usize) -> Result<f64> {
    check_unit("a1", a1)?;
    if total_dim < 2 {
        return Err(Error::domain(format!("total dimension {total_dim} < 2")));
    }
    let floor = 1.0 / total_dim as f64;
    if a1 < floor - 1e-12 || a1 > 1.0 + 1e-12 {
        return Err(Error::domain(format!("a1 = {a1} outside [1/D, 1] = [{floor}, 1]")));
    }
    let a1 = a1.clamp(floor, 1.0);
    Ok(binary_entropy(a1) + (1.0 - a1) * ((total_dim - 1) as f64).log2())
}

/// `a1 · H(μ, ..., μ, 1 - kμ)` with `μ = min(1, F̂²/a1)` floored at `1/rank`.
pub fn marginal_entropy_lower(a1: f64, fhat: f64, schmidt_rank: usize) -> Result<f64> {
    check_unit("a1", a1)?;
    check_unit("fhat", fhat)?;
    if !(a1 > 0.0 && a1 <= 1.0 + 1e-12) || fhat < 0.0 || schmidt_rank < 1 {
        return Err(Error::domain(format!("marginal bound needs 0 < a1 <= 1, fhat >= 0, rank >= 1; got {a1}, {fhat}, {schmidt_rank}")));
    }
    let a1 = a1.min(1.0);
    let mu = (fhat * fhat / a1).min(1.0).max(1.0 / schmidt_rank as f64);
    let k = ((1.0 / mu).floor() as usize).min(schmidt_rank);
    let rest = (1.0 - k as f64 * mu).max(0.0);
    let mut h = -(k as f64) * mu * mu.log2();
    if rest > 0.0 {
        h -= rest * rest.log2();
    }
    Ok(a1 * h.max(0.0))
}

/// `-a1 log₂ min(1, F̂²/a1)`, the min-entropy form of the marginal bound.
pub fn marginal_entropy_lower_min_entropy(a1: f64, fhat: f64) -> Result<f64> {
    check_unit("a1", a1)?;
    check_unit("fhat", fhat)?;
    if !(a1 > 0.0 && a1 <= 1.0 + 1e-12) || fhat < 0.0 {
        return Err(Error::domain(format!("need 0 < a1 <= 1 and fhat >= 0; got {a1}, {fhat}")));
    }
    let mu = (fhat * fhat / a1).min(1.0);
    if mu <= 0.0 {
        return Err(Error::domain("fhat = 0 makes the marginal bound diverge"));
    }
    Ok((-a1 * mu.log2()).max(0.0))
}

/// `S(ρ_A) - S(ρ)` lower bound; may be negative.
pub fn coherent_info_lower(a1: f64, fhat: f64, total_dim: usize, schmidt_rank: usize) -> Result<f64> {
    Ok(marginal_entropy_lower(a1, fhat, schmidt_rank)? - entropy_upper(a1, total_dim)?)
}

/// `max(0, -2 log₂ F̂ - S_upper)`.
pub fn ree_lower(fhat: f64, s_upper: f64) -> Result<f64> {
    check_unit("fhat", fhat)?;
    check_unit("s_upper", s_upper)?;
    if !(fhat > 0.0 && fhat <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("fhat = {fhat} outside (0, 1]")));
    }
    if s_upper < 0.0 {
        return Err(Error::domain(format!("s_upper = {s_upper} is negative")));
    }
    Ok((-2.0 * fhat.min(1.0).log2() - s_upper).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// Purity used for the bounds: the certified value, floored at `1/D`.
    pub a1: f64,
    pub fhat: f64,
    pub total_dim: usize,
    pub dims: Vec<usize>,
    pub gme_lower: f64,
    pub s_upper: f64,
    /// Bipartite only: `F̂` bounds fully-product overlaps, which fixes a
    /// Schmidt weight only for two parties.
    pub s_a_lower: Option<f64>,
    pub ic_lower: Option<f64>,
    pub ree_lower: f64,
}

impl EntanglementReport {
    pub fn new(a1: f64, fhat: f64, dims: &DimensionVector) -> Result<Self> {
        let total = dims.total();
        let a1 = a1.max(1.0 / total as f64);
        let s_upper = entropy_upper(a1, total)?;
        let (s_a_lower, ic_lower) = if dims.parties() == 2 {
            let rank = dims.dims()[0].min(dims.dims()[1]);
            let sa = marginal_entropy_lower(a1, fhat, rank)?;
            (Some(sa), Some(sa - s_upper))
        } else {
            (None, None)
        };
        Ok(EntanglementReport {
            a1,
            fhat,
            total_dim: total,
            dims: dims.dims().to_vec(),
            gme_lower: gme_lower(a1, fhat)?,
            s_upper,
            s_a_lower,
            ic_lower,
            ree_lower: ree_lower(fhat, s_upper)?,
        })
    }

    /// True when nothing beyond the trivial zero bounds is certified.
    pub fn is_vacuous(&self) -> bool {
        self.gme_lower <= 0.0 && self.ree_lower <= 0.0 && self.ic_lower.is_none_or(|v| v <= 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn gme_examples() {
        assert!((gme_lower(1.0, FRAC_1_SQRT_2).unwrap() - 0.5).abs() < 1e-12);
        assert!(gme_lower(0.7, 0.7).unwrap().abs() < 1e-12);
        assert_eq!(gme_lower(0.5, 0.6).unwrap(), 0.0);
        assert!(gme_lower(0.0, 0.5).is_err());
        assert!(gme_lower(0.5, -0.1).is_err());
    }

    #[test]
    fn gme_near_one_matches_limit() {
        let f = 0.6;
        // the approach to the endpoint limit is slow (cube root in 1 - a1)
        let near = gme_lower(1.0 - 1e-12, f).unwrap();
        assert!(near <= 1.0 - f * f && near > 1.0 - f * f - 1e-3);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_upper(1.0, 9).unwrap(), 0.0);
        assert!((entropy_upper(1.0 / 9.0, 9).unwrap() - 9f64.log2()).abs() < 1e-12);
        assert!((entropy_upper(0.9475, 8).unwrap() - 0.444).abs() < 1e-3);
        assert!(entropy_upper(0.1, 8).is_err());
    }

    #[test]
    fn marginal_examples() {
        assert!((marginal_entropy_lower(1.0, 1.0 / 3f64.sqrt(), 3).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert!((marginal_entropy_lower(1.0, FRAC_1_SQRT_2, 2).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(marginal_entropy_lower(0.5, 0.8, 3).unwrap(), 0.0);
        assert!((marginal_entropy_lower_min_entropy(1.0, FRAC_1_SQRT_2).unwrap() - 1.0).abs() < 1e-12);
        // majorization form is never weaker
        for (a1, f) in [(0.9, 0.7), (0.8, 0.85), (0.99, 0.62)] {
            assert!(marginal_entropy_lower(a1, f, 3).unwrap() >= marginal_entropy_lower_min_entropy(a1, f).unwrap() - 1e-15);
        }
    }

    #[test]
    fn coherent_info_examples() {
        assert!((coherent_info_lower(1.0, 1.0 / 3f64.sqrt(), 9, 3).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert!(coherent_info_lower(1.0 / 9.0, 0.5, 9, 3).unwrap() <= 0.0);
    }

    #[test]
    fn ree_examples() {
        assert_eq!(ree_lower(1.0, 0.0).unwrap(), 0.0);
        assert!((ree_lower(1.0 / 3f64.sqrt(), 0.0).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert!((ree_lower(FRAC_1_SQRT_2, 0.444).unwrap() - 0.556).abs() < 1e-12);
        assert!(ree_lower(0.0, 0.0).is_err());
    }
}
