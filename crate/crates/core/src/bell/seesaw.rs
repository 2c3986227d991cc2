//! Alternating (see-saw) maximisation of Bell-operator eigenvalues over
//! rank-one projective measurements.
//!
//! With the measurements fixed, the best state is the top eigenvector of the
//! Bell operator. With the state and all but one measurement fixed, the value
//! is linear in that measurement and is improved by a polar-decomposition
//! step on its basis unitary. Both half-steps never decrease the objective.

use num_complex::Complex64;
use rayon::prelude::*;

use super::functional::{bell_operator, BellFunctional};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::quantum::{DimensionVector, MeasurementSet, PureState, Radix};
use crate::random::{derive_seed, random_measurement_set, seeded};

#[derive(Debug, Clone)]
pub struct SeeSawOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SeeSawOptions {
    fn default() -> Self {
        SeeSawOptions { restarts: 50, max_iter: 2000, tol: 1e-13, seed: 0x5eed_5a3e }
    }
}

#[derive(Debug, Clone)]
pub struct SeeSawResult {
    pub value: f64,
    pub state: PureState,
    pub measurements: MeasurementSet,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the winning restart (0 for a single run).
    pub restart: usize,
    pub restarts: usize,
}

/// Multi-start see-saw from random projective measurements.
pub fn see_saw(f: &BellFunctional, dims: &DimensionVector, opts: &SeeSawOptions) -> Result<SeeSawResult> {
    if opts.restarts == 0 {
        return Err(Error::domain("see-saw needs at least one restart"));
    }
    let runs: Vec<Result<SeeSawResult>> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded(derive_seed(opts.seed, k as u64));
            let m = random_measurement_set(dims, f.inputs(), &mut rng);
            let mut r = see_saw_from(f, m, opts.max_iter, opts.tol)?;
            r.restart = k;
            Ok(r)
        })
        .collect();
    let mut best: Option<SeeSawResult> = None;
    for r in runs {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let mut best = best.expect("at least one restart");
    best.restarts = opts.restarts;
    Ok(best)
}

/// Single see-saw run from the given measurements.
pub fn see_saw_from(f: &BellFunctional, init: MeasurementSet, max_iter: usize, tol: f64) -> Result<SeeSawResult> {
    let mut bases = Bases::from_measurements(&init)?;
    let run = ascend(f, &mut bases, &[1.0], max_iter, tol)?;
    let m = bases.to_measurements();
    let b = bell_operator(f, &m)?;
    let eig = linalg::eig_hermitian_unchecked(&b);
    let state = PureState::normalized(m.dims().clone(), eig.vectors.column(0).into_owned())?;
    Ok(SeeSawResult {
        value: eig.values[0],
        state,
        measurements: m,
        iterations: run.iterations,
        converged: run.converged,
        restart: 0,
        restarts: 1,
    })
}

/// Basis unitaries for every (party, input); column `a` spans outcome `a`.
#[derive(Debug, Clone)]
pub(crate) struct Bases {
    dims: DimensionVector,
    unitaries: Vec<Vec<CMatrix>>,
}

impl Bases {
    pub(crate) fn from_measurements(m: &MeasurementSet) -> Result<Self> {
        let mut unitaries = Vec::with_capacity(m.parties());
        for (p, &d) in m.dims().dims().iter().enumerate() {
            let mut per_input = Vec::new();
            for ops in m.party(p) {
                if ops.len() != d {
                    return Err(Error::domain(format!(
                        "party {p}: {} outcomes in dimension {d}; see-saw works with rank-one projective measurements",
                        ops.len()
                    )));
                }
                let mut u = CMatrix::zeros(d, d);
                for (a, op) in ops.iter().enumerate() {
                    let e = linalg::eig_hermitian_unchecked(op);
                    if (e.values[0] - 1.0).abs() > 1e-6 || e.values.get(1).is_some_and(|v| v.abs() > 1e-6) {
                        return Err(Error::domain(format!("party {p} outcome {a}: not a rank-one projector")));
                    }
                    u.set_column(a, &e.vectors.column(0));
                }
                // re-orthonormalise round-off
                per_input.push(linalg::polar_unitary(&u));
            }
            unitaries.push(per_input);
        }
        Ok(Bases { dims: m.dims().clone(), unitaries })
    }

    pub(crate) fn to_measurements(&self) -> MeasurementSet {
        let ops = self
            .unitaries
            .iter()
            .map(|inputs| {
                inputs
                    .iter()
                    .map(|u| (0..u.ncols()).map(|a| linalg::projector(&u.column(a).into_owned())).collect())
                    .collect()
            })
            .collect();
        MeasurementSet::new(self.dims.clone(), ops).expect("unitary columns give a projective measurement")
    }
}

pub(crate) struct AscentRun {
    pub eigenvalues: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximise `Σ_k w_k λ_k(B)` (weights non-increasing, nonnegative) over the
/// measurement bases, in place.
pub(crate) fn ascend(
    f: &BellFunctional,
    bases: &mut Bases,
    weights: &[f64],
    max_iter: usize,
    tol: f64,
) -> Result<AscentRun> {
    let dims = bases.dims.clone();
    let contractions: Vec<PartyContraction> = (0..dims.parties()).map(|p| PartyContraction::new(&dims, p)).collect();
    let mut previous = f64::NEG_INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut m = bases.to_measurements();
    while iterations < max_iter {
        iterations += 1;
        let eig = linalg::eig_hermitian_unchecked(&bell_operator(f, &m)?);
        let objective: f64 = weights.iter().zip(&eig.values).map(|(w, l)| w * l).sum();
        if objective - previous < tol {
            converged = true;
            break;
        }
        previous = objective;
        let d = dims.total();
        let mut p = CMatrix::zeros(d, d);
        for (k, &w) in weights.iter().enumerate() {
            let v = eig.vectors.column(k).into_owned();
            p += (&v * v.adjoint()) * Complex64::from(w);
        }
        for (party, contraction) in contractions.iter().enumerate() {
            for x in 0..f.inputs()[party] {
                let ks = contraction.local_operators(f, &m, &p, x);
                let u = &mut bases.unitaries[party][x];
                improve_basis(u, &ks);
                let ops = (0..u.ncols()).map(|a| linalg::projector(&u.column(a).into_owned())).collect();
                m.set_unchecked(party, x, ops);
            }
        }
    }
    let values = linalg::eigvals_hermitian(&bell_operator(f, &m)?);
    Ok(AscentRun { eigenvalues: values, iterations, converged })
}

/// Polar ascent on `Σ_a u_a† K_a u_a` over unitaries `U = [u_0 .. u_{d-1}]`.
fn improve_basis(u: &mut CMatrix, ks: &[CMatrix]) {
    let d = u.nrows();
    let shift = ks
        .iter()
        .map(|k| -linalg::eigvals_hermitian(k).last().copied().unwrap_or(0.0))
        .fold(0.0f64, f64::max)
        + 1e-9;
    let shifted: Vec<CMatrix> = ks.iter().map(|k| k + linalg::identity(d) * Complex64::from(shift)).collect();
    let value = |u: &CMatrix| -> f64 {
        shifted
            .iter()
            .enumerate()
            .map(|(a, k)| {
                let col: CVector = u.column(a).into_owned();
                col.dotc(&(k * &col)).re
            })
            .sum()
    };
    let mut current = value(u);
    for _ in 0..50 {
        let mut g = CMatrix::zeros(d, d);
        for (a, k) in shifted.iter().enumerate() {
            g.set_column(a, &(k * u.column(a)));
        }
        let next = linalg::polar_unitary(&g);
        let v = value(&next);
        if v < current {
            break;
        }
        *u = next;
        if v - current < 1e-15 * current.abs().max(1.0) {
            break;
        }
        current = v;
    }
}

/// Index bookkeeping for contracting the Bell operator against a state
/// on every party but one.
struct PartyContraction {
    party: usize,
    local: usize,
    rest: usize,
    /// `full[r * rest + u]` = joint index of local digit `r`, remainder `u`.
    full: Vec<usize>,
}

impl PartyContraction {
    fn new(dims: &DimensionVector, party: usize) -> Self {
        let radix = dims.radix();
        let local = dims.dims()[party];
        let rest = dims.total() / local;
        let others: Vec<usize> = dims.dims().iter().enumerate().filter(|(j, _)| *j != party).map(|(_, &d)| d).collect();
        let rest_radix = Radix::new(others);
        let mut full = vec![0; dims.total()];
        for idx in 0..dims.total() {
            let digits = radix.decode(idx);
            let r = digits[party];
            let other: Vec<usize> = digits.iter().enumerate().filter(|(j, _)| *j != party).map(|(_, &v)| v).collect();
            full[r * rest + rest_radix.encode(&other)] = idx;
        }
        PartyContraction { party, local, rest, full }
    }

    /// `K_a` with `Tr(B P) = Σ_a Tr(M_x^a K_a) + const` in this party's
    /// input-`x` measurement.
    fn local_operators(&self, f: &BellFunctional, m: &MeasurementSet, p: &CMatrix, x: usize) -> Vec<CMatrix> {
        let n = f.parties();
        let outcomes_here = f.outcomes()[self.party];
        let sr = Radix::new(f.inputs().to_vec());
        let or = Radix::new(f.outcomes().to_vec());
        let mut w: Vec<CMatrix> = vec![CMatrix::zeros(self.rest, self.rest); outcomes_here];
        for s in 0..sr.len() {
            let xs = sr.decode(s);
            if xs[self.party] != x {
                continue;
            }
            let row = f.coefficient_row(s);
            for (o, &coef) in row.iter().enumerate() {
                if coef == 0.0 {
                    continue;
                }
                let a = or.decode(o);
                let others = linalg::kron_all((0..n).filter(|&j| j != self.party).map(|j| m.operator(j, xs[j], a[j])));
                w[a[self.party]] += others * Complex64::from(coef);
            }
        }
        w.iter()
            .map(|wa| {
                let mut k = CMatrix::zeros(self.local, self.local);
                for s in 0..self.local {
                    for r in 0..self.local {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for u in 0..self.rest {
                            let pr = self.full[r * self.rest + u];
                            for v in 0..self.rest {
                                let wuv = wa[(u, v)];
                                if wuv != linalg::ZERO {
                                    acc += wuv * p[(self.full[s * self.rest + v], pr)];
                                }
                            }
                        }
                        k[(s, r)] = acc;
                    }
                }
                (&k + k.adjoint()) * Complex64::from(0.5)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{cglmp3, mabk3};
    use crate::random::{random_density, seeded};

    #[test]
    fn local_operators_reproduce_bell_value() {
        let f = cglmp3();
        let dims = DimensionVector::new(vec![3, 3]).unwrap();
        let mut rng = seeded(4);
        let m = random_measurement_set(&dims, f.inputs(), &mut rng);
        let rho = random_density(&dims, 3, &mut rng);
        let total = rho.expectation(&bell_operator(&f, &m).unwrap()).re;
        for party in 0..2 {
            let pc = PartyContraction::new(&dims, party);
            // value = Σ_x Σ_a Tr(M K) counts each term once per input of this party
            let mut sum = 0.0;
            for x in 0..2 {
                let ks = pc.local_operators(&f, &m, rho.matrix(), x);
                for (a, k) in ks.iter().enumerate() {
                    sum += linalg::trace(&(m.operator(party, x, a) * k)).re;
                }
            }
            assert!((sum - total).abs() < 1e-10, "party {party}: {sum} vs {total}");
        }
    }

    #[test]
    fn mabk_reaches_two() {
        let dims = DimensionVector::new(vec![2, 2, 2]).unwrap();
        let opts = SeeSawOptions { restarts: 8, ..Default::default() };
        let r = see_saw(&mabk3(), &dims, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn monotone_single_run() {
        let f = cglmp3();
        let dims = DimensionVector::new(vec![3, 3]).unwrap();
        let m = random_measurement_set(&dims, f.inputs(), &mut seeded(11));
        let start = linalg::eigvals_hermitian(&bell_operator(&f, &m).unwrap())[0];
        let r = see_saw_from(&f, m, 500, 1e-13).unwrap();
        assert!(r.value >= start - 1e-12);
        assert!(r.measurements.is_projective());
    }
}
