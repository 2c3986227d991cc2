//! Test-side oracles computed directly from a known state, sharing no code
//! with the certification pipeline beyond the state types.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use entcert::bell::{bell_operator, canonical_settings, ghz_xy_settings, spectral_gap, BellFunctional};
use entcert::bounds::gme_lower;
use entcert::harness::{certify, CertifyOptions, Evidence};
use entcert::quantum::{correlation_from_state, make_ghz3, make_phi_beta, DensityMatrix, DimensionVector, MeasurementSet};
use entcert::random::{random_density, random_measurement_set, seeded};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Eigenpairs of a Hermitian matrix, descending.
pub fn eigh(m: &CMat) -> Vec<(f64, CVec)> {
    let e = SymmetricEigen::new((m + m.adjoint()).scale(0.5));
    let mut pairs: Vec<(f64, CVec)> =
        e.eigenvalues.iter().zip(e.eigenvectors.column_iter()).map(|(&v, c)| (v, c.into_owned())).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

pub fn entropy_bits(m: &CMat) -> f64 {
    eigh(m).iter().map(|(v, _)| *v).filter(|&v| v > 1e-15).map(|v| -v * v.log2()).sum()
}

/// Reduced state of the first party of a bipartite `dA x dB` matrix.
pub fn reduce_first(rho: &CMat, da: usize, db: usize) -> CMat {
    CMat::from_fn(da, da, |i, j| (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum())
}

pub fn reduce_second(rho: &CMat, da: usize, db: usize) -> CMat {
    CMat::from_fn(db, db, |i, j| (0..da).map(|k| rho[(k * db + i, k * db + j)]).sum())
}

fn kron_vecs(vs: &[CVec]) -> CVec {
    let mut out = CVec::from_element(1, Complex64::new(1.0, 0.0));
    for v in vs {
        out = out.kronecker(v);
    }
    out
}

fn rand_unit(d: usize, rng: &mut impl Rng) -> CVec {
    let v = CVec::from_fn(d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let n = v.norm();
    v.unscale(n)
}

/// Operator on party `k` obtained by sandwiching `rho` with the other
/// parties' vectors.
fn local_operator(rho: &CMat, dims: &[usize], vs: &[CVec], k: usize) -> CMat {
    let dk = dims[k];
    let mut m = CMat::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut left = vs.to_vec();
            left[k] = CVec::from_fn(dk, |r, _| if r == i { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
            let mut right = vs.to_vec();
            right[k] = CVec::from_fn(dk, |r, _| if r == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
            let l = kron_vecs(&left);
            let r = kron_vecs(&right);
            m[(i, j)] = (l.adjoint() * rho * r)[(0, 0)];
        }
    }
    m
}

/// Lower estimate of `max ⟨φ|ρ|φ⟩` over pure product `φ` by alternating
/// top-eigenvector updates from many random starts. Exact (via SVD) for a
/// pure bipartite state.
pub fn product_fidelity_lower(rho: &CMat, dims: &[usize], restarts: usize, seed: u64) -> f64 {
    let mut rng = seeded(seed);
    let mut best = 0.0f64;
    for _ in 0..restarts {
        let mut vs: Vec<CVec> = dims.iter().map(|&d| rand_unit(d, &mut rng)).collect();
        let mut val = 0.0;
        for _ in 0..300 {
            for k in 0..dims.len() {
                let (v, top) = eigh(&local_operator(rho, dims, &vs, k)).swap_remove(0);
                vs[k] = top;
                val = v;
            }
        }
        best = best.max(val);
    }
    best
}

/// `max |⟨a⊗b|ψ⟩|²` for a bipartite pure state, the squared top singular
/// value of the amplitude matrix.
pub fn bipartite_overlap(psi: &CVec, da: usize, db: usize) -> f64 {
    let m = CMat::from_fn(da, db, |i, j| psi[i * db + j]);
    let s = m.singular_values().max();
    s * s
}

pub struct Exact {
    pub lambda_max: f64,
    /// `√` of a lower estimate of the best product-state fidelity.
    pub sqrt_product_fidelity: f64,
    /// Upper estimate of the geometric measure (convex-roof via the
    /// eigen-decomposition).
    pub gme_upper: f64,
    /// Bipartite only: `min(S_A, S_B) - S(ρ)`.
    pub coherent_info: Option<f64>,
    /// Bipartite only: upper estimate `Σ a_i S_A(ψ_i)` of the relative
    /// entropy of entanglement.
    pub ree_upper: Option<f64>,
}

pub fn exact_quantities(rho: &DensityMatrix, seed: u64) -> Exact {
    let m = rho.matrix();
    let dims = rho.dims().dims().to_vec();
    let pairs = eigh(m);
    let lambda_max = pairs[0].0;
    let bipartite = dims.len() == 2;
    let overlap = |psi: &CVec| -> f64 {
        if bipartite {
            bipartite_overlap(psi, dims[0], dims[1])
        } else {
            product_fidelity_lower(&(psi * psi.adjoint()), &dims, 6, seed)
        }
    };
    let gme_upper = pairs.iter().filter(|(a, _)| *a > 1e-12).map(|(a, v)| a * (1.0 - overlap(v))).sum();
    let fid = product_fidelity_lower(m, &dims, 8, seed ^ 0x5eed);
    let (coherent_info, ree_upper) = if bipartite {
        let (da, db) = (dims[0], dims[1]);
        let s = entropy_bits(m);
        let sa = entropy_bits(&reduce_first(m, da, db));
        let sb = entropy_bits(&reduce_second(m, da, db));
        let ree = pairs
            .iter()
            .filter(|(a, _)| *a > 1e-12)
            .map(|(a, v)| a * entropy_bits(&reduce_first(&(v * v.adjoint()), da, db)))
            .sum();
        (Some(sa.min(sb) - s), Some(ree))
    } else {
        (None, None)
    };
    Exact { lambda_max, sqrt_product_fidelity: fid.max(0.0).sqrt(), gme_upper, coherent_info, ree_upper }
}

pub struct Instance {
    pub functional: BellFunctional,
    pub settings: MeasurementSet,
    pub rho: DensityMatrix,
}

/// Four families by `seed % 4`: the top Bell-operator eigenvector at random
/// projective settings mixed with a random low-rank state (MABK, CGLMP),
/// noisy `|Φ(β)⟩` at the canonical qutrit settings, and noisy GHZ at X/Y.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = seeded(seed);
    match seed % 4 {
        0 | 1 => {
            let (functional, dims, inputs) = if seed.is_multiple_of(4) {
                (entcert::bell::mabk3(), vec![2, 2, 2], vec![2, 2, 2])
            } else {
                (entcert::bell::cglmp3(), vec![3, 3], vec![2, 2])
            };
            let dims = DimensionVector::new(dims).unwrap();
            let settings = random_measurement_set(&dims, &inputs, &mut rng);
            let b = bell_operator(&functional, &settings).unwrap();
            let top = eigh(&b).swap_remove(0).1;
            let pure = DensityMatrix::new(dims.clone(), &top * top.adjoint()).unwrap();
            let noise = random_density(&dims, 1 + (seed as usize / 4 % 3), &mut rng);
            let w = 0.6 + 0.4 * rng.random::<f64>();
            Instance { functional, settings, rho: pure.mix(&noise, w).unwrap() }
        }
        2 => {
            // near-ideal qutrit data at the canonical settings
            let functional = if seed % 8 == 2 { entcert::bell::cglmp3() } else { entcert::bell::tailored3().unwrap() };
            let settings = canonical_settings(functional.name()).unwrap();
            let beta = 0.5 + 0.5 * rng.random::<f64>();
            let v = 0.9 + 0.1 * rng.random::<f64>();
            let rho = make_phi_beta(beta).unwrap().to_density().with_white_noise(v).unwrap();
            Instance { functional, settings, rho }
        }
        _ => {
            let v = 0.8 + 0.2 * rng.random::<f64>();
            let rho = make_ghz3().to_density().with_white_noise(v).unwrap();
            Instance { functional: entcert::bell::mabk3(), settings: ghz_xy_settings(), rho }
        }
    }
}

/// `(name, exact - certified)` for every certified quantity; soundness
/// means every margin is ≥ 0 (up to rounding).
pub fn soundness_margins(seed: u64) -> Vec<(&'static str, f64)> {
    let inst = random_instance(seed);
    let c = correlation_from_state(&inst.rho, &inst.settings).unwrap();
    let gap = spectral_gap(&inst.functional, &inst.settings).unwrap();
    let report = certify(&c, &inst.functional, &Evidence::Spectral(gap), &CertifyOptions { seed, ..Default::default() }).unwrap();
    let ex = exact_quantities(&inst.rho, seed);
    let mut out = vec![
        ("a1", ex.lambda_max - report.a1.value),
        ("fhat", report.fhat.value - ex.sqrt_product_fidelity),
        ("gme_lower", ex.gme_upper - report.gme_lower.value),
    ];
    if let (Some(ic), Some(exact)) = (report.ic_lower, ex.coherent_info) {
        out.push(("ic_lower", exact - ic.value));
    }
    if let Some(ree) = ex.ree_upper {
        out.push(("ree_lower", ree - report.ree_lower.value));
    }
    // the gme formula evaluated on exact inputs must also stay below the
    // exact value: a looser F̂ can only lower it
    if ex.lambda_max > 0.0 {
        let g = gme_lower(ex.lambda_max, report.fhat.value.max(ex.sqrt_product_fidelity)).unwrap();
        out.push(("gme_formula", ex.gme_upper - g));
    }
    out
}
