//! Seeded random generation of states, unitaries and measurements.
//!
//! All randomness in the crate flows through [`seeded`] and [`derive_seed`],
//! so any run is reproducible from a single master seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector};
use crate::quantum::{DensityMatrix, DimensionVector, MeasurementSet, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent per-task seed (splitmix64 finaliser).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_c(rng))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = ginibre(d, d, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    (&g + g.adjoint()) * Complex64::from(0.5)
}

pub fn random_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian_c(rng));
    let n = v.norm();
    v / Complex64::from(n)
}

pub fn random_pure_state<R: Rng + ?Sized>(dims: &DimensionVector, rng: &mut R) -> PureState {
    PureState::new(dims.clone(), random_vector(dims.total(), rng)).expect("normalised random vector")
}

/// Random density matrix of the given rank, `G G† / Tr(G G†)` with a
/// `D x rank` Ginibre factor.
pub fn random_density<R: Rng + ?Sized>(dims: &DimensionVector, rank: usize, rng: &mut R) -> DensityMatrix {
    let d = dims.total();
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = crate::linalg::trace(&m).re;
    DensityMatrix::new(dims.clone(), m / Complex64::from(tr)).expect("random density is valid")
}

/// Rank-one projective measurement with `d` outcomes from a Haar unitary.
pub fn random_projective<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<CMatrix> {
    let u = random_unitary(d, rng);
    (0..d)
        .map(|k| {
            let col = u.column(k).into_owned();
            &col * col.adjoint()
        })
        .collect()
}

/// Random projective measurements, `inputs[i]` settings for party `i`, each
/// with `d_i` outcomes.
pub fn random_measurement_set<R: Rng + ?Sized>(
    dims: &DimensionVector,
    inputs: &[usize],
    rng: &mut R,
) -> MeasurementSet {
    let parties = dims
        .dims()
        .iter()
        .zip(inputs)
        .map(|(&d, &m)| (0..m).map(|_| random_projective(d, rng)).collect())
        .collect();
    MeasurementSet::new(dims.clone(), parties).expect("random projective measurements are valid")
}

/// Random nonnegative real matrix with entries in `[0, 1)`.
pub fn random_nonneg<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>())
}
