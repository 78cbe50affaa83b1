//! Seeded random generators for states, unitaries and channels.
//!
//! Haar-distributed unitaries come from the QR decomposition of a Ginibre
//! matrix with the R-diagonal phases folded back into Q, the standard
//! construction that makes the factorisation unique and the distribution
//! exactly Haar. All sampling is driven by explicit seeds so scans are
//! reproducible and safely parallelisable.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{CMatrix, DensityOperator, StateVector};
use crate::operation::QuantumOperation;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent RNG for work item `index` under a base seed.
///
/// Splitting rule: stream i is seeded with
/// `splitmix64(seed XOR (i + 1) * 0x9E3779B97F4A7C15)`, so parallel workers
/// get decorrelated streams that do not depend on scheduling order.
pub fn seed_stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(
        seed ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    ))
}

/// Complex Ginibre matrix: i.i.d. entries (N(0,1) + i N(0,1)) / √2.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) * s,
            rng.sample::<f64, _>(StandardNormal) * s,
        )
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Random pure state: a normalised Ginibre column.
pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| {
                Complex64::new(
                    rng.sample::<f64, _>(StandardNormal) * s,
                    rng.sample::<f64, _>(StandardNormal) * s,
                )
            })
            .collect();
        if let Ok(state) = StateVector::normalized(amps, None) {
            return state;
        }
    }
}

/// Random bipartite pure state with factor dims attached.
pub fn random_bipartite_pure(dims: (usize, usize), rng: &mut impl Rng) -> StateVector {
    random_pure_state(dims.0 * dims.1, rng)
        .with_factor_dims(dims)
        .expect("dims multiply out by construction")
}

/// Random full-rank density operator: G G† normalised to unit trace
/// (a Wishart draw).
pub fn random_density(dim: usize, rng: &mut impl Rng) -> DensityOperator {
    let g = ginibre(dim, rng);
    let w = &g * g.adjoint();
    let trace = w.trace().re;
    DensityOperator::trusted(w * Complex64::new(1.0 / trace, 0.0), None)
}

/// Random bipartite density operator.
pub fn random_bipartite_density(dims: (usize, usize), rng: &mut impl Rng) -> DensityOperator {
    let rho = random_density(dims.0 * dims.1, rng);
    DensityOperator::trusted(rho.matrix().clone(), Some(dims))
}

/// Random trace-preserving channel with `n_kraus` Kraus operators:
/// Ginibre draws G_i whitened by (Σ G_i† G_i)^(-1/2) so that ΣK†K = 𝟙.
pub fn random_channel(dim: usize, n_kraus: usize, rng: &mut impl Rng) -> QuantumOperation {
    assert!(n_kraus >= 1);
    let gs: Vec<CMatrix> = (0..n_kraus).map(|_| ginibre(dim, rng)).collect();
    let mut s = CMatrix::zeros(dim, dim);
    for g in &gs {
        s += g.adjoint() * g;
    }
    // S^(-1/2) through the spectral decomposition; S is positive definite
    // almost surely for Ginibre draws.
    let herm = (&s + s.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let inv_sqrt_diag = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|x| Complex64::new(1.0 / x.max(1e-300).sqrt(), 0.0)),
    );
    let inv_sqrt = &eig.eigenvectors * inv_sqrt_diag * eig.eigenvectors.adjoint();
    let kraus = gs.into_iter().map(|g| g * &inv_sqrt).collect();
    QuantumOperation::new("random-channel", kraus).expect("whitened set is trace-preserving")
}
