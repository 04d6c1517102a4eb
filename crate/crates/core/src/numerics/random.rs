//! Seeded sampling of states, unitaries and Gaussian matrices.
//!
//! Sub-seeds follow a counter scheme: the `i`-th derived seed of a master
//! seed `s` is `splitmix64(s + (i + 1) · 0x9E3779B97F4A7C15)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, ComplexVector, DensityMatrix, PureState};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. complex normal with unit variance.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

pub(crate) fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    let g = complex_gaussian_matrix(dim, 1, rng);
    let v = ComplexVector::from_iterator(dim, g.iter().copied());
    let n = v.norm();
    v.unscale(n)
}

pub(crate) fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
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

/// First `cols` columns of a Haar unitary on `C^rows`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    haar_unitary(rows, rng).columns(0, cols).into_owned()
}

pub fn random_pure(dim: usize, seed: u64) -> PureState {
    PureState::from_unnormalized(random_unit_vector(dim, &mut rng_from_seed(seed)))
        .expect("gaussian vector is nonzero")
}

/// Hilbert-Schmidt distributed density matrix.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let g = complex_gaussian_matrix(dim, dim, &mut rng_from_seed(seed));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr)).expect("Ginibre state is a valid density matrix")
}

pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(dim, &mut rng_from_seed(seed))
}
