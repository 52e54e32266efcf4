//! Shared generators for the integration suites: seeded random Gaussian
//! states, random orthogonal matrices, and random orthogonal symplectic
//! matrices with a prescribed number of degenerate directions.
#![allow(dead_code)]

use metaplectic::{GaussianState, SymplecticMatrix};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for reproducible suites.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random orthogonal matrix from the QR factorization of an i.i.d. square
/// matrix.
pub fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let qr = m.qr();
    qr.q()
}

/// Random orthogonal symplectic matrix `[[A, B], [-B, A]]` built from a
/// unitary `A + iB = Q₁·diag(e^{iθ})·Q₂` with real orthogonal factors.
/// The first `zero_angles` rotation angles vanish, forcing `rank B =
/// d − zero_angles`.
pub fn random_orthogonal_symplectic(
    d: usize,
    zero_angles: usize,
    rng: &mut ChaCha8Rng,
) -> SymplecticMatrix {
    assert!(zero_angles <= d);
    let q1 = random_orthogonal(d, rng);
    let q2 = random_orthogonal(d, rng);
    let angles: Vec<f64> = (0..d)
        .map(|i| if i < zero_angles { 0.0 } else { rng.random_range(0.3..1.3) })
        .collect();
    let cos = DMatrix::from_diagonal(&DVector::from_iterator(d, angles.iter().map(|t| t.cos())));
    let sin = DMatrix::from_diagonal(&DVector::from_iterator(d, angles.iter().map(|t| t.sin())));
    let a = &q1 * cos * &q2;
    let b = &q1 * sin * &q2;
    SymplecticMatrix::from_blocks(a.clone(), b.clone(), -b, a).expect("orthogonal symplectic")
}

/// Random symmetric matrix with entries of magnitude at most `scale`.
pub fn random_symmetric(d: usize, scale: f64, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(d, d, |_, _| rng.random_range(-scale..scale));
    (&m + m.transpose()) * 0.5
}

/// Random Gaussian state `c·exp(iπ Zx·x + 2πi w·x)` with a well-conditioned
/// positive-definite imaginary part, so every draw is Schwartz class and
/// numerically contained in a moderate box.
pub fn random_gaussian(d: usize, rng: &mut ChaCha8Rng) -> GaussianState {
    let x = random_symmetric(d, 0.4, rng);
    let q = random_orthogonal(d, rng);
    let lambda =
        DVector::from_iterator(d, (0..d).map(|_| rng.random_range(0.7..1.6)));
    let y = q.transpose() * DMatrix::from_diagonal(&lambda) * &q;
    let z = DMatrix::from_fn(d, d, |i, j| Complex64::new(x[(i, j)], y[(i, j)]));
    let w = DVector::from_fn(d, |_, _| {
        Complex64::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4))
    });
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let c = Complex64::from_polar(rng.random_range(0.5..1.5), phase);
    GaussianState::new(z, w, c).expect("valid random Gaussian")
}

/// Smooth compactly supported bump: `exp(-1/(1-t²))` for `|t| < 1`, zero
/// outside.
pub fn smooth_bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}
