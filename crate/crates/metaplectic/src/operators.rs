//! Named symplectic matrices for the standard operator families.
//!
//! Each constructor returns the projection of a classical unitary onto the
//! symplectic group: the Fourier transform, quadratic chirp multiplications,
//! coordinate rescalings, Fourier multipliers with quadratic symbol, partial
//! Fourier transforms, and the free-particle and harmonic-oscillator
//! propagators.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::symplectic::SymplecticMatrix;

/// The standard form `J = [[0, I], [-I, 0]]`, i.e. the Fourier transform.
pub fn fourier(d: usize) -> Result<SymplecticMatrix> {
    let eye = DMatrix::<f64>::identity(d, d);
    let zero = DMatrix::<f64>::zeros(d, d);
    SymplecticMatrix::from_blocks(zero.clone(), eye.clone(), -eye, zero)
}

/// Chirp multiplication `f ↦ e^{iπ Q x·x} f` with symmetric `Q`;
/// projects to `[[I, 0], [Q, I]]`.
pub fn chirp(q: DMatrix<f64>) -> Result<SymplecticMatrix> {
    let d = q.nrows();
    if q.ncols() != d {
        return Err(Error::dim("chirp symbol", format!("{d}x{d}"), format!("{d}x{}", q.ncols())));
    }
    let defect = (&q - q.transpose()).amax();
    if defect > 1e-10 * q.amax().max(1.0) {
        return Err(Error::Data {
            reason: format!("chirp symbol must be symmetric (defect {defect:.3e})"),
        });
    }
    let eye = DMatrix::<f64>::identity(d, d);
    let zero = DMatrix::<f64>::zeros(d, d);
    SymplecticMatrix::from_blocks(eye.clone(), zero.clone(), q, eye)
}

/// Rescaling `f ↦ |det E|^{1/2} f(E x)` with invertible `E`;
/// projects to `[[E⁻¹, 0], [0, Eᵀ]]`.
pub fn rescale(e: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    let d = e.nrows();
    if e.ncols() != d {
        return Err(Error::dim("rescale matrix", format!("{d}x{d}"), format!("{d}x{}", e.ncols())));
    }
    let (smax, smin) = crate::linalg::sigma_extremes(e);
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::Singular {
            factor: "rescale matrix".into(),
            value: smin,
        });
    }
    let e_inv = e
        .clone()
        .try_inverse()
        .ok_or(Error::Singular { factor: "rescale matrix".into(), value: smin })?;
    let zero = DMatrix::<f64>::zeros(d, d);
    SymplecticMatrix::from_blocks(e_inv, zero.clone(), zero, e.transpose())
}

/// Fourier multiplier `f ↦ F⁻¹(e^{-iπ P ξ·ξ} F f)` with symmetric `P`;
/// projects to `[[I, P], [0, I]]`.
pub fn multiplier(p: DMatrix<f64>) -> Result<SymplecticMatrix> {
    let d = p.nrows();
    if p.ncols() != d {
        return Err(Error::dim("multiplier symbol", format!("{d}x{d}"), format!("{d}x{}", p.ncols())));
    }
    let defect = (&p - p.transpose()).amax();
    if defect > 1e-10 * p.amax().max(1.0) {
        return Err(Error::Data {
            reason: format!("multiplier symbol must be symmetric (defect {defect:.3e})"),
        });
    }
    let eye = DMatrix::<f64>::identity(d, d);
    let zero = DMatrix::<f64>::zeros(d, d);
    SymplecticMatrix::from_blocks(eye.clone(), p, zero, eye)
}

/// Partial Fourier transform in the axes of `axes` (0-based, deduplicated):
/// `[[I - I_J, I_J], [-I_J, I - I_J]]` where `I_J` projects onto those axes.
pub fn partial_fourier(d: usize, axes: &[usize]) -> Result<SymplecticMatrix> {
    let mut mask = vec![false; d];
    for &k in axes {
        if k >= d {
            return Err(Error::IndexOutOfRange {
                what: format!("partial transform axis {k} for dimension {d}"),
            });
        }
        mask[k] = true;
    }
    let proj = DMatrix::<f64>::from_fn(d, d, |i, j| {
        if i == j && mask[i] {
            1.0
        } else {
            0.0
        }
    });
    let rest = DMatrix::<f64>::identity(d, d) - &proj;
    SymplecticMatrix::from_blocks(rest.clone(), proj.clone(), -proj, rest)
}

/// Propagator of the free Schrödinger equation at time `t`:
/// a Fourier multiplier with symbol `-4πt·I`, i.e. `[[I, -4πt I], [0, I]]`.
pub fn free_particle(d: usize, t: f64) -> Result<SymplecticMatrix> {
    if !t.is_finite() {
        return Err(Error::Domain { reason: format!("free propagation time {t} must be finite") });
    }
    let p = DMatrix::<f64>::identity(d, d) * (-4.0 * std::f64::consts::PI * t);
    multiplier(p)
}

/// Propagator of the harmonic oscillator `i ∂_t u = (-Δ/(4π) + πω²|x|²) u`
/// at time `t`: the rotation
/// `[[cos(ωt) I, ω⁻¹ sin(ωt) I], [-ω sin(ωt) I, cos(ωt) I]]`.
pub fn harmonic_oscillator(d: usize, omega: f64, t: f64) -> Result<SymplecticMatrix> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain { reason: format!("oscillator frequency {omega} must be positive") });
    }
    if !t.is_finite() {
        return Err(Error::Domain { reason: format!("oscillator time {t} must be finite") });
    }
    let (s, c) = (omega * t).sin_cos();
    let eye = DMatrix::<f64>::identity(d, d);
    SymplecticMatrix::from_blocks(
        &eye * c,
        &eye * (s / omega),
        &eye * (-omega * s),
        &eye * c,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_fourier_blocks_are_complementary_projections() {
        let s = partial_fourier(3, &[0, 2]).unwrap();
        let b = s.b();
        assert_eq!(b[(0, 0)], 1.0);
        assert_eq!(b[(1, 1)], 0.0);
        assert_eq!(b[(2, 2)], 1.0);
        assert_eq!(s.a()[(1, 1)], 1.0);
        // Whole-axes set reduces to the full Fourier transform.
        let full = partial_fourier(2, &[0, 1]).unwrap();
        assert_eq!(full.to_dense(), fourier(2).unwrap().to_dense());
    }

    #[test]
    fn free_particle_is_a_multiplier_with_time_linear_symbol() {
        let t = 0.3;
        let s = free_particle(2, t).unwrap();
        assert!((s.b()[(0, 0)] + 4.0 * std::f64::consts::PI * t).abs() < 1e-15);
        assert_eq!(s.c().amax(), 0.0);
    }

    #[test]
    fn oscillator_at_quarter_period_is_a_scaled_fourier_transform() {
        let omega = 2.0;
        let s = harmonic_oscillator(1, omega, std::f64::consts::FRAC_PI_4).unwrap();
        // ωt = π/2: cos term vanishes, upper-right block is ω⁻¹.
        assert!(s.a().amax() < 1e-15);
        assert!((s.b()[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((s.c()[(0, 0)] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn oscillator_rejects_nonpositive_frequency() {
        assert!(harmonic_oscillator(1, 0.0, 1.0).is_err());
        assert!(harmonic_oscillator(1, -1.0, 1.0).is_err());
    }

    #[test]
    fn partial_fourier_rejects_out_of_range_axis() {
        assert!(partial_fourier(2, &[2]).is_err());
    }
}
