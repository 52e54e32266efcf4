//! Volume factors of restricted linear maps and the scalar constants of a
//! metaplectic operator.
//!
//! The central quantity is `q_L(M) = sqrt(det(Eᵀ Mᵀ M E))` for an orthonormal
//! basis `E` of a subspace `L` — the factor by which `M` scales ℓ-dimensional
//! volume on `L`. From four such factors and the nonzero singular values of
//! the upper-right block, the normalization constant `μ_S` of the transform
//! integral and the uncertainty constant `K_S` follow.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frame::SubspaceFrame;
use crate::symplectic::SymplecticMatrix;

/// Orthonormality tolerance for basis matrices handed to [`q_volume`].
pub const ORTHONORMAL_TOL: f64 = 1e-8;

/// Volume scaling factor of `map` restricted to the span of the orthonormal
/// columns of `basis`: the product of the singular values of `map * basis`.
///
/// By convention the factor over the zero subspace (no columns) is exactly 1.
/// For `basis = I` and nonsingular `map` this is `|det map|`.
pub fn q_volume(map: &DMatrix<f64>, basis: &DMatrix<f64>) -> Result<f64> {
    let d = map.nrows();
    if map.ncols() != d {
        return Err(Error::dim("volume map", format!("{d}x{d}"), format!("{d}x{}", map.ncols())));
    }
    if basis.nrows() != d {
        return Err(Error::dim(
            "volume basis",
            format!("{d} rows"),
            format!("{} rows", basis.nrows()),
        ));
    }
    let l = basis.ncols();
    if l == 0 {
        return Ok(1.0);
    }
    let gram = basis.transpose() * basis;
    let gram_defect = (gram - DMatrix::<f64>::identity(l, l)).amax();
    if gram_defect > ORTHONORMAL_TOL {
        return Err(Error::NonOrthonormal { deviation: gram_defect });
    }
    let restricted = map * basis;
    Ok(crate::linalg::singular_values(&restricted).iter().product())
}

/// The scalar constants of a metaplectic operator, with the intermediate
/// volume factors kept for reporting and identity checks.
#[derive(Debug, Clone)]
pub struct MetaplecticConstants {
    /// Normalization of the transform integral.
    pub mu_s: f64,
    /// Constant in the directional uncertainty lower bound.
    pub k_s: f64,
    /// Product of the nonzero singular values of the upper-right block.
    pub sigma_product: f64,
    /// Sum of the nonzero singular values (trace of `(BᵀB)^{1/2}`).
    pub sigma_trace: f64,
    /// `q` of `Aᵀ` over `R(B)⊥`.
    pub q_range_perp_at: f64,
    /// `q` of `A Aᵀ` over `R(B)⊥`.
    pub q_range_perp_aat: f64,
    /// `q` of `DᵀA` over `ker(B)`.
    pub q_kernel_dta: f64,
    /// `q` of `A` over `ker(B)`.
    pub q_kernel_a: f64,
}

/// Computes `μ_S` and `K_S` for `s` in the given frame.
///
/// `μ_S = (q_{R(B)⊥}(Aᵀ) · σ(B))^{-1/2}` and
/// `K_S = sqrt(q_{R(B)⊥}(A Aᵀ)) / (q_{R(B)⊥}(Aᵀ) · sqrt(q_{ker B}(DᵀA)))`.
/// Each factor that appears in a denominator is checked against zero and
/// reported by name when the operator degenerates.
pub fn constants(s: &SymplecticMatrix, frame: &SubspaceFrame) -> Result<MetaplecticConstants> {
    if s.dim() != frame.dim() {
        return Err(Error::dim(
            "constants",
            format!("d = {}", frame.dim()),
            format!("d = {}", s.dim()),
        ));
    }
    let at = s.a().transpose();
    let aat = s.a() * &at;
    let dta = s.d_block().transpose() * s.a();

    let q_range_perp_at = q_volume(&at, frame.u_perp())?;
    let q_range_perp_aat = q_volume(&aat, frame.u_perp())?;
    let q_kernel_dta = q_volume(&dta, frame.w())?;
    let q_kernel_a = q_volume(s.a(), frame.w())?;
    let sigma_product = frame.sigma_product();
    let sigma_trace = frame.sigma_trace();

    for (name, value) in [
        ("q_{R(B)⊥}(Aᵀ)", q_range_perp_at),
        ("q_{ker B}(DᵀA)", q_kernel_dta),
        ("σ(B)", sigma_product),
    ] {
        if !(value > 1e-150) {
            return Err(Error::Singular { factor: name.into(), value });
        }
    }

    let mu_s = (1.0 / (q_range_perp_at * sigma_product)).sqrt();
    let k_s = q_range_perp_aat.sqrt() / (q_range_perp_at * q_kernel_dta.sqrt());

    Ok(MetaplecticConstants {
        mu_s,
        k_s,
        sigma_product,
        sigma_trace,
        q_range_perp_at,
        q_range_perp_aat,
        q_kernel_dta,
        q_kernel_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::build_frame;
    use crate::operators::{fourier, free_particle, harmonic_oscillator, multiplier, partial_fourier};
    use nalgebra::dmatrix;

    fn constants_of(s: &SymplecticMatrix) -> MetaplecticConstants {
        let frame = build_frame(s.b()).unwrap();
        constants(s, &frame).unwrap()
    }

    #[test]
    fn volume_factor_conventions() {
        let map = dmatrix![3.0, 0.0; 0.0, 5.0];
        // Zero subspace → exactly 1.
        let empty = DMatrix::<f64>::zeros(2, 0);
        assert_eq!(q_volume(&map, &empty).unwrap(), 1.0);
        // Full space → |det|.
        let eye = DMatrix::<f64>::identity(2, 2);
        assert!((q_volume(&map, &eye).unwrap() - 15.0).abs() < 1e-12);
        // Single axis → column norm.
        let e1 = dmatrix![1.0; 0.0];
        assert!((q_volume(&map, &e1).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn volume_factor_rejects_skewed_basis() {
        let map = DMatrix::<f64>::identity(2, 2);
        let skew = dmatrix![1.0; 1.0];
        assert!(matches!(q_volume(&map, &skew), Err(Error::NonOrthonormal { .. })));
    }

    #[test]
    fn volume_factor_invariant_under_basis_rotation() {
        let map = dmatrix![2.0, 1.0, 0.0; 0.0, 1.0, -1.0; 0.5, 0.0, 1.0];
        let theta: f64 = 0.7;
        let basis = dmatrix![1.0, 0.0; 0.0, 1.0; 0.0, 0.0];
        let rot = dmatrix![theta.cos(), -theta.sin(); theta.sin(), theta.cos()];
        let rotated = &basis * rot;
        let q1 = q_volume(&map, &basis).unwrap();
        let q2 = q_volume(&map, &rotated).unwrap();
        assert!((q1 - q2).abs() < 1e-12 * q1);
    }

    #[test]
    fn fourier_constants_are_unit() {
        for d in 1..=3 {
            let c = constants_of(&fourier(d).unwrap());
            assert_eq!(c.mu_s, 1.0);
            assert_eq!(c.k_s, 1.0);
            assert_eq!(c.sigma_trace, d as f64);
        }
    }

    #[test]
    fn multiplier_constant_is_unit_even_when_degenerate() {
        let c = constants_of(&multiplier(dmatrix![1.0, 0.0; 0.0, 0.0]).unwrap());
        assert!((c.k_s - 1.0).abs() < 1e-12);
        assert!((c.sigma_trace - 1.0).abs() < 1e-12);
        let c2 = constants_of(&multiplier(dmatrix![0.7]).unwrap());
        assert!((c2.k_s - 1.0).abs() < 1e-12);
        assert!((c2.mu_s - 1.0 / 0.7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn free_operator_constant_is_unit() {
        // Invertible upper-right block: all restricted volumes are trivial.
        let c = constants_of(&free_particle(2, 0.3).unwrap());
        assert_eq!(c.k_s, 1.0);
        let c2 = constants_of(&harmonic_oscillator(1, 2.0, 0.4).unwrap());
        assert_eq!(c2.k_s, 1.0);
    }

    #[test]
    fn oscillator_trace_matches_sine_formula() {
        let (d, omega, t) = (2, 2.0, 0.37);
        let c = constants_of(&harmonic_oscillator(d, omega, t).unwrap());
        let expected = d as f64 * (omega * t).sin().abs() / omega;
        assert!((c.sigma_trace - expected).abs() < 1e-13);
    }

    #[test]
    fn partial_transform_constants() {
        let c = constants_of(&partial_fourier(3, &[1]).unwrap());
        assert!((c.mu_s - 1.0).abs() < 1e-12);
        assert!((c.k_s - 1.0).abs() < 1e-12);
        assert!((c.sigma_trace - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_operator_identity_links_constant_to_volume_factor() {
        // For C = -B, D = A the constant collapses to 1/q_{R(B)⊥}(Aᵀ).
        // Exercise it on a partial transform conjugated by a rotation, which
        // keeps orthogonality but leaves no axis alignment.
        let theta: f64 = 0.6;
        let rot2 = dmatrix![theta.cos(), -theta.sin(); theta.sin(), theta.cos()];
        let rot = crate::operators::rescale(&rot2.transpose()).unwrap();
        let s = rot
            .inverse()
            .compose(&partial_fourier(2, &[0]).unwrap())
            .unwrap()
            .compose(&rot)
            .unwrap();
        assert!((s.c() + s.b()).amax() < 1e-12, "operator stays orthogonal");
        assert!((s.d_block() - s.a()).amax() < 1e-12);
        let frame = build_frame(s.b()).unwrap();
        let c = constants(&s, &frame).unwrap();
        assert!((c.k_s * c.q_range_perp_at - 1.0).abs() < 1e-10);
    }
}
