//! Orthonormal frames adapted to the upper-right block of a symplectic matrix.
//!
//! For `S = [[A, B], [C, D]]` the geometry of the transform is governed by
//! four subspaces tied to `B`: `ker(B)`, its orthogonal complement `ker(B)⊥`
//! (the row space), the range `R(B)`, and `R(B)⊥`. A [`SubspaceFrame`] packages
//! orthonormal bases for all four together with the nonzero singular values of
//! `B` and its Moore–Penrose pseudo-inverse, all derived from one SVD with a
//! deterministic sign convention so repeated runs agree bit for bit.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symplectic::SymplecticMatrix;

/// Relative cutoff under which a singular value of `B` counts as zero.
///
/// The cutoff is `RANK_TOL * max(σ_max(B), 1)`. Anchoring at 1 as well as at
/// `σ_max(B)` matters: a symplectic matrix always has `σ_max(S) ≥ 1`, so a
/// block `B` whose entries sit at rounding level relative to the whole matrix
/// (e.g. a rotation propagator evaluated at a half period, where the exact
/// block vanishes but floating-point sine does not) is treated as zero instead
/// of as a full-rank block with absurd chirp rates.
pub const RANK_TOL: f64 = 1e-10;

/// Ordering for the active directions of the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameOrdering {
    /// Singular values descending — the plain SVD order; the default.
    SingularDescending,
    /// Singular values ascending — the order in which the anisotropic lower
    /// bound is assembled and sharpness rates are matched to directions.
    EigenAscending,
}

/// Orthonormal bases of the four subspaces attached to `B`, plus the
/// pseudo-inverse and the nonzero singular values.
#[derive(Debug, Clone)]
pub struct SubspaceFrame {
    d: usize,
    r: usize,
    /// `d × r`, orthonormal basis of `ker(B)⊥`; column `j` pairs with `singular_values[j]`.
    v: DMatrix<f64>,
    /// `d × (d-r)`, orthonormal basis of `ker(B)`.
    w: DMatrix<f64>,
    /// `d × r`, orthonormal basis of `R(B)`; `B v_j = σ_j u_j`.
    u: DMatrix<f64>,
    /// `d × (d-r)`, orthonormal basis of `R(B)⊥`.
    u_perp: DMatrix<f64>,
    /// `d × d` Moore–Penrose pseudo-inverse of `B`.
    b_pinv: DMatrix<f64>,
    /// The `r` nonzero singular values in the frame's ordering.
    singular_values: Vec<f64>,
    ordering: FrameOrdering,
    rank_cutoff: f64,
}

impl SubspaceFrame {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Rank of `B` — the number of active directions.
    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn w(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn u_perp(&self) -> &DMatrix<f64> {
        &self.u_perp
    }

    pub fn b_pinv(&self) -> &DMatrix<f64> {
        &self.b_pinv
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn ordering(&self) -> FrameOrdering {
        self.ordering
    }

    /// The cutoff actually used to decide rank.
    pub fn rank_cutoff(&self) -> f64 {
        self.rank_cutoff
    }

    /// Product of the nonzero singular values (1 when `B = 0`).
    pub fn sigma_product(&self) -> f64 {
        self.singular_values.iter().product()
    }

    /// Sum of the nonzero singular values (0 when `B = 0`).
    pub fn sigma_trace(&self) -> f64 {
        self.singular_values.iter().sum()
    }

    /// If `ker(B)` is spanned by coordinate axes (within `tol`), the sorted
    /// list of those axes; `None` otherwise. An empty list means `ker(B) = 0`.
    pub fn kernel_axes(&self, tol: f64) -> Option<Vec<usize>> {
        axis_span(&self.w, tol)
    }

    /// Like [`kernel_axes`](Self::kernel_axes) for `ker(B)⊥`.
    pub fn cokernel_axes(&self, tol: f64) -> Option<Vec<usize>> {
        axis_span(&self.v, tol)
    }
}

/// Returns the sorted axes spanned by the columns of `basis` if the spanned
/// subspace is a coordinate subspace within `tol`, testing whether the
/// orthogonal projector `basis basisᵀ` is a 0/1 diagonal matrix.
fn axis_span(basis: &DMatrix<f64>, tol: f64) -> Option<Vec<usize>> {
    let d = basis.nrows();
    let proj = basis * basis.transpose();
    let mut axes = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let p = proj[(i, j)];
            let target = if i == j {
                if p > 0.5 {
                    axes.push(i);
                    1.0
                } else {
                    0.0
                }
            } else {
                0.0
            };
            if (p - target).abs() > tol {
                return None;
            }
        }
    }
    if axes.len() != basis.ncols() {
        return None;
    }
    Some(axes)
}

/// Builds the frame for `b` with the default ordering and rank tolerance.
pub fn build_frame(b: &DMatrix<f64>) -> Result<SubspaceFrame> {
    build_frame_with(b, FrameOrdering::SingularDescending, RANK_TOL)
}

/// Builds the frame with explicit ordering and relative rank tolerance.
pub fn build_frame_with(
    b: &DMatrix<f64>,
    ordering: FrameOrdering,
    rank_tol: f64,
) -> Result<SubspaceFrame> {
    let d = b.nrows();
    if b.ncols() != d || d == 0 {
        return Err(Error::dim("frame block", "square, d ≥ 1", format!("{}x{}", d, b.ncols())));
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::Data { reason: "block contains a non-finite entry".into() });
    }
    if !(rank_tol.is_finite() && rank_tol > 0.0) {
        return Err(Error::Domain { reason: format!("rank tolerance {rank_tol} must be positive") });
    }

    // (σ_j, u_j, v_j) triples, descending by σ.
    let mut triples = if is_exactly_diagonal(b) {
        let mut t: Vec<(f64, DVector<f64>, DVector<f64>)> = (0..d)
            .map(|k| {
                let mut u = DVector::<f64>::zeros(d);
                let mut v = DVector::<f64>::zeros(d);
                v[k] = 1.0;
                u[k] = if b[(k, k)] < 0.0 { -1.0 } else { 1.0 };
                (b[(k, k)].abs(), u, v)
            })
            .collect();
        t.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        t
    } else {
        let fac = crate::linalg::jacobi_svd(b);
        (0..d)
            .map(|k| {
                (
                    fac.sigma[k],
                    DVector::from(fac.u.column(k).clone_owned()),
                    DVector::from(fac.v.column(k).clone_owned()),
                )
            })
            .collect()
    };

    // Deterministic signs: first entry of v_j that is clearly nonzero is made
    // positive; the paired u_j flips with it so B v_j = σ_j u_j still holds.
    for (_, u, v) in triples.iter_mut() {
        if leading_sign(v) < 0.0 {
            v.neg_mut();
            u.neg_mut();
        }
    }

    let sigma_max = triples.first().map(|t| t.0).unwrap_or(0.0);
    let cutoff = rank_tol * sigma_max.max(1.0);
    let r = triples.iter().filter(|t| t.0 > cutoff).count();

    let mut v = DMatrix::<f64>::zeros(d, r);
    let mut u = DMatrix::<f64>::zeros(d, r);
    let mut singular_values = Vec::with_capacity(r);
    for (j, (s, uc, vc)) in triples.iter().take(r).enumerate() {
        v.set_column(j, vc);
        u.set_column(j, uc);
        singular_values.push(*s);
    }
    // Null-space columns get their own sign normalization (their pairing with
    // left vectors is arbitrary once σ = 0).
    let mut w = DMatrix::<f64>::zeros(d, d - r);
    let mut u_perp = DMatrix::<f64>::zeros(d, d - r);
    for (j, (_, uc, vc)) in triples.iter().skip(r).enumerate() {
        let mut vc = vc.clone();
        if leading_sign(&vc) < 0.0 {
            vc.neg_mut();
        }
        let mut uc = uc.clone();
        if leading_sign(&uc) < 0.0 {
            uc.neg_mut();
        }
        w.set_column(j, &vc);
        u_perp.set_column(j, &uc);
    }

    if let FrameOrdering::EigenAscending = ordering {
        v = reverse_columns(&v);
        u = reverse_columns(&u);
        singular_values.reverse();
    }

    let mut b_pinv = DMatrix::<f64>::zeros(d, d);
    for j in 0..r {
        // B⁺ = Σ σ_j⁻¹ v_j u_jᵀ
        let vj = v.column(j);
        let uj = u.column(j);
        for row in 0..d {
            for col in 0..d {
                b_pinv[(row, col)] += vj[row] * uj[col] / singular_values[j];
            }
        }
    }

    Ok(SubspaceFrame {
        d,
        r,
        v,
        w,
        u,
        u_perp,
        b_pinv,
        singular_values,
        ordering,
        rank_cutoff: cutoff,
    })
}

fn is_exactly_diagonal(m: &DMatrix<f64>) -> bool {
    let d = m.nrows();
    (0..d).all(|i| (0..d).all(|j| i == j || m[(i, j)] == 0.0))
}

/// Sign of the first entry whose magnitude is within a factor 1e6 of the
/// column maximum (a plain "first nonzero" test would be at the mercy of
/// rounding noise in entries that are mathematically zero).
fn leading_sign(col: &DVector<f64>) -> f64 {
    let scale = col.amax();
    if scale == 0.0 {
        return 1.0;
    }
    for &x in col.iter() {
        if x.abs() > 1e-6 * scale {
            return x.signum();
        }
    }
    1.0
}

fn reverse_columns(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    DMatrix::from_fn(rows, cols, |i, j| m[(i, cols - 1 - j)])
}

/// Condition of a linear map restricted to a subspace, or the statement that
/// the subspace is trivial so the restriction carries no information.
#[derive(Debug, Clone, PartialEq)]
pub enum RestrictionCondition {
    TrivialSubspace,
    Finite {
        sigma_min: f64,
        sigma_max: f64,
        /// `σ_max / σ_min`; `f64::INFINITY` when the restriction is singular.
        cond: f64,
    },
}

impl RestrictionCondition {
    fn from_map(m: &DMatrix<f64>) -> RestrictionCondition {
        if m.ncols() == 0 {
            return RestrictionCondition::TrivialSubspace;
        }
        let (sigma_max, sigma_min) = crate::linalg::sigma_extremes(m);
        let cond = if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY };
        RestrictionCondition::Finite { sigma_min, sigma_max, cond }
    }

    /// True when the restricted map is invertible with condition below `max_cond`.
    pub fn is_well_conditioned(&self, max_cond: f64) -> bool {
        match self {
            RestrictionCondition::TrivialSubspace => true,
            RestrictionCondition::Finite { cond, .. } => *cond <= max_cond,
        }
    }
}

/// Conditioning report for the three subspace isomorphisms that make the
/// degenerate transform well defined: `DᵀA` on `ker(B)`, `Dᵀ` on `A(ker B)`,
/// and `Aᵀ` on `R(B)⊥`.
#[derive(Debug, Clone)]
pub struct IsomorphismReport {
    pub dta_on_kernel: RestrictionCondition,
    pub dt_on_a_kernel: RestrictionCondition,
    pub at_on_range_perp: RestrictionCondition,
}

/// Verifies (by reporting condition numbers) that the three restrictions are
/// isomorphisms for this operator.
pub fn check_lemma_isomorphisms(s: &SymplecticMatrix, frame: &SubspaceFrame) -> Result<IsomorphismReport> {
    check_dims(s, frame)?;
    let dta = s.d_block().transpose() * s.a();
    let dta_on_kernel = RestrictionCondition::from_map(&(&dta * frame.w()));

    let dt_on_a_kernel = if frame.r == frame.d {
        RestrictionCondition::TrivialSubspace
    } else {
        let a_kernel = orthonormal_image_basis(&(s.a() * frame.w()))?;
        RestrictionCondition::from_map(&(s.d_block().transpose() * &a_kernel))
    };

    let at_on_range_perp = RestrictionCondition::from_map(&(s.a().transpose() * frame.u_perp()));

    Ok(IsomorphismReport { dta_on_kernel, dt_on_a_kernel, at_on_range_perp })
}

/// Orthonormal basis of the column span of a full-column-rank matrix.
pub(crate) fn orthonormal_image_basis(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Ok(m.clone());
    }
    let fac = crate::linalg::jacobi_svd(m);
    let sigma_max = fac.sigma[0];
    let sigma_min = fac.sigma[cols - 1];
    if sigma_min <= 1e-12 * sigma_max.max(1.0) {
        return Err(Error::Singular {
            factor: "image basis (map not injective on subspace)".into(),
            value: sigma_min,
        });
    }
    // Retain the deterministic sign convention used for frame columns.
    let mut q = DMatrix::<f64>::zeros(m.nrows(), cols);
    for k in 0..cols {
        let mut col = DVector::from(fac.u.column(k).clone_owned());
        if leading_sign(&col) < 0.0 {
            col.neg_mut();
        }
        q.set_column(k, &col);
    }
    Ok(q)
}

/// Coordinates of the oblique phase-space splittings, as linear functionals.
///
/// On the position side, every `x` splits uniquely as `x = x₁ + x₂` with
/// `x₁ ∈ ker(B)⊥` and `x₂ ∈ DᵀA(ker B)`; `space` maps `x` to the coordinate
/// vector of `x₁` in the frame's `v`-basis. On the frequency side, every `ξ`
/// splits as `ξ = ξ₁ + ξ₂` with `ξ₁ ∈ R(B)` and `ξ₂ ∈ A(ker B)`; `freq` maps
/// `ξ` to the coordinates of `ξ₁` in the (non-orthonormal) basis `{B v_j}` —
/// which is exactly `Vᵀ B⁺ ξ₁`.
///
/// Whenever the splittings are orthogonal (true for every named operator
/// family in this crate) these reduce to `Vᵀ x` and `Vᵀ B⁺ ξ`; the oblique
/// solve makes them correct for arbitrary symplectic matrices too.
#[derive(Debug, Clone)]
pub struct ObliqueCoordinates {
    /// `r × d`: `x ↦` coordinates of the `ker(B)⊥` part of `x`.
    pub space: DMatrix<f64>,
    /// `r × d`: `ξ ↦` coordinates of the `R(B)` part of `ξ` w.r.t. `{B v_j}`.
    pub freq: DMatrix<f64>,
    /// `(d-r) × d`: `ξ ↦` coordinates of the `A(ker B)` part of `ξ` w.r.t. `A w_k`.
    pub freq_complement: DMatrix<f64>,
    /// `(d-r) × d`: `x ↦` coordinates of the `DᵀA(ker B)` part of `x` w.r.t. `DᵀA w_k`.
    pub space_complement: DMatrix<f64>,
}

/// Builds the oblique coordinate functionals for `s` in the given frame.
pub fn oblique_coordinates(s: &SymplecticMatrix, frame: &SubspaceFrame) -> Result<ObliqueCoordinates> {
    check_dims(s, frame)?;
    let d = frame.d;
    let r = frame.r;

    let dta_w = (s.d_block().transpose() * s.a()) * frame.w();
    let t_space = concat_columns(frame.v(), &dta_w);
    let t_space_inv = invert_checked(t_space, "position splitting")?;

    let bv = s.b() * frame.v();
    let aw = s.a() * frame.w();
    let t_freq = concat_columns(&bv, &aw);
    let t_freq_inv = invert_checked(t_freq, "frequency splitting")?;

    Ok(ObliqueCoordinates {
        space: t_space_inv.rows(0, r).clone_owned(),
        space_complement: t_space_inv.rows(r, d - r).clone_owned(),
        freq: t_freq_inv.rows(0, r).clone_owned(),
        freq_complement: t_freq_inv.rows(r, d - r).clone_owned(),
    })
}

fn concat_columns(left: &DMatrix<f64>, right: &DMatrix<f64>) -> DMatrix<f64> {
    let d = left.nrows();
    let mut out = DMatrix::<f64>::zeros(d, left.ncols() + right.ncols());
    out.view_mut((0, 0), (d, left.ncols())).copy_from(left);
    out.view_mut((0, left.ncols()), (d, right.ncols())).copy_from(right);
    out
}

fn invert_checked(m: DMatrix<f64>, context: &str) -> Result<DMatrix<f64>> {
    let (sigma_max, sigma_min) = crate::linalg::sigma_extremes(&m);
    let rcond = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
    if rcond < 1e-12 {
        return Err(Error::IllConditioned { context: context.into(), rcond });
    }
    m.try_inverse()
        .ok_or(Error::IllConditioned { context: context.into(), rcond })
}

fn check_dims(s: &SymplecticMatrix, frame: &SubspaceFrame) -> Result<()> {
    if s.dim() != frame.d {
        return Err(Error::dim(
            "operator vs frame",
            format!("d = {}", frame.d),
            format!("d = {}", s.dim()),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{fourier, multiplier, partial_fourier};
    use nalgebra::dmatrix;

    fn frame_invariant_checks(b: &DMatrix<f64>, frame: &SubspaceFrame) {
        let d = frame.dim();
        let r = frame.rank();
        let eye_r = DMatrix::<f64>::identity(r, r);
        assert!((frame.v().transpose() * frame.v() - &eye_r).amax() < 1e-12);
        assert!((frame.u().transpose() * frame.u() - &eye_r).amax() < 1e-12);
        if d > r {
            let eye_c = DMatrix::<f64>::identity(d - r, d - r);
            assert!((frame.w().transpose() * frame.w() - &eye_c).amax() < 1e-12);
            assert!((frame.u_perp().transpose() * frame.u_perp() - &eye_c).amax() < 1e-12);
            assert!((frame.v().transpose() * frame.w()).amax() < 1e-12);
            assert!((b * frame.w()).amax() <= frame.rank_cutoff() * 10.0 + 1e-14);
        }
        // B v_j = σ_j u_j, column by column.
        for j in 0..r {
            let lhs = b * frame.v().column(j);
            let rhs = frame.u().column(j) * frame.singular_values()[j];
            assert!((lhs - rhs).amax() < 1e-10 * (1.0 + b.amax()));
        }
        // Moore–Penrose identities.
        let bp = frame.b_pinv();
        assert!((b * bp * b - b).amax() < 1e-9 * (1.0 + b.amax()));
        assert!((bp * b * bp - bp).amax() < 1e-9 * (1.0 + bp.amax()));
    }

    #[test]
    fn full_rank_identity_block() {
        let b = DMatrix::<f64>::identity(3, 3);
        let frame = build_frame(&b).unwrap();
        assert_eq!(frame.rank(), 3);
        assert_eq!(frame.singular_values(), &[1.0, 1.0, 1.0]);
        frame_invariant_checks(&b, &frame);
        assert_eq!(frame.kernel_axes(1e-12).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn diagonal_block_with_kernel() {
        let b = dmatrix![3.0, 0.0; 0.0, 0.0];
        let frame = build_frame(&b).unwrap();
        assert_eq!(frame.rank(), 1);
        assert_eq!(frame.singular_values(), &[3.0]);
        assert_eq!(frame.v()[(0, 0)], 1.0);
        assert_eq!(frame.w()[(1, 0)], 1.0);
        assert_eq!(frame.kernel_axes(1e-12).unwrap(), vec![1]);
        frame_invariant_checks(&b, &frame);
        // Pseudo-inverse of diag(3, 0) is diag(1/3, 0).
        assert!((frame.b_pinv()[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(frame.b_pinv()[(1, 1)], 0.0);
    }

    #[test]
    fn zero_block_has_empty_active_frame() {
        let b = DMatrix::<f64>::zeros(2, 2);
        let frame = build_frame(&b).unwrap();
        assert_eq!(frame.rank(), 0);
        assert_eq!(frame.sigma_product(), 1.0);
        assert_eq!(frame.sigma_trace(), 0.0);
        assert_eq!(frame.b_pinv().amax(), 0.0);
    }

    #[test]
    fn rounding_level_block_counts_as_zero() {
        // sin(π) in floating point: ~1.2e-16. The absolute anchor in the rank
        // cutoff must zero the whole block.
        let s = std::f64::consts::PI.sin();
        let b = DMatrix::<f64>::identity(2, 2) * s;
        let frame = build_frame(&b).unwrap();
        assert_eq!(frame.rank(), 0);
    }

    #[test]
    fn rotated_block_svd_path() {
        let theta: f64 = 0.3;
        let rot = dmatrix![theta.cos(), -theta.sin(); theta.sin(), theta.cos()];
        let b = &rot * dmatrix![2.0, 0.0; 0.0, 0.0] * rot.transpose();
        let frame = build_frame(&b).unwrap();
        assert_eq!(frame.rank(), 1);
        assert!((frame.singular_values()[0] - 2.0).abs() < 1e-12);
        frame_invariant_checks(&b, &frame);
        assert!(frame.kernel_axes(1e-10).is_none());
    }

    #[test]
    fn ascending_ordering_reverses_pairing_consistently() {
        let b = dmatrix![1.0, 0.0; 0.0, 4.0];
        let frame = build_frame_with(&b, FrameOrdering::EigenAscending, RANK_TOL).unwrap();
        assert_eq!(frame.singular_values(), &[1.0, 4.0]);
        frame_invariant_checks(&b, &frame);
    }

    #[test]
    fn isomorphisms_trivial_for_invertible_block() {
        let s = fourier(2).unwrap();
        let frame = build_frame(s.b()).unwrap();
        let report = check_lemma_isomorphisms(&s, &frame).unwrap();
        assert_eq!(report.dt_on_a_kernel, RestrictionCondition::TrivialSubspace);
        assert_eq!(report.at_on_range_perp, RestrictionCondition::TrivialSubspace);
    }

    #[test]
    fn isomorphisms_unit_condition_for_partial_transform() {
        let s = partial_fourier(2, &[0]).unwrap();
        let frame = build_frame(s.b()).unwrap();
        let report = check_lemma_isomorphisms(&s, &frame).unwrap();
        for restriction in [&report.dta_on_kernel, &report.dt_on_a_kernel, &report.at_on_range_perp] {
            match restriction {
                RestrictionCondition::Finite { cond, .. } => assert!((cond - 1.0).abs() < 1e-12),
                RestrictionCondition::TrivialSubspace => panic!("subspace should be 1-dimensional"),
            }
        }
    }

    #[test]
    fn oblique_coordinates_reduce_to_orthogonal_ones_for_multiplier() {
        let s = multiplier(dmatrix![1.0, 0.0; 0.0, 0.0]).unwrap();
        let frame = build_frame(s.b()).unwrap();
        let coords = oblique_coordinates(&s, &frame).unwrap();
        // Orthogonal splitting: functional is Vᵀ on the position side.
        assert!((coords.space.clone() - frame.v().transpose()).amax() < 1e-12);
        // And Vᵀ B⁺ on the frequency side.
        let vbp = frame.v().transpose() * frame.b_pinv();
        assert!((coords.freq.clone() - vbp).amax() < 1e-12);
    }

    #[test]
    fn oblique_coordinates_recover_skewed_position_splitting() {
        // A shear composed on the left makes DᵀA(ker B) skew to ker(B)⊥;
        // the functionals must still split exactly.
        let q = dmatrix![0.0, 1.0; 1.0, 0.0];
        let s = crate::operators::chirp(q).unwrap().compose(&partial_fourier(2, &[0]).unwrap()).unwrap();
        let frame = build_frame(s.b()).unwrap();
        let dta = s.d_block().transpose() * s.a();
        let skew = (frame.v().transpose() * &dta * frame.w()).amax();
        assert!(skew > 0.5, "test premise: splitting must actually be oblique");
        let coords = oblique_coordinates(&s, &frame).unwrap();
        // A point purely in DᵀA(ker B) must have zero active coordinate.
        let x2 = &dta * frame.w().column(0);
        let u = &coords.space * x2;
        assert!(u.amax() < 1e-12);
        // And a point in ker(B)⊥ keeps the plain Vᵀ coordinate.
        let x1 = frame.v().column(0) * 1.7;
        let u1 = &coords.space * x1;
        assert!((u1[0] - 1.7).abs() < 1e-12);
    }

    #[test]
    fn oblique_coordinates_recover_skewed_frequency_splitting() {
        // A shear composed on the right skews A(ker B) against R(B).
        let q = dmatrix![0.0, 1.0; 1.0, 0.0];
        let s = partial_fourier(2, &[0]).unwrap().compose(&crate::operators::chirp(q).unwrap()).unwrap();
        let frame = build_frame(s.b()).unwrap();
        let a_kernel = s.a() * frame.w();
        let skew = (frame.u().transpose() * &a_kernel).amax();
        assert!(skew > 0.5, "test premise: splitting must actually be oblique");
        let coords = oblique_coordinates(&s, &frame).unwrap();
        // Points in A(ker B) carry no R(B)-coordinate.
        let xi2 = a_kernel.column(0);
        assert!((&coords.freq * xi2).amax() < 1e-12);
        // ξ = B v_1 has frequency coordinate exactly 1.
        let xi1 = s.b() * frame.v().column(0);
        let eta = &coords.freq * xi1;
        assert!((eta[0] - 1.0).abs() < 1e-12);
    }
}
