//! Generalized Gaussian states and their exact images under metaplectic
//! operators.
//!
//! A state is `f(x) = c · exp(iπ xᵀZx + 2πi wᵀx)` with complex symmetric `Z`,
//! `Im Z ≻ 0`, complex `w` and amplitude `c`. The family is closed under every
//! operator in this crate, and norms, means and second moments have closed
//! forms — which makes these states the reference oracles for the quadrature
//! and FFT paths and for the uncertainty inequalities.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{constants, MetaplecticConstants};
use crate::error::{Error, Result};
use crate::frame::{oblique_coordinates, orthonormal_image_basis, SubspaceFrame};
use crate::grid::{AxisSpec, GridFunction, GridSpec, MAX_DIM};
use crate::symplectic::SymplecticMatrix;

const PI: f64 = std::f64::consts::PI;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// When the smallest singular value of the upper-right block clears this
/// fraction of its scale, the one-shot invertible-block decomposition is
/// used; below it, the operator is split so that only a well-conditioned
/// block ever gets inverted.
const FREE_ROUTE_TOL: f64 = 1e-6;

/// `f(x) = c · exp(iπ xᵀZx + 2πi wᵀx)` with `Z` complex symmetric, `Im Z ≻ 0`.
#[derive(Debug, Clone)]
pub struct GaussianState {
    d: usize,
    z: DMatrix<Complex64>,
    w: DVector<Complex64>,
    c: Complex64,
}

impl GaussianState {
    /// Validates symmetry, positivity of `Im Z`, and finiteness; stores the
    /// symmetrized quadratic form.
    pub fn new(z: DMatrix<Complex64>, w: DVector<Complex64>, c: Complex64) -> Result<GaussianState> {
        let d = z.nrows();
        if d == 0 || d > MAX_DIM {
            return Err(Error::dim("state dimension", format!("1..={MAX_DIM}"), format!("{d}")));
        }
        if z.ncols() != d {
            return Err(Error::dim("quadratic form", format!("{d}x{d}"), format!("{d}x{}", z.ncols())));
        }
        if w.len() != d {
            return Err(Error::dim("linear form", format!("length {d}"), format!("length {}", w.len())));
        }
        let finite = z.iter().all(|v| v.re.is_finite() && v.im.is_finite())
            && w.iter().all(|v| v.re.is_finite() && v.im.is_finite())
            && c.re.is_finite()
            && c.im.is_finite();
        if !finite {
            return Err(Error::Data { reason: "state parameters must be finite".into() });
        }
        let scale = z.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1.0);
        let defect = (&z - z.transpose()).iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if defect > 1e-8 * scale {
            return Err(Error::Data {
                reason: format!("quadratic form must be symmetric (defect {defect:.3e})"),
            });
        }
        let z = (&z + z.transpose()) * Complex64::new(0.5, 0.0);
        let m = z.map(|v| v.im);
        if Cholesky::new(m).is_none() {
            return Err(Error::Data {
                reason: "imaginary part of the quadratic form must be positive definite".into(),
            });
        }
        Ok(GaussianState { d, z, w, c })
    }

    /// The standard state `e^{-π|x|²}`: `Z = iI`, `w = 0`, `c = 1`.
    pub fn standard(d: usize) -> GaussianState {
        GaussianState::new(
            DMatrix::identity(d, d) * I,
            DVector::zeros(d),
            Complex64::new(1.0, 0.0),
        )
        .expect("standard state is always valid")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn z(&self) -> &DMatrix<Complex64> {
        &self.z
    }

    pub fn w(&self) -> &DVector<Complex64> {
        &self.w
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.d);
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..self.d {
            for j in 0..self.d {
                quad += self.z[(i, j)] * x[i] * x[j];
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..self.d {
            lin += self.w[i] * x[i];
        }
        self.c * (I * PI * quad + I * 2.0 * PI * lin).exp()
    }

    fn im_parts(&self) -> (DMatrix<f64>, DVector<f64>) {
        (self.z.map(|v| v.im), self.w.map(|v| v.im))
    }

    /// Exact squared L² norm:
    /// `|c|² · exp(2π bᵀM⁻¹b) · det(2M)^{-1/2}` with `M = Im Z`, `b = Im w`.
    pub fn norm_sq(&self) -> f64 {
        let (m, b) = self.im_parts();
        let chol = Cholesky::new(m).expect("validated at construction");
        let m_inv_b = chol.solve(&b);
        let det_m: f64 = chol.l().diagonal().iter().map(|x| x * x).product();
        let det_2m = 2.0f64.powi(self.d as i32) * det_m;
        self.c.norm_sqr() * (2.0 * PI * b.dot(&m_inv_b)).exp() / det_2m.sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Center of mass of `|f|²`: `μ = -M⁻¹ (Im w)`.
    pub fn mean(&self) -> DVector<f64> {
        let (m, b) = self.im_parts();
        -Cholesky::new(m).expect("validated at construction").solve(&b)
    }

    /// Covariance of the probability density `|f|²/‖f‖²`: `(4π M)⁻¹`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let (m, _) = self.im_parts();
        Cholesky::new(m).expect("validated at construction").inverse() / (4.0 * PI)
    }

    /// Exact second moment `∫ (vᵀx - center)² |f(x)|² dx`
    /// `= ‖f‖² (vᵀΣv + (vᵀμ - center)²)`.
    pub fn second_moment(&self, v: &DVector<f64>, center: f64) -> f64 {
        debug_assert_eq!(v.len(), self.d);
        let sigma = self.covariance();
        let mu = self.mean();
        let spread = (v.transpose() * &sigma * v)[(0, 0)];
        let off = v.dot(&mu) - center;
        self.norm_sq() * (spread + off * off)
    }

    /// Returns a copy scaled to unit L² norm (phase preserved).
    pub fn normalized(&self) -> GaussianState {
        let mut out = self.clone();
        out.c /= self.l2_norm();
        out
    }

    /// Samples the state on a grid.
    pub fn to_grid(&self, spec: &GridSpec) -> Result<GridFunction> {
        if spec.d() != self.d {
            return Err(Error::dim("sampling grid", format!("d = {}", self.d), format!("d = {}", spec.d())));
        }
        GridFunction::sample(spec, |x| self.evaluate(x))
    }

    /// Axes centered on the state's mean, `widths` standard deviations of
    /// `|f|²` on each side, `n` nodes per axis.
    pub fn suggested_axes(&self, n: usize, widths: f64) -> Vec<AxisSpec> {
        let mu = self.mean();
        let sigma = self.covariance();
        (0..self.d)
            .map(|i| {
                let hw = widths * sigma[(i, i)].sqrt();
                AxisSpec { n, min: mu[i] - hw, step: 2.0 * hw / n as f64 }
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let shadow = GaussianStateJson {
            d: self.d,
            z_re: matrix_rows(&self.z.map(|v| v.re)),
            z_im: matrix_rows(&self.z.map(|v| v.im)),
            w_re: self.w.iter().map(|v| v.re).collect(),
            w_im: self.w.iter().map(|v| v.im).collect(),
            c_re: self.c.re,
            c_im: self.c.im,
        };
        serde_json::to_string_pretty(&shadow).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<GaussianState> {
        let shadow: GaussianStateJson = serde_json::from_str(text)?;
        if shadow.d == 0 || shadow.d > MAX_DIM {
            return Err(Error::Data { reason: format!("dimension {} outside 1..={MAX_DIM}", shadow.d) });
        }
        let z_re = matrix_from_rows(&shadow.z_re, shadow.d, "z_re")?;
        let z_im = matrix_from_rows(&shadow.z_im, shadow.d, "z_im")?;
        if shadow.w_re.len() != shadow.d || shadow.w_im.len() != shadow.d {
            return Err(Error::Data { reason: "linear form length must equal the dimension".into() });
        }
        let z = DMatrix::from_fn(shadow.d, shadow.d, |i, j| Complex64::new(z_re[(i, j)], z_im[(i, j)]));
        let w = DVector::from_fn(shadow.d, |i, _| Complex64::new(shadow.w_re[i], shadow.w_im[i]));
        GaussianState::new(z, w, Complex64::new(shadow.c_re, shadow.c_im))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianStateJson {
    d: usize,
    z_re: Vec<Vec<f64>>,
    z_im: Vec<Vec<f64>>,
    w_re: Vec<f64>,
    w_im: Vec<f64>,
    c_re: f64,
    c_im: f64,
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn matrix_from_rows(rows: &[Vec<f64>], d: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(Error::Data { reason: format!("{what} must be a {d}x{d} matrix") });
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

/// The Möbius action of `S` on the quadratic form: `Z ↦ (C + DZ)(A + BZ)⁻¹`.
///
/// This is how the quadratic form of a Gaussian state must transform; it is
/// computed independently of the step-by-step route and serves as a
/// cross-check in the test suite.
pub fn siegel_action(s: &SymplecticMatrix, z: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let lift = |m: &DMatrix<f64>| m.map(|x| Complex64::new(x, 0.0));
    let denom = lift(s.a()) + lift(s.b()) * z;
    let denom_inv = denom.try_inverse().ok_or(Error::Singular {
        factor: "A + BZ in the fractional action".into(),
        value: 0.0,
    })?;
    let num = lift(s.c()) + lift(s.d_block()) * z;
    Ok(num * denom_inv)
}

/// Applies the metaplectic operator of `s` to a Gaussian state, exactly.
///
/// Routing: an upper-right block that is invertible with margin is handled by
/// the one-shot quadratic-Fourier decomposition; a numerically zero block by
/// the pointwise substitution rule; anything in between (the genuinely
/// degenerate operators) by splitting off a Fourier-and-chirp factor chosen so
/// that the remaining factor has a well-conditioned invertible block.
///
/// The overall phase of the result is canonical only up to the metaplectic
/// sign; the magnitude of the amplitude is renormalized at the end so the map
/// is exactly unitary.
pub fn transform_gaussian(s: &SymplecticMatrix, f: &GaussianState) -> Result<GaussianState> {
    if s.dim() != f.dim() {
        return Err(Error::dim("transform", format!("d = {}", f.dim()), format!("d = {}", s.dim())));
    }
    let input_norm_sq = f.norm_sq();

    let (sigma_max, sigma_min) = crate::linalg::sigma_extremes(s.b());
    let scale = sigma_max.max(1.0);

    let (z, w, c) = if sigma_min > FREE_ROUTE_TOL * scale {
        invertible_block_route(s, f)?
    } else if sigma_max <= crate::frame::RANK_TOL * scale {
        // The block is zero at working precision; the operator acts by
        // substitution and a quadratic phase.
        pointwise_route(s.a(), s.c(), f)?
    } else {
        degenerate_route(s, f)?
    };

    // Symmetrize away the roundoff skew and restore exact unitarity.
    let z = (&z + z.transpose()) * Complex64::new(0.5, 0.0);
    let mut out = GaussianState::new(z, w, c)?;
    let out_norm_sq = out.norm_sq();
    if out_norm_sq <= 0.0 || !out_norm_sq.is_finite() {
        return Err(Error::DegenerateInput { context: "transformed state has no finite norm".into() });
    }
    out.c *= (input_norm_sq / out_norm_sq).sqrt();
    Ok(out)
}

type RawState = (DMatrix<Complex64>, DVector<Complex64>, Complex64);

/// `f ↦ e^{iπ Qx·x} f` : `Z += Q`.
fn apply_chirp(q: &DMatrix<f64>, state: RawState) -> RawState {
    let (mut z, w, c) = state;
    z += q.map(|x| Complex64::new(x, 0.0));
    (z, w, c)
}

/// The forward Fourier transform:
/// `Z ↦ -Z⁻¹`, `w ↦ Z⁻¹w`, `c ↦ c · det(-iZ)^{-1/2} e^{-iπ wᵀZ⁻¹w}`.
fn apply_fourier(state: RawState) -> Result<RawState> {
    let (z, w, c) = state;
    let z_inv = z.clone().try_inverse().ok_or(Error::Singular {
        factor: "quadratic form under the Fourier step".into(),
        value: 0.0,
    })?;
    let det = (z.map(|v| -I * v)).determinant();
    let new_w = &z_inv * &w;
    let phase = (-I * PI * w.dot(&new_w)).exp();
    let new_c = c / det.sqrt() * phase;
    Ok((-&z_inv, new_w, new_c))
}

/// `f ↦ |det A|^{-1/2} e^{iπ (CA⁻¹)x·x} f(A⁻¹x)` — the action of an operator
/// whose upper-right block vanishes.
fn pointwise_route(a: &DMatrix<f64>, c_block: &DMatrix<f64>, f: &GaussianState) -> Result<RawState> {
    let a_inv = a.clone().try_inverse().ok_or(Error::Singular {
        factor: "upper-left block with a vanishing upper-right block".into(),
        value: 0.0,
    })?;
    let a_inv_c = a_inv.map(|x| Complex64::new(x, 0.0));
    let chirp = c_block * &a_inv;
    let chirp_sym = ((&chirp + chirp.transpose()) * 0.5).map(|x| Complex64::new(x, 0.0));
    let z = a_inv_c.transpose() * &f.z * &a_inv_c + chirp_sym;
    let w = a_inv_c.transpose() * &f.w;
    let c = f.c * Complex64::new(1.0 / a.determinant().abs().sqrt(), 0.0);
    Ok((z, w, c))
}

/// The decomposition `S = V_{DB⁻¹} · D_{B⁻¹} · J · V_{B⁻¹A}` valid whenever
/// the upper-right block is invertible: chirp, Fourier, rescale, chirp.
fn invertible_block_route(s: &SymplecticMatrix, f: &GaussianState) -> Result<RawState> {
    let b_inv = s.b().clone().try_inverse().ok_or(Error::Singular {
        factor: "upper-right block on the invertible route".into(),
        value: 0.0,
    })?;
    let q1 = symmetrized(&(&b_inv * s.a()));
    let q2 = symmetrized(&(s.d_block() * &b_inv));

    let state = apply_chirp(&q1, (f.z.clone(), f.w.clone(), f.c));
    let state = apply_fourier(state)?;
    // The middle factor is the rescaling x ↦ B⁻¹x, acting pointwise.
    let mid = GaussianState { d: f.d, z: state.0, w: state.1, c: state.2 };
    let state = pointwise_route(s.b(), &DMatrix::zeros(f.d, f.d), &mid)?;
    Ok(apply_chirp(&q2, state))
}

/// Degenerate upper-right block: write `S = M · (J V_{-Q})` with symmetric
/// `Q` chosen so that `M`'s upper-right block `-(A + BQ)` is well
/// conditioned, then chain the exact steps.
fn degenerate_route(s: &SymplecticMatrix, f: &GaussianState) -> Result<RawState> {
    let d = s.dim();
    let q = choose_completion(s.a(), s.b())?;

    let a_m = s.b().clone();
    let b_m = -(s.a() + s.b() * &q);
    let c_m = s.d_block().clone();
    let d_m = -(s.c() + s.d_block() * &q);
    let m = SymplecticMatrix::from_blocks_with_tol(a_m, b_m, c_m, d_m, 1e-8)?;

    let state = apply_chirp(&(-&q), (f.z.clone(), f.w.clone(), f.c));
    let state = apply_fourier(state)?;
    let mid = GaussianState { d, z: state.0, w: state.1, c: state.2 };
    invertible_block_route(&m, &mid)
}

/// Picks a symmetric `Q` making `A + BQ` invertible, preferring the candidate
/// with the largest smallest singular value. Scalar multiples of the identity
/// almost always suffice; a deterministic pseudo-random symmetric fallback
/// covers the remaining algebraic exceptions.
fn choose_completion(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = a.nrows();
    let mut best: Option<(f64, DMatrix<f64>)> = None;
    let mut consider = |q: DMatrix<f64>| {
        let sigma_min = crate::linalg::sigma_extremes(&(a + b * &q)).1;
        if best.as_ref().map_or(true, |(s, _)| sigma_min > *s) {
            best = Some((sigma_min, q));
        }
    };
    for t in [0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0] {
        consider(DMatrix::identity(d, d) * t);
    }
    // Deterministic fallback for pencils where every multiple of the identity
    // is singular; almost every symmetric matrix works, so a fixed-seed
    // sequence is enough.
    let mut rng_state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        (rng_state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..8 {
        let raw = DMatrix::from_fn(d, d, |_, _| next());
        consider(symmetrized(&raw));
    }
    match best {
        Some((sigma_min, q)) if sigma_min > 1e-10 => Ok(q),
        _ => Err(Error::Singular { factor: "completion of the degenerate block".into(), value: 0.0 }),
    }
}

fn symmetrized(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Decay rates `γ_j = π / (scale · σ_j · sqrt(σ(B)) · μ_S)` for which the
/// product state built by [`build_extremizer`] turns the aggregate
/// uncertainty inequality into an equality. Any positive `scale` works; the
/// rates must be inversely proportional to the singular values.
pub fn gamma_for_sharpness(
    frame: &SubspaceFrame,
    consts: &MetaplecticConstants,
    scale: f64,
) -> Result<Vec<f64>> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain { reason: format!("scale must be positive, got {scale}") });
    }
    let root = consts.sigma_product.sqrt() * consts.mu_s;
    Ok(frame.singular_values()[..frame.rank()]
        .iter()
        .map(|sigma| PI / (scale * sigma * root))
        .collect())
}

/// Free parameters of an extremal state: per-direction Gaussian decay scale,
/// centers and modulations.
#[derive(Debug, Clone)]
pub struct ExtremizerSpec {
    /// Global decay scale (`γ_j ∝ 1/scale`); must be positive.
    pub scale: f64,
    /// Space-side centers `α_j`, one per active direction.
    pub centers: Vec<f64>,
    /// Frequency-side centers `β_j`, one per active direction.
    pub modulations: Vec<f64>,
}

impl ExtremizerSpec {
    /// Centered, unmodulated, unit scale for an operator of active rank `r`.
    pub fn centered(r: usize) -> ExtremizerSpec {
        ExtremizerSpec { scale: 1.0, centers: vec![0.0; r], modulations: vec![0.0; r] }
    }
}

/// Builds a Gaussian state saturating the aggregate uncertainty inequality
/// of the operator `s`.
///
/// Along each active direction the state is
/// `exp(2πi β_j u_j) exp(-γ_j (u_j - α_j)²)` in the position coordinate
/// `u_j`; across the kernel it is a fixed Gaussian bump; and a quadratic
/// phase cancels the operator's internal chirps, both the one acting on the
/// active coordinates and the one coupling them to the kernel component.
pub fn build_extremizer(
    s: &SymplecticMatrix,
    frame: &SubspaceFrame,
    spec: &ExtremizerSpec,
) -> Result<GaussianState> {
    let d = frame.dim();
    let r = frame.rank();
    if s.dim() != d {
        return Err(Error::dim("extremizer", format!("d = {d}"), format!("d = {}", s.dim())));
    }
    if spec.centers.len() != r || spec.modulations.len() != r {
        return Err(Error::dim(
            "extremizer parameters",
            format!("{r} per-direction entries"),
            format!("{} centers, {} modulations", spec.centers.len(), spec.modulations.len()),
        ));
    }
    let consts = constants(s, frame)?;
    let gammas = gamma_for_sharpness(frame, &consts, spec.scale)?;
    let coords = oblique_coordinates(s, frame)?;

    // Projector onto ker(B)⊥ along the skew complement, and its counterpart.
    let p1 = frame.v() * &coords.space;
    let p2 = DMatrix::<f64>::identity(d, d) - &p1;

    let mut z_raw = DMatrix::<Complex64>::zeros(d, d);
    let mut w = DVector::<Complex64>::zeros(d);
    let mut c = Complex64::new(1.0, 0.0);

    // Active directions: exp(-γ_j (u_j - α_j)² + 2πi β_j u_j) with u = F x.
    let f_s = &coords.space;
    for j in 0..r {
        let gamma = gammas[j];
        let alpha = spec.centers[j];
        let beta = spec.modulations[j];
        let row = f_s.row(j);
        for p in 0..d {
            for q in 0..d {
                z_raw[(p, q)] += I / PI * gamma * row[p] * row[q];
            }
            w[p] += Complex64::new(beta, -gamma * alpha / PI) * row[p];
        }
        c *= Complex64::new((-gamma * alpha * alpha).exp(), 0.0);
    }

    if r < d {
        // Kernel component: a unit Gaussian bump in orthonormal coordinates
        // of the position-side complement subspace.
        let dta_w = (s.d_block().transpose() * s.a()) * frame.w();
        let y_theta = orthonormal_image_basis(&dta_w)?;
        let theta = &p2.transpose() * (&y_theta * y_theta.transpose()) * &p2;
        for p in 0..d {
            for q in 0..d {
                z_raw[(p, q)] += I * theta[(p, q)];
            }
        }

        // Cross chirp: exp(+2πi (Cᵀ ξ₂)·x₁) where ξ₂ solves Dᵀξ₂ = x₂ inside
        // the image of the kernel under A.
        let aw = s.a() * frame.w();
        let y_a = orthonormal_image_basis(&aw)?;
        let q_a = &y_a * y_a.transpose();
        let dt_qa = s.d_block().transpose() * &q_a;
        let lift = &q_a * pseudo_inverse(&dt_qa);
        let cross = &p1.transpose() * s.c().transpose() * &lift * &p2;
        for p in 0..d {
            for q in 0..d {
                z_raw[(p, q)] += Complex64::new(cross[(p, q)] + cross[(q, p)], 0.0);
            }
        }
    }

    if r > 0 {
        // Cancel the operator's internal chirp on the active component.
        let chirp = &p1.transpose() * (frame.b_pinv() * s.a()) * &p1;
        let chirp_sym = symmetrized(&chirp);
        for p in 0..d {
            for q in 0..d {
                z_raw[(p, q)] -= Complex64::new(chirp_sym[(p, q)], 0.0);
            }
        }
    }

    let z = (&z_raw + z_raw.transpose()) * Complex64::new(0.5, 0.0);
    GaussianState::new(z, w, c)
}

/// Moore–Penrose pseudoinverse with the crate's relative rank cutoff.
fn pseudo_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    let fac = crate::linalg::jacobi_svd(m);
    let cutoff = crate::frame::RANK_TOL * fac.sigma.first().copied().unwrap_or(0.0).max(1.0);
    let mut out = DMatrix::<f64>::zeros(m.ncols(), m.nrows());
    for (k, &sigma) in fac.sigma.iter().enumerate() {
        if sigma > cutoff {
            let vk = fac.v.column(k);
            let uk = fac.u.column(k);
            out += vk * uk.transpose() / sigma;
        }
    }
    out
}

/// `p(u) · e^{-π|u|²}` with `p` affine — the closed-form test family whose
/// Fourier transform is `p̂(η) · e^{-π|η|²}` with `p̂(η) = p₀ + Σ pₖ(-iηₖ)`.
#[derive(Debug, Clone)]
pub struct PolyGaussian {
    pub constant: Complex64,
    pub linear: Vec<Complex64>,
}

impl PolyGaussian {
    pub fn constant(m: usize) -> PolyGaussian {
        PolyGaussian { constant: Complex64::new(1.0, 0.0), linear: vec![Complex64::new(0.0, 0.0); m] }
    }

    /// `p(u) = u_k`.
    pub fn coordinate(m: usize, k: usize) -> PolyGaussian {
        let mut linear = vec![Complex64::new(0.0, 0.0); m];
        linear[k] = Complex64::new(1.0, 0.0);
        PolyGaussian { constant: Complex64::new(0.0, 0.0), linear }
    }

    pub fn degree(&self) -> usize {
        usize::from(self.linear.iter().any(|c| c.norm() > 0.0))
    }

    pub fn eval(&self, u: &[f64]) -> Complex64 {
        debug_assert_eq!(u.len(), self.linear.len());
        let p = self.constant
            + self
                .linear
                .iter()
                .zip(u.iter())
                .map(|(c, &x)| c * x)
                .sum::<Complex64>();
        let r2: f64 = u.iter().map(|x| x * x).sum();
        p * (-PI * r2).exp()
    }

    /// The exact Fourier transform, from `FT(u e^{-πu²}) = -iη e^{-πη²}`.
    pub fn eval_ft(&self, eta: &[f64]) -> Complex64 {
        debug_assert_eq!(eta.len(), self.linear.len());
        let p = self.constant
            + self
                .linear
                .iter()
                .zip(eta.iter())
                .map(|(c, &x)| c * (-I * x))
                .sum::<Complex64>();
        let r2: f64 = eta.iter().map(|x| x * x).sum();
        p * (-PI * r2).exp()
    }
}
