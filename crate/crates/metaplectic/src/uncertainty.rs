//! Directional uncertainty inequalities linking a function to its
//! transformed image.
//!
//! For an operator with upper-right block `B` of rank `r`, each active
//! direction `j < r` pairs the oblique position coordinate `φ_j` (dual to the
//! frame `{v_j}` of `ker(B)⊥` along `DᵀA(ker B)`) with the oblique frequency
//! coordinate `ψ_j` (dual to `{B v_j}` along `A(ker B)`), and the dispersions
//! of `φ_j(x)` under `|f|²` and of `ψ_j(ξ)` under `|Ŝf|²` obey
//!
//! ```text
//! sqrt(μ_j(f)) · sqrt(ν_j(Ŝf)) ≥ K_S / (4π) · ‖f‖²
//! ```
//!
//! for any centers. The aggregate form weights the frequency dispersions by
//! the squared singular values of `B` and sums both sides over the active
//! directions:
//!
//! ```text
//! sqrt(Σ_j μ_j) · sqrt(Σ_j σ_j² ν_j) ≥ (Σ_j σ_j) · K_S / (4π) · ‖f‖²
//! ```
//!
//! (Cauchy–Schwarz over the per-direction inequalities). The cartesian form
//! pairs plain coordinates `x_j` with `ξ_k` at weight `|B_kj| / (4π)`.
//! Saturation of the aggregate demands dispersions proportional to `1/σ_j`,
//! which is what `gamma_for_sharpness` produces.

use nalgebra::DVector;

use crate::constants::{constants, MetaplecticConstants};
use crate::error::{Error, Result};
use crate::frame::{build_frame, oblique_coordinates, ObliqueCoordinates, SubspaceFrame};
use crate::gaussian::GaussianState;
use crate::grid::GridFunction;
use crate::symplectic::SymplecticMatrix;

const PI: f64 = std::f64::consts::PI;

/// Everything derived from one operator that the inequalities need.
#[derive(Debug, Clone)]
pub struct OperatorData {
    s: SymplecticMatrix,
    frame: SubspaceFrame,
    consts: MetaplecticConstants,
    coords: ObliqueCoordinates,
}

impl OperatorData {
    pub fn new(s: SymplecticMatrix) -> Result<OperatorData> {
        let frame = build_frame(s.b())?;
        let consts = constants(&s, &frame)?;
        let coords = oblique_coordinates(&s, &frame)?;
        Ok(OperatorData { s, frame, consts, coords })
    }

    pub fn s(&self) -> &SymplecticMatrix {
        &self.s
    }

    pub fn frame(&self) -> &SubspaceFrame {
        &self.frame
    }

    pub fn constants(&self) -> &MetaplecticConstants {
        &self.consts
    }

    pub fn coords(&self) -> &ObliqueCoordinates {
        &self.coords
    }

    /// Number of active directions (the rank of `B`).
    pub fn active_rank(&self) -> usize {
        self.frame.rank()
    }
}

/// A function the moments can be taken of: either sampled on a grid or an
/// exact Gaussian state (closed-form moments).
#[derive(Debug, Clone, Copy)]
pub enum Observable<'a> {
    Grid(&'a GridFunction),
    Gaussian(&'a GaussianState),
}

impl Observable<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Observable::Grid(f) => f.spec().d(),
            Observable::Gaussian(g) => g.dim(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match self {
            Observable::Grid(f) => f.norm_sq(),
            Observable::Gaussian(g) => g.norm_sq(),
        }
    }

    /// Dispersion `∫ |w·x - center|² |f(x)|² dx` of the linear functional `w`.
    fn functional_moment(&self, w: &DVector<f64>, center: f64) -> f64 {
        match self {
            Observable::Grid(f) => {
                f.weighted_moment(|x| w.iter().zip(x.iter()).map(|(a, b)| a * b).sum(), center)
            }
            Observable::Gaussian(g) => g.second_moment(w, center),
        }
    }

    /// `|f|²`-weighted mean of the linear functional `w`.
    fn functional_mean(&self, w: &DVector<f64>) -> Result<f64> {
        match self {
            Observable::Grid(f) => {
                f.map_mean(|x| w.iter().zip(x.iter()).map(|(a, b)| a * b).sum())
            }
            Observable::Gaussian(g) => Ok(w.dot(&g.mean())),
        }
    }
}

/// Outcome of one inequality evaluation.
#[derive(Debug, Clone)]
pub struct UncertaintyReport {
    /// Square root of the (weighted) spatial dispersion sum.
    pub lhs_space: f64,
    /// Square root of the (weighted) frequency dispersion sum.
    pub lhs_freq: f64,
    /// `lhs_space · lhs_freq`.
    pub product: f64,
    /// Right-hand side of the inequality.
    pub bound: f64,
    /// `product / bound`; a vanishing bound gives `+∞` when the product is
    /// positive and `1` when both vanish (the inequality is then vacuous).
    pub ratio: f64,
    /// Centers actually used on the spatial side, one per direction involved.
    pub space_centers: Vec<f64>,
    /// Centers actually used on the frequency side.
    pub freq_centers: Vec<f64>,
}

fn ratio_of(product: f64, bound: f64) -> f64 {
    if bound == 0.0 {
        if product > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        product / bound
    }
}

fn check_dims(op: &OperatorData, f: &Observable, sf: &Observable) -> Result<()> {
    let d = op.s.dim();
    if f.dim() != d || sf.dim() != d {
        return Err(Error::dim(
            "uncertainty observables",
            format!("dimension {d}"),
            format!("{} and {}", f.dim(), sf.dim()),
        ));
    }
    Ok(())
}

fn resolve_center(obs: &Observable, w: &DVector<f64>, requested: Option<f64>) -> Result<f64> {
    match requested {
        Some(c) if c.is_finite() => Ok(c),
        Some(c) => Err(Error::Domain { reason: format!("non-finite center {c}") }),
        None => obs.functional_mean(w),
    }
}

fn row_vector(m: &nalgebra::DMatrix<f64>, j: usize) -> DVector<f64> {
    DVector::from_iterator(m.ncols(), m.row(j).iter().copied())
}

/// One active direction `j` (0-based): dispersion of the oblique position
/// coordinate of `f` against the oblique frequency coordinate of `sf`, with
/// the bound `K_S ‖f‖² / (4π)`. `None` centers auto-select the means.
pub fn heisenberg_directional(
    op: &OperatorData,
    f: &Observable,
    sf: &Observable,
    j: usize,
    space_center: Option<f64>,
    freq_center: Option<f64>,
) -> Result<UncertaintyReport> {
    check_dims(op, f, sf)?;
    let r = op.active_rank();
    if r == 0 {
        return Err(Error::NoUncertainty);
    }
    if j >= r {
        return Err(Error::IndexOutOfRange { what: format!("direction {j} with only {r} active") });
    }

    let phi = row_vector(&op.coords.space, j);
    let psi = row_vector(&op.coords.freq, j);
    let c_space = resolve_center(f, &phi, space_center)?;
    let c_freq = resolve_center(sf, &psi, freq_center)?;

    let mu = f.functional_moment(&phi, c_space);
    let nu = sf.functional_moment(&psi, c_freq);
    let lhs_space = mu.sqrt();
    let lhs_freq = nu.sqrt();
    let product = lhs_space * lhs_freq;
    let bound = op.consts.k_s / (4.0 * PI) * f.norm_sq();

    Ok(UncertaintyReport {
        lhs_space,
        lhs_freq,
        product,
        bound,
        ratio: ratio_of(product, bound),
        space_centers: vec![c_space],
        freq_centers: vec![c_freq],
    })
}

/// Aggregate inequality over all active directions: spatial dispersions sum
/// unweighted, frequency dispersions carry weights `σ_j²`, and the bound is
/// `(Σ σ_j) K_S ‖f‖² / (4π)`. `centers[j] = (space, freq)` when given.
pub fn heisenberg_full(
    op: &OperatorData,
    f: &Observable,
    sf: &Observable,
    centers: Option<&[(f64, f64)]>,
) -> Result<UncertaintyReport> {
    check_dims(op, f, sf)?;
    let r = op.active_rank();
    if r == 0 {
        return Err(Error::NoUncertainty);
    }
    if let Some(cs) = centers {
        if cs.len() != r {
            return Err(Error::dim("center list", format!("{r} pairs"), format!("{} pairs", cs.len())));
        }
    }

    let mut space_centers = Vec::with_capacity(r);
    let mut freq_centers = Vec::with_capacity(r);
    let mut space_sum = 0.0;
    let mut freq_sum = 0.0;
    for j in 0..r {
        let phi = row_vector(&op.coords.space, j);
        let psi = row_vector(&op.coords.freq, j);
        let (want_space, want_freq) = match centers {
            Some(cs) => (Some(cs[j].0), Some(cs[j].1)),
            None => (None, None),
        };
        let c_space = resolve_center(f, &phi, want_space)?;
        let c_freq = resolve_center(sf, &psi, want_freq)?;
        let sigma = op.frame.singular_values()[j];
        space_sum += f.functional_moment(&phi, c_space);
        freq_sum += sigma * sigma * sf.functional_moment(&psi, c_freq);
        space_centers.push(c_space);
        freq_centers.push(c_freq);
    }

    let lhs_space = space_sum.sqrt();
    let lhs_freq = freq_sum.sqrt();
    let product = lhs_space * lhs_freq;
    let bound = op.frame.sigma_trace() * op.consts.k_s / (4.0 * PI) * f.norm_sq();

    Ok(UncertaintyReport {
        lhs_space,
        lhs_freq,
        product,
        bound,
        ratio: ratio_of(product, bound),
        space_centers,
        freq_centers,
    })
}

/// Cartesian pairing of the plain coordinates `x_j` and `ξ_k`, bounded by
/// `|B_kj| ‖f‖² / (4π)` — vacuous (and reported so) when that entry is zero.
pub fn heisenberg_cartesian(
    op: &OperatorData,
    f: &Observable,
    sf: &Observable,
    j: usize,
    k: usize,
    space_center: Option<f64>,
    freq_center: Option<f64>,
) -> Result<UncertaintyReport> {
    check_dims(op, f, sf)?;
    let d = op.s.dim();
    if j >= d || k >= d {
        return Err(Error::IndexOutOfRange {
            what: format!("coordinate pair ({j}, {k}) in dimension {d}"),
        });
    }

    let mut phi = DVector::zeros(d);
    phi[j] = 1.0;
    let mut psi = DVector::zeros(d);
    psi[k] = 1.0;
    let c_space = resolve_center(f, &phi, space_center)?;
    let c_freq = resolve_center(sf, &psi, freq_center)?;

    let lhs_space = f.functional_moment(&phi, c_space).sqrt();
    let lhs_freq = sf.functional_moment(&psi, c_freq).sqrt();
    let product = lhs_space * lhs_freq;
    let bound = op.s.b()[(k, j)].abs() / (4.0 * PI) * f.norm_sq();

    Ok(UncertaintyReport {
        lhs_space,
        lhs_freq,
        product,
        bound,
        ratio: ratio_of(product, bound),
        space_centers: vec![c_space],
        freq_centers: vec![c_freq],
    })
}

/// One point of a bound sweep over an operator family.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    /// Sum of the singular values of the upper-right block (0 when it
    /// vanishes, making the bound exactly zero).
    pub sigma_trace: f64,
    pub k_s: f64,
    /// `sigma_trace · k_s / (4π) · norm_sq`.
    pub bound: f64,
}

/// Evaluates the aggregate bound along a parametrized operator family for a
/// fixed input norm, without touching any function data.
pub fn bound_sweep(
    family: impl Fn(f64) -> Result<SymplecticMatrix>,
    ts: &[f64],
    norm_sq: f64,
) -> Result<Vec<SweepRow>> {
    if !(norm_sq.is_finite() && norm_sq >= 0.0) {
        return Err(Error::Domain { reason: format!("squared norm {norm_sq} must be finite and nonnegative") });
    }
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        if !t.is_finite() {
            return Err(Error::Domain { reason: format!("sweep parameter {t} is not finite") });
        }
        let s = family(t)?;
        let frame = build_frame(s.b())?;
        let consts = constants(&s, &frame)?;
        let sigma_trace = frame.sigma_trace();
        let bound = sigma_trace * consts.k_s / (4.0 * PI) * norm_sq;
        rows.push(SweepRow { t, sigma_trace, k_s: consts.k_s, bound });
    }
    Ok(rows)
}
