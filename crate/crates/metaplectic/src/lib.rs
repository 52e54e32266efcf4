//! Numerical metaplectic operators on phase space and the anisotropic
//! uncertainty inequalities they obey.
//!
//! The crate models a metaplectic operator through its symplectic matrix
//! `S = [[A, B], [C, D]]`, including the degenerate case where the block `B`
//! is singular. It provides:
//!
//! * exact constructors for the classical operators (Fourier, chirp,
//!   rescaling, multiplier, partial Fourier, free-particle and harmonic
//!   oscillator propagators) — [`operators`];
//! * the kernel/range frames and oblique phase-space splittings attached to a
//!   degenerate `B` — [`frame`];
//! * the normalization and uncertainty constants of the operator —
//!   [`constants`];
//! * grid sampling, quadrature and FFT application of the operator to
//!   functions — [`grid`], [`transform`], with a compact binary grid format in
//!   [`mgf1`];
//! * closed-form Gaussian states, their exact images, and extremal states
//!   saturating the inequalities — [`gaussian`];
//! * the directional Heisenberg-type inequalities, their sharpness checks and
//!   parameter sweeps — [`uncertainty`];
//! * Beurling-type and Morgan-type decay probes — [`decay`].

pub mod constants;
pub mod decay;
pub mod error;
pub mod frame;
pub mod gaussian;
pub mod grid;
mod linalg;
pub mod mgf1;
pub mod operators;
pub mod symplectic;
pub mod transform;
pub mod uncertainty;

pub use constants::{constants, q_volume, MetaplecticConstants};
pub use error::{Error, Result};
pub use frame::{
    build_frame, build_frame_with, check_lemma_isomorphisms, oblique_coordinates, FrameOrdering,
    IsomorphismReport, ObliqueCoordinates, RestrictionCondition, SubspaceFrame,
};
pub use gaussian::{
    build_extremizer, gamma_for_sharpness, siegel_action, transform_gaussian, ExtremizerSpec,
    GaussianState, PolyGaussian,
};
pub use grid::{AxisSpec, GridFunction, GridSpec};
pub use operators::{
    chirp, fourier, free_particle, harmonic_oscillator, multiplier, partial_fourier, rescale,
};
pub use symplectic::{validate_symplectic, SymplecticMatrix, SYMPLECTIC_TOL};
pub use transform::{phase_align, FastPath, TransformMode, TransformPlan, TransformReport};
pub use uncertainty::{
    bound_sweep, heisenberg_cartesian, heisenberg_directional, heisenberg_full, Observable,
    OperatorData, SweepRow, UncertaintyReport,
};
pub use decay::{
    beurling_integral, construct_morgan_admissible, default_slices, morgan_freq_probe,
    morgan_space_probe, morgan_threshold, probe_growth, AdmissibleProfiles, AdmissibleVerdict,
    GrowthProbe, MorganAdmissible, MorganParams, Trend, WeightExponent,
};
