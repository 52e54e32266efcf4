//! Cross-module integration tests for the numerical transform: agreement
//! with the closed-form Gaussian image, engine cross-checks on degenerate
//! and cross-coupled operators, composition, parity, and clipping
//! diagnostics.

mod common;

use metaplectic::{
    chirp, fourier, harmonic_oscillator, multiplier, partial_fourier, phase_align, rescale,
    transform_gaussian, AxisSpec, FastPath, GaussianState, GridFunction, GridSpec,
    SymplecticMatrix, TransformMode, TransformPlan,
};
use nalgebra::{dmatrix, DMatrix, DVector};
use num_complex::Complex64;

use common::{random_gaussian, seeded};

fn spec_1d(n: usize, half_width: f64) -> GridSpec {
    GridSpec::new(vec![AxisSpec::symmetric(n, half_width)]).unwrap()
}

fn spec_nd(d: usize, n: usize, half_width: f64) -> GridSpec {
    GridSpec::new(vec![AxisSpec::symmetric(n, half_width); d]).unwrap()
}

/// Phase-aligned relative residual between the numerical transform of `f`
/// and its exact Gaussian image, both sampled on the plan's output grid.
fn oracle_residual(
    s: &SymplecticMatrix,
    f: &GaussianState,
    spec: &GridSpec,
    mode: TransformMode,
) -> f64 {
    let plan = TransformPlan::new(s.clone(), spec.clone(), mode).unwrap();
    let fg = f.to_grid(spec).unwrap();
    let (out, report) = plan.apply(&fg).unwrap();
    assert!(report.clipped_fraction < 1e-12, "unexpected clipping {}", report.clipped_fraction);
    let exact = transform_gaussian(s, f).unwrap();
    let eg = exact.to_grid(plan.output_spec()).unwrap();
    let (_, _, residual) = phase_align(&eg, &out).unwrap();
    residual
}

#[test]
fn both_engines_match_the_exact_image_in_one_dimension() {
    let spec = spec_1d(256, 8.0);
    let mut rng = seeded(11);
    let states = [
        GaussianState::new(
            DMatrix::from_element(1, 1, Complex64::new(-0.3, 1.2)),
            DVector::from_element(1, Complex64::new(0.2, -0.4)),
            Complex64::new(0.8, 0.3),
        )
        .unwrap(),
        random_gaussian(1, &mut rng),
    ];
    let ops = [
        fourier(1).unwrap(),
        chirp(dmatrix![1.3]).unwrap().compose(&fourier(1).unwrap()).unwrap(),
        multiplier(dmatrix![0.7]).unwrap(),
        harmonic_oscillator(1, 1.7, 0.6).unwrap(),
    ];
    for s in &ops {
        for f in &states {
            for mode in [TransformMode::Quadrature, TransformMode::ChirpFft] {
                let r = oracle_residual(s, f, &spec, mode);
                assert!(r <= 1e-6, "op {:?}, mode {mode:?}: residual {r:.3e}", s.b());
            }
        }
    }
}

#[test]
fn degenerate_blocks_match_the_exact_image() {
    let spec = spec_nd(2, 64, 6.0);
    let mut rng = seeded(12);
    let f = random_gaussian(2, &mut rng);
    for s in [partial_fourier(2, &[1]).unwrap(), multiplier(dmatrix![1.0, 0.0; 0.0, 0.0]).unwrap()]
    {
        for mode in [TransformMode::Quadrature, TransformMode::ChirpFft] {
            let r = oracle_residual(&s, &f, &spec, mode);
            assert!(r <= 1e-6, "mode {mode:?}: residual {r:.3e}");
        }
    }
}

#[test]
fn cross_coupled_composite_matches_the_exact_image_by_quadrature() {
    // Left and right chirps around a single-axis transform: the coupling
    // block stays degenerate but the operator has no scaled-axis structure,
    // so only the direct summation engine can evaluate it.
    let q1 = dmatrix![0.2, -0.4; -0.4, 0.1];
    let q2 = dmatrix![0.5, 0.25; 0.25, -0.3];
    let s = chirp(q1)
        .unwrap()
        .compose(&partial_fourier(2, &[1]).unwrap())
        .unwrap()
        .compose(&chirp(q2).unwrap())
        .unwrap();

    let f = GaussianState::standard(2);
    let out_spec = spec_nd(2, 40, 5.0);

    // Off-axis active directions make the engine interpolate the input
    // between nodes, a second-order error: halving the step must shrink the
    // residual accordingly, and the fine grid must land well inside the
    // engine's advertised accuracy. A constant-phase or normalization bug
    // would plateau instead.
    let mut residuals = Vec::new();
    for n in [96usize, 192] {
        let spec = spec_nd(2, n, 6.0);
        let plan = TransformPlan::new(s.clone(), spec.clone(), TransformMode::Quadrature)
            .unwrap()
            .with_output_spec(out_spec.clone())
            .unwrap();
        assert_eq!(plan.mode(), FastPath::Quadrature);
        let fg = f.to_grid(&spec).unwrap();
        let (out, _) = plan.apply(&fg).unwrap();
        let exact = transform_gaussian(&s, &f).unwrap();
        let eg = exact.to_grid(plan.output_spec()).unwrap();
        let (_, _, residual) = phase_align(&eg, &out).unwrap();
        residuals.push(residual);
    }
    assert!(
        residuals[1] <= residuals[0] / 3.0,
        "no second-order convergence: {residuals:?}"
    );
    assert!(residuals[1] <= 3e-3, "fine-grid residual {:.3e}", residuals[1]);
}

#[test]
fn applying_the_plain_transform_twice_reverses_the_argument() {
    let spec = spec_1d(256, 8.0);
    let f = GaussianState::new(
        DMatrix::from_element(1, 1, Complex64::new(0.4, 0.9)),
        DVector::from_element(1, Complex64::new(-0.3, 0.2)),
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let fg = f.to_grid(&spec).unwrap();

    let plan1 = TransformPlan::new(fourier(1).unwrap(), spec.clone(), TransformMode::Auto).unwrap();
    let (mid, _) = plan1.apply(&fg).unwrap();
    let plan2 =
        TransformPlan::new(fourier(1).unwrap(), plan1.output_spec().clone(), TransformMode::Auto)
            .unwrap();
    let (out, _) = plan2.apply(&mid).unwrap();

    // The double transform evaluates the input at the negated argument.
    let reversed = GridFunction::sample(plan2.output_spec(), |x| f.evaluate(&[-x[0]])).unwrap();
    let (_, _, residual) = phase_align(&reversed, &out).unwrap();
    assert!(residual <= 1e-6, "residual {residual:.3e}");
}

#[test]
fn composed_matrix_matches_sequential_application() {
    let spec = spec_1d(256, 8.0);
    let s_first = multiplier(dmatrix![0.7]).unwrap();
    let s_second = fourier(1).unwrap();
    let s_total = s_second.compose(&s_first).unwrap();

    let f = GaussianState::new(
        DMatrix::from_element(1, 1, Complex64::new(0.1, 1.1)),
        DVector::from_element(1, Complex64::new(0.25, 0.0)),
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let fg = f.to_grid(&spec).unwrap();

    let plan_first = TransformPlan::new(s_first, spec.clone(), TransformMode::Auto).unwrap();
    let (mid, _) = plan_first.apply(&fg).unwrap();
    let plan_second =
        TransformPlan::new(s_second, plan_first.output_spec().clone(), TransformMode::Auto)
            .unwrap();
    let (out_chain, _) = plan_second.apply(&mid).unwrap();

    // The chained numerical result must agree, up to one constant phase,
    // with the exact image under the composed matrix.
    let exact_total = transform_gaussian(&s_total, &f).unwrap();
    let eg = exact_total.to_grid(plan_second.output_spec()).unwrap();
    let (_, _, residual) = phase_align(&eg, &out_chain).unwrap();
    assert!(residual <= 1e-5, "residual {residual:.3e}");
}

#[test]
fn pointwise_path_reports_the_samples_it_cannot_reach() {
    // Pure rescaling by 4: evaluating the output at x needs the input at
    // 4x, which leaves the sampled box for |x| > 2. Forcing the output grid
    // to the input box makes three quarters of the requests unreachable;
    // those samples must be reported, and the values there must stay zero.
    let e = dmatrix![4.0];
    let s = rescale(&e).unwrap();
    let spec = spec_1d(128, 8.0);
    let f = GaussianState::standard(1).to_grid(&spec).unwrap();
    let plan = TransformPlan::new(s, spec.clone(), TransformMode::Auto)
        .unwrap()
        .with_output_spec(spec.clone())
        .unwrap();
    let (out, report) = plan.apply(&f).unwrap();
    assert_eq!(report.mode, FastPath::Pointwise);
    assert!(
        report.clipped_fraction > 0.5 && report.clipped_fraction < 1.0,
        "clipped {}",
        report.clipped_fraction
    );
    out.spec().iter_points().for_each(|idx, x| {
        if x[0].abs() > 2.0 + 1e-9 {
            assert_eq!(out.values()[idx], Complex64::new(0.0, 0.0), "leak at {}", x[0]);
        }
    });
}

#[test]
fn norms_survive_every_engine_on_a_degenerate_operator() {
    let spec = spec_nd(2, 64, 6.0);
    let mut rng = seeded(13);
    let s = partial_fourier(2, &[0]).unwrap();
    for _ in 0..5 {
        let f = random_gaussian(2, &mut rng).to_grid(&spec).unwrap();
        for mode in [TransformMode::Quadrature, TransformMode::ChirpFft] {
            let plan = TransformPlan::new(s.clone(), spec.clone(), mode).unwrap();
            let (out, _) = plan.apply(&f).unwrap();
            let drift = (out.l2_norm() / f.l2_norm() - 1.0).abs();
            assert!(drift <= 1e-6, "mode {mode:?}: drift {drift:.3e}");
        }
    }
}
