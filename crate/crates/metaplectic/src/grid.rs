//! Uniform tensor-product grids and complex-valued grid functions.
//!
//! Values are stored row-major (last axis fastest), one `Complex64` per node.
//! All integrals in the crate are plain Riemann sums over these grids — for
//! the rapidly decaying functions the crate targets they converge spectrally,
//! so no fancier quadrature is warranted.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard ceiling on the number of grid nodes (2^26), so a malformed header
/// cannot request an absurd allocation.
pub const DEFAULT_CELL_BUDGET: usize = 1 << 26;

/// Dimensions above this are rejected outright.
pub const MAX_DIM: usize = 16;

/// One uniform axis: `n` nodes at `min + i·step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub n: usize,
    pub min: f64,
    pub step: f64,
}

impl AxisSpec {
    /// Symmetric axis covering `[-half_width, half_width)` with `n` nodes,
    /// placed so that 0 is a node when `n` is even.
    pub fn symmetric(n: usize, half_width: f64) -> AxisSpec {
        let step = 2.0 * half_width / n as f64;
        AxisSpec { n, min: -half_width, step }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn max(&self) -> f64 {
        self.coord(self.n - 1)
    }

    /// The centered discrete-Fourier dual axis: `n` frequencies spaced
    /// `1/(n·step)` starting at `-floor(n/2)/(n·step)`.
    pub fn dual(&self) -> AxisSpec {
        let dstep = 1.0 / (self.n as f64 * self.step);
        AxisSpec { n: self.n, min: -((self.n / 2) as f64) * dstep, step: dstep }
    }
}

/// A validated tensor-product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    axes: Vec<AxisSpec>,
    len: usize,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<GridSpec> {
        Self::with_budget(axes, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(axes: Vec<AxisSpec>, budget: usize) -> Result<GridSpec> {
        if axes.is_empty() || axes.len() > MAX_DIM {
            return Err(Error::InvalidGrid {
                reason: format!("dimension {} outside 1..={MAX_DIM}", axes.len()),
            });
        }
        let mut len: usize = 1;
        for (k, ax) in axes.iter().enumerate() {
            if ax.n < 2 {
                return Err(Error::InvalidGrid { reason: format!("axis {k} has n = {} < 2", ax.n) });
            }
            if !(ax.step.is_finite() && ax.step > 0.0) || !ax.min.is_finite() {
                return Err(Error::InvalidGrid {
                    reason: format!("axis {k} has invalid geometry (min {}, step {})", ax.min, ax.step),
                });
            }
            len = len
                .checked_mul(ax.n)
                .filter(|&l| l <= budget)
                .ok_or_else(|| Error::InvalidGrid {
                    reason: format!("node count exceeds budget {budget}"),
                })?;
        }
        Ok(GridSpec { axes, len })
    }

    pub fn d(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &AxisSpec {
        &self.axes[k]
    }

    /// Volume of one grid cell, `Π step_k`.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    /// Writes the coordinates of flat index `idx` into `point`.
    pub fn point(&self, idx: usize, point: &mut [f64]) {
        debug_assert_eq!(point.len(), self.d());
        let mut rest = idx;
        for k in (0..self.d()).rev() {
            let n = self.axes[k].n;
            point[k] = self.axes[k].coord(rest % n);
            rest /= n;
        }
    }

    /// Flat index of a multi-index (last axis fastest).
    pub fn flatten(&self, multi: &[usize]) -> usize {
        let mut idx = 0;
        for (k, &i) in multi.iter().enumerate() {
            idx = idx * self.axes[k].n + i;
        }
        idx
    }

    /// Iterates `(flat_index, point)` over all nodes with an internal buffer.
    pub fn iter_points(&self) -> GridPointIter<'_> {
        GridPointIter {
            spec: self,
            next: 0,
            multi: vec![0; self.d()],
            point: self.axes.iter().map(|a| a.min).collect(),
        }
    }
}

/// Streaming node iterator; the coordinate slice handed to the callback is
/// reused between nodes.
pub struct GridPointIter<'a> {
    spec: &'a GridSpec,
    next: usize,
    multi: Vec<usize>,
    point: Vec<f64>,
}

impl GridPointIter<'_> {
    /// Calls `f(flat_index, point)` for every node, in flat order.
    pub fn for_each(mut self, mut f: impl FnMut(usize, &[f64])) {
        let total = self.spec.len();
        let d = self.spec.d();
        while self.next < total {
            f(self.next, &self.point);
            self.next += 1;
            // Odometer increment, last axis fastest.
            for k in (0..d).rev() {
                self.multi[k] += 1;
                if self.multi[k] < self.spec.axes[k].n {
                    self.point[k] = self.spec.axes[k].coord(self.multi[k]);
                    break;
                }
                self.multi[k] = 0;
                self.point[k] = self.spec.axes[k].min;
            }
        }
    }
}

/// A complex function sampled on a grid; every stored value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    /// Wraps existing values after validating length and finiteness.
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<GridFunction> {
        if values.len() != spec.len() {
            return Err(Error::dim(
                "grid values",
                format!("{} nodes", spec.len()),
                format!("{} values", values.len()),
            ));
        }
        if let Some(bad) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            let mut point = vec![0.0; spec.d()];
            spec.point(bad, &mut point);
            return Err(Error::Sampling { point, value: format!("{}", values[bad]) });
        }
        Ok(GridFunction { spec, values })
    }

    /// Samples `f` at every node, rejecting non-finite values with the
    /// offending coordinates.
    pub fn sample(spec: &GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<GridFunction> {
        let mut values = vec![Complex64::new(0.0, 0.0); spec.len()];
        let mut bad: Option<usize> = None;
        spec.iter_points().for_each(|idx, point| {
            if bad.is_some() {
                return;
            }
            let v = f(point);
            if v.re.is_finite() && v.im.is_finite() {
                values[idx] = v;
            } else {
                bad = Some(idx);
            }
        });
        if let Some(idx) = bad {
            let mut point = vec![0.0; spec.d()];
            spec.point(idx, &mut point);
            return Err(Error::Sampling { point, value: "non-finite".into() });
        }
        GridFunction::new(spec.clone(), values)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Riemann-sum squared L² norm, `Σ |f|² · Π step`.
    pub fn norm_sq(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        s * self.spec.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Riemann-sum inner product `Σ f ḡ · Π step`; specs must agree.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        if self.spec != other.spec {
            return Err(Error::dim("inner product", "matching grids", "different grids".to_string()));
        }
        let s: Complex64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.spec.cell_volume())
    }

    /// Second moment `Σ |map(x) - center|² |f(x)|² · Π step` for a scalar
    /// coordinate functional `map` (affine maps keep this a true dispersion).
    pub fn weighted_moment(&self, map: impl Fn(&[f64]) -> f64, center: f64) -> f64 {
        let mut acc = 0.0f64;
        self.spec.iter_points().for_each(|idx, point| {
            let dev = map(point) - center;
            acc += dev * dev * self.values[idx].norm_sqr();
        });
        acc * self.spec.cell_volume()
    }

    /// `|f|²`-weighted mean of `map`; errors when the function is numerically zero.
    pub fn map_mean(&self, map: impl Fn(&[f64]) -> f64) -> Result<f64> {
        let mass: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if mass <= 0.0 {
            return Err(Error::DegenerateInput { context: "mean of a zero function".into() });
        }
        let mut acc = 0.0f64;
        self.spec.iter_points().for_each(|idx, point| {
            acc += map(point) * self.values[idx].norm_sqr();
        });
        Ok(acc / mass)
    }

    /// Squared-mass fraction carried by nodes in the outermost cell shell —
    /// a cheap proxy for how much of the function leaks past the box.
    pub fn boundary_shell_fraction(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if total <= 0.0 {
            return 0.0;
        }
        let d = self.spec.d();
        let mut shell = 0.0f64;
        let mut multi = vec![0usize; d];
        for idx in 0..self.spec.len() {
            let mut rest = idx;
            let mut on_boundary = false;
            for k in (0..d).rev() {
                let n = self.spec.axes[k].n;
                multi[k] = rest % n;
                rest /= n;
                on_boundary |= multi[k] == 0 || multi[k] + 1 == n;
            }
            if on_boundary {
                shell += self.values[idx].norm_sqr();
            }
        }
        shell / total
    }

    /// Multilinear interpolation at `x`; `None` outside the grid's hull.
    pub fn interpolate(&self, x: &[f64]) -> Option<Complex64> {
        debug_assert_eq!(x.len(), self.spec.d());
        let d = self.spec.d();
        let mut base = [0usize; MAX_DIM];
        let mut frac = [0.0f64; MAX_DIM];
        for k in 0..d {
            let ax = &self.spec.axes[k];
            let t = (x[k] - ax.min) / ax.step;
            if !(t >= 0.0 && t <= (ax.n - 1) as f64) {
                return None;
            }
            let i = (t.floor() as usize).min(ax.n - 2);
            base[k] = i;
            frac[k] = t - i as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut weight = 1.0f64;
            let mut idx = 0usize;
            for k in 0..d {
                let hi = (corner >> k) & 1 == 1;
                weight *= if hi { frac[k] } else { 1.0 - frac[k] };
                idx = idx * self.spec.axes[k].n + base[k] + hi as usize;
            }
            if weight != 0.0 {
                acc += self.values[idx] * weight;
            }
        }
        Some(acc)
    }
}
