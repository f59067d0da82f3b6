//! Deterministic numerical kernel shared by every geometry module.
//!
//! Everything here is a pure function of its inputs. Grids are uniform per
//! smooth segment so that two curves built from the same breakpoints and the
//! same [`StepControl`] land on bit-identical arc-length samples, which is what
//! the pointwise comparison checks rely on.

mod diff;
mod interp;
mod ode;
mod quadrature;
mod roots;

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use diff::{finite_diff, DiffOrder};
pub use interp::{hermite, hermite_derivative, lerp, MonotoneCubic};
pub use ode::{rk4_integrate, rk4_integrate_with};
pub use quadrature::{cumulative_integral, simpson_quadrature, simpson_samples};
pub use roots::bisect_monotone;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES_MIN: usize = 16;

/// Values that can be sampled, differenced and integrated: scalars and fixed
/// size vectors.
pub trait Sample:
    Copy + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn is_finite_sample(&self) -> bool;
    fn zero() -> Self;
}

impl Sample for f64 {
    fn is_finite_sample(&self) -> bool {
        self.is_finite()
    }

    fn zero() -> Self {
        0.0
    }
}

impl<const N: usize> Sample for SVector<f64, N> {
    fn is_finite_sample(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }

    fn zero() -> Self {
        SVector::zeros()
    }
}

/// Step size, comparison tolerance and minimum per-segment resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub step_h: f64,
    pub tol: f64,
    pub samples_min: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            step_h: DEFAULT_STEP,
            tol: DEFAULT_TOL,
            samples_min: DEFAULT_SAMPLES_MIN,
        }
    }
}

impl StepControl {
    pub fn new(step_h: f64, tol: f64) -> Result<Self> {
        let control = Self {
            step_h,
            tol,
            ..Self::default()
        };
        control.validate()?;
        Ok(control)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_h > 0.0 && self.step_h.is_finite()) {
            return Err(Error::Precondition(format!("step_h must be positive, got {}", self.step_h)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Precondition(format!("tol must be positive, got {}", self.tol)));
        }
        if self.samples_min < DEFAULT_SAMPLES_MIN {
            return Err(Error::Precondition(format!(
                "samples_min must be at least {DEFAULT_SAMPLES_MIN}, got {}",
                self.samples_min
            )));
        }
        Ok(())
    }

    /// Number of equal steps used on a segment of the given length: the
    /// smallest count whose step does not exceed `step_h`, but never fewer than
    /// `samples_min - 1`.
    pub fn steps_for(&self, length: f64) -> usize {
        let n = (length / self.step_h - 1e-9).ceil().max(1.0) as usize;
        n.max(self.samples_min - 1)
    }

    /// Uniform grid on `[a, b]` including both endpoints.
    pub fn grid(&self, a: f64, b: f64) -> Vec<f64> {
        let n = self.steps_for(b - a);
        let width = b - a;
        (0..=n)
            .map(|i| if i == n { b } else { a + width * (i as f64 / n as f64) })
            .collect()
    }
}

/// A function sampled on a strictly increasing arc-length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<V = f64> {
    pub s_grid: Vec<f64>,
    pub values: Vec<V>,
}

impl<V: Sample> SampledFunction<V> {
    pub fn new(s_grid: Vec<f64>, values: Vec<V>) -> Result<Self> {
        if s_grid.len() != values.len() {
            return Err(Error::Grid(format!(
                "grid has {} points but {} values were supplied",
                s_grid.len(),
                values.len()
            )));
        }
        if let Some(w) = s_grid.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Grid(format!("grid not strictly increasing at s = {}", w[1])));
        }
        Ok(Self { s_grid, values })
    }

    pub fn from_fn(s_grid: Vec<f64>, f: impl Fn(f64) -> V) -> Result<Self> {
        let values = s_grid.iter().map(|&s| f(s)).collect();
        Self::new(s_grid, values)
    }

    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn end(&self) -> f64 {
        self.s_grid[self.s_grid.len() - 1]
    }

    pub fn last(&self) -> V {
        self.values[self.values.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, V)> + '_ {
        self.s_grid.iter().copied().zip(self.values.iter().copied())
    }

    pub fn map<W: Sample>(&self, f: impl Fn(V) -> W) -> SampledFunction<W> {
        SampledFunction {
            s_grid: self.s_grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Piecewise-linear evaluation, clamped to the sampled span.
    pub fn interpolate(&self, s: f64) -> V {
        let n = self.s_grid.len();
        if s <= self.s_grid[0] {
            return self.values[0];
        }
        if s >= self.s_grid[n - 1] {
            return self.values[n - 1];
        }
        let i = self.s_grid.partition_point(|&x| x <= s) - 1;
        let t = (s - self.s_grid[i]) / (self.s_grid[i + 1] - self.s_grid[i]);
        lerp(self.values[i], self.values[i + 1], t)
    }
}

/// A function that is smooth on consecutive pieces and may jump between them.
/// Consecutive pieces share their boundary abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise<V = f64> {
    pub pieces: Vec<SampledFunction<V>>,
}

impl<V: Sample> Piecewise<V> {
    pub fn new(pieces: Vec<SampledFunction<V>>) -> Self {
        Self { pieces }
    }

    /// All samples in order, boundary abscissae appearing once per piece.
    pub fn iter(&self) -> impl Iterator<Item = (f64, V)> + '_ {
        self.pieces.iter().flat_map(|p| p.iter())
    }

    pub fn len(&self) -> usize {
        self.pieces.iter().map(|p| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Vec<V> {
        self.iter().map(|(_, v)| v).collect()
    }

    pub fn map<W: Sample>(&self, f: impl Fn(V) -> W + Copy) -> Piecewise<W> {
        Piecewise {
            pieces: self.pieces.iter().map(|p| p.map(f)).collect(),
        }
    }

    /// Sum of the composite-Simpson integrals of each piece.
    pub fn integral(&self) -> V {
        self.pieces
            .iter()
            .filter(|p| p.len() >= 2)
            .fold(V::zero(), |acc, p| acc + simpson_samples(&p.s_grid, &p.values))
    }
}

impl Piecewise<f64> {
    /// Smallest sample value and where it occurs.
    pub fn min_with_location(&self) -> Option<(f64, f64)> {
        self.iter().fold(None, |best, (s, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((s, v)),
        })
        .map(|(s, v)| (v, s))
    }
}
