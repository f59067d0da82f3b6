use std::f64::consts::PI;
use std::ops::Range;

use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::numerics::{hermite, lerp, Piecewise, SampledFunction};

/// Which one-sided limit to take at a tangent jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Position, unit tangent and tangent derivative at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub s: f64,
    pub position: Vector3<f64>,
    pub tangent: Vector3<f64>,
    pub tangent_rate: Vector3<f64>,
}

/// Arc-length samples of a curve in the plane (`dim = 2`, `z = 0`) or in 3-space.
///
/// `tangent_rate` holds `dT/ds` as produced by the generating ODE; its norm
/// is the curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub dim: usize,
    pub s_grid: Vec<f64>,
    pub position: Vec<Vector3<f64>>,
    pub tangent: Vec<Vector3<f64>>,
    pub tangent_rate: Vec<Vector3<f64>>,
    /// Index of the right-limit sample at each jump; `s_grid[m - 1] == s_grid[m]`.
    pub jump_marks: Vec<usize>,
}

impl SampledCurve {
    pub(crate) fn empty(dim: usize) -> Self {
        Self {
            dim,
            s_grid: Vec::new(),
            position: Vec::new(),
            tangent: Vec::new(),
            tangent_rate: Vec::new(),
            jump_marks: Vec::new(),
        }
    }

    /// Starts a new smooth segment; the next sample becomes a jump mark.
    pub(crate) fn begin_segment(&mut self) {
        if !self.s_grid.is_empty() {
            self.jump_marks.push(self.s_grid.len());
        }
    }

    pub(crate) fn push(&mut self, s: f64, position: Vector3<f64>, tangent: Vector3<f64>, rate: Vector3<f64>) {
        self.s_grid.push(s);
        self.position.push(position);
        self.tangent.push(tangent);
        self.tangent_rate.push(rate);
    }

    /// Assembles a curve from per-segment samples, checking the layout.
    pub fn from_parts(
        dim: usize,
        s_grid: Vec<f64>,
        position: Vec<Vector3<f64>>,
        tangent: Vec<Vector3<f64>>,
        tangent_rate: Vec<Vector3<f64>>,
        jump_marks: Vec<usize>,
    ) -> Result<Self> {
        let n = s_grid.len();
        if position.len() != n || tangent.len() != n || tangent_rate.len() != n {
            return Err(Error::Grid("curve arrays have mismatched lengths".into()));
        }
        let curve = Self {
            dim,
            s_grid,
            position,
            tangent,
            tangent_rate,
            jump_marks,
        };
        for r in curve.segment_ranges() {
            if r.len() < 2 || curve.s_grid[r].windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Grid("each smooth segment needs a strictly increasing grid".into()));
            }
        }
        Ok(curve)
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

    pub fn length(&self) -> f64 {
        self.end() - self.start()
    }

    /// Index ranges of the smooth segments.
    pub fn segment_ranges(&self) -> Vec<Range<usize>> {
        let mut bounds = Vec::with_capacity(self.jump_marks.len() + 2);
        bounds.push(0);
        bounds.extend(self.jump_marks.iter().copied());
        bounds.push(self.s_grid.len());
        bounds.windows(2).map(|w| w[0]..w[1]).collect()
    }

    /// Arc-length locations of the jumps.
    pub fn jump_locations(&self) -> Vec<f64> {
        self.jump_marks.iter().map(|&m| self.s_grid[m]).collect()
    }

    /// Angle between one-sided tangents at each jump.
    pub fn jump_angles(&self) -> Vec<(f64, f64)> {
        self.jump_marks
            .iter()
            .map(|&m| (self.s_grid[m], self.tangent[m - 1].angle(&self.tangent[m])))
            .collect()
    }

    /// `|T'|` from the stored tangent derivative, one piece per segment.
    pub fn curvature(&self) -> Piecewise {
        Piecewise::new(
            self.segment_ranges()
                .into_iter()
                .map(|r| SampledFunction {
                    s_grid: self.s_grid[r.clone()].to_vec(),
                    values: self.tangent_rate[r].iter().map(|v| v.norm()).collect(),
                })
                .collect(),
        )
    }

    /// Errors unless both curves use bit-identical grids and jump layouts.
    pub fn check_same_grid(&self, other: &SampledCurve) -> Result<()> {
        if self.s_grid != other.s_grid || self.jump_marks != other.jump_marks {
            return Err(Error::Alignment(format!(
                "grids differ ({} vs {} samples, jumps at {:?} vs {:?})",
                self.len(),
                other.len(),
                self.jump_locations(),
                other.jump_locations()
            )));
        }
        Ok(())
    }

    fn segment_for(&self, s: f64, side: Side) -> Range<usize> {
        let ranges = self.segment_ranges();
        let last = ranges.len() - 1;
        for (i, r) in ranges.iter().enumerate() {
            let (a, b) = (self.s_grid[r.start], self.s_grid[r.end - 1]);
            let inside = match side {
                Side::Left => s <= b && (s > a || i == 0),
                Side::Right => s >= a && (s < b || i == last),
            };
            if inside {
                return r.clone();
            }
        }
        if s < self.start() {
            ranges[0].clone()
        } else {
            ranges[last].clone()
        }
    }

    /// Sample index `i` with `s_grid[i] <= s <= s_grid[i + 1]` in the right segment.
    pub(crate) fn bracket(&self, s: f64, side: Side) -> (usize, usize) {
        let r = self.segment_for(s, side);
        let grid = &self.s_grid[r.clone()];
        let i = grid.partition_point(|&x| x <= s).clamp(1, grid.len() - 1) - 1;
        (r.start + i, r.start + i + 1)
    }

    /// Hermite interpolation of position and tangent at an arbitrary `s`.
    pub fn eval(&self, s: f64, side: Side) -> CurvePoint {
        let (i, j) = self.bracket(s, side);
        let (s0, s1) = (self.s_grid[i], self.s_grid[j]);
        let s = s.clamp(s0.min(s1), s1.max(s0));
        if s == s0 {
            return self.point(i);
        }
        if s == s1 {
            return self.point(j);
        }
        let position = hermite(s0, s1, self.position[i], self.position[j], self.tangent[i], self.tangent[j], s);
        let tangent = hermite(
            s0,
            s1,
            self.tangent[i],
            self.tangent[j],
            self.tangent_rate[i],
            self.tangent_rate[j],
            s,
        )
        .normalize();
        let t = (s - s0) / (s1 - s0);
        CurvePoint {
            s,
            position,
            tangent,
            tangent_rate: lerp(self.tangent_rate[i], self.tangent_rate[j], t),
        }
    }

    pub fn point(&self, i: usize) -> CurvePoint {
        CurvePoint {
            s: self.s_grid[i],
            position: self.position[i],
            tangent: self.tangent[i],
            tangent_rate: self.tangent_rate[i],
        }
    }

    /// Rigid motion `x -> R x + shift` applied to the whole curve.
    pub fn transformed(&self, rotation: &Rotation3<f64>, shift: Vector3<f64>) -> Self {
        let mut out = self.clone();
        out.dim = 3;
        for i in 0..self.len() {
            out.position[i] = rotation * self.position[i] + shift;
            out.tangent[i] = rotation * self.tangent[i];
            out.tangent_rate[i] = rotation * self.tangent_rate[i];
        }
        out
    }

    /// Largest `| |T| - 1 |` over all samples.
    pub fn max_tangent_defect(&self) -> f64 {
        self.tangent.iter().map(|t| (t.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Cumulative (unwrapped) direction angle of a plane curve's tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentAngle {
    /// One value per curve sample.
    pub theta: Vec<f64>,
    /// Signed curvature `d theta / ds` per sample.
    pub rate: Vec<f64>,
}

impl TangentAngle {
    /// Hermite interpolation of `theta` at `s` using the signed curvature as slope.
    pub fn eval(&self, curve: &SampledCurve, s: f64, side: Side) -> f64 {
        let (i, j) = curve.bracket(s, side);
        let (s0, s1) = (curve.s_grid[i], curve.s_grid[j]);
        let s = s.clamp(s0, s1);
        hermite(s0, s1, self.theta[i], self.theta[j], self.rate[i], self.rate[j], s)
    }

    pub fn total(&self) -> f64 {
        self.theta[self.theta.len() - 1] - self.theta[0]
    }
}

fn cross2(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Unwraps `atan2` of the tangent along each segment and adds the signed
/// turn at every jump. A turn of exactly pi counts as counterclockwise.
pub fn tangent_angle(curve: &SampledCurve) -> Result<TangentAngle> {
    if curve.dim != 2 {
        return Err(Error::Dimension(format!("tangent angle needs a plane curve, got dim {}", curve.dim)));
    }
    let n = curve.len();
    let mut theta = Vec::with_capacity(n);
    let mut rate = Vec::with_capacity(n);
    for i in 0..n {
        let t = curve.tangent[i];
        rate.push(cross2(&t, &curve.tangent_rate[i]));
        if i == 0 {
            theta.push(t.y.atan2(t.x));
            continue;
        }
        let prev = curve.tangent[i - 1];
        let mut d = cross2(&prev, &t).atan2(prev.dot(&t));
        if curve.jump_marks.contains(&i) && d.abs() > PI - 1e-9 {
            d = PI;
        }
        theta.push(theta[i - 1] + d);
    }
    Ok(TangentAngle { theta, rate })
}
