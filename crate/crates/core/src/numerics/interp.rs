use super::Sample;
use crate::error::{Error, Result};

pub fn lerp<V: Sample>(a: V, b: V, t: f64) -> V {
    a * (1.0 - t) + b * t
}

/// Cubic Hermite interpolant on `[s0, s1]` from values and derivatives.
pub fn hermite<V: Sample>(s0: f64, s1: f64, y0: V, y1: V, d0: V, d1: V, s: f64) -> V {
    let h = s1 - s0;
    let t = (s - s0) / h;
    let (t2, t3) = (t * t, t * t * t);
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h)
}

/// Derivative of [`hermite`] with respect to `s`.
pub fn hermite_derivative<V: Sample>(s0: f64, s1: f64, y0: V, y1: V, d0: V, d1: V, s: f64) -> V {
    let h = s1 - s0;
    let t = (s - s0) / h;
    let t2 = t * t;
    let h00 = 6.0 * t2 - 6.0 * t;
    let h10 = 3.0 * t2 - 4.0 * t + 1.0;
    let h01 = -6.0 * t2 + 6.0 * t;
    let h11 = 3.0 * t2 - 2.0 * t;
    (y0 * h00 + y1 * h01) * (1.0 / h) + d0 * h10 + d1 * h11
}

/// Cubic Lagrange interpolation through the four samples nearest to `x`.
pub(crate) fn lagrange4<V: Sample>(s: &[f64], f: &[V], x: f64) -> V {
    let n = s.len();
    if n < 4 {
        let i = s.partition_point(|&v| v <= x).clamp(1, n.max(2) - 1);
        let t = (x - s[i - 1]) / (s[i] - s[i - 1]);
        return lerp(f[i - 1], f[i], t);
    }
    let i = s.partition_point(|&v| v <= x);
    let start = i.saturating_sub(2).min(n - 4);
    let xs = &s[start..start + 4];
    let mut acc = V::zero();
    for j in 0..4 {
        let mut w = 1.0;
        for m in 0..4 {
            if m != j {
                w *= (x - xs[m]) / (xs[j] - xs[m]);
            }
        }
        acc = acc + f[start + j] * w;
    }
    acc
}

/// Shape-preserving piecewise cubic (Fritsch–Carlson slopes).
///
/// The interpolant never leaves the range of neighbouring knot values, so
/// curvature tables bounded by `[lo, hi]` stay bounded after resampling.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() || n < 2 {
            return Err(Error::Grid(format!("monotone cubic needs >= 2 matched knots, got {n}")));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("monotone cubic knots must be strictly increasing".into()));
        }
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            slopes[i] = if secants[i - 1] * secants[i] <= 0.0 {
                0.0
            } else {
                0.5 * (secants[i - 1] + secants[i])
            };
        }
        for i in 0..n - 1 {
            if secants[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let a = slopes[i] / secants[i];
            let b = slopes[i + 1] / secants[i];
            let r = a * a + b * b;
            if r > 9.0 {
                let t = 3.0 / r.sqrt();
                slopes[i] = t * a * secants[i];
                slopes[i + 1] = t * b * secants[i];
            }
        }
        Ok(Self { xs, ys, slopes })
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1
    }

    /// Value at `x`, clamped to the knot span.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(self.xs[0], self.xs[self.xs.len() - 1]);
        let i = self.segment(x);
        hermite(
            self.xs[i],
            self.xs[i + 1],
            self.ys[i],
            self.ys[i + 1],
            self.slopes[i],
            self.slopes[i + 1],
            x,
        )
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let x = x.clamp(self.xs[0], self.xs[self.xs.len() - 1]);
        let i = self.segment(x);
        hermite_derivative(
            self.xs[i],
            self.xs[i + 1],
            self.ys[i],
            self.ys[i + 1],
            self.slopes[i],
            self.slopes[i + 1],
            x,
        )
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }
}
