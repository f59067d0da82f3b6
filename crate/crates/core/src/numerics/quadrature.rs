use super::{interp::lagrange4, Sample, SampledFunction};
use crate::error::{Error, Result};

/// Integral over `[x1, x2]` of the quadratic through `(x0, f0), (x1, f1), (x2, f2)`,
/// or over `[x0, x1]` when `first` is set.
fn quadratic_segment<V: Sample>(x: [f64; 3], f: [V; 3], first: bool) -> V {
    let (h0, h1) = (x[1] - x[0], x[2] - x[1]);
    // p(t) = f1 + b t + c t^2 with t measured from x1
    let d_right = (f[2] - f[1]) * (1.0 / h1);
    let d_left = (f[0] - f[1]) * (1.0 / h0);
    let c = (d_right + d_left) * (1.0 / (h0 + h1));
    let b = d_right - c * h1;
    if first {
        // integral over t in [-h0, 0]
        f[1] * h0 - b * (h0 * h0 / 2.0) + c * (h0 * h0 * h0 / 3.0)
    } else {
        f[1] * h1 + b * (h1 * h1 / 2.0) + c * (h1 * h1 * h1 / 3.0)
    }
}

/// Composite Simpson rule on an ascending, possibly non-uniform grid.
///
/// Pairs of intervals use the three-point Simpson formula; a trailing odd
/// interval is closed with the quadratic through the last three points. Two
/// points fall back to the trapezoid.
pub fn simpson_samples<V: Sample>(s: &[f64], f: &[V]) -> V {
    let n = s.len();
    match n {
        0 | 1 => return V::zero(),
        2 => return (f[0] + f[1]) * (0.5 * (s[1] - s[0])),
        _ => {}
    }
    let mut total = V::zero();
    let mut i = 0;
    while i + 2 < n {
        let (h0, h1) = (s[i + 1] - s[i], s[i + 2] - s[i + 1]);
        let w = (h0 + h1) / 6.0;
        total = total
            + (f[i] * (2.0 - h1 / h0) + f[i + 1] * ((h0 + h1) * (h0 + h1) / (h0 * h1)) + f[i + 2] * (2.0 - h0 / h1))
                * w;
        i += 2;
    }
    if i + 1 < n {
        total = total
            + quadratic_segment(
                [s[n - 3], s[n - 2], s[n - 1]],
                [f[n - 3], f[n - 2], f[n - 1]],
                false,
            );
    }
    total
}

/// Composite-Simpson integral of a sampled function over `[a, b]`.
///
/// Endpoints that are not grid points are filled in by cubic interpolation
/// through the four nearest samples.
pub fn simpson_quadrature<V: Sample>(f: &SampledFunction<V>, range: (f64, f64)) -> Result<V> {
    let (a, b) = range;
    let (lo, hi) = (f.start(), f.end());
    let slack = 1e-12 * (hi - lo).abs().max(1.0);
    if !(a <= b) || a < lo - slack || b > hi + slack {
        return Err(Error::Domain { a, b, lo, hi });
    }
    let (a, b) = (a.max(lo), b.min(hi));
    let mut s = Vec::new();
    let mut v = Vec::new();
    let near = |x: f64, y: f64| (x - y).abs() <= slack;
    let first = f.s_grid.partition_point(|&x| x < a);
    if first >= f.len() || !near(f.s_grid[first], a) {
        s.push(a);
        v.push(lagrange4(&f.s_grid, &f.values, a));
    }
    for (x, y) in f.iter().skip(first) {
        if x > b && !near(x, b) {
            break;
        }
        s.push(x);
        v.push(y);
    }
    if !near(*s.last().unwrap(), b) {
        s.push(b);
        v.push(lagrange4(&f.s_grid, &f.values, b));
    }
    if s.len() < 3 {
        if a == b {
            return Ok(V::zero());
        }
        return Err(Error::Grid(format!(
            "quadrature over [{a}, {b}] needs at least 3 points, found {}",
            s.len()
        )));
    }
    Ok(simpson_samples(&s, &v))
}

/// Running integral `F(s_i) = int_{s_0}^{s_i} f`, one quadratic per interval.
pub fn cumulative_integral<V: Sample>(s: &[f64], f: &[V]) -> Vec<V> {
    let n = s.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(V::zero());
    if n == 2 {
        out.push((f[0] + f[1]) * (0.5 * (s[1] - s[0])));
        return out;
    }
    let mut acc = V::zero();
    for i in 0..n - 1 {
        let piece = if i == 0 {
            quadratic_segment([s[0], s[1], s[2]], [f[0], f[1], f[2]], true)
        } else {
            quadratic_segment([s[i - 1], s[i], s[i + 1]], [f[i - 1], f[i], f[i + 1]], false)
        };
        acc = acc + piece;
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::StepControl;
    use std::f64::consts::PI;

    #[test]
    fn sine_over_half_period() {
        let grid = StepControl::default().grid(0.0, PI);
        let f = SampledFunction::from_fn(grid, f64::sin).unwrap();
        let v = simpson_quadrature(&f, (0.0, PI)).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn zero_and_constant_integrands() {
        let grid = StepControl::default().grid(0.0, 2.5);
        let zero = SampledFunction::from_fn(grid.clone(), |_| 0.0).unwrap();
        assert_eq!(simpson_quadrature(&zero, (0.0, 2.5)).unwrap(), 0.0);
        let one = SampledFunction::from_fn(grid, |_| 1.0).unwrap();
        assert!((simpson_quadrature(&one, (0.0, 2.5)).unwrap() - 2.5).abs() < 1e-13);
    }

    #[test]
    fn off_grid_endpoints() {
        let grid = StepControl::default().grid(0.0, 3.0);
        let f = SampledFunction::from_fn(grid, f64::cos).unwrap();
        let v = simpson_quadrature(&f, (0.12345, 2.5)).unwrap();
        assert!((v - (2.5f64.sin() - 0.12345f64.sin())).abs() < 1e-10);
    }

    #[test]
    fn range_outside_grid_is_domain_error() {
        let grid = StepControl::default().grid(0.0, 1.0);
        let f = SampledFunction::from_fn(grid, |s| s).unwrap();
        assert!(matches!(simpson_quadrature(&f, (-0.5, 0.5)), Err(Error::Domain { .. })));
        assert!(matches!(simpson_quadrature(&f, (0.5, 1.5)), Err(Error::Domain { .. })));
    }

    #[test]
    fn nonuniform_grid_is_exact_for_quadratics() {
        let s = [0.0, 0.1, 0.35, 0.4, 0.9, 1.0, 1.7];
        let f: Vec<f64> = s.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        let exact = |x: f64| x * x * x - 0.5 * x * x + 2.0 * x;
        assert!((simpson_samples(&s, &f) - exact(1.7)).abs() < 1e-12);
        let cum = cumulative_integral(&s, &f);
        for (x, c) in s.iter().zip(cum) {
            assert!((c - exact(*x)).abs() < 1e-12);
        }
    }
}
