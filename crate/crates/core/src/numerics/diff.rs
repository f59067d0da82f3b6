use super::{Sample, SampledFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

/// Finite-difference derivative on a uniform grid: central differences in
/// the interior, second-order one-sided stencils at both ends.
///
/// Uniformity is checked against `1e-12` of the grid's coordinate scale.
pub fn finite_diff<V: Sample>(curve: &SampledFunction<V>, order: DiffOrder) -> Result<SampledFunction<V>> {
    let n = curve.len();
    let min_points = match order {
        DiffOrder::First => 5,
        DiffOrder::Second => 5,
    };
    if n < min_points {
        return Err(Error::Grid(format!("finite differences need at least {min_points} points, got {n}")));
    }
    let s = &curve.s_grid;
    let f = &curve.values;
    let h = (s[n - 1] - s[0]) / (n - 1) as f64;
    let scale = s[0].abs().max(s[n - 1].abs()).max(1.0);
    if let Some(w) = s.windows(2).find(|w| ((w[1] - w[0]) - h).abs() > 1e-12 * scale + 1e-9 * h) {
        return Err(Error::Grid(format!(
            "non-uniform grid near s = {}: step {} vs mean {}",
            w[0],
            w[1] - w[0],
            h
        )));
    }
    let values = match order {
        DiffOrder::First => {
            let inv = 1.0 / (2.0 * h);
            (0..n)
                .map(|i| {
                    if i == 0 {
                        (f[0] * -3.0 + f[1] * 4.0 - f[2]) * inv
                    } else if i == n - 1 {
                        (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * inv
                    } else {
                        (f[i + 1] - f[i - 1]) * inv
                    }
                })
                .collect()
        }
        DiffOrder::Second => {
            let inv = 1.0 / (h * h);
            (0..n)
                .map(|i| {
                    if i == 0 {
                        (f[0] * 2.0 - f[1] * 5.0 + f[2] * 4.0 - f[3]) * inv
                    } else if i == n - 1 {
                        (f[n - 1] * 2.0 - f[n - 2] * 5.0 + f[n - 3] * 4.0 - f[n - 4]) * inv
                    } else {
                        (f[i + 1] - f[i] * 2.0 + f[i - 1]) * inv
                    }
                })
                .collect()
        }
    };
    Ok(SampledFunction {
        s_grid: s.clone(),
        values,
    })
}
