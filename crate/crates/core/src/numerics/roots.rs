use crate::error::{Error, Result};

/// Bisection for a non-decreasing scalar function.
///
/// Endpoints within `tol` of zero are accepted directly. Otherwise the
/// bracket is halved until its width drops to `tol`.
pub fn bisect_monotone(g: impl Fn(f64) -> f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let (mut a, mut b) = bracket;
    let (ga, gb) = (g(a), g(b));
    if ga.abs() <= tol {
        return Ok(a);
    }
    if gb.abs() <= tol {
        return Ok(b);
    }
    if !(ga < 0.0 && gb > 0.0) {
        return Err(Error::Bracket { a, b, ga, gb });
    }
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
