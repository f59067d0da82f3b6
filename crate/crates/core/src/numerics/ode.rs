use super::{Sample, SampledFunction, StepControl};
use crate::error::{Error, Result};

/// Classical fixed-step fourth-order Runge–Kutta on `[a, b]`.
///
/// The trajectory is sampled on [`StepControl::grid`], endpoints included.
pub fn rk4_integrate<V, F>(
    field: F,
    y0: V,
    interval: (f64, f64),
    control: &StepControl,
) -> Result<SampledFunction<V>>
where
    V: Sample,
    F: Fn(f64, &V) -> V,
{
    rk4_integrate_with(field, y0, interval, control, |_, _| Ok(()))
}

/// Runge–Kutta with a projection hook applied to the state after every step.
///
/// The hook is where frame integrators re-orthonormalize; it may also reject
/// a step by returning an error.
pub fn rk4_integrate_with<V, F, P>(
    field: F,
    y0: V,
    interval: (f64, f64),
    control: &StepControl,
    mut post_step: P,
) -> Result<SampledFunction<V>>
where
    V: Sample,
    F: Fn(f64, &V) -> V,
    P: FnMut(f64, &mut V) -> Result<()>,
{
    let (a, b) = interval;
    if !(b > a) {
        return Err(Error::Domain { a, b, lo: a, hi: b });
    }
    if !y0.is_finite_sample() {
        return Err(Error::Integration { s: a });
    }
    let grid = control.grid(a, b);
    let mut values = Vec::with_capacity(grid.len());
    let mut y = y0;
    values.push(y);
    for w in grid.windows(2) {
        let (s, h) = (w[0], w[1] - w[0]);
        let k1 = field(s, &y);
        let k2 = field(s + 0.5 * h, &(y + k1 * (0.5 * h)));
        let k3 = field(s + 0.5 * h, &(y + k2 * (0.5 * h)));
        let k4 = field(s + h, &(y + k3 * h));
        for (k, at) in [(k1, s), (k2, s + 0.5 * h), (k3, s + 0.5 * h), (k4, s + h)] {
            if !k.is_finite_sample() {
                return Err(Error::Integration { s: at });
            }
        }
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        post_step(w[1], &mut y)?;
        if !y.is_finite_sample() {
            return Err(Error::Integration { s: w[1] });
        }
        values.push(y);
    }
    SampledFunction::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector2;
    use std::f64::consts::PI;

    #[test]
    fn exponential_growth() {
        let control = StepControl::default();
        let traj = rk4_integrate(|_, y: &f64| *y, 1.0, (0.0, 1.0), &control).unwrap();
        assert!((traj.last() - std::f64::consts::E).abs() < 1e-9);
        assert_eq!(traj.start(), 0.0);
        assert_eq!(traj.end(), 1.0);
    }

    #[test]
    fn zero_field_is_constant() {
        let control = StepControl::default();
        let traj = rk4_integrate(|_, _: &f64| 0.0, 3.25, (0.0, 2.0), &control).unwrap();
        assert!(traj.values.iter().all(|&v| v == 3.25));
    }

    #[test]
    fn rotation_returns_home() {
        let control = StepControl::default();
        let field = |_: f64, y: &Vector2<f64>| Vector2::new(-y.y, y.x);
        let traj = rk4_integrate(field, Vector2::new(1.0, 0.0), (0.0, 2.0 * PI), &control).unwrap();
        assert!((traj.last() - Vector2::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn non_finite_field_names_location() {
        let control = StepControl::default();
        let err = rk4_integrate(
            |s, _: &f64| if s > 0.5 { f64::NAN } else { 1.0 },
            0.0,
            (0.0, 1.0),
            &control,
        )
        .unwrap_err();
        match err {
            Error::Integration { s } => assert!(s > 0.5 && s < 0.502),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_interval_rejected() {
        let control = StepControl::default();
        assert!(rk4_integrate(|_, y: &f64| *y, 1.0, (1.0, 1.0), &control).is_err());
    }
}
